#include "ofifs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

namespace ofifs::oracle {

namespace {

int n_points(const OracleInstance& inst) { return static_cast<int>(inst.labels.size()); }

// Portable bounded draw; std::uniform_int_distribution differs between standard libraries.
int draw(std::mt19937_64& rng, int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(rng() % span);
}

std::vector<bool> cut(const Levels& u, int level) {
  std::vector<bool> out(u.size());
  for (std::size_t p = 0; p < u.size(); ++p) out[p] = u[p] >= level;
  return out;
}

bool any(const std::vector<bool>& v) { return std::find(v.begin(), v.end(), true) != v.end(); }

std::optional<int> witness_root(const OracleInstance& inst, const Levels& u, int x) {
  for (int w = 0; w < n_points(inst); ++w) {
    const auto orb = oracle_orbit(inst, w);
    if (!orb[x]) continue;
    for (int y = 0; y < n_points(inst); ++y) {
      if (orb[y] && u[y] == inst.quantization) return w;
    }
  }
  return std::nullopt;
}

}  // namespace

void validate(const OracleInstance& inst) {
  const auto n = inst.labels.size();
  if (n == 0 || n > kMaxOraclePoints) throw InvalidArgument("oracle instances hold 1..12 points");
  if (inst.maps.empty() || inst.maps.size() > kMaxOracleMaps) {
    throw InvalidArgument("oracle instances hold 1..3 maps");
  }
  if (inst.quantization < 1 || inst.quantization > kMaxOracleQuantization) {
    throw InvalidArgument("oracle quantization must lie in 1..16");
  }
  if (inst.greys.size() != inst.maps.size()) throw InvalidArgument("one grey table per map");
  if (inst.dist.size() != n || inst.initial.size() != n) throw InvalidArgument("size mismatch");
  for (const auto& row : inst.dist) {
    if (row.size() != n) throw InvalidArgument("distance matrix must be square");
  }
  for (const auto& m : inst.maps) {
    if (m.size() != n) throw InvalidArgument("maps must be total");
    for (int q : m) {
      if (q < 0 || q >= static_cast<int>(n)) throw InvalidArgument("map image out of range");
    }
  }
  bool admissible = false;
  for (const auto& g : inst.greys) {
    if (g.size() != static_cast<std::size_t>(inst.quantization) + 1 || g[0] != 0) {
      throw InvalidArgument("grey tables need L + 1 entries starting at 0");
    }
    for (std::size_t k = 1; k < g.size(); ++k) {
      if (g[k] < g[k - 1] || g[k] > inst.quantization) throw InvalidArgument("bad grey table");
    }
    if (g.back() == 0) throw InvalidArgument("zero grey table");
    admissible = admissible || g.back() == inst.quantization;
  }
  if (!admissible) throw InvalidArgument("grey tables are not admissible");
  for (int v : inst.initial) {
    if (v < 0 || v > inst.quantization) throw InvalidArgument("initial level off the lattice");
  }
}

Levels oracle_z(const OracleInstance& inst, const Levels& u) {
  const int n = n_points(inst);
  Levels out(n, 0);
  for (std::size_t i = 0; i < inst.maps.size(); ++i) {
    for (int y = 0; y < n; ++y) {
      // sup of u over the preimage of y; zero when the preimage is empty.
      int sup = 0;
      for (int x = 0; x < n; ++x) {
        if (inst.maps[i][x] == y) sup = std::max(sup, u[x]);
      }
      out[y] = std::max(out[y], inst.greys[i][sup]);
    }
  }
  return out;
}

FixedPointTrace oracle_fixed_points(const OracleInstance& inst, const Levels& start) {
  std::map<Levels, std::size_t> seen;
  FixedPointTrace result;
  result.trace.push_back(start);
  seen[start] = 0;
  for (;;) {
    const Levels& current = result.trace.back();
    Levels next = oracle_z(inst, current);
    if (next == current) break;
    if (const auto it = seen.find(next); it != seen.end()) {
      throw OracleCycleError("instance " + inst.id + ": Picard trace closed a cycle of length " +
                             std::to_string(result.trace.size() - it->second));
    }
    seen[next] = result.trace.size();
    result.trace.push_back(std::move(next));
  }
  result.limit = result.trace.back();
  return result;
}

FixedPointTrace oracle_fixed_points(const OracleInstance& inst) {
  return oracle_fixed_points(inst, inst.initial);
}

std::vector<bool> oracle_orbit(const OracleInstance& inst, int x) {
  std::vector<bool> in(inst.labels.size(), false);
  in[x] = true;
  bool grew = true;
  while (grew) {
    grew = false;
    for (int p = 0; p < n_points(inst); ++p) {
      if (!in[p]) continue;
      for (const auto& m : inst.maps) {
        if (!in[m[p]]) {
          in[m[p]] = true;
          grew = true;
        }
      }
    }
  }
  return in;
}

double oracle_orbital_scan(const OracleInstance& inst) {
  double worst = 0.0;
  for (int x = 0; x < n_points(inst); ++x) {
    const auto orb = oracle_orbit(inst, x);
    for (const auto& m : inst.maps) {
      for (int y = 0; y < n_points(inst); ++y) {
        for (int z = 0; z < n_points(inst); ++z) {
          if (y == z || !orb[y] || !orb[z]) continue;
          worst = std::max(worst, inst.dist[m[y]][m[z]] / inst.dist[y][z]);
        }
      }
    }
  }
  return worst;
}

double oracle_global_lipschitz(const OracleInstance& inst) {
  double worst = 0.0;
  for (const auto& m : inst.maps) {
    for (int y = 0; y < n_points(inst); ++y) {
      for (int z = 0; z < n_points(inst); ++z) {
        if (y != z) worst = std::max(worst, inst.dist[m[y]][m[z]] / inst.dist[y][z]);
      }
    }
  }
  return worst;
}

double oracle_hausdorff(const OracleInstance& inst, const std::vector<bool>& a,
                        const std::vector<bool>& b) {
  if (!any(a) || !any(b)) throw InvalidArgument("oracle hausdorff of an empty set");
  double result = 0.0;
  for (int pass = 0; pass < 2; ++pass) {
    const auto& from = pass == 0 ? a : b;
    const auto& to = pass == 0 ? b : a;
    for (int x = 0; x < n_points(inst); ++x) {
      if (!from[x]) continue;
      double nearest = std::numeric_limits<double>::infinity();
      for (int y = 0; y < n_points(inst); ++y) {
        if (to[y]) nearest = std::min(nearest, inst.dist[x][y]);
      }
      result = std::max(result, nearest);
    }
  }
  return result;
}

double oracle_dinf(const OracleInstance& inst, const Levels& u, const Levels& v) {
  double result = 0.0;
  for (int level = 1; level <= inst.quantization; ++level) {
    result = std::max(result, oracle_hausdorff(inst, cut(u, level), cut(v, level)));
  }
  return result;
}

bool oracle_in_class(const OracleInstance& inst, const Levels& u) {
  for (int x = 0; x < n_points(inst); ++x) {
    if (u[x] > 0 && !witness_root(inst, u, x)) return false;
  }
  return true;
}

Levels oracle_restrict(const OracleInstance& inst, const Levels& u, int x) {
  const auto root = witness_root(inst, u, x);
  if (!root) throw ClassMembershipError("oracle: no witness for point " + inst.labels[x]);
  const auto closure = oracle_orbit(inst, *root);
  Levels out(u.size(), 0);
  for (std::size_t p = 0; p < u.size(); ++p) out[p] = closure[p] ? u[p] : 0;
  return out;
}

Levels oracle_delta(const OracleInstance& inst, int x) {
  Levels out(inst.labels.size(), 0);
  out[x] = inst.quantization;
  return out;
}

Levels oracle_max(const Levels& a, const Levels& b) {
  Levels out(a.size());
  for (std::size_t p = 0; p < a.size(); ++p) out[p] = std::max(a[p], b[p]);
  return out;
}

std::optional<std::pair<int, int>> distinct_fractal_pair(const OracleInstance& inst) {
  std::vector<Levels> limits;
  for (int x = 0; x < n_points(inst); ++x) {
    limits.push_back(oracle_fixed_points(inst, oracle_delta(inst, x)).limit);
    for (int y = 0; y < x; ++y) {
      if (limits[y] != limits[x]) return std::make_pair(y, x);
    }
  }
  return std::nullopt;
}

namespace {

std::vector<int> make_grey(std::mt19937_64& rng, int quantization, int top) {
  std::vector<int> table(static_cast<std::size_t>(quantization) + 1, 0);
  switch (draw(rng, 0, 2)) {
    case 0:
      for (int k = 0; k <= quantization; ++k) table[k] = (k * top + quantization / 2) / quantization;
      break;
    case 1: {
      const int threshold = draw(rng, 1, quantization);
      for (int k = threshold; k <= quantization; ++k) table[k] = top;
      break;
    }
    default: {
      for (int k = 1; k <= quantization; ++k) table[k] = draw(rng, 0, top);
      std::sort(table.begin() + 1, table.end());
      table.back() = top;
      break;
    }
  }
  return table;
}

// Component layouts: a chain at positions 2^j - 1 along a line, on which
// shifting j -> j - 1 halves every distance, or a small random cluster.
struct Component {
  std::vector<int> members;
  bool chain = false;
};

std::optional<OracleInstance> make_candidate(std::mt19937_64& rng, bool targeted) {
  OracleInstance inst;
  const int n = draw(rng, 4, static_cast<int>(kMaxOraclePoints));
  const int max_comps = std::max(1, std::min(3, n / 2));
  const int comps = targeted ? draw(rng, std::min(2, max_comps), max_comps) : draw(rng, 1, max_comps);
  std::vector<Component> components(comps);
  for (int p = 0; p < n; ++p) components[p < comps ? p : draw(rng, 0, comps - 1)].members.push_back(p);

  std::vector<std::pair<int, int>> coords(n);
  int offset = 0;
  const int gap = draw(rng, 2, 20);
  for (Component& comp : components) {
    comp.chain = comp.members.size() >= 2 && draw(rng, 0, 2) > 0;
    if (comp.chain) {
      for (std::size_t j = 0; j < comp.members.size(); ++j) {
        coords[comp.members[j]] = {offset + (1 << j) - 1, 0};
      }
      offset += (1 << comp.members.size()) + gap;
      continue;
    }
    std::vector<std::pair<int, int>> used;
    for (int p : comp.members) {
      for (int tries = 0;; ++tries) {
        if (tries > 100) return std::nullopt;
        const std::pair<int, int> c{offset + 3 + draw(rng, -3, 3), draw(rng, -3, 3)};
        if (std::find(used.begin(), used.end(), c) == used.end()) {
          used.push_back(c);
          coords[p] = c;
          break;
        }
      }
    }
    offset += 7 + gap;
  }
  inst.labels.resize(n);
  inst.dist.assign(n, std::vector<double>(n, 0.0));
  for (int p = 0; p < n; ++p) {
    inst.labels[p] = "p" + std::to_string(p);
    for (int q = 0; q < n; ++q) {
      const double dx = coords[p].first - coords[q].first;
      const double dy = coords[p].second - coords[q].second;
      inst.dist[p][q] = std::sqrt(dx * dx + dy * dy);
    }
  }

  const int m = draw(rng, targeted ? 2 : 1, static_cast<int>(kMaxOracleMaps));
  for (int i = 0; i < m; ++i) {
    std::vector<int> table(n);
    for (const Component& comp : components) {
      const auto& members = comp.members;
      const int k = static_cast<int>(members.size());
      if (comp.chain) {
        const int style = draw(rng, 0, 3);
        const int stop = draw(rng, 0, k - 1);
        for (int j = 0; j < k; ++j) {
          int to = 0;
          if (style == 0) to = std::max(j - 1, 0);
          if (style == 1) to = std::max(j - 2, 0);
          if (style == 2) to = std::max(j - 1, stop);
          table[members[j]] = members[to];
        }
        continue;
      }
      const int anchor = members[draw(rng, 0, k - 1)];
      const int style = draw(rng, 0, 3);
      for (int p : members) {
        if (style == 0) {
          table[p] = anchor;
        } else if (style == 3) {
          table[p] = members[draw(rng, 0, k - 1)];
        } else {
          const double tx = 0.5 * (coords[p].first + coords[anchor].first);
          const double ty = 0.5 * (coords[p].second + coords[anchor].second);
          int best = members.front();
          double best_d = std::numeric_limits<double>::infinity();
          for (int q : members) {
            const double d = std::hypot(coords[q].first - tx, coords[q].second - ty);
            if (d < best_d) {
              best_d = d;
              best = q;
            }
          }
          table[p] = best;
        }
      }
    }
    inst.maps.push_back(std::move(table));
  }

  static constexpr int kQuantizations[] = {4, 8, 16};
  inst.quantization = kQuantizations[draw(rng, 0, 2)];
  const int admissible = draw(rng, 0, m - 1);
  for (int i = 0; i < m; ++i) {
    const int top = i == admissible ? inst.quantization : draw(rng, 1, inst.quantization);
    inst.greys.push_back(make_grey(rng, inst.quantization, top));
  }

  inst.initial.assign(n, 0);
  const int support_size = draw(rng, 1, n);
  for (int k = 0; k < support_size; ++k) inst.initial[draw(rng, 0, n - 1)] = draw(rng, 1, inst.quantization);
  int peak = draw(rng, 0, n - 1);
  inst.initial[peak] = inst.quantization;
  for (int x = 0; x < n; ++x) {
    if (inst.initial[x] > 0 && !witness_root(inst, inst.initial, x)) inst.initial[x] = 0;
  }

  inst.orbital_factor = oracle_orbital_scan(inst);
  if (!(inst.orbital_factor < 1.0)) return std::nullopt;
  if (targeted) {
    if (oracle_global_lipschitz(inst) < 1.0) return std::nullopt;
    if (!distinct_fractal_pair(inst)) return std::nullopt;
  }
  return inst;
}

}  // namespace

std::vector<OracleInstance> generate_instances(std::uint64_t seed, std::size_t count,
                                               const GenerateOptions& options) {
  std::mt19937_64 rng(seed);
  std::vector<OracleInstance> out;
  std::size_t attempts = 0;
  while (out.size() < count && attempts < options.attempt_budget) {
    ++attempts;
    auto candidate = make_candidate(rng, options.targeted);
    if (!candidate) continue;
    candidate->seed = seed;
    candidate->targeted = options.targeted;
    candidate->id = (options.targeted ? "t" : "s") + std::to_string(seed) + "-" +
                    std::to_string(out.size());
    validate(*candidate);
    out.push_back(std::move(*candidate));
  }
  return out;
}

EngineInstance to_engine(const OracleInstance& inst) {
  validate(inst);
  const auto n = static_cast<Eigen::Index>(inst.labels.size());
  Eigen::MatrixXd dist(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) dist(i, j) = inst.dist[i][j];
  }
  auto space = Space::finite(inst.labels, std::move(dist));
  std::vector<SpaceMap> maps;
  for (const auto& m : inst.maps) maps.emplace_back(TableMap{std::vector<PointId>(m.begin(), m.end())});
  std::vector<GreyLevelMap> greys;
  for (const auto& g : inst.greys) greys.push_back(GreyLevelMap::lookup(inst.quantization, g));
  OrbitalFuzzySystem system(IfsSystem(space, std::move(maps), inst.orbital_factor), std::move(greys));
  LevelArray levels(n);
  for (Eigen::Index p = 0; p < n; ++p) levels[p] = inst.initial[p];
  FuzzySet initial(space, inst.quantization, std::move(levels));
  return {std::move(space), std::move(system), std::move(initial)};
}

Levels from_engine(const FuzzySet& u) {
  return Levels(u.levels().data(), u.levels().data() + u.levels().size());
}

}  // namespace ofifs::oracle
