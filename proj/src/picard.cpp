#include "ofifs/picard.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ofifs/error.hpp"

namespace ofifs {

std::string to_string(Terminal t) {
  switch (t) {
    case Terminal::ExactFixedPoint:
      return "ExactFixedPoint";
    case Terminal::ToleranceReached:
      return "ToleranceReached";
    case Terminal::BudgetExhausted:
      return "BudgetExhausted";
  }
  return "Unknown";
}

std::size_t apriori_steps(double factor, double spread, double eps) {
  if (!(factor >= 0.0 && factor < 1.0)) throw InvalidArgument("factor must lie in [0, 1)");
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
  if (spread / (1.0 - factor) <= eps) return 0;
  if (factor == 0.0) return 1;
  const double n = std::ceil(std::log(eps * (1.0 - factor) / spread) / std::log(factor));
  return static_cast<std::size_t>(std::max(n, 0.0));
}

double apriori_bound(double factor, double spread, std::size_t n) {
  return std::pow(factor, static_cast<double>(n)) / (1.0 - factor) * spread;
}

double support_spread(const IfsSystem& ifs, const FuzzySet& u) {
  const CompactSet supp = support(u);
  return diameter(set_union(fractal_operator(ifs, supp), supp));
}

double default_eps(const Space& space) {
  return space.is_grid() ? space.grid_geometry().spacing / 2.0 : 1e-6;
}

double closure_tolerance(const Space& space) {
  return space.is_grid() ? 1.5 * space.grid_geometry().spacing : exact_tolerance(space);
}

double match_tolerance(const Space& space) {
  return space.is_grid() ? 2.0 * space.grid_geometry().spacing : 0.0;
}

bool fuzzy_match(const FuzzySet& a, const FuzzySet& b) {
  if (a.space().is_finite()) return a == b;
  return d_infinity(a, b) <= match_tolerance(a.space());
}

PicardResult picard_limit(const OrbitalFuzzySystem& sys, const FuzzySet& u,
                          const PicardOptions& options) {
  require_same_space(sys.space(), u.space());
  if (!u.is_normal()) throw InvalidArgument("Picard iteration needs a normal starting set");
  const bool finite = sys.space().is_finite();
  if (options.check_class.value_or(finite)) {
    for (PointId x : u.positive_points()) find_witness(u, sys, x);
  }

  ConvergenceCertificate cert;
  cert.factor = sys.ifs().orbital_factor();
  cert.eps = options.eps.value_or(default_eps(sys.space()));
  cert.spread = support_spread(sys.ifs(), u);
  cert.apriori_steps = apriori_steps(cert.factor, cert.spread, cert.eps);
  cert.apriori_bound.push_back(apriori_bound(cert.factor, cert.spread, 0));

  PicardResult result{u, {}, {}};
  if (options.keep_iterates) result.iterates.push_back(u);
  if (cert.spread == 0.0) {
    cert.terminal = Terminal::ExactFixedPoint;
    result.certificate = std::move(cert);
    return result;
  }

  const bool stop_at_bound = !finite || !options.exact_on_finite;
  FuzzySet current = u;
  for (std::size_t n = 0;; ++n) {
    if (n >= options.budget) {
      cert.terminal = Terminal::BudgetExhausted;
      cert.steps = n;
      break;
    }
    FuzzySet next = hb_apply(sys, current);
    if (next == current) {
      cert.terminal = Terminal::ExactFixedPoint;
      cert.steps = n;
      break;
    }
    if (stop_at_bound && n >= cert.apriori_steps) {
      cert.terminal = Terminal::ToleranceReached;
      cert.steps = n;
      break;
    }
    if (options.record_distances) cert.per_step_distance.push_back(d_infinity(current, next));
    cert.apriori_bound.push_back(apriori_bound(cert.factor, cert.spread, n + 1));
    current = std::move(next);
    if (options.keep_iterates) result.iterates.push_back(current);
  }
  result.limit = std::move(current);
  result.certificate = std::move(cert);
  return result;
}

namespace {

std::optional<PointId> peak_in(const FuzzySet& u, const CompactSet& set) {
  for (PointId p : set.members()) {
    if (u.level(p) == u.quantization()) return p;
  }
  return std::nullopt;
}

}  // namespace

Witness find_witness(const FuzzySet& u, const OrbitalFuzzySystem& sys, PointId x) {
  require_same_space(sys.space(), u.space());
  if (u.level(x) == 0) {
    throw InvalidArgument("witness requested for " + u.space().label(x) + ", which is outside [u]^*");
  }
  if (u.level(x) == u.quantization()) return {x, x};

  std::vector<PointId> roots{x};
  if (sys.space().is_finite()) {
    for (PointId w = 0; w < static_cast<PointId>(sys.space().size()); ++w) {
      if (w != x) roots.push_back(w);
    }
  } else {
    for (PointId w : u.positive_points()) {
      if (w != x) roots.push_back(w);
    }
  }
  for (PointId w : roots) {
    const OrbitResult orb = orbit(sys.ifs(), CompactSet::singleton(sys.space_ptr(), w));
    if (!orb.set.contains(x)) continue;
    if (const auto y = peak_in(u, orb.set)) return {w, *y};
  }
  std::ostringstream msg;
  msg << "no witness for " << u.space().label(x) << ": searched " << roots.size()
      << " roots, none has an orbit containing it and a point of membership 1";
  throw ClassMembershipError(msg.str());
}

FuzzySet restrict(const FuzzySet& u, const OrbitalFuzzySystem& sys, PointId x) {
  const Witness w = find_witness(u, sys, x);
  const CompactSet closure = orbit_closure(sys.ifs(), w.root, closure_tolerance(sys.space()));
  LevelArray levels = LevelArray::Zero(u.levels().size());
  for (PointId p : closure.members()) levels[p] = u.levels()[p];
  return FuzzySet(u.space_ptr(), u.quantization(), std::move(levels));
}

namespace {

FuzzySet settled_limit(const OrbitalFuzzySystem& sys, const FuzzySet& start,
                       const PicardOptions& options) {
  PicardResult r = picard_limit(sys, start, options);
  if (r.certificate.terminal == Terminal::BudgetExhausted) {
    throw NonConvergence("Picard iteration exhausted its budget of " +
                         std::to_string(options.budget) + " steps");
  }
  return std::move(r.limit);
}

}  // namespace

FuzzySet orbit_fractal(const OrbitalFuzzySystem& sys, const FuzzySet& u, PointId x,
                       const PicardOptions& options) {
  require_same_space(sys.space(), u.space());
  if (u.level(x) == 0) throw InvalidArgument(u.space().label(x) + " is outside [u]^*");
  PicardOptions opts = options;
  opts.check_class = false;
  return settled_limit(sys, delta(u.space_ptr(), x, u.quantization()), opts);
}

FuzzySet orbit_fractal_from_restriction(const OrbitalFuzzySystem& sys, const FuzzySet& u,
                                        PointId x, const PicardOptions& options) {
  PicardOptions opts = options;
  opts.check_class = false;
  return settled_limit(sys, restrict(u, sys, x), opts);
}

Decomposition decompose(const OrbitalFuzzySystem& sys, const FuzzySet& u,
                        const PicardOptions& options) {
  require_same_space(sys.space(), u.space());
  const auto positive = u.positive_points();
  for (PointId x : positive) find_witness(u, sys, x);

  PicardOptions whole_opts = options;
  whole_opts.check_class = false;
  PicardResult whole = picard_limit(sys, u, whole_opts);
  if (whole.certificate.terminal == Terminal::BudgetExhausted) {
    throw NonConvergence("Picard iteration of u exhausted its budget");
  }

  PicardOptions part_opts = whole_opts;
  part_opts.record_distances = false;
  part_opts.keep_iterates = false;

  std::vector<FuzzySet> parts;
  std::vector<PointId> reps;
  std::vector<Mask> closures;
  std::map<PointId, std::size_t> part_of;
  const double tol = closure_tolerance(sys.space());
  for (PointId x : positive) {
    const auto covered = std::find_if(closures.begin(), closures.end(),
                                      [x](const Mask& m) { return m[x] != 0; });
    if (covered != closures.end()) {
      part_of[x] = static_cast<std::size_t>(covered - closures.begin());
      continue;
    }
    part_of[x] = parts.size();
    parts.push_back(orbit_fractal(sys, u, x, part_opts));
    reps.push_back(x);
    closures.push_back(orbit_closure(sys.ifs(), x, tol).mask());
  }

  const auto peaks = u.peak_points();
  std::vector<FuzzySet> peak_parts;
  for (PointId y : peaks) peak_parts.push_back(parts[part_of.at(y)]);

  FuzzySet envelope = sup_family(parts);
  FuzzySet peak_envelope = sup_family(peak_parts);
  const double whole_gap = d_infinity(whole.limit, envelope);
  const double peak_gap = d_infinity(envelope, peak_envelope);
  return Decomposition{std::move(whole.limit),
                       std::move(whole.certificate),
                       std::move(parts),
                       std::move(reps),
                       std::move(part_of),
                       positive,
                       peaks,
                       std::move(envelope),
                       std::move(peak_envelope),
                       whole_gap,
                       peak_gap};
}

}  // namespace ofifs
