#include "ofifs/verify.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <set>

#include "ofifs/error.hpp"

namespace ofifs::verify {

using nlohmann::json;

json to_json(const CheckReport& report) {
  return json{{"name", report.name},
              {"status", report.passed ? "pass" : "fail"},
              {"evidence", report.evidence}};
}

namespace {

CheckReport guarded(const std::string& name, const std::function<CheckReport()>& fn) {
  try {
    CheckReport r = fn();
    r.name = name;
    return r;
  } catch (const std::exception& e) {
    CheckReport r{name, false, json::object()};
    r.evidence["error"] = e.what();
    return r;
  }
}

json labels_of(const Space& space, std::span<const PointId> points) {
  json out = json::array();
  for (PointId p : points) out.push_back(space.label(p));
  return out;
}

}  // namespace

Verifier::Verifier(const OrbitalFuzzySystem& sys, FuzzySet u, PicardOptions options)
    : sys_(sys), u_(std::move(u)), options_(std::move(options)) {
  require_same_space(sys_.space(), u_.space());
  options_.record_distances = false;
  options_.keep_iterates = false;
  options_.check_class = false;
}

const FuzzySet& Verifier::limit_from_delta(PointId s) {
  auto it = from_delta_.find(s);
  if (it != from_delta_.end()) return it->second;
  const FuzzySet start = delta(u_.space_ptr(), s, u_.quantization());
  PicardResult r = picard_limit(sys_, start, options_);
  if (r.certificate.terminal == Terminal::BudgetExhausted) {
    throw NonConvergence("Picard iteration from a delta exhausted its budget");
  }
  return from_delta_.emplace(s, std::move(r.limit)).first->second;
}

const FuzzySet& Verifier::part(PointId x) {
  auto it = parts_.find(x);
  if (it != parts_.end()) return it->second;
  return parts_.emplace(x, orbit_fractal_from_restriction(sys_, u_, x, options_)).first->second;
}

const FuzzySet& Verifier::whole() {
  if (!whole_) {
    PicardResult r = picard_limit(sys_, u_, options_);
    if (r.certificate.terminal == Terminal::BudgetExhausted) {
      throw NonConvergence("Picard iteration of u exhausted its budget");
    }
    whole_ = std::move(r.limit);
  }
  return *whole_;
}

std::vector<PointId> Verifier::sampled(std::vector<PointId> points) const {
  if (sys_.space().is_finite() || points.size() <= grid_sample || grid_sample == 0) return points;
  std::vector<PointId> out;
  const double stride = static_cast<double>(points.size() - 1) / static_cast<double>(grid_sample - 1);
  for (std::size_t k = 0; k < grid_sample; ++k) {
    out.push_back(points[static_cast<std::size_t>(std::llround(stride * static_cast<double>(k)))]);
  }
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool Verifier::matches(const FuzzySet& a, const FuzzySet& b) const { return fuzzy_match(a, b); }

double Verifier::gap(const FuzzySet& a, const FuzzySet& b) const { return d_infinity(a, b); }

FuzzySet Verifier::envelope_over(std::span<const PointId> points) {
  std::vector<FuzzySet> family;
  family.reserve(points.size());
  for (PointId x : points) family.push_back(part(x));
  return sup_family(family);
}

CheckReport Verifier::delta_start_invariance(PointId x) {
  return guarded("delta-start invariance", [&] {
    CheckReport r;
    const Witness w = find_witness(u_, sys_, x);
    const CompactSet closure =
        orbit_closure(sys_.ifs(), w.root, closure_tolerance(sys_.space()));
    const std::vector<PointId> all(closure.members().begin(), closure.members().end());
    const auto starts = sampled(all);
    const FuzzySet& target = part(x);
    double worst = 0.0;
    json mismatched = json::array();
    for (PointId s : starts) {
      const FuzzySet& lim = limit_from_delta(s);
      worst = std::max(worst, gap(lim, target));
      if (!matches(lim, target)) mismatched.push_back(sys_.space().label(s));
    }
    r.passed = mismatched.empty();
    r.evidence = {{"x", sys_.space().label(x)},
                  {"root", sys_.space().label(w.root)},
                  {"closure_size", closure.size()},
                  {"starts_checked", starts.size()},
                  {"sampled", starts.size() < all.size()},
                  {"max_gap", worst},
                  {"mismatched", mismatched}};
    return r;
  });
}

CheckReport Verifier::delta_start_invariance() {
  return guarded("delta-start invariance", [&] {
    CheckReport r{"", true, json::object()};
    json per_point = json::array();
    for (PointId x : sampled(u_.positive_points())) {
      CheckReport one = delta_start_invariance(x);
      r.passed = r.passed && one.passed;
      per_point.push_back(one.evidence);
    }
    r.evidence["points"] = per_point;
    return r;
  });
}

CheckReport Verifier::part_self_consistency() {
  return guarded("part self-consistency", [&] {
    CheckReport r{"", true, json::object()};
    std::size_t pairs = 0;
    double worst = 0.0;
    json failures = json::array();
    for (PointId x : sampled(u_.positive_points())) {
      const FuzzySet target = part(x);
      for (PointId y : sampled(target.positive_points())) {
        ++pairs;
        const FuzzySet& lim = limit_from_delta(y);
        worst = std::max(worst, gap(lim, target));
        if (!matches(lim, target)) {
          r.passed = false;
          failures.push_back({sys_.space().label(x), sys_.space().label(y)});
        }
      }
    }
    r.evidence = {{"pairs_checked", pairs}, {"max_gap", worst}, {"failures", failures}};
    return r;
  });
}

CheckReport Verifier::part_continuity(std::span<const PointId> sequence, PointId x) {
  return guarded("part continuity", [&] {
    if (sequence.empty()) throw InvalidArgument("part continuity needs a non-empty sequence");
    CheckReport r;
    const FuzzySet& target = limit_from_delta(x);
    std::vector<double> gaps;
    for (PointId p : sequence) {
      if (u_.level(p) == 0) throw InvalidArgument(u_.space().label(p) + " is outside [u]^*");
      gaps.push_back(gap(limit_from_delta(p), target));
    }
    if (sys_.space().is_finite()) {
      std::size_t tail = sequence.size();
      while (tail > 0 && sequence[tail - 1] == x) --tail;
      bool settled = tail < sequence.size();
      for (std::size_t k = tail; k < gaps.size(); ++k) settled = settled && gaps[k] == 0.0;
      r.passed = settled;
      r.evidence["settles_at"] = tail;
    } else {
      r.passed = gaps.back() <= match_tolerance(sys_.space());
      r.evidence["evidence_only"] = true;
    }
    r.evidence["x"] = u_.space().label(x);
    r.evidence["sequence"] = labels_of(u_.space(), sequence);
    r.evidence["gaps"] = gaps;
    return r;
  });
}

CheckReport Verifier::cut_union() {
  return guarded("cut union", [&] {
    CheckReport r{"", true, json::object()};
    const auto points = u_.positive_points();
    const FuzzySet env = envelope_over(points);
    std::set<int> levels;
    for (int l : env.attained_levels()) levels.insert(l);
    for (PointId x : points) {
      for (int l : part(x).attained_levels()) levels.insert(l);
    }
    json bad = json::array();
    for (int l : levels) {
      if (l == 0) continue;
      Mask joined(u_.space().size(), 0);
      for (PointId x : points) {
        const Mask m = part(x).cut_mask(l);
        for (std::size_t p = 0; p < m.size(); ++p) joined[p] |= m[p];
      }
      if (joined != env.cut_mask(l)) {
        r.passed = false;
        bad.push_back(l);
      }
    }
    r.evidence = {{"levels_checked", levels.size()}, {"mismatched_levels", bad}};
    return r;
  });
}

CheckReport Verifier::peak_sufficiency() {
  return guarded("peak sufficiency", [&] {
    CheckReport r;
    const auto star = sampled(u_.positive_points());
    const auto peaks = u_.peak_points();
    auto covered = [&](std::span<const PointId> from, std::span<const PointId> in) {
      std::size_t missing = 0;
      for (PointId x : from) {
        const bool found = std::any_of(in.begin(), in.end(),
                                       [&](PointId y) { return matches(part(x), part(y)); });
        if (!found) ++missing;
      }
      return missing;
    };
    const std::size_t star_missing = covered(star, peaks);
    const std::size_t peak_missing = covered(peaks, star);
    const FuzzySet env_star = envelope_over(star);
    const FuzzySet env_peak = envelope_over(peaks);
    r.passed = star_missing == 0 && peak_missing == 0 && matches(env_star, env_peak);
    r.evidence = {{"support_points", star.size()},
                  {"peak_points", peaks.size()},
                  {"parts_without_peak_twin", star_missing},
                  {"peak_parts_without_twin", peak_missing},
                  {"envelope_gap", gap(env_star, env_peak)}};
    return r;
  });
}

CheckReport Verifier::envelope_well_formed() {
  return guarded("envelope well-formed", [&] {
    CheckReport r;
    const auto points = sampled(u_.positive_points());
    const FuzzySet env = envelope_over(points);
    const CompactSet attr =
        attractor(sys_.ifs(), support(u_), closure_tolerance(sys_.space())).set;
    const Mask inside = attr.mask();
    double excess = 0.0;
    for (PointId p : env.positive_points()) {
      if (!inside[p]) excess = std::max(excess, set_distance(p, attr));
    }
    const bool contained =
        sys_.space().is_finite() ? excess == 0.0 : excess <= match_tolerance(sys_.space());
    r.passed = env.is_normal() && contained;
    r.evidence = {{"normal", env.is_normal()},
                  {"support_size", env.positive_points().size()},
                  {"attractor_size", attr.size()},
                  {"excess_distance", excess}};
    return r;
  });
}

CheckReport Verifier::decomposition() {
  return guarded("orbit-wise decomposition", [&] {
    CheckReport r;
    const auto star = u_.positive_points();
    const auto peaks = u_.peak_points();
    const FuzzySet& w = whole();
    const FuzzySet env_star = envelope_over(star);
    const FuzzySet env_peak = envelope_over(peaks);

    // The max of a finite family is attained pointwise by some member.
    bool attained = true;
    for (PointId p : env_star.positive_points()) {
      const int target = env_star.level(p);
      attained = attained && std::any_of(star.begin(), star.end(),
                                         [&](PointId x) { return part(x).level(p) == target; });
    }

    const Decomposition dec = decompose(sys_, u_, options_);
    const bool engine_route = matches(dec.whole, w) && matches(dec.envelope, env_star) &&
                              matches(dec.peak_envelope, env_peak);

    r.passed = matches(w, env_star) && matches(w, env_peak) && matches(env_star, env_peak) &&
               attained && engine_route;
    r.evidence = {{"support_points", star.size()},
                  {"peak_points", peaks.size()},
                  {"distinct_parts", dec.parts.size()},
                  {"whole_vs_envelope", gap(w, env_star)},
                  {"whole_vs_peak_envelope", gap(w, env_peak)},
                  {"envelope_vs_peak_envelope", gap(env_star, env_peak)},
                  {"attained", attained},
                  {"decompose_agrees", engine_route}};
    if (sys_.space().is_grid()) r.evidence["evidence_only"] = true;
    return r;
  });
}

CheckReport Verifier::iterate_splitting(std::size_t max_n) {
  return guarded("iterate splitting", [&] {
    CheckReport r{"", true, json::object()};
    FuzzySet current = u_;
    std::vector<FuzzySet> pieces;
    for (PointId x : u_.positive_points()) pieces.push_back(restrict(u_, sys_, x));
    std::vector<double> gaps;
    for (std::size_t n = 0; n <= max_n; ++n) {
      const FuzzySet joined = sup_family(pieces);
      // Exact on both backends: Z acts pointwise through maps and greys.
      gaps.push_back(gap(current, joined));
      if (!(current == joined)) r.passed = false;
      if (n == max_n) break;
      current = hb_apply(sys_, current);
      for (FuzzySet& piece : pieces) piece = hb_apply(sys_, piece);
    }
    r.evidence = {{"pieces", pieces.size()}, {"max_n", max_n}, {"gaps", gaps}};
    return r;
  });
}

CheckReport Verifier::apriori_bound() {
  return guarded("a-priori bound", [&] {
    CheckReport r{"", true, json::object()};
    PicardOptions opts = options_;
    opts.keep_iterates = true;
    const PicardResult run = picard_limit(sys_, u_, opts);
    const double slack = match_tolerance(sys_.space());
    std::vector<double> distances;
    std::size_t violations = 0;
    for (std::size_t n = 0; n < run.iterates.size(); ++n) {
      const double d = gap(run.iterates[n], run.limit);
      distances.push_back(d);
      if (d > run.certificate.apriori_bound[n] + slack + 1e-9) ++violations;
    }
    r.passed = violations == 0 && run.certificate.terminal != Terminal::BudgetExhausted;
    r.evidence = {{"terminal", to_string(run.certificate.terminal)},
                  {"steps", run.certificate.steps},
                  {"factor", run.certificate.factor},
                  {"spread", run.certificate.spread},
                  {"slack", slack},
                  {"distance_to_terminal", distances},
                  {"bound", run.certificate.apriori_bound},
                  {"violations", violations}};
    return r;
  });
}

CheckReport Verifier::crisp_reduction() {
  return guarded("crisp reduction", [&] {
    CheckReport r{"", true, json::object()};
    const int L = u_.quantization();
    for (const GreyLevelMap& g : sys_.greys()) {
      const auto table = g.quantized_table(L);
      for (int k = 0; k <= L; ++k) {
        if (table[k] != k) throw InvalidArgument("crisp reduction needs identity greys");
      }
    }
    for (PointId p : u_.positive_points()) {
      if (u_.level(p) != L) throw InvalidArgument("crisp reduction needs an indicator start");
    }
    const PicardResult run = picard_limit(sys_, u_, options_);
    const std::size_t steps = std::max<std::size_t>(run.certificate.steps, 1);
    FuzzySet current = u_;
    CompactSet set = support(u_);
    std::size_t checked = 0;
    for (std::size_t n = 0; n < steps; ++n) {
      current = hb_apply(sys_, current);
      set = fractal_operator(sys_.ifs(), set);
      ++checked;
      if (!(current == FuzzySet::indicator(set, L))) {
        r.passed = false;
        r.evidence["first_mismatch"] = n + 1;
        break;
      }
    }
    r.evidence["steps_checked"] = checked;
    r.evidence["final_support"] = set.size();
    return r;
  });
}

CheckReport orbit_structure(const IfsSystem& ifs) {
  return guarded("orbit structure", [&] {
    if (!ifs.space().is_finite()) throw Unsupported("orbit structure is checked on finite spaces");
    CheckReport r{"", true, json::object()};
    const auto& space = ifs.space_ptr();
    const std::size_t n = ifs.space().size();
    const double tol = exact_tolerance(ifs.space());
    std::vector<CompactSet> orbits;
    std::vector<CompactSet> attractors;
    std::size_t closure_failures = 0;
    std::size_t recursion_failures = 0;
    for (PointId x = 0; x < static_cast<PointId>(n); ++x) {
      const CompactSet start = CompactSet::singleton(space, x);
      const CompactSet orb = orbit(ifs, start).set;
      const CompactSet attr = attractor(ifs, start, tol).set;
      const CompactSet closure = orbit_closure(ifs, x, tol);
      if (!(closure == orb) || !(closure == set_union(orb, attr)) || !attr.is_subset_of(orb)) {
        ++closure_failures;
      }
      if (!(orb == set_union(start, fractal_operator(ifs, orb)))) ++recursion_failures;
      orbits.push_back(orb);
      attractors.push_back(attr);
    }
    std::size_t intersecting = 0;
    std::size_t shared_failures = 0;
    for (std::size_t a = 0; a < n; ++a) {
      const Mask ma = orbits[a].mask();
      for (std::size_t b = a + 1; b < n; ++b) {
        const auto mb = orbits[b].members();
        const bool meet = std::any_of(mb.begin(), mb.end(), [&](PointId p) { return ma[p] != 0; });
        if (!meet) continue;
        ++intersecting;
        if (!(attractors[a] == attractors[b])) ++shared_failures;
      }
    }
    r.passed = closure_failures == 0 && recursion_failures == 0 && shared_failures == 0;
    r.evidence = {{"points", n},
                  {"closure_failures", closure_failures},
                  {"recursion_failures", recursion_failures},
                  {"intersecting_pairs", intersecting},
                  {"shared_attractor_failures", shared_failures}};
    return r;
  });
}

CheckReport oracle_agreement(const oracle::OracleInstance& inst,
                             const oracle::EngineInstance& engine) {
  return guarded("oracle agreement", [&] {
    CheckReport r;
    const oracle::FixedPointTrace trace = oracle::oracle_fixed_points(inst);
    const PicardResult run = picard_limit(engine.system, engine.initial);
    const bool limit_ok = oracle::from_engine(run.limit) == trace.limit;
    const bool steps_ok = run.certificate.steps + 1 == trace.trace.size();

    // Decomposition recomputed with oracle arithmetic only.
    const int n = static_cast<int>(inst.labels.size());
    oracle::Levels env_star(inst.labels.size(), 0);
    oracle::Levels env_peak(inst.labels.size(), 0);
    bool parts_ok = true;
    for (int x = 0; x < n; ++x) {
      if (inst.initial[x] == 0) continue;
      const oracle::Levels part =
          oracle::oracle_fixed_points(inst, oracle::oracle_restrict(inst, inst.initial, x)).limit;
      const oracle::Levels from_delta =
          oracle::oracle_fixed_points(inst, oracle::oracle_delta(inst, x)).limit;
      parts_ok = parts_ok && part == from_delta;
      env_star = oracle::oracle_max(env_star, part);
      if (inst.initial[x] == inst.quantization) env_peak = oracle::oracle_max(env_peak, part);
    }
    const bool oracle_decomposition = env_star == trace.limit && env_peak == trace.limit;

    r.passed = limit_ok && steps_ok && parts_ok && oracle_decomposition;
    r.evidence = {{"engine_steps", run.certificate.steps},
                  {"oracle_steps", trace.trace.size() - 1},
                  {"limit_agrees", limit_ok},
                  {"restriction_matches_delta", parts_ok},
                  {"oracle_decomposition", oracle_decomposition},
                  {"limit", trace.limit}};
    return r;
  });
}

CheckReport recorded_limit(const oracle::EngineInstance& engine, const oracle::Levels& recorded) {
  return guarded("recorded limit", [&] {
    CheckReport r;
    const PicardResult run = picard_limit(engine.system, engine.initial);
    const oracle::Levels got = oracle::from_engine(run.limit);
    r.passed = got == recorded;
    r.evidence = {{"expected", recorded}, {"actual", got}};
    return r;
  });
}

std::vector<CheckReport> run_instance_checks(const oracle::OracleInstance& inst) {
  std::vector<CheckReport> out;
  const oracle::EngineInstance engine = oracle::to_engine(inst);
  out.push_back(oracle_agreement(inst, engine));
  out.push_back(orbit_structure(engine.system.ifs()));

  Verifier v(engine.system, engine.initial);
  out.push_back(v.delta_start_invariance());
  out.push_back(v.part_self_consistency());
  const auto positive = engine.initial.positive_points();
  if (!positive.empty()) {
    std::vector<PointId> seq = positive;
    const PointId x = positive.back();
    seq.push_back(x);
    seq.push_back(x);
    out.push_back(v.part_continuity(seq, x));
  }
  out.push_back(v.cut_union());
  out.push_back(v.peak_sufficiency());
  out.push_back(v.envelope_well_formed());
  out.push_back(v.decomposition());
  out.push_back(v.iterate_splitting());
  out.push_back(v.apriori_bound());
  return out;
}

OrbitalFuzzySystem sierpinski_system(int grid_size, std::vector<GreyLevelMap> greys) {
  if (grid_size < 3) throw InvalidArgument("grid size must be at least 3");
  if (greys.size() != 3) throw InvalidArgument("the Sierpinski system takes three greys");
  auto space = Space::grid(Eigen::Vector2d::Zero(), 1.0, grid_size, grid_size);
  const double e = static_cast<double>(grid_size - 1);
  const Eigen::Matrix2d half = 0.5 * Eigen::Matrix2d::Identity();
  std::vector<SpaceMap> maps{AffineMap{half, Eigen::Vector2d(0.0, 0.0)},
                             AffineMap{half, Eigen::Vector2d(e / 2.0, 0.0)},
                             AffineMap{half, Eigen::Vector2d(e / 4.0, e / 2.0)}};
  const double factor = std::min(0.5 + grid_snap_slack(space->grid_geometry()) + 1e-3, 0.99);
  return OrbitalFuzzySystem(IfsSystem(space, std::move(maps), factor), std::move(greys));
}

namespace {

constexpr int kGridQuantization = kDefaultQuantization;

GridScenario crisp_sierpinski(int n) {
  const OrbitalFuzzySystem sys = sierpinski_system(
      n, {GreyLevelMap::identity(), GreyLevelMap::identity(), GreyLevelMap::identity()});
  const Space& space = sys.space();
  std::vector<PointId> block;
  const int c = n / 2;
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) block.push_back(space.grid_point(c + dc, c + dr));
  }
  const FuzzySet u =
      FuzzySet::indicator(CompactSet(sys.space_ptr(), block), kGridQuantization);
  Verifier v(sys, u);
  return {"crisp-sierpinski", {v.crisp_reduction(), v.apriori_bound(), v.decomposition()}};
}

OrbitalFuzzySystem graded_system(int n) {
  return sierpinski_system(
      n, {GreyLevelMap::identity(), GreyLevelMap::scale(0.5), GreyLevelMap::scale(0.75)});
}

GridScenario graded_two_seeds(int n) {
  const OrbitalFuzzySystem sys = graded_system(n);
  const Space& space = sys.space();
  const PointId a = space.grid_point(n / 4, n / 8);
  const PointId b = space.grid_point(3 * n / 4, n / 8);
  const FuzzySet u = join(delta(sys.space_ptr(), a, kGridQuantization),
                          delta(sys.space_ptr(), b, kGridQuantization));
  Verifier v(sys, u);
  return {"graded-two-seeds",
          {v.decomposition(), v.apriori_bound(), v.delta_start_invariance(a),
           v.part_self_consistency(), v.peak_sufficiency(), v.envelope_well_formed(),
           v.iterate_splitting(10)}};
}

GridScenario orbit_sequence(int n) {
  const OrbitalFuzzySystem sys = graded_system(n);
  const Space& space = sys.space();
  std::vector<PointId> seq{space.grid_point(n - 1, n - 1)};
  for (int k = 0; k < 10; ++k) seq.push_back(sys.ifs().image(0, seq.back()));
  const PointId x = space.grid_point(0, 0);
  if (seq.back() != x) seq.push_back(x);
  const FuzzySet u = FuzzySet::indicator(CompactSet(sys.space_ptr(), seq), kGridQuantization);
  Verifier v(sys, u);
  return {"orbit-sequence", {v.part_continuity(seq, x)}};
}

}  // namespace

std::vector<std::string> grid_scenario_names() {
  return {"crisp-sierpinski", "graded-two-seeds", "orbit-sequence"};
}

GridScenario run_grid_scenario(const std::string& name, int grid_size) {
  if (name == "crisp-sierpinski") return crisp_sierpinski(grid_size);
  if (name == "graded-two-seeds") return graded_two_seeds(grid_size);
  if (name == "orbit-sequence") return orbit_sequence(grid_size);
  throw InvalidArgument("unknown grid scenario: " + name);
}

SuiteResult run_suite(const SuiteOptions& options) {
  SuiteResult result;
  json instances = json::array();
  const auto generated = oracle::generate_instances(options.seed, options.count);
  bool found = !options.instance;
  for (const auto& inst : generated) {
    if (options.instance && inst.id != *options.instance) continue;
    found = true;
    json entry = {{"id", inst.id},
                  {"points", inst.labels.size()},
                  {"maps", inst.maps.size()},
                  {"quantization", inst.quantization},
                  {"orbital_factor", inst.orbital_factor}};
    json checks = json::array();
    for (const CheckReport& c : run_instance_checks(inst)) {
      ++result.checks;
      if (!c.passed) ++result.failures;
      checks.push_back(to_json(c));
    }
    entry["checks"] = checks;
    instances.push_back(entry);
  }
  if (!found) throw InvalidArgument("no generated instance has id " + *options.instance);

  json grids = json::array();
  if (options.grids && !options.instance) {
    for (const std::string& name : grid_scenario_names()) {
      const GridScenario sc = run_grid_scenario(name, options.grid_size);
      json checks = json::array();
      for (const CheckReport& c : sc.checks) {
        ++result.checks;
        if (!c.passed) ++result.failures;
        checks.push_back(to_json(c));
      }
      grids.push_back({{"name", sc.name},
                       {"grid_size", options.grid_size},
                       {"evidence_only", true},
                       {"note", "grid results sample finitely many points and are evidence, "
                                "not a proof over the full support"},
                       {"checks", checks}});
    }
  }

  result.report = {{"seed", options.seed},
                   {"count", options.count},
                   {"instances", instances},
                   {"grid_scenarios", grids},
                   {"summary",
                    {{"checks", result.checks},
                     {"failures", result.failures},
                     {"status", result.failures == 0 ? "pass" : "fail"}}}};
  return result;
}

}  // namespace ofifs::verify
