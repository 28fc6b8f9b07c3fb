#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ofifs/oracle.hpp"
#include "ofifs/picard.hpp"

namespace ofifs::verify {

struct CheckReport {
  std::string name;
  bool passed = false;
  nlohmann::json evidence = nlohmann::json::object();
};

nlohmann::json to_json(const CheckReport& report);

/// Executable checks of the orbit-wise structure of the fuzzy fractal reached
/// from one starting set. Fuzzy sets are compared exactly on finite spaces
/// and up to d_inf <= 2 * spacing on grids; grid scans over support points
/// are sampled (at most `grid_sample` points) and reported as such.
class Verifier {
 public:
  Verifier(const OrbitalFuzzySystem& sys, FuzzySet u, PicardOptions options = {});

  /// lim Z^n(delta_s).
  const FuzzySet& limit_from_delta(PointId s);
  /// u_x by definition: lim Z^n(u^x).
  const FuzzySet& part(PointId x);
  /// lim Z^n(u).
  const FuzzySet& whole();

  /// Starting from delta_s for any s in the orbit closure of the witness root
  /// of x reaches u_x.
  CheckReport delta_start_invariance(PointId x);
  CheckReport delta_start_invariance();
  /// u_y = u_x for every y in [u_x]^*.
  CheckReport part_self_consistency();
  /// d_inf(u_{x_n}, u_x) along a sequence converging to x inside [u]^*.
  CheckReport part_continuity(std::span<const PointId> sequence, PointId x);
  /// Cuts of the envelope equal the union of the cuts of the parts.
  CheckReport cut_union();
  /// Parts indexed by [u]^* and by [u]^1 form the same family.
  CheckReport peak_sufficiency();
  /// The envelope is normal and supported inside the attractor of supp u.
  /// On finite and grid backends this is the whole content available.
  CheckReport envelope_well_formed();
  /// lim Z^n(u) equals the envelope, written all four ways.
  CheckReport decomposition();
  /// Z^n(u) = max over x of Z^n(u^x) for n <= max_n.
  CheckReport iterate_splitting(std::size_t max_n = 10);
  /// d_inf(Z^n u, terminal) <= C^n / (1 - C) * D (+ 2 * spacing on grids) at every step.
  CheckReport apriori_bound();
  /// With identity greys and a crisp start, Z is the fractal operator on indicators.
  CheckReport crisp_reduction();

  std::size_t grid_sample = 12;

 private:
  std::vector<PointId> sampled(std::vector<PointId> points) const;
  bool matches(const FuzzySet& a, const FuzzySet& b) const;
  double gap(const FuzzySet& a, const FuzzySet& b) const;
  FuzzySet envelope_over(std::span<const PointId> points);

  const OrbitalFuzzySystem& sys_;
  FuzzySet u_;
  PicardOptions options_;
  std::map<PointId, FuzzySet> from_delta_;
  std::map<PointId, FuzzySet> parts_;
  std::optional<FuzzySet> whole_;
};

/// Orbit structure on finite spaces: intersecting orbits share A_x, and the
/// orbit closure agrees with orbit(x) U A_x and with the orbit itself.
CheckReport orbit_structure(const IfsSystem& ifs);

/// Engine Picard limit against the oracle trace, plus the orbit-wise
/// decomposition recomputed entirely inside the oracle.
CheckReport oracle_agreement(const oracle::OracleInstance& inst,
                             const oracle::EngineInstance& engine);

/// Engine limit against a limit recorded in a fixture.
CheckReport recorded_limit(const oracle::EngineInstance& engine, const oracle::Levels& recorded);

/// Every check on one oracle instance.
std::vector<CheckReport> run_instance_checks(const oracle::OracleInstance& inst);

/// Three half-scale affine maps towards the corners (0,0), (n-1,0) and
/// ((n-1)/2, n-1) of an n x n unit grid.
OrbitalFuzzySystem sierpinski_system(int grid_size, std::vector<GreyLevelMap> greys);

struct GridScenario {
  std::string name;
  std::vector<CheckReport> checks;
};

/// Named grid scenarios: "crisp-sierpinski", "graded-two-seeds", "orbit-sequence".
GridScenario run_grid_scenario(const std::string& name, int grid_size);
std::vector<std::string> grid_scenario_names();

struct SuiteOptions {
  std::uint64_t seed = 1;
  std::size_t count = 20;
  /// Restrict to one generated instance id (e.g. "s1-3").
  std::optional<std::string> instance;
  bool grids = true;
  int grid_size = 129;
};

struct SuiteResult {
  nlohmann::json report;
  std::size_t checks = 0;
  std::size_t failures = 0;
  bool passed() const { return failures == 0; }
};

SuiteResult run_suite(const SuiteOptions& options);

}  // namespace ofifs::verify
