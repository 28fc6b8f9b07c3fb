#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ofifs/fuzzy.hpp"

namespace ofifs {

enum class Terminal { ExactFixedPoint, ToleranceReached, BudgetExhausted };

std::string to_string(Terminal t);

/// Trace of a Picard run of the fuzzy Hutchinson-Barnsley operator Z.
struct ConvergenceCertificate {
  std::size_t steps = 0;
  /// d_inf(Z^n u, Z^{n+1} u) for n < steps (empty when distances were not recorded).
  std::vector<double> per_step_distance;
  /// C^n / (1 - C) * D for n = 0..steps; the last entry bounds the result's
  /// distance to the true limit.
  std::vector<double> apriori_bound;
  double factor = 0.0;
  double spread = 0.0;
  double eps = 0.0;
  std::size_t apriori_steps = 0;
  Terminal terminal = Terminal::BudgetExhausted;
};

/// Number of steps n after which C^n / (1 - C) * D <= eps.
std::size_t apriori_steps(double factor, double spread, double eps);

/// C^n / (1 - C) * D.
double apriori_bound(double factor, double spread, std::size_t n);

/// D = diam(F_S(supp u) U supp u).
double support_spread(const IfsSystem& ifs, const FuzzySet& u);

/// Default eps: 1e-6 on finite spaces, spacing / 2 on grids.
double default_eps(const Space& space);

/// Tolerance used to settle attractors (and hence orbit closures): exact on
/// finite spaces, 1.5 spacings on grids so one-cell snapping jitter ends the run.
double closure_tolerance(const Space& space);

/// Equality tolerance for fuzzy-set comparisons: exact on finite spaces,
/// 2 spacings on grids.
double match_tolerance(const Space& space);

/// Exact equality on finite spaces, d_inf within match_tolerance on grids.
bool fuzzy_match(const FuzzySet& a, const FuzzySet& b);

struct PicardOptions {
  std::optional<double> eps;
  std::size_t budget = 10000;
  /// Record d_inf between consecutive iterates in the certificate.
  bool record_distances = true;
  /// Keep Z^n u for n = 0..steps.
  bool keep_iterates = false;
  /// Check class membership (a witness for every support point) before iterating.
  /// Defaults to on for finite spaces and off for grids.
  std::optional<bool> check_class;
  /// On finite spaces keep iterating past the a-priori step count until the
  /// exact fixed point.
  bool exact_on_finite = true;
};

struct PicardResult {
  FuzzySet limit;
  ConvergenceCertificate certificate;
  std::vector<FuzzySet> iterates;
};

/// Iterates Z from u until an exact fixed point, or (grids) until the a-priori
/// bound drops below eps. Returns BudgetExhausted in the certificate instead of
/// throwing when the budget runs out.
PicardResult picard_limit(const OrbitalFuzzySystem& sys, const FuzzySet& u,
                          const PicardOptions& options = {});

/// Points w (root) and y (peak) with x and y in the orbit of w and u(y) = 1.
struct Witness {
  PointId root = 0;
  PointId peak = 0;
};

/// Exhaustive over all roots on finite spaces; over x and supp u with bounded
/// orbit depth on grids. Throws ClassMembershipError listing the searched roots.
Witness find_witness(const FuzzySet& u, const OrbitalFuzzySystem& sys, PointId x);

/// u^x: u on the orbit closure of the witness root of x, zero elsewhere.
FuzzySet restrict(const FuzzySet& u, const OrbitalFuzzySystem& sys, PointId x);

/// The orbit-wise fractal u_x, iterated from delta_x.
FuzzySet orbit_fractal(const OrbitalFuzzySystem& sys, const FuzzySet& u, PointId x,
                       const PicardOptions& options = {});

/// The orbit-wise fractal u_x by its definition, iterated from u^x.
FuzzySet orbit_fractal_from_restriction(const OrbitalFuzzySystem& sys, const FuzzySet& u,
                                        PointId x, const PicardOptions& options = {});

/// The fuzzy fractal reached from u, split into orbit-wise parts.
struct Decomposition {
  FuzzySet whole;
  ConvergenceCertificate whole_certificate;
  /// Distinct parts; a support point lying in the orbit closure of an earlier
  /// representative shares that representative's part.
  std::vector<FuzzySet> parts;
  std::vector<PointId> representatives;
  /// Part index for every point of [u]^*.
  std::map<PointId, std::size_t> part_of;
  std::vector<PointId> positive_points;
  std::vector<PointId> peak_points;
  /// Max of the parts over [u]^* and over [u]^1.
  FuzzySet envelope;
  FuzzySet peak_envelope;
  double whole_gap = 0.0;
  double peak_gap = 0.0;
};

Decomposition decompose(const OrbitalFuzzySystem& sys, const FuzzySet& u,
                        const PicardOptions& options = {});

}  // namespace ofifs
