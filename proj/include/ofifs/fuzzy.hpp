#pragma once

#include <functional>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "ofifs/ifs.hpp"
#include "ofifs/space.hpp"

namespace ofifs {

/// Membership numerators; the membership of point p is levels[p] / L.
using LevelArray = Eigen::ArrayXi;

inline constexpr int kDefaultQuantization = 255;

/// Nearest lattice numerator of t on {0, 1/L, ..., 1}, ties rounding up.
int quantize(double t, int quantization);

/// A fuzzy subset of a space with memberships on the lattice {0, 1/L, ..., 1}.
/// Stored densely, one numerator per point.
class FuzzySet {
 public:
  FuzzySet(SpacePtr space, int quantization, LevelArray levels);

  static FuzzySet zero(SpacePtr space, int quantization = kDefaultQuantization);
  static FuzzySet indicator(const CompactSet& set, int quantization = kDefaultQuantization);

  const Space& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  int quantization() const { return quantization_; }
  const LevelArray& levels() const { return levels_; }

  int level(PointId p) const;
  double value(PointId p) const;

  bool is_normal() const { return levels_.size() > 0 && levels_.maxCoeff() == quantization_; }
  bool is_zero() const { return levels_.size() == 0 || levels_.maxCoeff() == 0; }

  /// Positive numerators attained somewhere, ascending.
  std::vector<int> attained_levels() const;
  /// Points whose numerator is at least `level`.
  Mask cut_mask(int level) const;
  /// Points with positive membership, ascending.
  std::vector<PointId> positive_points() const;
  /// Points with membership exactly 1, ascending.
  std::vector<PointId> peak_points() const;

  friend bool operator==(const FuzzySet& a, const FuzzySet& b) {
    return a.space_ == b.space_ && a.quantization_ == b.quantization_ &&
           (a.levels_ == b.levels_).all();
  }

 private:
  SpacePtr space_;
  int quantization_;
  LevelArray levels_;
};

/// Linear on each [t_k, t_{k+1}) from `left[k]` towards `right[k]`, with an
/// explicit value at 1. Right-continuous by construction.
struct PiecewiseLinearGrey {
  std::vector<double> breakpoints;
  std::vector<double> left;
  std::vector<double> right;
  double at_one = 1.0;
};

/// Non-decreasing table of L + 1 numerators.
struct LookupGrey {
  int quantization = kDefaultQuantization;
  std::vector<int> table;
};

/// A grey level map: rho(0) = 0, non-decreasing, right-continuous, not
/// identically zero. Only the two representable forms are accepted so the
/// conditions can be checked structurally.
class GreyLevelMap {
 public:
  static GreyLevelMap piecewise_linear(std::vector<double> breakpoints, std::vector<double> left,
                                       std::vector<double> right, double at_one);
  static GreyLevelMap lookup(int quantization, std::vector<int> table);

  static GreyLevelMap identity();
  /// t -> factor * t.
  static GreyLevelMap scale(double factor);
  /// 0 below `threshold`, `high` from `threshold` on.
  static GreyLevelMap step(double threshold, double high = 1.0);
  /// Lookup table sampling `fn` on the lattice with nearest rounding.
  static GreyLevelMap tabulate(int quantization, const std::function<double(double)>& fn);

  const std::variant<PiecewiseLinearGrey, LookupGrey>& representation() const { return rep_; }

  /// rho(t). Lookup tables only accept lattice points of their own quantization.
  double evaluate(double t) const;
  double at_one() const;
  /// rho restricted to the lattice {0, 1/L, ..., 1} and re-quantized.
  std::vector<int> quantized_table(int quantization) const;

 private:
  explicit GreyLevelMap(std::variant<PiecewiseLinearGrey, LookupGrey> rep) : rep_(std::move(rep)) {}

  std::variant<PiecewiseLinearGrey, LookupGrey> rep_;
};

/// The triple of a space, its orbital system of maps, and one grey map per map.
/// Admissible: some grey map fixes 1.
class OrbitalFuzzySystem {
 public:
  OrbitalFuzzySystem(IfsSystem ifs, std::vector<GreyLevelMap> greys);

  const IfsSystem& ifs() const { return ifs_; }
  const Space& space() const { return ifs_.space(); }
  const SpacePtr& space_ptr() const { return ifs_.space_ptr(); }
  std::span<const GreyLevelMap> greys() const { return greys_; }
  std::size_t map_count() const { return greys_.size(); }

 private:
  IfsSystem ifs_;
  std::vector<GreyLevelMap> greys_;
};

FuzzySet delta(const SpacePtr& space, PointId x, int quantization = kDefaultQuantization);

/// {x : u(x) >= alpha} for alpha in (0, 1]. Throws EmptyCut when nothing qualifies.
CompactSet level_set(const FuzzySet& u, double alpha);

/// Points with positive membership. Throws EmptyCut for the zero function.
CompactSet support(const FuzzySet& u);

/// f(u)(y) = max of u over the preimage of y, zero off the image.
FuzzySet pushforward(const SpaceMap& f, const FuzzySet& u);
/// Same, using the precomputed image table of map i of a system.
FuzzySet pushforward(const IfsSystem& ifs, std::size_t i, const FuzzySet& u);

/// rho o u, re-quantized to the nearest lattice value with ties up.
FuzzySet apply_grey(const GreyLevelMap& rho, const FuzzySet& u);

/// Z(u) = max over i of rho_i(f_i(u)).
FuzzySet hb_apply(const OrbitalFuzzySystem& sys, const FuzzySet& u);

/// sup over alpha of the Hausdorff distance between alpha-cuts, evaluated at
/// the attained levels of u and v. Throws EmptyCut for non-normal inputs.
double d_infinity(const FuzzySet& u, const FuzzySet& v);

FuzzySet join(const FuzzySet& u, const FuzzySet& v);

/// Pointwise maximum of a non-empty family.
FuzzySet sup_family(std::span<const FuzzySet> family);

void require_compatible(const FuzzySet& u, const FuzzySet& v);

}  // namespace ofifs
