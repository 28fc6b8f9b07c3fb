#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "ofifs/space.hpp"

namespace ofifs {

/// p -> matrix * p + offset in world coordinates, followed by snapping to the
/// nearest grid point. Grid backends only.
struct AffineMap {
  Eigen::Matrix2d matrix = Eigen::Matrix2d::Identity();
  Eigen::Vector2d offset = Eigen::Vector2d::Zero();
};

/// Explicit total function on a finite space.
struct TableMap {
  std::vector<PointId> image;
};

using SpaceMap = std::variant<AffineMap, TableMap>;

/// Image of p under f. On grids the affine image is snapped to the nearest
/// grid point, ties going to the smaller column and then the smaller row.
PointId apply_map(const Space& space, const SpaceMap& f, PointId p);

/// Snap slack of a grid: the relative perturbation a half-cell rounding can
/// add to a contraction factor, sqrt(2) * spacing / diam(grid).
double grid_snap_slack(const GridGeometry& g);

struct OrbitalWitness {
  std::size_t map_index = 0;
  PointId orbit_of = 0;
  PointId y = 0;
  PointId z = 0;
  double ratio = 0.0;
};

struct OrbitalCertificate {
  bool passed = false;
  /// Smallest C satisfied by every map on every orbit (exhaustive scan), or the
  /// largest operator norm plus the grid snap slack (affine maps).
  double certified_factor = 0.0;
  double declared_factor = 0.0;
  std::string method;
  std::optional<OrbitalWitness> witness;
};

/// Exhaustive orbital contraction scan on finite spaces; operator-norm
/// certificate for affine maps on grids. Table maps on grids are Unsupported.
OrbitalCertificate check_orbital_condition(const SpacePtr& space, std::span<const SpaceMap> maps,
                                           double declared_factor);

/// Smallest global Lipschitz constant of the maps on a finite space.
double global_lipschitz(const Space& space, std::span<const SpaceMap> maps);

/// A finite family of self-maps whose orbital contraction factor has been
/// certified at construction. Image tables are precomputed for every point.
class IfsSystem {
 public:
  /// Throws InvalidArgument (carrying the witness) if the declared factor
  /// cannot be certified.
  IfsSystem(SpacePtr space, std::vector<SpaceMap> maps, double orbital_factor);

  const Space& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  std::span<const SpaceMap> maps() const { return maps_; }
  std::size_t map_count() const { return maps_.size(); }
  double orbital_factor() const { return factor_; }
  const OrbitalCertificate& certificate() const { return certificate_; }

  /// Image of p under map i; throws MapOutOfGrid for affine images that leave the grid.
  PointId image(std::size_t i, PointId p) const;
  /// Precomputed images of map i, -1 where the affine image leaves the grid.
  std::span<const PointId> image_table(std::size_t i) const { return tables_[i]; }

 private:
  SpacePtr space_;
  std::vector<SpaceMap> maps_;
  double factor_;
  OrbitalCertificate certificate_;
  std::vector<std::vector<PointId>> tables_;
};

/// Image table of one map over every point of a finite space or grid.
std::vector<PointId> tabulate_map(const Space& space, const SpaceMap& f);

CompactSet fractal_operator(const IfsSystem& sys, const CompactSet& set);

inline constexpr std::size_t kDefaultGridOrbitDepth = 40;

struct OrbitResult {
  CompactSet set;
  /// True when closure under the maps was reached, false when the depth ran out.
  bool complete = false;
  std::size_t depth = 0;
};

/// Orbit of B: B together with all finite compositions of the maps applied to
/// B. Runs to the fixpoint on finite spaces when `max_depth` is empty; on grids
/// the depth defaults to kDefaultGridOrbitDepth.
OrbitResult orbit(const IfsSystem& sys, const CompactSet& start,
                  std::optional<std::size_t> max_depth = std::nullopt);

inline constexpr std::size_t kDefaultAttractorBudget = 1000;

/// Limit of the fractal-operator iterates of `start`.
HyperspaceLimit attractor(const IfsSystem& sys, const CompactSet& start, double tol,
                          std::size_t budget = kDefaultAttractorBudget);

/// Closure of the orbit of x, computed as orbit(x) together with A_x.
CompactSet orbit_closure(const IfsSystem& sys, PointId x, double tol);

/// Tolerance that distinguishes exact set equality on a backend: below the
/// smallest positive distance on finite spaces, one spacing on grids.
double exact_tolerance(const Space& space);

}  // namespace ofifs
