#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace ofifs {

using PointId = std::int32_t;

/// Dense per-point membership flags, indexed by PointId.
using Mask = std::vector<std::uint8_t>;

/// Largest finite space accepted; construction validates the triangle
/// inequality exhaustively, which is cubic in the point count.
inline constexpr std::size_t kMaxFinitePoints = 64;

struct FiniteMetric {
  std::vector<std::string> labels;
  Eigen::MatrixXd dist;
};

struct GridGeometry {
  Eigen::Vector2d origin{0.0, 0.0};
  double spacing = 1.0;
  int width = 1;
  int height = 1;
};

/// A metric space backend: a finite point set with an explicit distance
/// matrix, or a uniform Euclidean grid. Immutable once built.
class Space {
 public:
  static std::shared_ptr<const Space> finite(std::vector<std::string> labels,
                                             Eigen::MatrixXd dist);
  /// Finite space whose distances are Euclidean distances between `coords`.
  static std::shared_ptr<const Space> finite_euclidean(
      std::vector<std::string> labels, std::span<const Eigen::Vector2d> coords);
  static std::shared_ptr<const Space> grid(Eigen::Vector2d origin, double spacing,
                                           int width, int height);

  bool is_finite() const { return std::holds_alternative<FiniteMetric>(backend_); }
  bool is_grid() const { return std::holds_alternative<GridGeometry>(backend_); }

  std::size_t size() const;
  bool valid(PointId p) const { return p >= 0 && static_cast<std::size_t>(p) < size(); }
  void check_point(PointId p) const;

  double distance(PointId p, PointId q) const;

  const FiniteMetric& finite_metric() const;
  const GridGeometry& grid_geometry() const;

  /// Human-readable point name: the label on finite spaces, "(col,row)" on grids.
  std::string label(PointId p) const;
  /// Inverse of `label` for finite spaces; grids accept "(col,row)".
  PointId point_named(std::string_view name) const;

  // Grid helpers.
  PointId grid_point(int col, int row) const;
  Eigen::Vector2i cell(PointId p) const;
  Eigen::Vector2d coordinates(PointId p) const;

 private:
  explicit Space(std::variant<FiniteMetric, GridGeometry> backend)
      : backend_(std::move(backend)) {}

  std::variant<FiniteMetric, GridGeometry> backend_;
};

using SpacePtr = std::shared_ptr<const Space>;

/// A non-empty finite set of points of one space: an element of the
/// hyperspace of compact sets. Members are kept sorted and unique.
class CompactSet {
 public:
  CompactSet(SpacePtr space, std::vector<PointId> members);

  static CompactSet singleton(SpacePtr space, PointId p);
  static CompactSet from_mask(SpacePtr space, const Mask& mask);

  const Space& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  std::span<const PointId> members() const { return members_; }
  std::size_t size() const { return members_.size(); }

  bool contains(PointId p) const;
  bool is_subset_of(const CompactSet& other) const;
  Mask mask() const;

  friend bool operator==(const CompactSet& a, const CompactSet& b) {
    return a.space_ == b.space_ && a.members_ == b.members_;
  }

 private:
  SpacePtr space_;
  std::vector<PointId> members_;
};

CompactSet set_union(const CompactSet& a, const CompactSet& b);

void require_same_space(const Space& a, const Space& b);

double point_distance(const Space& space, PointId p, PointId q);

/// Distance from a point to a compact set: the minimum over members.
double set_distance(PointId x, const CompactSet& set);

/// Hausdorff-Pompeiu distance. Exhaustive max-min evaluation on finite
/// spaces; on grids large pairs go through an exact Euclidean distance
/// transform, which gives the same value.
double hausdorff(const CompactSet& a, const CompactSet& b);

/// Hausdorff distance between two non-empty masks over `space`.
double hausdorff(const Space& space, const Mask& a, const Mask& b);

/// Hausdorff distance by the literal max-min formula regardless of backend.
double hausdorff_exhaustive(const CompactSet& a, const CompactSet& b);

double diameter(const CompactSet& set);

struct HyperspaceLimit {
  CompactSet set;
  std::size_t step = 0;
  double increment = 0.0;
};

/// First term K_{n+1} of `sequence` with h(K_n, K_{n+1}) < tol.
/// Throws NonConvergence if the sequence never gets there.
HyperspaceLimit hyperspace_limit(std::span<const CompactSet> sequence, double tol);

/// Lazily generated variant: K_{n+1} = next(K_n). Reports `step` as the number
/// of applications before the stopping increment (0 for an invariant start).
/// Stops early on exact repetition.
HyperspaceLimit iterate_to_limit(const CompactSet& start,
                                 const std::function<CompactSet(const CompactSet&)>& next,
                                 double tol, std::size_t budget);

}  // namespace ofifs
