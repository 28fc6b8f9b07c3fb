#include "ofifs/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "ofifs/error.hpp"

namespace ofifs {

namespace {

constexpr double kMetricTolerance = 1e-12;

double grid_distance(const GridGeometry& g, PointId p, PointId q) {
  const long dc = static_cast<long>(p % g.width) - static_cast<long>(q % g.width);
  const long dr = static_cast<long>(p / g.width) - static_cast<long>(q / g.width);
  return g.spacing * std::sqrt(static_cast<double>(dc * dc + dr * dr));
}

// Felzenszwalb-Huttenlocher lower envelope of parabolas, one row or column.
void distance_transform_1d(const double* f, double* out, int n, int stride,
                           std::vector<int>& v, std::vector<double>& z,
                           std::vector<double>& buf) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  for (int q = 0; q < n; ++q) buf[q] = f[q * stride];
  int k = 0;
  v[0] = 0;
  z[0] = -inf;
  z[1] = inf;
  for (int q = 1; q < n; ++q) {
    if (buf[q] == inf) continue;
    if (buf[v[k]] == inf) {
      v[k] = q;
      continue;
    }
    double s = ((buf[q] + q * q) - (buf[v[k]] + v[k] * v[k])) / (2.0 * (q - v[k]));
    while (k > 0 && s <= z[k]) {
      --k;
      s = ((buf[q] + q * q) - (buf[v[k]] + v[k] * v[k])) / (2.0 * (q - v[k]));
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = inf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    out[q * stride] = buf[v[k]] == inf ? inf : dq * dq + buf[v[k]];
  }
}

// Squared distance (in cell units) from every cell to the nearest masked cell.
std::vector<double> squared_distance_transform(const GridGeometry& g, const Mask& mask) {
  const int w = g.width;
  const int h = g.height;
  std::vector<double> field(static_cast<std::size_t>(w) * h);
  for (std::size_t i = 0; i < field.size(); ++i) {
    field[i] = mask[i] ? 0.0 : std::numeric_limits<double>::infinity();
  }
  const int n = std::max(w, h);
  std::vector<int> v(n);
  std::vector<double> z(n + 1);
  std::vector<double> buf(n);
  for (int c = 0; c < w; ++c) {
    distance_transform_1d(field.data() + c, field.data() + c, h, w, v, z, buf);
  }
  for (int r = 0; r < h; ++r) {
    double* row = field.data() + static_cast<std::size_t>(r) * w;
    distance_transform_1d(row, row, w, 1, v, z, buf);
  }
  return field;
}

std::vector<PointId> mask_members(const Mask& mask) {
  std::vector<PointId> out;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) out.push_back(static_cast<PointId>(i));
  }
  return out;
}

double directed_exhaustive(const Space& space, std::span<const PointId> from,
                           std::span<const PointId> to) {
  double worst = 0.0;
  for (PointId x : from) {
    double best = std::numeric_limits<double>::infinity();
    for (PointId y : to) best = std::min(best, space.distance(x, y));
    worst = std::max(worst, best);
  }
  return worst;
}

double grid_hausdorff_edt(const GridGeometry& g, const Mask& a, const Mask& b) {
  const auto to_b = squared_distance_transform(g, b);
  const auto to_a = squared_distance_transform(g, a);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i]) worst = std::max(worst, to_b[i]);
    if (b[i]) worst = std::max(worst, to_a[i]);
  }
  return g.spacing * std::sqrt(worst);
}

}  // namespace

SpacePtr Space::finite(std::vector<std::string> labels, Eigen::MatrixXd dist) {
  const auto n = labels.size();
  if (n == 0) throw InvalidArgument("finite space needs at least one point");
  if (n > kMaxFinitePoints) {
    throw InvalidArgument("finite space has " + std::to_string(n) + " points; limit is " +
                          std::to_string(kMaxFinitePoints));
  }
  if (static_cast<std::size_t>(dist.rows()) != n || static_cast<std::size_t>(dist.cols()) != n) {
    throw InvalidArgument("distance matrix shape does not match the point list");
  }
  std::unordered_set<std::string> seen;
  for (const auto& l : labels) {
    if (l.empty() || !seen.insert(l).second) {
      throw InvalidArgument("point labels must be non-empty and unique: '" + l + "'");
    }
  }
  const double scale = std::max(1.0, dist.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < dist.rows(); ++i) {
    if (dist(i, i) != 0.0) throw InvalidArgument("distance matrix diagonal must be zero");
    for (Eigen::Index j = 0; j < dist.cols(); ++j) {
      if (!std::isfinite(dist(i, j))) throw InvalidArgument("distance matrix has a non-finite entry");
      if (dist(i, j) != dist(j, i)) throw InvalidArgument("distance matrix is not symmetric");
      if (i != j && !(dist(i, j) > 0.0)) {
        throw InvalidArgument("distinct points " + labels[i] + ", " + labels[j] +
                              " must have positive distance");
      }
    }
  }
  for (Eigen::Index i = 0; i < dist.rows(); ++i) {
    for (Eigen::Index j = 0; j < dist.rows(); ++j) {
      for (Eigen::Index k = 0; k < dist.rows(); ++k) {
        if (dist(i, k) > dist(i, j) + dist(j, k) + kMetricTolerance * scale) {
          throw InvalidArgument("triangle inequality fails for " + labels[i] + ", " + labels[j] +
                                ", " + labels[k]);
        }
      }
    }
  }
  return SpacePtr(new Space(FiniteMetric{std::move(labels), std::move(dist)}));
}

SpacePtr Space::finite_euclidean(std::vector<std::string> labels,
                                 std::span<const Eigen::Vector2d> coords) {
  if (labels.size() != coords.size()) throw InvalidArgument("label/coordinate count mismatch");
  const auto n = static_cast<Eigen::Index>(coords.size());
  Eigen::MatrixXd dist(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) dist(i, j) = (coords[i] - coords[j]).norm();
  }
  return finite(std::move(labels), std::move(dist));
}

SpacePtr Space::grid(Eigen::Vector2d origin, double spacing, int width, int height) {
  if (!(spacing > 0.0) || !std::isfinite(spacing)) throw InvalidArgument("grid spacing must be positive");
  if (width <= 0 || height <= 0) throw InvalidArgument("grid dimensions must be positive");
  if (static_cast<long long>(width) * height > std::numeric_limits<PointId>::max()) {
    throw InvalidArgument("grid too large");
  }
  return SpacePtr(new Space(GridGeometry{origin, spacing, width, height}));
}

std::size_t Space::size() const {
  if (const auto* f = std::get_if<FiniteMetric>(&backend_)) return f->labels.size();
  const auto& g = std::get<GridGeometry>(backend_);
  return static_cast<std::size_t>(g.width) * g.height;
}

void Space::check_point(PointId p) const {
  if (!valid(p)) {
    throw InvalidPoint("point id " + std::to_string(p) + " is not in a space of " +
                       std::to_string(size()) + " points");
  }
}

double Space::distance(PointId p, PointId q) const {
  if (const auto* f = std::get_if<FiniteMetric>(&backend_)) return f->dist(p, q);
  return grid_distance(std::get<GridGeometry>(backend_), p, q);
}

const FiniteMetric& Space::finite_metric() const {
  if (const auto* f = std::get_if<FiniteMetric>(&backend_)) return *f;
  throw Unsupported("space is not finite");
}

const GridGeometry& Space::grid_geometry() const {
  if (const auto* g = std::get_if<GridGeometry>(&backend_)) return *g;
  throw Unsupported("space is not a grid");
}

std::string Space::label(PointId p) const {
  check_point(p);
  if (const auto* f = std::get_if<FiniteMetric>(&backend_)) return f->labels[p];
  const auto c = cell(p);
  return "(" + std::to_string(c.x()) + "," + std::to_string(c.y()) + ")";
}

PointId Space::point_named(std::string_view name) const {
  if (const auto* f = std::get_if<FiniteMetric>(&backend_)) {
    const auto it = std::find(f->labels.begin(), f->labels.end(), name);
    if (it == f->labels.end()) throw InvalidPoint("unknown point '" + std::string(name) + "'");
    return static_cast<PointId>(it - f->labels.begin());
  }
  int col = 0;
  int row = 0;
  char open = 0, comma = 0, close = 0;
  std::istringstream in{std::string(name)};
  if (!(in >> open >> col >> comma >> row >> close) || open != '(' || comma != ',' || close != ')') {
    throw InvalidPoint("grid points are named (col,row), got '" + std::string(name) + "'");
  }
  return grid_point(col, row);
}

PointId Space::grid_point(int col, int row) const {
  const auto& g = grid_geometry();
  if (col < 0 || row < 0 || col >= g.width || row >= g.height) {
    throw InvalidPoint("cell (" + std::to_string(col) + "," + std::to_string(row) +
                       ") is outside the grid");
  }
  return static_cast<PointId>(row) * g.width + col;
}

Eigen::Vector2i Space::cell(PointId p) const {
  const auto& g = grid_geometry();
  check_point(p);
  return {p % g.width, p / g.width};
}

Eigen::Vector2d Space::coordinates(PointId p) const {
  const auto& g = grid_geometry();
  return g.origin + g.spacing * cell(p).cast<double>();
}

CompactSet::CompactSet(SpacePtr space, std::vector<PointId> members)
    : space_(std::move(space)), members_(std::move(members)) {
  if (!space_) throw InvalidArgument("compact set needs a space");
  if (members_.empty()) throw InvalidArgument("compact sets are non-empty");
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  space_->check_point(members_.front());
  space_->check_point(members_.back());
}

CompactSet CompactSet::singleton(SpacePtr space, PointId p) {
  return CompactSet(std::move(space), std::vector<PointId>{p});
}

CompactSet CompactSet::from_mask(SpacePtr space, const Mask& mask) {
  if (!space || mask.size() != space->size()) throw InvalidArgument("mask size does not match space");
  return CompactSet(std::move(space), mask_members(mask));
}

bool CompactSet::contains(PointId p) const {
  return std::binary_search(members_.begin(), members_.end(), p);
}

bool CompactSet::is_subset_of(const CompactSet& other) const {
  require_same_space(*space_, *other.space_);
  return std::includes(other.members_.begin(), other.members_.end(), members_.begin(),
                       members_.end());
}

Mask CompactSet::mask() const {
  Mask m(space_->size(), 0);
  for (PointId p : members_) m[p] = 1;
  return m;
}

CompactSet set_union(const CompactSet& a, const CompactSet& b) {
  require_same_space(a.space(), b.space());
  std::vector<PointId> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.members().begin(), a.members().end(), b.members().begin(), b.members().end(),
                 std::back_inserter(out));
  return CompactSet(a.space_ptr(), std::move(out));
}

void require_same_space(const Space& a, const Space& b) {
  if (&a != &b) throw SpaceMismatch("operands live in different spaces");
}

double point_distance(const Space& space, PointId p, PointId q) {
  space.check_point(p);
  space.check_point(q);
  return space.distance(p, q);
}

double set_distance(PointId x, const CompactSet& set) {
  set.space().check_point(x);
  double best = std::numeric_limits<double>::infinity();
  for (PointId y : set.members()) best = std::min(best, set.space().distance(x, y));
  return best;
}

double hausdorff_exhaustive(const CompactSet& a, const CompactSet& b) {
  require_same_space(a.space(), b.space());
  return std::max(directed_exhaustive(a.space(), a.members(), b.members()),
                  directed_exhaustive(a.space(), b.members(), a.members()));
}

double hausdorff(const CompactSet& a, const CompactSet& b) {
  require_same_space(a.space(), b.space());
  if (a == b) return 0.0;
  if (a.space().is_grid() && a.size() * b.size() > 4 * a.space().size()) {
    return grid_hausdorff_edt(a.space().grid_geometry(), a.mask(), b.mask());
  }
  return hausdorff_exhaustive(a, b);
}

double hausdorff(const Space& space, const Mask& a, const Mask& b) {
  if (a.size() != space.size() || b.size() != space.size()) {
    throw InvalidArgument("mask size does not match space");
  }
  if (a == b) {
    if (std::find(a.begin(), a.end(), 1) == a.end()) throw InvalidArgument("empty set");
    return 0.0;
  }
  const auto ma = mask_members(a);
  const auto mb = mask_members(b);
  if (ma.empty() || mb.empty()) throw InvalidArgument("hausdorff distance of an empty set");
  if (space.is_grid() && ma.size() * mb.size() > 4 * space.size()) {
    return grid_hausdorff_edt(space.grid_geometry(), a, b);
  }
  return std::max(directed_exhaustive(space, ma, mb), directed_exhaustive(space, mb, ma));
}

namespace {

// Diameter of grid points via their convex hull (Andrew's monotone chain).
double grid_diameter(const CompactSet& set) {
  const auto& g = set.space().grid_geometry();
  std::vector<std::pair<long, long>> pts;
  pts.reserve(set.size());
  for (PointId p : set.members()) pts.emplace_back(p % g.width, p / g.width);
  std::sort(pts.begin(), pts.end());
  const auto cross = [](const std::pair<long, long>& o, const std::pair<long, long>& a,
                        const std::pair<long, long>& b) {
    return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
  };
  std::vector<std::pair<long, long>> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& q : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], q) <= 0) --k;
    hull[k++] = q;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k > 1 ? k - 1 : k);
  long best = 0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    for (std::size_t j = i + 1; j < hull.size(); ++j) {
      const long dc = hull[i].first - hull[j].first;
      const long dr = hull[i].second - hull[j].second;
      best = std::max(best, dc * dc + dr * dr);
    }
  }
  return g.spacing * std::sqrt(static_cast<double>(best));
}

}  // namespace

double diameter(const CompactSet& set) {
  if (set.space().is_grid() && set.size() > 256) return grid_diameter(set);
  double d = 0.0;
  const auto m = set.members();
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i + 1; j < m.size(); ++j) d = std::max(d, set.space().distance(m[i], m[j]));
  }
  return d;
}

HyperspaceLimit hyperspace_limit(std::span<const CompactSet> sequence, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  for (std::size_t n = 0; n + 1 < sequence.size(); ++n) {
    const double inc = hausdorff(sequence[n], sequence[n + 1]);
    if (inc < tol) return {sequence[n + 1], n + 1, inc};
  }
  throw NonConvergence("hausdorff increments never dropped below " + std::to_string(tol) +
                       " within " + std::to_string(sequence.size()) + " terms");
}

HyperspaceLimit iterate_to_limit(const CompactSet& start,
                                 const std::function<CompactSet(const CompactSet&)>& next,
                                 double tol, std::size_t budget) {
  if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  CompactSet current = start;
  for (std::size_t step = 0; step < budget; ++step) {
    CompactSet following = next(current);
    if (following == current) return {std::move(current), step, 0.0};
    const double inc = hausdorff(current, following);
    if (inc < tol) return {std::move(following), step, inc};
    current = std::move(following);
  }
  throw NonConvergence("set iteration did not settle within " + std::to_string(budget) + " steps");
}

}  // namespace ofifs
