#include "ofifs/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ofifs/error.hpp"

namespace ofifs {

namespace {

constexpr double kSnapEpsilon = 1e-9;
constexpr double kFactorTolerance = 1e-12;

std::uint64_t finite_orbit_bits(const std::vector<std::vector<PointId>>& tables, PointId x) {
  std::uint64_t seen = std::uint64_t{1} << x;
  std::vector<PointId> frontier{x};
  while (!frontier.empty()) {
    std::vector<PointId> next;
    for (PointId p : frontier) {
      for (const auto& t : tables) {
        const PointId q = t[p];
        if (!(seen >> q & 1U)) {
          seen |= std::uint64_t{1} << q;
          next.push_back(q);
        }
      }
    }
    frontier = std::move(next);
  }
  return seen;
}

std::string describe_witness(const Space& space, const OrbitalWitness& w) {
  std::ostringstream out;
  out << "map " << w.map_index << " expands the orbit pair " << space.label(w.y) << ", "
      << space.label(w.z) << " of " << space.label(w.orbit_of) << " by ratio " << w.ratio;
  return out.str();
}

}  // namespace

PointId apply_map(const Space& space, const SpaceMap& f, PointId p) {
  space.check_point(p);
  if (const auto* t = std::get_if<TableMap>(&f)) {
    if (t->image.size() != space.size()) throw InvalidArgument("table map does not cover the space");
    const PointId q = t->image[p];
    space.check_point(q);
    return q;
  }
  const auto& a = std::get<AffineMap>(f);
  if (!space.is_grid()) throw Unsupported("affine maps need a grid backend");
  const auto& g = space.grid_geometry();
  const Eigen::Vector2d world = space.coordinates(p);
  const Eigen::Vector2d img = a.matrix * world + a.offset;
  const Eigen::Vector2d cellf = (img - g.origin) / g.spacing;
  const double col = std::ceil(cellf.x() - 0.5 - kSnapEpsilon);
  const double row = std::ceil(cellf.y() - 0.5 - kSnapEpsilon);
  if (!(col >= 0.0 && row >= 0.0 && col < g.width && row < g.height)) {
    std::ostringstream msg;
    msg << "affine image (" << img.x() << ", " << img.y() << ") of " << space.label(p)
        << " leaves the grid";
    throw MapOutOfGrid(msg.str());
  }
  return static_cast<PointId>(row) * g.width + static_cast<PointId>(col);
}

double grid_snap_slack(const GridGeometry& g) {
  const double w = g.width - 1;
  const double h = g.height - 1;
  const double diam = std::sqrt(w * w + h * h);
  return diam > 0.0 ? std::sqrt(2.0) / diam : 0.0;
}

std::vector<PointId> tabulate_map(const Space& space, const SpaceMap& f) {
  std::vector<PointId> table(space.size(), -1);
  for (std::size_t p = 0; p < table.size(); ++p) {
    try {
      table[p] = apply_map(space, f, static_cast<PointId>(p));
    } catch (const MapOutOfGrid&) {
      table[p] = -1;
    }
  }
  return table;
}

OrbitalCertificate check_orbital_condition(const SpacePtr& space, std::span<const SpaceMap> maps,
                                           double declared_factor) {
  if (!(declared_factor >= 0.0 && declared_factor < 1.0)) {
    throw InvalidArgument("orbital factor must lie in [0, 1)");
  }
  if (maps.empty()) throw InvalidArgument("a system needs at least one map");
  OrbitalCertificate cert;
  cert.declared_factor = declared_factor;

  if (space->is_grid()) {
    cert.method = "operator-norm";
    double worst = 0.0;
    for (const auto& f : maps) {
      const auto* a = std::get_if<AffineMap>(&f);
      if (!a) throw Unsupported("orbital check on a grid needs affine maps");
      Eigen::JacobiSVD<Eigen::Matrix2d> svd(a->matrix);
      worst = std::max(worst, svd.singularValues()(0));
    }
    cert.certified_factor = worst + grid_snap_slack(space->grid_geometry());
    cert.passed = cert.certified_factor <= declared_factor + kFactorTolerance &&
                  cert.certified_factor < 1.0;
    return cert;
  }

  cert.method = "exhaustive-orbit-scan";
  const auto n = static_cast<PointId>(space->size());
  std::vector<std::vector<PointId>> tables;
  for (const auto& f : maps) {
    if (!std::holds_alternative<TableMap>(f)) throw Unsupported("finite spaces need table maps");
    tables.push_back(tabulate_map(*space, f));
  }
  // comate[y * n + z]: some orbit contains both, with owner recording one such orbit.
  std::vector<PointId> owner(static_cast<std::size_t>(n) * n, -1);
  for (PointId x = 0; x < n; ++x) {
    const auto bits = finite_orbit_bits(tables, x);
    for (PointId y = 0; y < n; ++y) {
      if (!(bits >> y & 1U)) continue;
      for (PointId z = y + 1; z < n; ++z) {
        if ((bits >> z & 1U) && owner[y * n + z] < 0) owner[y * n + z] = x;
      }
    }
  }
  double worst = 0.0;
  OrbitalWitness worst_witness;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    for (PointId y = 0; y < n; ++y) {
      for (PointId z = y + 1; z < n; ++z) {
        const PointId x = owner[y * n + z];
        if (x < 0) continue;
        const double ratio = space->distance(tables[i][y], tables[i][z]) / space->distance(y, z);
        if (ratio > worst) {
          worst = ratio;
          worst_witness = {i, x, y, z, ratio};
        }
      }
    }
  }
  cert.certified_factor = worst;
  cert.passed = worst <= declared_factor + kFactorTolerance && worst < 1.0;
  if (!cert.passed) cert.witness = worst_witness;
  return cert;
}

double global_lipschitz(const Space& space, std::span<const SpaceMap> maps) {
  const auto n = static_cast<PointId>(space.size());
  double worst = 0.0;
  for (const auto& f : maps) {
    const auto table = tabulate_map(space, f);
    for (PointId y = 0; y < n; ++y) {
      for (PointId z = y + 1; z < n; ++z) {
        if (table[y] < 0 || table[z] < 0) continue;
        worst = std::max(worst, space.distance(table[y], table[z]) / space.distance(y, z));
      }
    }
  }
  return worst;
}

IfsSystem::IfsSystem(SpacePtr space, std::vector<SpaceMap> maps, double orbital_factor)
    : space_(std::move(space)), maps_(std::move(maps)), factor_(orbital_factor) {
  if (!space_) throw InvalidArgument("system needs a space");
  for (const auto& f : maps_) {
    if (const auto* t = std::get_if<TableMap>(&f)) {
      if (t->image.size() != space_->size()) throw InvalidArgument("table map does not cover the space");
      for (PointId q : t->image) space_->check_point(q);
    }
  }
  certificate_ = check_orbital_condition(space_, maps_, factor_);
  if (!certificate_.passed) {
    std::ostringstream msg;
    msg << "orbital factor " << factor_ << " not certified (" << certificate_.method
        << " gives " << certificate_.certified_factor << ")";
    if (certificate_.witness) msg << ": " << describe_witness(*space_, *certificate_.witness);
    throw InvalidArgument(msg.str());
  }
  tables_.reserve(maps_.size());
  for (const auto& f : maps_) tables_.push_back(tabulate_map(*space_, f));
}

PointId IfsSystem::image(std::size_t i, PointId p) const {
  space_->check_point(p);
  const PointId q = tables_.at(i)[p];
  if (q < 0) throw MapOutOfGrid("map " + std::to_string(i) + " sends " + space_->label(p) +
                                " outside the grid");
  return q;
}

CompactSet fractal_operator(const IfsSystem& sys, const CompactSet& set) {
  require_same_space(sys.space(), set.space());
  Mask out(sys.space().size(), 0);
  for (std::size_t i = 0; i < sys.map_count(); ++i) {
    for (PointId p : set.members()) out[sys.image(i, p)] = 1;
  }
  return CompactSet::from_mask(set.space_ptr(), out);
}

OrbitResult orbit(const IfsSystem& sys, const CompactSet& start,
                  std::optional<std::size_t> max_depth) {
  require_same_space(sys.space(), start.space());
  if (!max_depth && sys.space().is_grid()) max_depth = kDefaultGridOrbitDepth;
  Mask seen = start.mask();
  std::vector<PointId> frontier(start.members().begin(), start.members().end());
  std::size_t depth = 0;
  while (!frontier.empty()) {
    if (max_depth && depth == *max_depth) break;
    std::vector<PointId> next;
    for (PointId p : frontier) {
      for (std::size_t i = 0; i < sys.map_count(); ++i) {
        const PointId q = sys.image(i, p);
        if (!seen[q]) {
          seen[q] = 1;
          next.push_back(q);
        }
      }
    }
    frontier = std::move(next);
    ++depth;
  }
  bool complete = true;
  for (PointId p : frontier) {
    for (std::size_t i = 0; i < sys.map_count() && complete; ++i) {
      if (!seen[sys.image(i, p)]) complete = false;
    }
    if (!complete) break;
  }
  return {CompactSet::from_mask(start.space_ptr(), seen), complete, depth};
}

HyperspaceLimit attractor(const IfsSystem& sys, const CompactSet& start, double tol,
                          std::size_t budget) {
  return iterate_to_limit(
      start, [&sys](const CompactSet& k) { return fractal_operator(sys, k); }, tol, budget);
}

CompactSet orbit_closure(const IfsSystem& sys, PointId x, double tol) {
  const auto seed = CompactSet::singleton(sys.space_ptr(), x);
  return set_union(orbit(sys, seed).set, attractor(sys, seed, tol).set);
}

double exact_tolerance(const Space& space) {
  if (space.is_grid()) return space.grid_geometry().spacing;
  const auto& d = space.finite_metric().dist;
  double best = 1.0;
  bool any = false;
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < d.cols(); ++j) {
      best = any ? std::min(best, d(i, j)) : d(i, j);
      any = true;
    }
  }
  return best;
}

}  // namespace ofifs
