#include "ofifs/fuzzy.hpp"

#include <algorithm>
#include <cmath>

#include "ofifs/error.hpp"

namespace ofifs {

namespace {

constexpr double kRoundingEpsilon = 1e-9;

void check_quantization(int quantization) {
  if (quantization < 1 || quantization > 65535) {
    throw InvalidArgument("quantization must be in [1, 65535]");
  }
}

void check_unit(double t, const char* what) {
  if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument(std::string(what) + " must lie in [0, 1]");
}

}  // namespace

int quantize(double t, int quantization) {
  check_quantization(quantization);
  const double scaled = std::floor(t * quantization + 0.5 + kRoundingEpsilon);
  return static_cast<int>(std::clamp(scaled, 0.0, static_cast<double>(quantization)));
}

FuzzySet::FuzzySet(SpacePtr space, int quantization, LevelArray levels)
    : space_(std::move(space)), quantization_(quantization), levels_(std::move(levels)) {
  if (!space_) throw InvalidArgument("fuzzy set needs a space");
  check_quantization(quantization_);
  if (static_cast<std::size_t>(levels_.size()) != space_->size()) {
    throw InvalidArgument("membership array does not match the space size");
  }
  if (levels_.size() > 0 && (levels_.minCoeff() < 0 || levels_.maxCoeff() > quantization_)) {
    throw InvalidArgument("memberships must lie on the lattice {0, 1/L, ..., 1}");
  }
}

FuzzySet FuzzySet::zero(SpacePtr space, int quantization) {
  const auto n = static_cast<Eigen::Index>(space->size());
  return FuzzySet(std::move(space), quantization, LevelArray::Zero(n));
}

FuzzySet FuzzySet::indicator(const CompactSet& set, int quantization) {
  LevelArray levels = LevelArray::Zero(static_cast<Eigen::Index>(set.space().size()));
  for (PointId p : set.members()) levels[p] = quantization;
  return FuzzySet(set.space_ptr(), quantization, std::move(levels));
}

int FuzzySet::level(PointId p) const {
  space_->check_point(p);
  return levels_[p];
}

double FuzzySet::value(PointId p) const {
  return static_cast<double>(level(p)) / quantization_;
}

std::vector<int> FuzzySet::attained_levels() const {
  std::vector<int> out(levels_.data(), levels_.data() + levels_.size());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (!out.empty() && out.front() == 0) out.erase(out.begin());
  return out;
}

Mask FuzzySet::cut_mask(int level) const {
  Mask m(space_->size(), 0);
  for (Eigen::Index p = 0; p < levels_.size(); ++p) m[p] = levels_[p] >= level ? 1 : 0;
  return m;
}

std::vector<PointId> FuzzySet::positive_points() const {
  std::vector<PointId> out;
  for (Eigen::Index p = 0; p < levels_.size(); ++p) {
    if (levels_[p] > 0) out.push_back(static_cast<PointId>(p));
  }
  return out;
}

std::vector<PointId> FuzzySet::peak_points() const {
  std::vector<PointId> out;
  for (Eigen::Index p = 0; p < levels_.size(); ++p) {
    if (levels_[p] == quantization_) out.push_back(static_cast<PointId>(p));
  }
  return out;
}

GreyLevelMap GreyLevelMap::piecewise_linear(std::vector<double> breakpoints, std::vector<double> left,
                                            std::vector<double> right, double at_one) {
  if (breakpoints.size() < 2 || breakpoints.front() != 0.0 || breakpoints.back() != 1.0) {
    throw InvalidArgument("breakpoints must run from 0 to 1");
  }
  const std::size_t segments = breakpoints.size() - 1;
  if (left.size() != segments || right.size() != segments) {
    throw InvalidArgument("need one left and one right value per segment");
  }
  for (std::size_t k = 0; k < segments; ++k) {
    if (!(breakpoints[k] < breakpoints[k + 1])) throw InvalidArgument("breakpoints must increase");
    check_unit(left[k], "grey values");
    check_unit(right[k], "grey values");
    if (left[k] > right[k]) throw InvalidArgument("grey map decreases inside a segment");
    if (k + 1 < segments && right[k] > left[k + 1]) {
      throw InvalidArgument("grey map decreases at a breakpoint");
    }
  }
  check_unit(at_one, "grey value at 1");
  if (left.front() != 0.0) throw InvalidArgument("grey maps must send 0 to 0");
  if (right.back() > at_one) throw InvalidArgument("grey map decreases at 1");
  if (at_one == 0.0) throw InvalidArgument("grey map is identically zero");
  return GreyLevelMap(
      PiecewiseLinearGrey{std::move(breakpoints), std::move(left), std::move(right), at_one});
}

GreyLevelMap GreyLevelMap::lookup(int quantization, std::vector<int> table) {
  check_quantization(quantization);
  if (table.size() != static_cast<std::size_t>(quantization) + 1) {
    throw InvalidArgument("lookup grey map needs L + 1 entries");
  }
  if (table.front() != 0) throw InvalidArgument("grey maps must send 0 to 0");
  for (std::size_t k = 0; k < table.size(); ++k) {
    if (table[k] < 0 || table[k] > quantization) throw InvalidArgument("grey table entry off the lattice");
    if (k > 0 && table[k] < table[k - 1]) throw InvalidArgument("grey table must be non-decreasing");
  }
  if (table.back() == 0) throw InvalidArgument("grey map is identically zero");
  return GreyLevelMap(LookupGrey{quantization, std::move(table)});
}

GreyLevelMap GreyLevelMap::identity() { return piecewise_linear({0.0, 1.0}, {0.0}, {1.0}, 1.0); }

GreyLevelMap GreyLevelMap::scale(double factor) {
  check_unit(factor, "scale factor");
  return piecewise_linear({0.0, 1.0}, {0.0}, {factor}, factor);
}

GreyLevelMap GreyLevelMap::step(double threshold, double high) {
  if (!(threshold > 0.0 && threshold <= 1.0)) throw InvalidArgument("step threshold must lie in (0, 1]");
  if (threshold == 1.0) return piecewise_linear({0.0, 1.0}, {0.0}, {0.0}, high);
  return piecewise_linear({0.0, threshold, 1.0}, {0.0, high}, {0.0, high}, high);
}

GreyLevelMap GreyLevelMap::tabulate(int quantization, const std::function<double(double)>& fn) {
  check_quantization(quantization);
  std::vector<int> table(static_cast<std::size_t>(quantization) + 1);
  for (int k = 0; k <= quantization; ++k) {
    const double v = fn(static_cast<double>(k) / quantization);
    check_unit(v, "tabulated grey value");
    table[k] = quantize(v, quantization);
  }
  return lookup(quantization, std::move(table));
}

double GreyLevelMap::evaluate(double t) const {
  check_unit(t, "grey map argument");
  if (const auto* lut = std::get_if<LookupGrey>(&rep_)) {
    const double scaled = t * lut->quantization;
    const double k = std::round(scaled);
    if (std::abs(scaled - k) > 1e-9) throw InvalidArgument("argument is off the lookup table lattice");
    return static_cast<double>(lut->table[static_cast<std::size_t>(k)]) / lut->quantization;
  }
  const auto& pw = std::get<PiecewiseLinearGrey>(rep_);
  if (t >= 1.0) return pw.at_one;
  const auto it = std::upper_bound(pw.breakpoints.begin(), pw.breakpoints.end(), t);
  const auto k = static_cast<std::size_t>(it - pw.breakpoints.begin()) - 1;
  const double t0 = pw.breakpoints[k];
  const double t1 = pw.breakpoints[k + 1];
  return pw.left[k] + (pw.right[k] - pw.left[k]) * (t - t0) / (t1 - t0);
}

double GreyLevelMap::at_one() const {
  if (const auto* lut = std::get_if<LookupGrey>(&rep_)) {
    return static_cast<double>(lut->table.back()) / lut->quantization;
  }
  return std::get<PiecewiseLinearGrey>(rep_).at_one;
}

std::vector<int> GreyLevelMap::quantized_table(int quantization) const {
  check_quantization(quantization);
  if (const auto* lut = std::get_if<LookupGrey>(&rep_)) {
    if (lut->quantization != quantization) {
      throw InvalidArgument("lookup grey map quantization " + std::to_string(lut->quantization) +
                            " does not match fuzzy set quantization " +
                            std::to_string(quantization));
    }
    return lut->table;
  }
  std::vector<int> table(static_cast<std::size_t>(quantization) + 1);
  for (int k = 0; k <= quantization; ++k) {
    table[k] = quantize(evaluate(static_cast<double>(k) / quantization), quantization);
  }
  return table;
}

OrbitalFuzzySystem::OrbitalFuzzySystem(IfsSystem ifs, std::vector<GreyLevelMap> greys)
    : ifs_(std::move(ifs)), greys_(std::move(greys)) {
  if (greys_.size() != ifs_.map_count()) {
    throw InvalidArgument("need exactly one grey level map per space map");
  }
  const bool admissible = std::any_of(greys_.begin(), greys_.end(),
                                      [](const GreyLevelMap& g) { return g.at_one() == 1.0; });
  if (!admissible) throw InvalidArgument("grey level maps are not admissible: none fixes 1");
}

FuzzySet delta(const SpacePtr& space, PointId x, int quantization) {
  space->check_point(x);
  return FuzzySet::indicator(CompactSet::singleton(space, x), quantization);
}

CompactSet level_set(const FuzzySet& u, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in (0, 1]");
  const int threshold =
      static_cast<int>(std::ceil(alpha * u.quantization() - kRoundingEpsilon));
  const Mask m = u.cut_mask(std::max(threshold, 1));
  if (std::find(m.begin(), m.end(), 1) == m.end()) {
    throw EmptyCut("the " + std::to_string(alpha) + "-cut is empty");
  }
  return CompactSet::from_mask(u.space_ptr(), m);
}

CompactSet support(const FuzzySet& u) {
  auto pts = u.positive_points();
  if (pts.empty()) throw EmptyCut("the zero function has no support");
  return CompactSet(u.space_ptr(), std::move(pts));
}

namespace {

FuzzySet pushforward_table(std::span<const PointId> table, const FuzzySet& u, std::size_t map_index) {
  LevelArray out = LevelArray::Zero(u.levels().size());
  const auto& in = u.levels();
  for (Eigen::Index p = 0; p < in.size(); ++p) {
    if (in[p] == 0) continue;
    const PointId q = table[p];
    if (q < 0) {
      throw MapOutOfGrid("map " + std::to_string(map_index) + " sends " +
                         u.space().label(static_cast<PointId>(p)) + " outside the grid");
    }
    out[q] = std::max(out[q], in[p]);
  }
  return FuzzySet(u.space_ptr(), u.quantization(), std::move(out));
}

}  // namespace

FuzzySet pushforward(const SpaceMap& f, const FuzzySet& u) {
  std::vector<PointId> table(u.space().size(), -1);
  for (PointId p : u.positive_points()) table[p] = apply_map(u.space(), f, p);
  return pushforward_table(table, u, 0);
}

FuzzySet pushforward(const IfsSystem& ifs, std::size_t i, const FuzzySet& u) {
  require_same_space(ifs.space(), u.space());
  return pushforward_table(ifs.image_table(i), u, i);
}

FuzzySet apply_grey(const GreyLevelMap& rho, const FuzzySet& u) {
  const auto table = rho.quantized_table(u.quantization());
  LevelArray out = u.levels().unaryExpr([&table](int k) { return table[k]; });
  return FuzzySet(u.space_ptr(), u.quantization(), std::move(out));
}

FuzzySet hb_apply(const OrbitalFuzzySystem& sys, const FuzzySet& u) {
  require_same_space(sys.space(), u.space());
  LevelArray out = LevelArray::Zero(u.levels().size());
  for (std::size_t i = 0; i < sys.map_count(); ++i) {
    const FuzzySet image = apply_grey(sys.greys()[i], pushforward(sys.ifs(), i, u));
    out = out.max(image.levels());
  }
  return FuzzySet(u.space_ptr(), u.quantization(), std::move(out));
}

void require_compatible(const FuzzySet& u, const FuzzySet& v) {
  require_same_space(u.space(), v.space());
  if (u.quantization() != v.quantization()) {
    throw InvalidArgument("fuzzy sets use different quantizations");
  }
}

double d_infinity(const FuzzySet& u, const FuzzySet& v) {
  require_compatible(u, v);
  if (!u.is_normal() || !v.is_normal()) throw EmptyCut("d_infinity needs normal fuzzy sets");
  if (u == v) return 0.0;
  auto levels = u.attained_levels();
  const auto other = v.attained_levels();
  levels.insert(levels.end(), other.begin(), other.end());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  double worst = 0.0;
  for (int level : levels) {
    worst = std::max(worst, hausdorff(u.space(), u.cut_mask(level), v.cut_mask(level)));
  }
  return worst;
}

FuzzySet join(const FuzzySet& u, const FuzzySet& v) {
  require_compatible(u, v);
  return FuzzySet(u.space_ptr(), u.quantization(), u.levels().max(v.levels()));
}

FuzzySet sup_family(std::span<const FuzzySet> family) {
  if (family.empty()) throw InvalidArgument("supremum of an empty family");
  FuzzySet out = family.front();
  for (const auto& u : family.subspan(1)) out = join(out, u);
  return out;
}

}  // namespace ofifs
