#pragma once

// Shared builders and hand-rolled generators for the unit tests.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ofifs/io.hpp"

namespace ofifs::testing {

inline std::string fixture_path(const std::string& name) {
  return std::string(OFIFS_FIXTURE_DIR) + "/" + name;
}

inline io::Fixture load_fixture(const std::string& name) {
  return io::fixture_from_json(io::read_json(fixture_path(name)));
}

inline int uniform(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

/// Points on a line at the given coordinates, labelled "x0", "x1", ...
inline SpacePtr line_space(const std::vector<double>& xs) {
  std::vector<std::string> labels;
  std::vector<Eigen::Vector2d> pts;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    labels.push_back("x" + std::to_string(k));
    pts.emplace_back(xs[k], 0.0);
  }
  return Space::finite_euclidean(std::move(labels), pts);
}

/// n distinct random lattice points in [0, 20]^2.
inline SpacePtr random_finite_space(std::mt19937_64& rng, int n) {
  std::vector<std::string> labels;
  std::vector<Eigen::Vector2d> pts;
  while (static_cast<int>(pts.size()) < n) {
    const Eigen::Vector2d p(uniform(rng, 0, 20), uniform(rng, 0, 20));
    bool fresh = true;
    for (const auto& q : pts) fresh = fresh && q != p;
    if (!fresh) continue;
    labels.push_back("p" + std::to_string(pts.size()));
    pts.push_back(p);
  }
  return Space::finite_euclidean(std::move(labels), pts);
}

inline CompactSet random_set(std::mt19937_64& rng, const SpacePtr& space, int max_size) {
  const int n = static_cast<int>(space->size());
  const int k = uniform(rng, 1, std::min(max_size, n));
  std::vector<PointId> members;
  for (int i = 0; i < k; ++i) members.push_back(uniform(rng, 0, n - 1));
  return CompactSet(space, std::move(members));
}

/// Random fuzzy set with at least one point of full membership.
inline FuzzySet random_normal(std::mt19937_64& rng, const SpacePtr& space, int quantization,
                              int max_support) {
  const int n = static_cast<int>(space->size());
  LevelArray levels = LevelArray::Zero(n);
  const int k = uniform(rng, 1, std::min(max_support, n));
  for (int i = 0; i < k; ++i) levels[uniform(rng, 0, n - 1)] = uniform(rng, 1, quantization);
  levels[uniform(rng, 0, n - 1)] = quantization;
  return FuzzySet(space, quantization, std::move(levels));
}

inline oracle::OracleInstance fixture_instance(const std::string& name) {
  return load_fixture(name).instance;
}

}  // namespace ofifs::testing
