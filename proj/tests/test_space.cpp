#include <gtest/gtest.h>

#include <random>

#include "ofifs/error.hpp"
#include "ofifs/space.hpp"
#include "support.hpp"

using namespace ofifs;
using ofifs::testing::line_space;
using ofifs::testing::random_finite_space;
using ofifs::testing::random_set;
using ofifs::testing::uniform;

namespace {

SpacePtr unit_grid(int w, int h) { return Space::grid(Eigen::Vector2d::Zero(), 1.0, w, h); }

CompactSet on_line(const SpacePtr& s, std::vector<PointId> ids) { return CompactSet(s, std::move(ids)); }

}  // namespace

TEST(Distance, GridIsEuclidean) {
  auto g = unit_grid(10, 10);
  EXPECT_DOUBLE_EQ(point_distance(*g, g->grid_point(0, 0), g->grid_point(3, 4)), 5.0);
  EXPECT_EQ(point_distance(*g, g->grid_point(7, 2), g->grid_point(7, 2)), 0.0);
}

TEST(Distance, FiniteIsMatrixLookup) {
  Eigen::MatrixXd d(2, 2);
  d << 0, 2.5, 2.5, 0;
  auto s = Space::finite({"a", "b"}, d);
  EXPECT_EQ(point_distance(*s, s->point_named("a"), s->point_named("b")), 2.5);
}

TEST(Distance, GridHonoursOriginAndSpacing) {
  auto g = Space::grid(Eigen::Vector2d(-1.0, 2.0), 0.25, 9, 9);
  EXPECT_DOUBLE_EQ(point_distance(*g, g->grid_point(0, 0), g->grid_point(3, 4)), 1.25);
  EXPECT_DOUBLE_EQ(g->coordinates(g->grid_point(4, 0)).x(), 0.0);
  EXPECT_EQ(g->label(g->grid_point(2, 5)), "(2,5)");
  EXPECT_EQ(g->point_named("(2,5)"), g->grid_point(2, 5));
}

TEST(Distance, InvalidPointsAreRejected) {
  auto g = unit_grid(4, 4);
  EXPECT_THROW(point_distance(*g, 0, 16), InvalidPoint);
  EXPECT_THROW(g->grid_point(4, 0), InvalidPoint);
  EXPECT_THROW(point_distance(*g, -1, 0), InvalidPoint);
}

TEST(FiniteSpace, ValidatesTheMetric) {
  Eigen::MatrixXd asym(2, 2);
  asym << 0, 1, 2, 0;
  EXPECT_THROW(Space::finite({"a", "b"}, asym), InvalidArgument);

  Eigen::MatrixXd tri(3, 3);
  tri << 0, 1, 5, 1, 0, 1, 5, 1, 0;
  EXPECT_THROW(Space::finite({"a", "b", "c"}, tri), InvalidArgument);

  Eigen::MatrixXd zero(2, 2);
  zero << 0, 0, 0, 0;
  EXPECT_THROW(Space::finite({"a", "b"}, zero), InvalidArgument);

  std::vector<std::string> many(65, "p");
  for (std::size_t k = 0; k < many.size(); ++k) many[k] += std::to_string(k);
  EXPECT_THROW(Space::finite(many, Eigen::MatrixXd::Ones(65, 65)), InvalidArgument);
}

TEST(CompactSet, SortsAndDeduplicates) {
  auto s = line_space({0, 1, 2, 3});
  CompactSet k(s, {3, 1, 3, 0});
  ASSERT_EQ(k.size(), 3u);
  EXPECT_EQ(k.members()[0], 0);
  EXPECT_EQ(k.members()[2], 3);
  EXPECT_TRUE(k.contains(1));
  EXPECT_FALSE(k.contains(2));
  EXPECT_THROW(CompactSet(s, {}), InvalidArgument);
}

TEST(SetDistance, Examples) {
  auto s = line_space({0, 1, 3});
  EXPECT_EQ(set_distance(0, on_line(s, {1, 2})), 1.0);
  EXPECT_EQ(set_distance(1, on_line(s, {1, 2})), 0.0);
  auto g = unit_grid(5, 5);
  EXPECT_DOUBLE_EQ(set_distance(g->grid_point(0, 0), CompactSet::singleton(g, g->grid_point(3, 4))), 5.0);
}

TEST(Hausdorff, Examples) {
  auto s = line_space({0, 1, 2});
  EXPECT_EQ(hausdorff(on_line(s, {0, 1}), on_line(s, {0, 1})), 0.0);
  EXPECT_EQ(hausdorff(on_line(s, {0, 2}), on_line(s, {1})), 1.0);
  EXPECT_EQ(hausdorff(on_line(s, {0}), on_line(s, {2})), 2.0);
}

TEST(Hausdorff, RejectsMixedSpaces) {
  auto a = line_space({0, 1});
  auto b = line_space({0, 1});
  EXPECT_THROW(hausdorff(CompactSet::singleton(a, 0), CompactSet::singleton(b, 0)), SpaceMismatch);
}

TEST(HausdorffProperty, MetricAxiomsOnRandomFamilies) {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 40; ++round) {
    const bool grid = round % 2 == 1;
    auto space = grid ? unit_grid(12, 9) : random_finite_space(rng, uniform(rng, 3, 14));
    std::vector<CompactSet> family;
    for (int k = 0; k < 6; ++k) family.push_back(random_set(rng, space, 8));
    for (const auto& a : family) {
      for (const auto& b : family) {
        const double hab = hausdorff(a, b);
        EXPECT_EQ(hab, hausdorff(b, a));
        EXPECT_EQ(hab == 0.0, a == b);
        for (const auto& c : family) {
          EXPECT_LE(hausdorff(a, c), hab + hausdorff(b, c) + 1e-12);
        }
      }
    }
  }
}

TEST(HausdorffProperty, DistanceTransformMatchesBruteForce) {
  std::mt19937_64 rng(5);
  auto g = unit_grid(23, 17);
  for (int round = 0; round < 30; ++round) {
    const CompactSet a = random_set(rng, g, 150);
    const CompactSet b = random_set(rng, g, 150);
    EXPECT_EQ(hausdorff(*g, a.mask(), b.mask()), hausdorff_exhaustive(a, b));
    EXPECT_EQ(hausdorff(a, b), hausdorff_exhaustive(a, b));
  }
}

TEST(HausdorffProperty, GridAgreesWithFiniteEncoding) {
  std::mt19937_64 rng(8);
  auto g = Space::grid(Eigen::Vector2d(0.5, -2.0), 0.3, 8, 8);
  std::vector<std::string> labels;
  std::vector<Eigen::Vector2d> coords;
  for (PointId p = 0; p < static_cast<PointId>(g->size()); ++p) {
    labels.push_back(g->label(p));
    coords.push_back(g->coordinates(p));
  }
  auto f = Space::finite_euclidean(labels, coords);
  for (int k = 0; k < 200; ++k) {
    const PointId p = uniform(rng, 0, 63);
    const PointId q = uniform(rng, 0, 63);
    EXPECT_NEAR(g->distance(p, q), f->distance(p, q), 1e-12);
  }
  for (int k = 0; k < 30; ++k) {
    const CompactSet a = random_set(rng, g, 10);
    const CompactSet b = random_set(rng, g, 10);
    const CompactSet fa(f, {a.members().begin(), a.members().end()});
    const CompactSet fb(f, {b.members().begin(), b.members().end()});
    EXPECT_NEAR(hausdorff(a, b), hausdorff(fa, fb), 1e-12);
  }
}

TEST(HausdorffProperty, NestedSetsBoundedBelowByPointDistances) {
  std::mt19937_64 rng(21);
  for (int round = 0; round < 50; ++round) {
    auto space = random_finite_space(rng, 10);
    const CompactSet k1 = random_set(rng, space, 3);
    const CompactSet k2 = set_union(k1, random_set(rng, space, 3));
    const CompactSet k3 = set_union(k2, random_set(rng, space, 3));
    double lower = 0.0;
    for (PointId p : k3.members()) lower = std::max(lower, set_distance(p, k1));
    EXPECT_EQ(hausdorff(k1, k3), lower);
    EXPECT_GE(hausdorff(k1, k3), hausdorff(k1, k2));
  }
}

TEST(Diameter, ConvexHullMatchesBruteForce) {
  std::mt19937_64 rng(3);
  auto g = unit_grid(40, 31);
  for (int round = 0; round < 10; ++round) {
    const CompactSet a = random_set(rng, g, 900);
    double brute = 0.0;
    for (PointId p : a.members()) {
      for (PointId q : a.members()) brute = std::max(brute, g->distance(p, q));
    }
    EXPECT_NEAR(diameter(a), brute, 1e-12);
  }
}

TEST(HyperspaceLimit, ConstantSequenceStopsAtStepOne) {
  auto s = line_space({0, 1});
  const CompactSet k = on_line(s, {0, 1});
  const std::vector<CompactSet> seq{k, k, k};
  const HyperspaceLimit lim = hyperspace_limit(seq, 0.5);
  EXPECT_EQ(lim.set, k);
  EXPECT_EQ(lim.step, 1u);
}

TEST(HyperspaceLimit, AlternatingSetsDoNotConverge) {
  auto s = line_space({0, 10});
  const CompactSet a = CompactSet::singleton(s, 0);
  const CompactSet b = CompactSet::singleton(s, 1);
  const std::vector<CompactSet> seq{a, b, a, b, a};
  EXPECT_THROW(hyperspace_limit(seq, 1.0), NonConvergence);
  EXPECT_THROW(iterate_to_limit(
                   a, [&](const CompactSet& k) { return k == a ? b : a; }, 1.0, 50),
               NonConvergence);
}

TEST(HyperspaceLimit, LazyIterationStopsOnRepeat) {
  auto s = line_space({0, 1, 2, 4, 8});
  // t -> t / 2 on the representable points.
  const std::vector<PointId> half{0, 0, 1, 2, 3};
  const auto next = [&](const CompactSet& k) {
    std::vector<PointId> out;
    for (PointId p : k.members()) out.push_back(half[p]);
    return CompactSet(s, out);
  };
  const HyperspaceLimit lim = iterate_to_limit(CompactSet::singleton(s, 4), next, 1e-9, 100);
  EXPECT_EQ(lim.set, CompactSet::singleton(s, 0));
  EXPECT_EQ(lim.increment, 0.0);
}
