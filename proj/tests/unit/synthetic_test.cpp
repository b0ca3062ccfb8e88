#include <filesystem>
#include <fstream>
#include <limits>

#include <gtest/gtest.h>

#include "subalign/errors.hpp"
#include "subalign/synthetic.hpp"

namespace subalign {
namespace {

TEST(Synthetic, SingleCategory) {
  SyntheticSpec spec;
  spec.num_categories = 1;
  const Dataset source = SyntheticDomain(spec).source();
  EXPECT_EQ(source.label_set(), std::vector<CategoryId>{0});
  EXPECT_EQ(source.size(), 40);
  EXPECT_EQ(source.name_of(0), "c0");
}

TEST(Synthetic, SameSeedSameData) {
  SyntheticSpec spec;
  spec.target_shift = 1.5;
  const SyntheticDomain a(spec);
  const SyntheticDomain b(spec);
  EXPECT_EQ(a.source().features(), b.source().features());
  EXPECT_EQ(a.make_target({1, 3}).features(), b.make_target({1, 3}).features());
  EXPECT_NE(a.make_target({1, 3}, 0).features(), a.make_target({1, 3}, 1).features());
  spec.seed += 1;
  EXPECT_NE(SyntheticDomain(spec).source().features(), a.source().features());
}

TEST(Synthetic, CentersAreSeparated) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SyntheticSpec spec;
    spec.seed = seed;
    const Matrix& centers = SyntheticDomain(spec).centers();
    for (Eigen::Index i = 0; i < centers.rows(); ++i) {
      for (Eigen::Index j = 0; j < i; ++j) {
        EXPECT_GE((centers.row(i) - centers.row(j)).norm(), spec.center_distance);
      }
    }
  }
}

TEST(Synthetic, CategoryAxesAreOrthonormal) {
  const SyntheticDomain domain(SyntheticSpec{});
  for (CategoryId c = 0; c < 10; ++c) {
    const Matrix& axes = domain.category_axes(c);
    EXPECT_EQ(axes.cols(), 2);
    EXPECT_LE((axes.transpose() * axes - Matrix::Identity(2, 2)).norm(), 1e-12);
  }
}

// Held-out draws classified by the nearest true center.
TEST(Synthetic, TightClustersAreNearestCentroidSeparable) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SyntheticSpec spec;
    spec.spread = 0.1;
    spec.center_distance = 10.0;
    spec.seed = seed;
    const SyntheticDomain domain(spec);
    const Dataset held_out = domain.make_target({0, 1, 2, 3, 4, 5, 6, 7, 8, 9}, 3);
    std::size_t hits = 0;
    for (Eigen::Index i = 0; i < held_out.size(); ++i) {
      Eigen::Index nearest = 0;
      (domain.centers().rowwise() - held_out.features().row(i))
          .rowwise()
          .squaredNorm()
          .minCoeff(&nearest);
      if (static_cast<CategoryId>(nearest) == held_out.labels()[static_cast<std::size_t>(i)]) ++hits;
    }
    EXPECT_EQ(hits, static_cast<std::size_t>(held_out.size())) << "seed " << seed;
  }
}

TEST(Synthetic, TargetShiftMovesMeans) {
  SyntheticSpec spec;
  spec.target_shift = 3.0;
  spec.samples_per_category = 4000;
  spec.num_categories = 2;
  const SyntheticDomain domain(spec);
  const Dataset target = domain.make_target({1});
  const Vector mean = target.features().colwise().mean();
  const double moved = (mean - domain.centers().row(1).transpose()).norm();
  EXPECT_NEAR(moved, 3.0, 0.3);
}

TEST(Synthetic, TargetSampleCount) {
  SyntheticSpec spec;
  spec.target_samples_per_category = 7;
  const Dataset target = SyntheticDomain(spec).make_target({2, 5});
  EXPECT_EQ(target.size(), 14);
  EXPECT_EQ(target.label_set(), (std::vector<CategoryId>{2, 5}));
  EXPECT_THROW(SyntheticDomain(spec).make_target({10}), UnknownCategory);
}

TEST(Synthetic, InfeasibleGeometry) {
  SyntheticSpec spec;
  spec.feature_dim = 1;
  spec.num_categories = 20;
  spec.category_axes = 0;
  EXPECT_THROW(SyntheticDomain{spec}, InfeasibleGeometry);
}

TEST(Synthetic, InvalidSpecs) {
  SyntheticSpec spec;
  spec.spread = 0.0;
  EXPECT_THROW(SyntheticDomain{spec}, Error);
  spec = {};
  spec.num_categories = 0;
  EXPECT_THROW(SyntheticDomain{spec}, Error);
  spec = {};
  spec.category_axes = 21;
  EXPECT_THROW(SyntheticDomain{spec}, Error);
}

TEST(SyntheticSpecFile, ParsesKeysAndComments) {
  const SyntheticSpec spec = parse_synthetic_spec(
      "# demo\n"
      "num_categories = 6\n"
      "feature_dim=12   # trailing comment\n"
      "\n"
      "spread = 0.5\n"
      "seed = 99\n"
      "target_shift = 1.25\n"
      "category_axes = 0\n");
  EXPECT_EQ(spec.num_categories, 6u);
  EXPECT_EQ(spec.feature_dim, 12u);
  EXPECT_EQ(spec.spread, 0.5);
  EXPECT_EQ(spec.seed, 99u);
  EXPECT_EQ(spec.target_shift, 1.25);
  EXPECT_EQ(spec.category_axes, 0u);
  EXPECT_EQ(spec.samples_per_category, SyntheticSpec{}.samples_per_category);
}

TEST(SyntheticSpecFile, Errors) {
  EXPECT_THROW(parse_synthetic_spec("colour = red\n"), Error);
  EXPECT_THROW(parse_synthetic_spec("seed = 1x\n"), Error);
  EXPECT_THROW(parse_synthetic_spec("seed\n"), Error);
  EXPECT_THROW(load_synthetic_spec("/nonexistent/spec.cfg"), IoError);

  const auto path = std::filesystem::temp_directory_path() / "subalign_spec_test.cfg";
  std::ofstream(path) << "num_categories = 3\n";
  EXPECT_EQ(load_synthetic_spec(path).num_categories, 3u);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace subalign
