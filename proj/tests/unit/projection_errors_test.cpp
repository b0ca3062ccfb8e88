#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <thread>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "subalign/errors.hpp"
#include "subalign/projection_errors.hpp"

namespace subalign {
namespace {

using testing::make_dataset;

TEST(ProjectionErrors, ZeroForIdenticalData) {
  const Dataset data = testing::low_rank_dataset(1, 25, 8, 3);
  const CategorySubset all({0});
  EXPECT_LE(subspace_alignment_error(all, data, data, 3), 1e-8);
  EXPECT_LE(reprojection_error(all, data, data, 3), 1e-6);
}

TEST(ProjectionErrors, ZeroWhenRestrictedSourceEqualsTarget) {
  const Dataset target = testing::low_rank_dataset(2, 20, 6, 2);
  std::mt19937_64 rng(2);
  Matrix features(35, 6);
  features.topRows(20) = target.features();
  features.bottomRows(15) = oracle::random_matrix(rng, 15, 6, 4.0);
  std::vector<CategoryId> labels(20, 3);
  labels.insert(labels.end(), 15, 7);
  const Dataset source = make_dataset(std::move(features), std::move(labels));
  EXPECT_LE(subspace_alignment_error(CategorySubset({3}), source, target, 2), 1e-8);
  EXPECT_LE(reprojection_error(CategorySubset({3}), source, target, 2), 1e-6);
}

TEST(ProjectionErrors, OrthogonalSubspacesClosedForms) {
  const auto [source, target] = testing::orthogonal_pair(3);
  const CategorySubset all({0, 1});
  for (Eigen::Index d : {1, 2, 3}) {
    EXPECT_NEAR(subspace_alignment_error(all, source, target, d),
                std::sqrt(static_cast<double>(d)), 1e-10);
    const double t_norm = oracle::trace_norm(oracle::zscore(target.features()));
    EXPECT_NEAR(reprojection_error(all, source, target, d), t_norm, 1e-8);
  }
}

TEST(ProjectionErrors, MatchIndependentOracle) {
  const testing::SubsetProblem p =
      testing::subset_problem({.num_categories = 5, .num_target = 2,
                               .feature_dim = 12, .per_category = 25},
                              4);
  const std::vector<std::vector<CategoryId>> subsets = {
      {0}, {1, 3}, {0, 2, 4}, {0, 1, 2, 3, 4}};
  for (const auto& labels : subsets) {
    const Matrix rows =
        oracle::rows_with(p.source.features(), p.source.labels(), labels);
    EXPECT_NEAR(subspace_alignment_error(CategorySubset(labels), p.source,
                                         p.target, 4),
                oracle::projection_error(rows, p.target.features(), 4,
                                         oracle::Score::SubspaceAlignment),
                1e-8);
    EXPECT_NEAR(reprojection_error(CategorySubset(labels), p.source, p.target, 4),
                oracle::projection_error(rows, p.target.features(), 4,
                                         oracle::Score::Reprojection),
                1e-8);
  }
}

TEST(ProjectionErrors, SetSemanticsBitIdentical) {
  const testing::SubsetProblem p = testing::subset_problem({}, 5);
  for (ErrorKind kind : {ErrorKind::SubspaceAlignment, ErrorKind::Reprojection}) {
    const SubsetScorer scorer(p.source, p.target, kind, 5);
    const double a = scorer.score(CategorySubset({1, 4, 7}));
    EXPECT_EQ(a, scorer.score(CategorySubset({7, 1, 4})));
    EXPECT_EQ(a, scorer.score(CategorySubset({4, 7, 1})));
  }
}

TEST(ProjectionErrors, InvariantToSourceRowOrder) {
  const testing::SubsetProblem p = testing::subset_problem({}, 6);
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(p.source.size()));
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(6);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<CategoryId> labels;
  for (Eigen::Index r : perm) labels.push_back(p.source.labels()[static_cast<std::size_t>(r)]);
  const Dataset shuffled(p.source.features()(perm, Eigen::all), labels,
                         p.source.names());
  const CategorySubset subset({0, 2, 5, 9});
  EXPECT_NEAR(reprojection_error(subset, p.source, p.target, 5),
              reprojection_error(subset, shuffled, p.target, 5), 1e-10);
  EXPECT_NEAR(subspace_alignment_error(subset, p.source, p.target, 5),
              subspace_alignment_error(subset, shuffled, p.target, 5), 1e-10);
}

TEST(ProjectionErrors, UpperBounds) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const testing::SubsetProblem p = testing::subset_problem({}, seed);
    const double t_norm = standardize(p.target.features()).first.norm();
    const SubsetScorer sa(p.source, p.target, ErrorKind::SubspaceAlignment, 5);
    const SubsetScorer re(p.source, p.target, ErrorKind::Reprojection, 5);
    for (CategoryId c = 0; c < 10; ++c) {
      const CategorySubset subset({c, static_cast<CategoryId>((c + 3) % 10)});
      EXPECT_LE(sa.score(subset), 2.0 * std::sqrt(5.0));
      EXPECT_LE(re.score(subset), 2.0 * t_norm);
    }
  }
}

TEST(ProjectionErrors, ErrorPaths) {
  const testing::SubsetProblem p = testing::subset_problem(
      {.num_categories = 3, .num_target = 2, .feature_dim = 8, .per_category = 4},
      7);
  EXPECT_THROW(reprojection_error(CategorySubset({5}), p.source, p.target, 2),
               UnknownCategory);
  EXPECT_THROW(reprojection_error(CategorySubset({0}), p.source, p.target, 6),
               InsufficientSamples);
  EXPECT_THROW(SubsetScorer(p.source, p.target, ErrorKind::Reprojection, 9),
               InsufficientSamples);

  const SubsetScorer scorer(p.source, p.target, ErrorKind::Reprojection, 6);
  EXPECT_TRUE(std::isinf(scorer.score_or_infinity(CategorySubset({0}))));
  EXPECT_TRUE(std::isfinite(scorer.score_or_infinity(CategorySubset({0, 1}))));
  EXPECT_THROW(scorer.score_or_infinity(CategorySubset({5})), UnknownCategory);
  EXPECT_THROW(CategorySubset({1, 1}), Error);
}

TEST(ProjectionErrors, ConcurrentScoringMatchesSequential) {
  const testing::SubsetProblem p = testing::subset_problem({}, 8);
  const SubsetScorer scorer(p.source, p.target, ErrorKind::Reprojection, 5);
  std::vector<CategorySubset> subsets;
  for (CategoryId c = 0; c < 10; ++c) subsets.emplace_back(std::vector<CategoryId>{c, (c + 1) % 10});
  std::vector<double> sequential;
  for (const auto& s : subsets) sequential.push_back(scorer.score(s));

  std::vector<double> parallel(subsets.size());
  {
    std::vector<std::jthread> threads;
    for (std::size_t i = 0; i < subsets.size(); ++i) {
      threads.emplace_back([&, i] { parallel[i] = scorer.score(subsets[i]); });
    }
  }
  EXPECT_EQ(sequential, parallel);
}

TEST(ErrorKind, ParsesNames) {
  EXPECT_EQ(parse_error_kind("sa"), ErrorKind::SubspaceAlignment);
  EXPECT_EQ(parse_error_kind("reproj"), ErrorKind::Reprojection);
  EXPECT_EQ(to_string(ErrorKind::Reprojection), "reproj");
  EXPECT_THROW(parse_error_kind("l2"), Error);
}

}  // namespace
}  // namespace subalign
