#ifndef SUBALIGN_TESTS_FIXTURES_HPP
#define SUBALIGN_TESTS_FIXTURES_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "subalign/dataset.hpp"
#include "subalign/synthetic.hpp"

namespace subalign::testing {

inline Dataset make_dataset(Matrix features, std::vector<CategoryId> labels) {
  std::map<CategoryId, std::string> names;
  for (CategoryId id : labels) names.emplace(id, "c" + std::to_string(id));
  return Dataset(std::move(features), std::move(labels), std::move(names));
}

inline std::vector<CategoryId> block_labels(std::size_t categories,
                                            std::size_t per_category) {
  std::vector<CategoryId> labels;
  for (std::size_t c = 0; c < categories; ++c) {
    labels.insert(labels.end(), per_category, static_cast<CategoryId>(c));
  }
  return labels;
}

/// Source and target whose PCA subspaces are exactly orthogonal: the target
/// varies only in coordinates [0, 3), the source only in [3, 6).
struct OrthogonalPair {
  Dataset source;
  Dataset target;
};

inline OrthogonalPair orthogonal_pair(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Matrix t = Matrix::Zero(30, 6);
  Matrix s = Matrix::Zero(40, 6);
  t.leftCols(3) = oracle::random_matrix(rng, 30, 3);
  s.rightCols(3) = oracle::random_matrix(rng, 40, 3);
  return {make_dataset(std::move(s), block_labels(2, 20)),
          make_dataset(std::move(t), std::vector<CategoryId>(30, 0))};
}

/// Dataset whose centered rows span exactly `rank` dimensions.
inline Dataset low_rank_dataset(std::uint64_t seed, Eigen::Index rows,
                                Eigen::Index cols, Eigen::Index rank) {
  std::mt19937_64 rng(seed);
  Matrix features = oracle::random_matrix(rng, rows, rank) *
                    oracle::random_matrix(rng, rank, cols);
  return make_dataset(std::move(features),
                      std::vector<CategoryId>(static_cast<std::size_t>(rows), 0));
}

/// Source over all categories and a (possibly shifted) target over a random
/// subset of them.
struct SubsetProblem {
  Dataset source;
  Dataset target;
  std::vector<CategoryId> target_labels;  // ascending
};

struct ProblemSettings {
  std::size_t num_categories = 10;
  std::size_t num_target = 4;
  std::size_t feature_dim = 20;
  std::size_t per_category = 40;
  double spread = 1.0;
  double center_distance = 10.0;
  double target_shift = 2.0;
  std::size_t category_axes = 2;
  double axis_scale = 3.0;
};

inline SubsetProblem subset_problem(const ProblemSettings& p,
                                    std::uint64_t seed) {
  SyntheticSpec spec;
  spec.num_categories = p.num_categories;
  spec.feature_dim = p.feature_dim;
  spec.samples_per_category = p.per_category;
  spec.spread = p.spread;
  spec.center_distance = p.center_distance;
  spec.target_shift = p.target_shift;
  spec.category_axes = p.category_axes;
  spec.axis_scale = p.axis_scale;
  spec.seed = 1000 + seed;
  const SyntheticDomain domain(spec);

  std::vector<CategoryId> all(p.num_categories);
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<CategoryId>(i);
  std::mt19937_64 rng(seed);
  std::shuffle(all.begin(), all.end(), rng);
  std::vector<CategoryId> chosen(all.begin(),
                                 all.begin() + static_cast<std::ptrdiff_t>(p.num_target));
  std::sort(chosen.begin(), chosen.end());
  return {domain.source(), domain.make_target(chosen), chosen};
}

}  // namespace subalign::testing

#endif  // SUBALIGN_TESTS_FIXTURES_HPP
