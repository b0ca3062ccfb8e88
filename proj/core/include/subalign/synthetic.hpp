#ifndef SUBALIGN_SYNTHETIC_HPP
#define SUBALIGN_SYNTHETIC_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "subalign/dataset.hpp"

namespace subalign {

/// Gaussian-cluster generator settings.
struct SyntheticSpec {
  std::size_t num_categories = 10;
  std::size_t samples_per_category = 40;
  std::size_t feature_dim = 20;
  double spread = 1.0;            ///< isotropic per-coordinate sigma
  /// Each category also varies along this many random directions of its own
  /// (shared by source and target), with sigma = axis_scale * spread.
  std::size_t category_axes = 2;
  double axis_scale = 3.0;
  double center_distance = 10.0;  ///< minimum pairwise center distance
  std::uint64_t seed = 42;
  /// Every target cluster center is moved by this distance in its own random
  /// direction. 0 means the target shares the source distribution.
  double target_shift = 0.0;
  /// 0 means "same as samples_per_category".
  std::size_t target_samples_per_category = 0;
};

/// Parses flat "key = value" lines; '#' starts a comment. Unknown keys and
/// malformed values throw Error.
SyntheticSpec parse_synthetic_spec(std::string_view text);
SyntheticSpec load_synthetic_spec(const std::filesystem::path& path);

/// A fixed set of cluster centers from which a labeled source and any number
/// of targets (over label subsets) are drawn. Everything is a pure function of
/// the spec's seed.
class SyntheticDomain {
 public:
  /// Throws Error on zero counts or spread <= 0, InfeasibleGeometry when the
  /// centers cannot be placed at the requested separation.
  explicit SyntheticDomain(const SyntheticSpec& spec);

  const SyntheticSpec& spec() const noexcept { return spec_; }
  /// num_categories x feature_dim.
  const Matrix& centers() const noexcept { return centers_; }
  /// Orthonormal feature_dim x k axes of extra variance for `category`.
  const Matrix& category_axes(CategoryId category) const {
    return axes_.at(category);
  }

  /// All categories, samples_per_category rows each, labels 0..m-1 named
  /// "c0".."c{m-1}".
  Dataset source() const;

  /// Fresh samples for `labels` around shifted centers. Different `stream`
  /// values give independent draws.
  Dataset make_target(const std::vector<CategoryId>& labels,
                      std::uint64_t stream = 0) const;

 private:
  SyntheticSpec spec_;
  Matrix centers_;
  Matrix target_offsets_;
  std::vector<Matrix> axes_;  // per category: feature_dim x category_axes
};

}  // namespace subalign

#endif  // SUBALIGN_SYNTHETIC_HPP
