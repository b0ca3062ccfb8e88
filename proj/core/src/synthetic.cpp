#include "subalign/synthetic.hpp"

#include <charconv>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "subalign/errors.hpp"

namespace subalign {

namespace {

constexpr int kPlacementAttempts = 2000;

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

Vector gaussian_vector(std::mt19937_64& rng, std::size_t n, double sigma) {
  std::normal_distribution<double> normal(0.0, sigma);
  Vector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = normal(rng);
  return v;
}

std::string_view strip(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_value(std::string_view key, std::string_view text) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error("synthetic spec: bad value '" + std::string(text) +
                "' for key '" + std::string(key) + "'");
  }
  return value;
}

Dataset sample_clusters(const Matrix& centers, const std::vector<Matrix>& axes,
                        const std::vector<CategoryId>& labels,
                        std::size_t per_category, double spread,
                        double axis_sigma, std::mt19937_64& rng) {
  const Eigen::Index dim = centers.cols();
  const auto n = static_cast<Eigen::Index>(labels.size() * per_category);
  Matrix features(n, dim);
  std::vector<CategoryId> row_labels;
  row_labels.reserve(static_cast<std::size_t>(n));
  std::map<CategoryId, std::string> names;
  std::normal_distribution<double> normal(0.0, spread);
  std::normal_distribution<double> along_axis(0.0, axis_sigma);
  Eigen::Index row = 0;
  for (CategoryId label : labels) {
    names.emplace(label, "c" + std::to_string(label));
    const Matrix& frame = axes[label];
    for (std::size_t s = 0; s < per_category; ++s, ++row) {
      for (Eigen::Index j = 0; j < dim; ++j) {
        features(row, j) = centers(label, j) + normal(rng);
      }
      for (Eigen::Index a = 0; a < frame.cols(); ++a) {
        features.row(row) += along_axis(rng) * frame.col(a).transpose();
      }
      row_labels.push_back(label);
    }
  }
  return Dataset(std::move(features), std::move(row_labels), std::move(names));
}

}  // namespace

SyntheticSpec parse_synthetic_spec(std::string_view text) {
  SyntheticSpec spec;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = strip(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error("synthetic spec line " + std::to_string(line_no) +
                  ": expected key = value");
    }
    const std::string_view key = strip(line.substr(0, eq));
    const std::string_view value = strip(line.substr(eq + 1));

    if (key == "num_categories") {
      spec.num_categories = parse_value<std::size_t>(key, value);
    } else if (key == "samples_per_category") {
      spec.samples_per_category = parse_value<std::size_t>(key, value);
    } else if (key == "feature_dim") {
      spec.feature_dim = parse_value<std::size_t>(key, value);
    } else if (key == "spread") {
      spec.spread = parse_value<double>(key, value);
    } else if (key == "category_axes") {
      spec.category_axes = parse_value<std::size_t>(key, value);
    } else if (key == "axis_scale") {
      spec.axis_scale = parse_value<double>(key, value);
    } else if (key == "center_distance") {
      spec.center_distance = parse_value<double>(key, value);
    } else if (key == "seed") {
      spec.seed = parse_value<std::uint64_t>(key, value);
    } else if (key == "target_shift") {
      spec.target_shift = parse_value<double>(key, value);
    } else if (key == "target_samples_per_category") {
      spec.target_samples_per_category = parse_value<std::size_t>(key, value);
    } else {
      throw Error("synthetic spec line " + std::to_string(line_no) +
                  ": unknown key '" + std::string(key) + "'");
    }
  }
  return spec;
}

SyntheticSpec load_synthetic_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_synthetic_spec(text.str());
}

SyntheticDomain::SyntheticDomain(const SyntheticSpec& spec) : spec_(spec) {
  if (spec.num_categories < 1 || spec.samples_per_category < 1 ||
      spec.feature_dim < 1) {
    throw Error("synthetic spec: counts must be >= 1");
  }
  if (!(spec.spread > 0.0)) throw Error("synthetic spec: spread must be > 0");
  if (spec.category_axes > spec.feature_dim) {
    throw Error("synthetic spec: category_axes exceeds feature_dim");
  }
  if (spec.center_distance < 0.0 || spec.target_shift < 0.0 ||
      spec.axis_scale < 0.0) {
    throw Error("synthetic spec: distances must be >= 0");
  }

  const auto m = static_cast<Eigen::Index>(spec.num_categories);
  const auto dim = static_cast<Eigen::Index>(spec.feature_dim);
  std::mt19937_64 rng = make_rng(spec.seed, 0);

  // Rejection sampling from N(0, distance^2 I): in low dimension the
  // separation becomes unreachable and placement fails.
  centers_.resize(m, dim);
  for (Eigen::Index i = 0; i < m; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < kPlacementAttempts && !placed; ++attempt) {
      const Vector candidate =
          gaussian_vector(rng, spec.feature_dim, spec.center_distance);
      placed = true;
      for (Eigen::Index j = 0; j < i && placed; ++j) {
        placed = (centers_.row(j).transpose() - candidate).norm() >=
                 spec.center_distance;
      }
      if (placed) centers_.row(i) = candidate.transpose();
    }
    if (!placed) {
      throw InfeasibleGeometry(
          "cannot place " + std::to_string(spec.num_categories) +
          " centers at distance >= " + std::to_string(spec.center_distance) +
          " in " + std::to_string(spec.feature_dim) + " dimensions");
    }
  }

  axes_.reserve(spec.num_categories);
  for (Eigen::Index i = 0; i < m; ++i) {
    Matrix frame(dim, static_cast<Eigen::Index>(spec.category_axes));
    for (Eigen::Index a = 0; a < frame.cols(); ++a) {
      frame.col(a) = gaussian_vector(rng, spec.feature_dim, 1.0);
    }
    if (frame.cols() > 0) {
      Eigen::HouseholderQR<Matrix> qr(frame);
      frame = qr.householderQ() * Matrix::Identity(dim, frame.cols());
    }
    axes_.push_back(std::move(frame));
  }

  target_offsets_ = Matrix::Zero(m, dim);
  if (spec.target_shift > 0.0) {
    for (Eigen::Index i = 0; i < m; ++i) {
      const Vector direction = gaussian_vector(rng, spec.feature_dim, 1.0);
      target_offsets_.row(i) =
          (direction.normalized() * spec.target_shift).transpose();
    }
  }
}

Dataset SyntheticDomain::source() const {
  std::vector<CategoryId> labels(spec_.num_categories);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    labels[i] = static_cast<CategoryId>(i);
  }
  std::mt19937_64 rng = make_rng(spec_.seed, 1);
  return sample_clusters(centers_, axes_, labels, spec_.samples_per_category,
                         spec_.spread, spec_.axis_scale * spec_.spread, rng);
}

Dataset SyntheticDomain::make_target(const std::vector<CategoryId>& labels,
                                     std::uint64_t stream) const {
  for (CategoryId label : labels) {
    if (label >= spec_.num_categories) {
      throw UnknownCategory("synthetic target: no category " +
                            std::to_string(label));
    }
  }
  const std::size_t per_category = spec_.target_samples_per_category != 0
                                       ? spec_.target_samples_per_category
                                       : spec_.samples_per_category;
  std::mt19937_64 rng = make_rng(spec_.seed, 2 + stream);
  return sample_clusters(centers_ + target_offsets_, axes_, labels,
                         per_category, spec_.spread,
                         spec_.axis_scale * spec_.spread, rng);
}

}  // namespace subalign
