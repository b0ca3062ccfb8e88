#include "subalign/dataset.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "subalign/errors.hpp"

namespace subalign {

Dataset::Dataset(Matrix features, std::vector<CategoryId> labels,
                 std::map<CategoryId, std::string> names)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      names_(std::move(names)) {
  if (static_cast<Eigen::Index>(labels_.size()) != features_.rows()) {
    throw LengthMismatch("dataset has " + std::to_string(features_.rows()) +
                         " rows but " + std::to_string(labels_.size()) +
                         " labels");
  }
  for (CategoryId label : labels_) {
    if (!names_.contains(label)) {
      throw UnknownCategory("label " + std::to_string(label) +
                            " has no name entry");
    }
  }
  require_finite(features_, "dataset features");
}

std::vector<CategoryId> Dataset::label_set() const {
  std::set<CategoryId> seen(labels_.begin(), labels_.end());
  return {seen.begin(), seen.end()};
}

std::string Dataset::name_of(CategoryId id) const {
  auto it = names_.find(id);
  return it == names_.end() ? std::to_string(id) : it->second;
}

CategorySubset::CategorySubset(std::vector<CategoryId> labels)
    : labels_(std::move(labels)) {
  std::vector<CategoryId> s = sorted();
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
    throw Error("category subset contains duplicate identifiers");
  }
}

std::vector<CategoryId> CategorySubset::sorted() const {
  std::vector<CategoryId> s = labels_;
  std::sort(s.begin(), s.end());
  return s;
}

bool CategorySubset::contains(CategoryId id) const {
  return std::find(labels_.begin(), labels_.end(), id) != labels_.end();
}

std::vector<Eigen::Index> rows_in(const Dataset& data,
                                  const CategorySubset& subset) {
  const std::vector<CategoryId> present = data.label_set();
  for (CategoryId id : subset.labels()) {
    if (!std::binary_search(present.begin(), present.end(), id)) {
      throw UnknownCategory("category " + std::to_string(id) +
                            " does not occur in the source data");
    }
  }
  const std::vector<CategoryId> wanted = subset.sorted();
  std::vector<Eigen::Index> rows;
  for (std::size_t i = 0; i < data.labels().size(); ++i) {
    if (std::binary_search(wanted.begin(), wanted.end(), data.labels()[i])) {
      rows.push_back(static_cast<Eigen::Index>(i));
    }
  }
  return rows;
}

Dataset restrict_to(const Dataset& data, const CategorySubset& subset) {
  const std::vector<Eigen::Index> rows = rows_in(data, subset);
  Matrix features = data.features()(rows, Eigen::all);
  std::vector<CategoryId> labels;
  labels.reserve(rows.size());
  std::map<CategoryId, std::string> names;
  for (Eigen::Index r : rows) {
    const CategoryId id = data.labels()[static_cast<std::size_t>(r)];
    labels.push_back(id);
    names.emplace(id, data.name_of(id));
  }
  return Dataset(std::move(features), std::move(labels), std::move(names));
}

Dataset align_label_ids(const Dataset& reference, const Dataset& other) {
  return align_label_ids(reference.names(), other);
}

Dataset align_label_ids(const std::map<CategoryId, std::string>& reference,
                        const Dataset& other) {
  std::unordered_map<std::string, CategoryId> by_name;
  CategoryId next = 0;
  for (const auto& [id, name] : reference) {
    by_name.emplace(name, id);
    next = std::max<CategoryId>(next, id + 1);
  }

  std::unordered_map<CategoryId, CategoryId> remap;
  std::map<CategoryId, std::string> names;
  std::vector<CategoryId> labels;
  labels.reserve(other.labels().size());
  for (CategoryId old_id : other.labels()) {
    auto it = remap.find(old_id);
    if (it == remap.end()) {
      const std::string name = other.name_of(old_id);
      auto known = by_name.find(name);
      const CategoryId new_id = known != by_name.end() ? known->second : next++;
      if (known == by_name.end()) by_name.emplace(name, new_id);
      it = remap.emplace(old_id, new_id).first;
      names.emplace(new_id, name);
    }
    labels.push_back(it->second);
  }
  return Dataset(other.features(), std::move(labels), std::move(names));
}

}  // namespace subalign
