#include "subalign/multi_source.hpp"

#include <algorithm>
#include <set>

#include "subalign/errors.hpp"

namespace subalign {

PooledLabel SourcePool::original_of(CategoryId pooled) const {
  auto it = to_original_.find(pooled);
  if (it == to_original_.end()) {
    throw UnknownCategory("no pooled category " + std::to_string(pooled));
  }
  return it->second;
}

CategoryId SourcePool::pooled_id(const PooledLabel& label) const {
  auto it = to_pooled_.find(label);
  if (it == to_pooled_.end()) {
    throw UnknownCategory("domain " + std::to_string(label.domain) +
                          " has no category " + std::to_string(label.original));
  }
  return it->second;
}

std::vector<CategoryId> SourcePool::pooled_labels() const {
  std::vector<CategoryId> out;
  out.reserve(to_original_.size());
  for (const auto& entry : to_original_) out.push_back(entry.first);
  return out;
}

std::vector<NamedDataset> SourcePool::unpool() const {
  std::vector<NamedDataset> out;
  out.reserve(domains_.size());
  for (std::size_t i = 0; i < domains_.size(); ++i) {
    const Eigen::Index begin = row_offsets_[i];
    const Eigen::Index end = row_offsets_[i + 1];
    std::vector<CategoryId> labels;
    std::map<CategoryId, std::string> names;
    for (Eigen::Index r = begin; r < end; ++r) {
      const PooledLabel original =
          original_of(pooled_.labels()[static_cast<std::size_t>(r)]);
      labels.push_back(original.original);
      names.emplace(original.original,
                    domains_[i].data.name_of(original.original));
    }
    out.push_back({domains_[i].name,
                   Dataset(pooled_.features().middleRows(begin, end - begin),
                           std::move(labels), std::move(names))});
  }
  return out;
}

SourcePool pool_sources(std::vector<NamedDataset> domains) {
  if (domains.empty()) throw EmptyPool("pool_sources: no source domains");
  const Eigen::Index dim = domains.front().data.dim();
  Eigen::Index rows = 0;
  for (const NamedDataset& domain : domains) {
    if (domain.data.dim() != dim) {
      throw DimensionError("pool_sources: domain '" + domain.name + "' has " +
                           std::to_string(domain.data.dim()) +
                           " features, expected " + std::to_string(dim));
    }
    rows += domain.data.size();
  }

  SourcePool pool;
  const bool prefix_names = domains.size() > 1;
  Matrix features(rows, dim);
  std::vector<CategoryId> labels;
  labels.reserve(static_cast<std::size_t>(rows));
  std::map<CategoryId, std::string> names;
  pool.row_offsets_.push_back(0);

  CategoryId offset = 0;
  for (std::size_t i = 0; i < domains.size(); ++i) {
    const Dataset& data = domains[i].data;
    CategoryId span = 0;
    for (CategoryId original : data.label_set()) {
      const CategoryId pooled = offset + original;
      pool.to_original_.emplace(pooled, PooledLabel{i, original});
      pool.to_pooled_.emplace(PooledLabel{i, original}, pooled);
      names.emplace(pooled, prefix_names
                                ? domains[i].name + "/" + data.name_of(original)
                                : data.name_of(original));
      span = original + 1;
    }
    for (CategoryId original : data.labels()) labels.push_back(offset + original);
    features.middleRows(pool.row_offsets_.back(), data.size()) = data.features();
    pool.row_offsets_.push_back(pool.row_offsets_.back() + data.size());
    offset += span;
  }

  pool.pooled_ = Dataset(std::move(features), std::move(labels), std::move(names));
  pool.domains_ = std::move(domains);
  return pool;
}

EvolutionTrace evolve_multi(const SourcePool& pool, const Dataset& target,
                            ErrorKind kind, Eigen::Index dim,
                            const EvolveOptions& options) {
  return evolve(pool.pooled(), target, kind, dim, options);
}

CategorySubset enforce_cover(const EvolutionTrace& trace, std::size_t k,
                             const std::vector<CategoryId>& target_labels,
                             const SourcePool& pool) {
  const CategorySubset prefix = selected_categories(trace, k);

  std::set<CategoryId> covered;
  for (CategoryId pooled : prefix.labels()) {
    covered.insert(pool.original_of(pooled).original);
  }

  std::set<CategoryId> missing;
  for (CategoryId label : target_labels) {
    if (covered.contains(label)) continue;
    bool exists = false;
    for (std::size_t i = 0; i < pool.domains().size() && !exists; ++i) {
      const std::vector<CategoryId> present = pool.domains()[i].data.label_set();
      exists = std::binary_search(present.begin(), present.end(), label);
    }
    if (!exists) {
      throw UncoverableLabel("target label " + std::to_string(label) +
                             " occurs in no source domain");
    }
    missing.insert(label);
  }

  std::vector<CategoryId> result = prefix.labels();
  for (std::size_t i = k; i < trace.ordering.size() && !missing.empty(); ++i) {
    const CategoryId original = pool.original_of(trace.ordering[i]).original;
    if (missing.erase(original) > 0) result.push_back(trace.ordering[i]);
  }
  if (!missing.empty()) {
    throw UncoverableLabel("target label " + std::to_string(*missing.begin()) +
                           " has no pooled variant in the trace");
  }
  return CategorySubset(std::move(result));
}

std::vector<std::size_t> domain_composition(const CategorySubset& subset,
                                            const SourcePool& pool) {
  std::vector<std::size_t> counts(pool.domains().size(), 0);
  for (CategoryId pooled : subset.labels()) {
    ++counts[pool.original_of(pooled).domain];
  }
  return counts;
}

}  // namespace subalign
