#ifndef SUBALIGN_MULTI_SOURCE_HPP
#define SUBALIGN_MULTI_SOURCE_HPP

#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "subalign/dataset.hpp"
#include "subalign/evolution.hpp"

namespace subalign {

struct NamedDataset {
  std::string name;
  Dataset data;
};

/// A category of one particular source domain.
struct PooledLabel {
  std::size_t domain = 0;
  CategoryId original = 0;

  friend auto operator<=>(const PooledLabel&, const PooledLabel&) = default;
};

/// Several source domains concatenated into one dataset in which the same
/// category from two domains counts as two different categories.
///
/// Pooled identifiers are original identifiers shifted by a per-domain offset
/// (the first domain's offset is 0, so a single-domain pool keeps its ids).
class SourcePool {
 public:
  const std::vector<NamedDataset>& domains() const noexcept { return domains_; }
  const Dataset& pooled() const noexcept { return pooled_; }

  /// Throws UnknownCategory for an identifier that is not a pooled label.
  PooledLabel original_of(CategoryId pooled) const;
  /// Throws UnknownCategory if the domain does not have that label.
  CategoryId pooled_id(const PooledLabel& label) const;
  /// Pooled labels, ascending.
  std::vector<CategoryId> pooled_labels() const;

  /// Splits the pooled dataset back into the per-domain datasets.
  std::vector<NamedDataset> unpool() const;

 private:
  friend SourcePool pool_sources(std::vector<NamedDataset> domains);

  std::vector<NamedDataset> domains_;
  Dataset pooled_;
  std::map<CategoryId, PooledLabel> to_original_;
  std::map<PooledLabel, CategoryId> to_pooled_;
  std::vector<Eigen::Index> row_offsets_;
};

/// Throws EmptyPool with no domains, DimensionError on mismatched D.
SourcePool pool_sources(std::vector<NamedDataset> domains);

/// evolve() over the pooled dataset.
EvolutionTrace evolve_multi(const SourcePool& pool, const Dataset& target,
                            ErrorKind kind, Eigen::Index dim,
                            const EvolveOptions& options = {});

/// The first k pooled categories of the ordering, extended so every label in
/// `target_labels` (original identifiers) has at least one pooled variant.
/// For each uncovered label the variant appearing earliest in the ordering is
/// appended; appended entries keep ordering order. Throws UncoverableLabel if
/// a target label is in no source domain, IndexError for k out of range.
CategorySubset enforce_cover(const EvolutionTrace& trace, std::size_t k,
                             const std::vector<CategoryId>& target_labels,
                             const SourcePool& pool);

/// Number of categories of `subset` drawn from each domain, indexed by domain.
std::vector<std::size_t> domain_composition(const CategorySubset& subset,
                                            const SourcePool& pool);

}  // namespace subalign

#endif  // SUBALIGN_MULTI_SOURCE_HPP
