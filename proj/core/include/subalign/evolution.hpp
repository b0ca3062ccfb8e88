#ifndef SUBALIGN_EVOLUTION_HPP
#define SUBALIGN_EVOLUTION_HPP

#include <cstddef>
#include <string_view>
#include <vector>

#include "subalign/dataset.hpp"
#include "subalign/projection_errors.hpp"

namespace subalign {

/// Greedy ordering of all source categories. errors[i] is the score of the
/// prefix ordering[0..i].
struct EvolutionTrace {
  std::vector<CategoryId> ordering;
  std::vector<double> errors;
  ErrorKind error_kind = ErrorKind::Reprojection;
  Eigen::Index dim = 0;

  std::size_t size() const noexcept { return ordering.size(); }
};

enum class StopRule { FirstLocalMin, GlobalMin };

std::string_view to_string(StopRule rule);
/// Accepts "global" / "local"; throws Error otherwise.
StopRule parse_stop_rule(std::string_view text);

struct EvolveOptions {
  /// Worker threads for candidate scoring; 0 means hardware concurrency.
  unsigned threads = 1;
};

/// Grows the selected set one category at a time, always adding the
/// unselected category whose union with the selection scores lowest. Ties go
/// to the smaller identifier. Candidates without enough samples score
/// +infinity; if every candidate at a step does, throws DegenerateEvolution.
EvolutionTrace evolve(const SubsetScorer& scorer,
                      const EvolveOptions& options = {});

/// Convenience overload that builds the scorer.
EvolutionTrace evolve(const Dataset& source, const Dataset& target,
                      ErrorKind kind, Eigen::Index dim,
                      const EvolveOptions& options = {});

/// 1-based prefix length K chosen from the error curve.
///
/// GlobalMin: smallest K attaining the minimum. FirstLocalMin: smallest K with
/// errors[K] <= errors[K-1] (when K > 1) and errors[K] strictly below the
/// next value that differs from it (when one exists). The first index of a
/// plateau therefore qualifies.
std::size_t select_k(const std::vector<double>& errors, StopRule rule);
std::size_t select_k(const EvolutionTrace& trace, StopRule rule);

/// The first k categories of the ordering. Throws IndexError unless
/// 1 <= k <= trace.size().
CategorySubset selected_categories(const EvolutionTrace& trace, std::size_t k);

}  // namespace subalign

#endif  // SUBALIGN_EVOLUTION_HPP
