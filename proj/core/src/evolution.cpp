#include "subalign/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "parallel.hpp"
#include "subalign/errors.hpp"

namespace subalign {

std::string_view to_string(StopRule rule) {
  switch (rule) {
    case StopRule::FirstLocalMin:
      return "local";
    case StopRule::GlobalMin:
      return "global";
  }
  return "unknown";
}

StopRule parse_stop_rule(std::string_view text) {
  if (text == "global") return StopRule::GlobalMin;
  if (text == "local") return StopRule::FirstLocalMin;
  throw Error("unknown stop rule '" + std::string(text) +
              "' (expected global or local)");
}

EvolutionTrace evolve(const SubsetScorer& scorer,
                      const EvolveOptions& options) {
  std::vector<CategoryId> unselected = scorer.source().label_set();
  if (unselected.empty()) throw Error("evolve: source has no categories");

  EvolutionTrace trace;
  trace.error_kind = scorer.kind();
  trace.dim = scorer.dim();

  std::vector<double> scores;
  while (!unselected.empty()) {
    scores.assign(unselected.size(), 0.0);
    detail::parallel_for(unselected.size(), options.threads, [&](std::size_t i) {
      std::vector<CategoryId> candidate = trace.ordering;
      candidate.push_back(unselected[i]);
      scores[i] = scorer.score_or_infinity(CategorySubset(std::move(candidate)));
    });

    // `unselected` is ascending, so the first strict minimum is also the
    // smallest identifier among ties.
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
      if (scores[i] < scores[best]) best = i;
    }
    if (std::isinf(scores[best])) {
      throw DegenerateEvolution(
          "evolve: every candidate at step " +
          std::to_string(trace.ordering.size() + 1) +
          " has too few samples for a " + std::to_string(scorer.dim()) +
          "-dimensional subspace");
    }
    trace.ordering.push_back(unselected[best]);
    trace.errors.push_back(scores[best]);
    unselected.erase(unselected.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return trace;
}

EvolutionTrace evolve(const Dataset& source, const Dataset& target,
                      ErrorKind kind, Eigen::Index dim,
                      const EvolveOptions& options) {
  return evolve(SubsetScorer(source, target, kind, dim), options);
}

std::size_t select_k(const std::vector<double>& errors, StopRule rule) {
  if (errors.empty()) throw IndexError("select_k: empty error list");
  const std::size_t m = errors.size();

  if (rule == StopRule::GlobalMin) {
    return static_cast<std::size_t>(
               std::min_element(errors.begin(), errors.end()) -
               errors.begin()) +
           1;
  }

  for (std::size_t k = 0; k < m; ++k) {
    if (k > 0 && !(errors[k] <= errors[k - 1])) continue;
    std::size_t next = k + 1;
    while (next < m && errors[next] == errors[k]) ++next;
    if (next == m || errors[k] < errors[next]) return k + 1;
  }
  return m;
}

std::size_t select_k(const EvolutionTrace& trace, StopRule rule) {
  return select_k(trace.errors, rule);
}

CategorySubset selected_categories(const EvolutionTrace& trace, std::size_t k) {
  if (k < 1 || k > trace.size()) {
    throw IndexError("selected_categories: k = " + std::to_string(k) +
                     " is outside [1, " + std::to_string(trace.size()) + "]");
  }
  return CategorySubset(std::vector<CategoryId>(
      trace.ordering.begin(),
      trace.ordering.begin() + static_cast<std::ptrdiff_t>(k)));
}

}  // namespace subalign
