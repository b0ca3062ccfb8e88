#ifndef SUBALIGN_TOOLS_COMMANDS_HPP
#define SUBALIGN_TOOLS_COMMANDS_HPP

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "subalign/classifier.hpp"
#include "subalign/evolution.hpp"
#include "subalign/projection_errors.hpp"

namespace subalign::cli {

/// Exit codes of the subalign tool.
enum ExitCode : int {
  kOk = 0,
  kPipelineError = 1,
  kUsageOrIoError = 2,
};

/// Options shared by the pipeline subcommands.
struct RunConfig {
  Eigen::Index dim = 0;  ///< 0 selects default_dim()
  ErrorKind error_kind = ErrorKind::Reprojection;
  StopRule stop_rule = StopRule::GlobalMin;
  std::optional<std::size_t> k_override;
  ClassifierConfig classifier;  ///< carries --seed
  unsigned threads = 0;         ///< 0 = hardware concurrency
  std::vector<std::filesystem::path> sources;
  std::filesystem::path target;
  std::filesystem::path out;
};

/// min(80, N_t - 1, D).
Eigen::Index default_dim(const Dataset& target);

/// Runs the tool with `args` (args[0] is the program name). Diagnostics go to
/// `err`, short human-readable results to `out`. Returns an ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace subalign::cli

#endif  // SUBALIGN_TOOLS_COMMANDS_HPP
