#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "fdmimo/run_config.hpp"

namespace fdmimo::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kInvalidConfig = 2,
  kIoFailure = 3,
  kNumericFailure = 4,
};

int exit_code_for(ErrorKind kind) noexcept;

/// Single-line, key=value error record for the error stream.
std::string error_line(ErrorKind kind, const std::string& message);

/// Files produced by a command, held in memory until every computation has
/// succeeded, then written with temp-name-and-rename.
class OutputBundle {
 public:
  void add(std::string name, std::string contents);
  const std::vector<std::pair<std::string, std::string>>& files() const noexcept {
    return files_;
  }
  /// Creates `dir` if needed. On a write failure, files already committed by
  /// this call are removed before rethrowing.
  void commit(const std::filesystem::path& dir) const;

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

/// Built-in recipe used by `simulate` when no --recipe is given.
extern const char* const kDefaultRecipeJson;

// Each command computes into an OutputBundle and commits it under cfg.out.
// Errors propagate as fdmimo::Error; `run_command` maps them to exit codes.
OutputBundle build_estimate(const RunConfig& cfg, std::ostream& log);
OutputBundle build_sweep(const RunConfig& cfg, std::ostream& log);
OutputBundle build_simulate(const RunConfig& cfg, std::ostream& log);
OutputBundle build_graph(const RunConfig& cfg, std::ostream& log);

int cmd_estimate(const RunConfig& cfg, std::ostream& log, std::ostream& err);
int cmd_sweep(const RunConfig& cfg, std::ostream& log, std::ostream& err);
int cmd_simulate(const RunConfig& cfg, std::ostream& log, std::ostream& err);
int cmd_graph_build(const RunConfig& cfg, std::ostream& log, std::ostream& err);

/// Full argv entry point (subcommand first).
int run(int argc, const char* const* argv, std::ostream& log, std::ostream& err);

}  // namespace fdmimo::cli
