#ifndef FCS_RUNNER_HPP
#define FCS_RUNNER_HPP

#include <optional>
#include <string>
#include <vector>

#include "fcs/config.hpp"

namespace fcs {

inline constexpr const char* kCodeVersion = "1.0.0";

struct RunOptions {
  std::string out_dir = ".";
  int workers = 1;
  std::optional<Engine> engine_override;  // CLI --engine beats the config
};

/// Known subcommands: fcs, oracle-check, sweep, figure3, landauer, atoms.
std::vector<std::string> known_commands();

/// Executes one subcommand. Writes a CSV table (leading '#' comment block
/// with code version and the full canonical config, then a header row) and
/// a JSON mirror of the same data into opts.out_dir. Fully deterministic:
/// identical config and command give byte-identical files, independent of
/// the worker count. Throws on any error; no partial output files remain.
/// Returns the list of files written.
std::vector<std::string> run_command(const std::string& command, const ExperimentConfig& cfg,
                                     const RunOptions& opts);

}  // namespace fcs

#endif
