#ifndef FCS_CONFIG_HPP
#define FCS_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "fcs/model.hpp"

namespace fcs {

enum class Engine { kOracle, kQuasifree, kBoth };
Engine engine_from_string(const std::string& name);
std::string to_string(Engine e);

/// Uniform alpha grid [min, max] with `count` points; `imaginary` selects
/// the alpha = i theta axis.
struct AlphaGridSpec {
  double min = 0.0;
  double max = 1.0;
  int count = 21;
  bool imaginary = false;

  std::vector<double> points() const;
};

struct WrongOrderSpec {
  int L = 3;
  double T = 1e4;
};

/// One experiment as described by a strict JSON config file. Protocol
/// fields sit at the top level; `L` and `T` accept a scalar or an array
/// (sweeps). See the repository README for the documented schema and a
/// complete example.
struct ExperimentConfig {
  DriveProtocol protocol;
  Engine engine = Engine::kQuasifree;
  std::vector<int> L = {64};
  std::vector<double> T = {100.0};
  int steps = 0;  // 0 = integrator default
  AlphaGridSpec alpha_grid;
  double erasure_error = 0.1;  // success-conditioning / singular-family commands
  std::optional<WrongOrderSpec> wrong_order;

  void check() const;
  /// Canonical re-serialization (sorted keys, shortest round-trip numbers);
  /// embedding this in outputs makes every file carry its generating config.
  std::string canonical_text() const;
};

/// Strict parse: unknown keys, type mismatches and invalid values are
/// reported with their key path. Throws std::invalid_argument.
ExperimentConfig parse_config(const std::string& text);

/// parse_config over the contents of a file.
ExperimentConfig load_config(const std::string& path);

}  // namespace fcs

#endif
