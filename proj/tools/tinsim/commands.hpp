#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "scenario.hpp"
#include "tinsim/grid.hpp"
#include "tinsim/phys.hpp"

namespace tinsim::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitInputError = 2;

/// Environment variable holding the default worker count.
inline constexpr const char* kThreadsEnv = "TINSIM_THREADS";

struct RunOptions {
  std::filesystem::path out_root = "tinsim_out";
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
};

/// Output directory of one invocation: `<out_root>/<command>-<scenario name>`.
/// Holds `scenario.yaml` (the parsed input), the command's files and
/// `manifest.json`.
class OutputDir {
 public:
  OutputDir(const RunOptions& opts, const std::string& command, const ScenarioInput& scenario);

  const std::filesystem::path& path() const { return dir_; }
  std::filesystem::path file(const std::string& name);
  /// Writes the manifest; call once all files exist.
  void finish(std::uint64_t seed) const;

 private:
  std::filesystem::path dir_;
  std::string command_;
  std::string scenario_name_;
  std::vector<std::string> files_;
};

/// Band-limited Gaussian self-convolution of the scenario's cavity frequency
/// noise. `s_nu` lives on a half-bin-offset grid reaching the scenario grid's
/// upper edge; `s_nu2` starts at 0 with the same spacing.
struct TinSpectra {
  Psd s_nu;
  Psd s_nu2;
};
TinSpectra compute_tin_spectra(const SystemParams& system, const FrequencyGrid& grid);

/// Each command reads the scenario, writes into its output directory and
/// reports a short summary on `log`. Input problems throw ScenarioError or
/// std::invalid_argument / std::domain_error.
int cmd_budget(const ScenarioInput& in, const RunOptions& opts, std::ostream& log);
int cmd_tin(const ScenarioInput& in, const RunOptions& opts, std::ostream& log);
int cmd_landscape(const ScenarioInput& in, const RunOptions& opts, std::ostream& log);
int cmd_simulate(const ScenarioInput& in, const RunOptions& opts, std::ostream& log);
int cmd_calibrate(const ScenarioInput& in, const RunOptions& opts, std::ostream& log);

}  // namespace tinsim::app
