#ifndef EHSIM_CLI_HPP
#define EHSIM_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ehsim/montecarlo.hpp"

namespace ehsim::cli {

enum class OutputFormat { csv, json, table };

/// Everything a `run` or `sweep` invocation needs. Layered as
/// defaults < config file < EH_SIM_SEED (seed only, if still unset) < flags.
struct RunConfig {
  DistributionSpec distribution = DistributionSpec::exponential(10.0);
  std::size_t horizon = 500;
  std::vector<double> mean_sweep;
  std::vector<double> horizon_sweep;
  std::size_t replications = 200;
  std::optional<std::uint64_t> seed;
  std::vector<PolicyKind> policies = all_policies();
  double epsilon_rel = 0.01;
  double sat_alpha = 0.5;
  LogBase log_base = LogBase::bits;
  std::string out;  // empty: stdout
  std::optional<OutputFormat> format;
  std::string schedule_out;
  int threads = 0;

  std::uint64_t seed_or_default() const { return seed.value_or(1); }
};

inline const std::vector<double>& default_mean_grid() {
  static const std::vector<double> grid{1, 2, 5, 10, 20};
  return grid;
}

/// Overlays the keys present in `doc` onto `config`. Unknown keys are
/// rejected. Throws std::invalid_argument.
void apply_config_file(RunConfig& config, const nlohmann::json& doc);

std::vector<PolicyKind> parse_policy_list(const std::string& text);
std::vector<double> parse_value_list(const std::string& text);
LogBase parse_log_base(const std::string& text);
OutputFormat parse_format(const std::string& text);

/// Sweep plan for `sweep`; falls back to the default mean grid.
SweepPlan to_sweep_plan(const RunConfig& config);

/// Entry point shared by the eh_sim binary and tests. Returns the process
/// exit status: 0 on success, 1 on simulation failure, 2 on usage errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ehsim::cli

#endif  // EHSIM_CLI_HPP
