#ifndef EHSIM_MONTECARLO_HPP
#define EHSIM_MONTECARLO_HPP

#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "ehsim/arrivals.hpp"
#include "ehsim/policies.hpp"

namespace ehsim {

enum class SweepParameter { mean, horizon };

std::string_view to_string(SweepParameter parameter);

inline const std::vector<PolicyKind>& all_policies() {
  static const std::vector<PolicyKind> kinds{PolicyKind::naive, PolicyKind::sat,
                                             PolicyKind::bet,   PolicyKind::apa,
                                             PolicyKind::opm,   PolicyKind::ub};
  return kinds;
}

struct SweepPlan {
  /// For a mean sweep the template is rescaled to each value; for a horizon
  /// sweep it is used as is.
  DistributionSpec distribution = DistributionSpec::exponential(10.0);
  SweepParameter parameter = SweepParameter::mean;
  std::vector<double> values{10.0};
  /// Horizon used when sweeping the mean.
  std::size_t horizon = 500;
  std::size_t replications = 200;
  std::uint64_t base_seed = 1;
  std::vector<PolicyKind> policies = all_policies();
  double epsilon_rel = 0.01;
  double sat_alpha = 0.5;
  SimConfig config;

  void validate() const;
};

struct PolicyStats {
  PolicyKind kind;
  double mean = 0.0;
  double stddev = 0.0;  // sample (n - 1) standard deviation
  double standard_error = 0.0;
  std::size_t replications = 0;
  /// Average count of transmit-phase blocks that sent nothing.
  double mean_idle_blocks = 0.0;
};

struct SweepPoint {
  double value = 0.0;
  double upper_bound_mean = 0.0;
  std::vector<PolicyStats> policies;  // in plan order

  const PolicyStats& stats(PolicyKind kind) const;
};

struct SweepResult {
  SweepParameter parameter = SweepParameter::mean;
  std::vector<SweepPoint> points;  // in plan order
};

/// Carries (sweep value, replication, policy) context for a failed run.
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Replications of every sweep point run as independent OpenMP tasks; every
/// policy of one (value, replication) pair sees the same trace drawn with
/// seed base_seed + replication. Bit-identical to run_sweep_serial.
/// `threads` <= 0 keeps the OpenMP default.
SweepResult run_sweep(const SweepPlan& plan, int threads = 0);

/// Single-threaded reference for run_sweep.
SweepResult run_sweep_serial(const SweepPlan& plan);

/// Schedule of one non-bound policy on `trace`, with P derived from the
/// distribution mean as in run_sweep. Throws for PolicyKind::ub.
PolicySchedule run_policy(const EnergyTrace& trace, PolicyKind kind, double mean_arrival,
                          double epsilon_rel, double sat_alpha, const SimConfig& config);

struct TraceOutcome {
  std::vector<double> throughputs;  // in policy order; `ub` holds the bound
  std::vector<std::size_t> idle_blocks;
  double upper_bound = 0.0;
};

TraceOutcome simulate_trace(const EnergyTrace& trace, double mean_arrival,
                            const std::vector<PolicyKind>& policies, double epsilon_rel,
                            double sat_alpha, const SimConfig& config);

}  // namespace ehsim

#endif  // EHSIM_MONTECARLO_HPP
