// Block-granular model of an energy-harvesting AWGN transmitter with an
// unbounded battery. Energies are normalized per block (one channel use per
// block), so a block's arrival E and its power Q share the same units.
#ifndef EHSIM_MODEL_HPP
#define EHSIM_MODEL_HPP

#include <cstddef>
#include <concepts>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ehsim {

/// Raised on arguments outside an operation's mathematical domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a schedule spends energy that has not been harvested yet.
class CausalityViolation : public std::runtime_error {
 public:
  CausalityViolation(std::size_t block, double deficit);

  /// Zero-based index of the first offending block.
  std::size_t block() const noexcept { return block_; }
  double deficit() const noexcept { return deficit_; }

 private:
  std::size_t block_;
  double deficit_;
};

/// Raised when a produced schedule breaks a model invariant (e.g. exceeds the
/// Jensen bound), which indicates a bug rather than bad input.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class LogBase { bits, nats };

struct SimConfig {
  LogBase log_base = LogBase::bits;
  /// Absolute slack on every energy comparison.
  double tolerance = 1e-9;

  void validate() const;
};

/// Realized arrival sequence E_1..E_L.
class EnergyTrace {
 public:
  explicit EnergyTrace(std::vector<double> arrivals);

  std::size_t size() const noexcept { return arrivals_.size(); }
  double operator[](std::size_t i) const { return arrivals_[i]; }
  std::span<const double> arrivals() const noexcept { return arrivals_; }
  double mean() const;
  double total() const;

 private:
  std::vector<double> arrivals_;
};

/// Stored energy at a block boundary. Starts empty.
struct BatteryState {
  double charge = 0.0;
};

/// Per-block powers and rates produced by running a policy on a trace.
struct PolicySchedule {
  std::vector<double> powers;
  std::vector<double> rates;
  /// Battery charge after each block.
  std::vector<double> battery;

  std::size_t size() const noexcept { return powers.size(); }
};

/// What an online policy may look at when choosing block `index`'s power.
/// Future arrivals are deliberately absent.
struct BlockContext {
  double battery;
  double arrival;
  std::size_t index;  // one-based
  std::size_t horizon;
};

template <class F>
concept OnlineDecision = std::regular_invocable<const F&, const BlockContext&> &&
    std::convertible_to<std::invoke_result_t<const F&, const BlockContext&>, double>;

/// Achievable rate of one block: 0.5 * log(1 + power).
double rate(double power, const SimConfig& config = {});

BatteryState step_battery(BatteryState battery, double arrival, double power,
                          std::size_t block = 0, const SimConfig& config = {});

/// Mean of per-block rates.
double throughput(const PolicySchedule& schedule);
double throughput(std::span<const double> rates);

/// Jensen bound rate(mean arrival); no schedule on `trace` can exceed it.
double upper_bound(const EnergyTrace& trace, const SimConfig& config = {});

/// Index of the first block whose cumulative spend exceeds cumulative
/// harvest by more than `tolerance`, or size() if none.
std::size_t first_causality_violation(const EnergyTrace& trace, std::span<const double> powers,
                                      double tolerance);

/// Replays a precomputed (possibly non-causal) power vector against the
/// battery recursion. Throws CausalityViolation if it is infeasible.
PolicySchedule evaluate(const EnergyTrace& trace, std::span<const double> powers,
                        const SimConfig& config = {});

/// Post-conditions shared by every schedule: matching lengths, prefix
/// causality, non-negative battery and the Jensen bound. Throws
/// InvariantViolation on failure.
void check_schedule(const EnergyTrace& trace, const PolicySchedule& schedule,
                    const SimConfig& config = {});

namespace detail {
void check_power(double power, std::size_t block);
}

/// Drives an online decision rule block by block.
template <OnlineDecision Decide>
PolicySchedule execute(const EnergyTrace& trace, const Decide& decide,
                       const SimConfig& config = {}) {
  const std::size_t horizon = trace.size();
  PolicySchedule schedule;
  schedule.powers.reserve(horizon);
  schedule.rates.reserve(horizon);
  schedule.battery.reserve(horizon);

  BatteryState battery;
  for (std::size_t i = 0; i < horizon; ++i) {
    const double power =
        static_cast<double>(decide(BlockContext{battery.charge, trace[i], i + 1, horizon}));
    detail::check_power(power, i);
    battery = step_battery(battery, trace[i], power, i, config);
    schedule.powers.push_back(power);
    schedule.rates.push_back(rate(power, config));
    schedule.battery.push_back(battery.charge);
  }
  check_schedule(trace, schedule, config);
  return schedule;
}

}  // namespace ehsim

#endif  // EHSIM_MODEL_HPP
