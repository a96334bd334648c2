#include "ehsim/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace ehsim {

namespace {

std::string causality_message(std::size_t block, double deficit) {
  std::ostringstream os;
  os << "energy causality violated at block " << (block + 1) << " (deficit " << deficit << ")";
  return os.str();
}

// Neumaier-compensated running sum; long horizons accumulate enough rounding
// to matter against an absolute 1e-9 slack otherwise.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      carry_ += (sum_ - t) + x;
    else
      carry_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace

CausalityViolation::CausalityViolation(std::size_t block, double deficit)
    : std::runtime_error(causality_message(block, deficit)), block_(block), deficit_(deficit) {}

void SimConfig::validate() const {
  if (!(tolerance > 0.0) || !std::isfinite(tolerance))
    throw DomainError("tolerance must be a positive finite number");
}

EnergyTrace::EnergyTrace(std::vector<double> arrivals) : arrivals_(std::move(arrivals)) {
  if (arrivals_.empty()) throw DomainError("energy trace must contain at least one block");
  for (std::size_t i = 0; i < arrivals_.size(); ++i) {
    if (!std::isfinite(arrivals_[i]) || arrivals_[i] < 0.0) {
      std::ostringstream os;
      os << "arrival at block " << (i + 1) << " is not a non-negative finite number";
      throw DomainError(os.str());
    }
  }
}

double EnergyTrace::total() const {
  CompensatedSum sum;
  for (double e : arrivals_) sum.add(e);
  return sum.value();
}

double EnergyTrace::mean() const { return total() / static_cast<double>(arrivals_.size()); }

double rate(double power, const SimConfig& config) {
  if (!std::isfinite(power) || power < 0.0)
    throw DomainError("rate: power must be a non-negative finite number");
  const double nats = 0.5 * std::log1p(power);
  return config.log_base == LogBase::bits ? nats / std::numbers::ln2 : nats;
}

BatteryState step_battery(BatteryState battery, double arrival, double power, std::size_t block,
                          const SimConfig& config) {
  const double available = battery.charge + arrival;
  double next = available - power;
  if (next < 0.0) {
    if (next <= -config.tolerance) throw CausalityViolation(block, -next);
    next = 0.0;
  }
  return BatteryState{next};
}

double throughput(std::span<const double> rates) {
  if (rates.empty()) throw DomainError("throughput of an empty schedule");
  CompensatedSum sum;
  for (double r : rates) sum.add(r);
  return sum.value() / static_cast<double>(rates.size());
}

double throughput(const PolicySchedule& schedule) { return throughput(schedule.rates); }

double upper_bound(const EnergyTrace& trace, const SimConfig& config) {
  return rate(trace.mean(), config);
}

std::size_t first_causality_violation(const EnergyTrace& trace, std::span<const double> powers,
                                      double tolerance) {
  const std::size_t n = std::min(trace.size(), powers.size());
  CompensatedSum surplus;
  for (std::size_t i = 0; i < n; ++i) {
    surplus.add(trace[i]);
    surplus.add(-powers[i]);
    if (surplus.value() < -tolerance) return i;
  }
  return trace.size();
}

namespace detail {
void check_power(double power, std::size_t block) {
  if (!std::isfinite(power) || power < 0.0) {
    std::ostringstream os;
    os << "policy returned invalid power " << power << " at block " << (block + 1);
    throw InvariantViolation(os.str());
  }
}
}  // namespace detail

PolicySchedule evaluate(const EnergyTrace& trace, std::span<const double> powers,
                        const SimConfig& config) {
  if (powers.size() != trace.size())
    throw DomainError("power vector length does not match the trace");
  PolicySchedule schedule;
  schedule.powers.assign(powers.begin(), powers.end());
  schedule.rates.reserve(powers.size());
  schedule.battery.reserve(powers.size());
  BatteryState battery;
  for (std::size_t i = 0; i < powers.size(); ++i) {
    detail::check_power(powers[i], i);
    battery = step_battery(battery, trace[i], powers[i], i, config);
    schedule.rates.push_back(rate(powers[i], config));
    schedule.battery.push_back(battery.charge);
  }
  check_schedule(trace, schedule, config);
  return schedule;
}

void check_schedule(const EnergyTrace& trace, const PolicySchedule& schedule,
                    const SimConfig& config) {
  const std::size_t n = trace.size();
  if (schedule.powers.size() != n || schedule.rates.size() != n)
    throw InvariantViolation("schedule length does not match the trace");
  if (const auto bad = first_causality_violation(trace, schedule.powers, config.tolerance);
      bad != n) {
    std::ostringstream os;
    os << "cumulative spend exceeds cumulative harvest at block " << (bad + 1);
    throw InvariantViolation(os.str());
  }
  for (double b : schedule.battery)
    if (b < 0.0) throw InvariantViolation("negative battery charge");
  const double achieved = throughput(schedule);
  const double bound = upper_bound(trace, config);
  if (achieved > bound + config.tolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "throughput " << achieved << " exceeds the Jensen bound " << bound;
    throw InvariantViolation(os.str());
  }
}

}  // namespace ehsim
