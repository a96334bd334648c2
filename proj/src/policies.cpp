#include "ehsim/policies.hpp"

#include <cmath>
#include <stdexcept>

namespace ehsim {

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::naive: return "naive";
    case PolicyKind::sat: return "sat";
    case PolicyKind::bet: return "bet";
    case PolicyKind::apa: return "apa";
    case PolicyKind::opm: return "opm";
    case PolicyKind::ub: return "ub";
  }
  return "unknown";
}

std::optional<PolicyKind> parse_policy_kind(std::string_view name) {
  for (auto kind : {PolicyKind::naive, PolicyKind::sat, PolicyKind::bet, PolicyKind::apa,
                    PolicyKind::opm, PolicyKind::ub})
    if (name == to_string(kind)) return kind;
  return std::nullopt;
}

PolicyParams PolicyParams::from_mean(double mean, double epsilon_rel, double sat_alpha) {
  if (!(epsilon_rel >= 0.0 && epsilon_rel <= 1.0))
    throw std::invalid_argument("relative margin must lie in [0, 1]");
  PolicyParams params{mean * (1.0 - epsilon_rel), mean * epsilon_rel, sat_alpha};
  params.validate();
  return params;
}

void PolicyParams::validate() const {
  if (!std::isfinite(target_power) || target_power < 0.0)
    throw std::invalid_argument("target power must be a non-negative finite number");
  if (!std::isfinite(margin) || margin < 0.0)
    throw std::invalid_argument("margin must be a non-negative finite number");
  if (!(sat_alpha > 0.0 && sat_alpha < 1.0))
    throw std::invalid_argument("SAT exponent must lie in (0, 1)");
}

std::size_t save_blocks(std::size_t horizon, double alpha) {
  const double raw = std::pow(static_cast<double>(horizon), alpha);
  // pow may land one ulp above an exact integer (e.g. 100^0.5).
  const double nearest = std::round(raw);
  const double h = std::abs(raw - nearest) <= 1e-9 * raw ? nearest : std::ceil(raw);
  const auto blocks = static_cast<std::size_t>(h);
  return blocks < horizon ? blocks : horizon;
}

double naive_power(double /*battery*/, double arrival) { return arrival; }

double bet_power(double battery, double arrival, const PolicyParams& params) {
  return battery + arrival >= params.target_power ? params.target_power : 0.0;
}

double sat_power(double battery, double arrival, std::size_t index, std::size_t horizon,
                 const PolicyParams& params) {
  if (index <= save_blocks(horizon, params.sat_alpha)) return 0.0;
  // Outage guard: skip instead of overdrawing when the saved energy runs out.
  return bet_power(battery, arrival, params);
}

double apa_power(double battery, double arrival, const PolicyParams& params) {
  const double available = battery + arrival;
  return available >= params.target_power ? params.target_power : available;
}

Policy::Policy(PolicyKind kind, PolicyParams params) : kind_(kind), params_(params) {
  if (!is_online(kind))
    throw std::invalid_argument(std::string(to_string(kind)) + " is not an online policy");
  params_.validate();
}

double Policy::operator()(const BlockContext& block) const {
  switch (kind_) {
    case PolicyKind::naive:
      return naive_power(block.battery, block.arrival);
    case PolicyKind::sat:
      return sat_power(block.battery, block.arrival, block.index, block.horizon, params_);
    case PolicyKind::bet:
      return bet_power(block.battery, block.arrival, params_);
    case PolicyKind::apa:
      return apa_power(block.battery, block.arrival, params_);
    default:
      break;
  }
  throw std::logic_error("non-causal policy kind reached the online dispatcher");
}

std::size_t idle_blocks(const Policy& policy, const PolicySchedule& schedule) {
  const std::size_t skip =
      policy.kind() == PolicyKind::sat ? save_blocks(schedule.size(), policy.params().sat_alpha)
                                       : 0;
  std::size_t idle = 0;
  for (std::size_t i = skip; i < schedule.size(); ++i)
    if (schedule.powers[i] == 0.0) ++idle;
  return idle;
}

}  // namespace ehsim
