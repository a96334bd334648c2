#ifndef EHSIM_POLICIES_HPP
#define EHSIM_POLICIES_HPP

#include <cstddef>
#include <optional>
#include <string_view>

#include "ehsim/model.hpp"

namespace ehsim {

/// Online rules plus the two non-causal reference curves reported alongside
/// them (offline optimum and Jensen bound).
enum class PolicyKind { naive, sat, bet, apa, opm, ub };

std::string_view to_string(PolicyKind kind);
std::optional<PolicyKind> parse_policy_kind(std::string_view name);
inline bool is_online(PolicyKind kind) {
  return kind != PolicyKind::opm && kind != PolicyKind::ub;
}

struct PolicyParams {
  double target_power = 0.0;  // P
  double margin = 0.0;        // epsilon, P = mean - epsilon
  double sat_alpha = 0.5;     // save phase length ceil(L^alpha)

  /// P = mean * (1 - epsilon_rel).
  static PolicyParams from_mean(double mean, double epsilon_rel = 0.01, double sat_alpha = 0.5);

  void validate() const;
};

/// Length of SAT's save phase, ceil(L^alpha), capped at L.
std::size_t save_blocks(std::size_t horizon, double alpha);

double naive_power(double battery, double arrival);
double sat_power(double battery, double arrival, std::size_t index, std::size_t horizon,
                 const PolicyParams& params);
double bet_power(double battery, double arrival, const PolicyParams& params);
double apa_power(double battery, double arrival, const PolicyParams& params);

/// An online policy. The call operator only ever receives a BlockContext,
/// so it cannot peek at future arrivals.
class Policy {
 public:
  Policy(PolicyKind kind, PolicyParams params);

  PolicyKind kind() const noexcept { return kind_; }
  const PolicyParams& params() const noexcept { return params_; }

  double operator()(const BlockContext& block) const;

 private:
  PolicyKind kind_;
  PolicyParams params_;
};

/// Blocks that sent nothing although the policy was in its transmit phase
/// (SAT outage, BET skip, naive on a zero arrival).
std::size_t idle_blocks(const Policy& policy, const PolicySchedule& schedule);

}  // namespace ehsim

#endif  // EHSIM_POLICIES_HPP
