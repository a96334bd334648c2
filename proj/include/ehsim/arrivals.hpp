#ifndef EHSIM_ARRIVALS_HPP
#define EHSIM_ARRIVALS_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ehsim/model.hpp"

namespace ehsim {

enum class DistributionKind { exponential, bernoulli, constant, uniform, empirical };

/// Parametric i.i.d. arrival law. Construct through the named factories so
/// parameters are validated once.
class DistributionSpec {
 public:
  static DistributionSpec exponential(double mean);
  static DistributionSpec bernoulli(double peak, double probability);
  static DistributionSpec constant(double value);
  static DistributionSpec uniform(double low, double high);
  static DistributionSpec empirical(std::vector<double> samples);

  /// Parses "kind:p1,p2,..." e.g. "exponential:10", "bernoulli:10,0.5",
  /// "uniform:0,4", "empirical:1,2,3".
  static DistributionSpec parse(std::string_view text);

  DistributionKind kind() const noexcept { return kind_; }
  const std::vector<double>& params() const noexcept { return params_; }

  double mean() const;
  double variance() const;

  /// Same family rescaled so that mean() == target. Fails when the current
  /// mean is zero and the family has no mean parameter of its own.
  DistributionSpec with_mean(double target) const;

  std::string to_string() const;

  friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;

 private:
  DistributionSpec(DistributionKind kind, std::vector<double> params);

  DistributionKind kind_;
  std::vector<double> params_;
};

std::string_view to_string(DistributionKind kind);

struct Seed {
  std::uint64_t value = 0;
};

/// L i.i.d. draws; a pure function of (spec, horizon, seed).
EnergyTrace sample_trace(const DistributionSpec& spec, std::size_t horizon, Seed seed);

inline double mean(const DistributionSpec& spec) { return spec.mean(); }

}  // namespace ehsim

#endif  // EHSIM_ARRIVALS_HPP
