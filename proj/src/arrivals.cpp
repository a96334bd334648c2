#include "ehsim/arrivals.hpp"

#include <charconv>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace ehsim {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

bool non_negative(double x) { return std::isfinite(x) && x >= 0.0; }

double parse_number(std::string_view text) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || text.empty())
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  return value;
}

// 53 random mantissa bits in [0, 1). std::uniform_real_distribution is
// implementation-defined, this keeps traces identical across toolchains.
double unit_uniform(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace

DistributionSpec::DistributionSpec(DistributionKind kind, std::vector<double> params)
    : kind_(kind), params_(std::move(params)) {}

DistributionSpec DistributionSpec::exponential(double mean) {
  require(non_negative(mean), "exponential: mean must be >= 0");
  return {DistributionKind::exponential, {mean}};
}

DistributionSpec DistributionSpec::bernoulli(double peak, double probability) {
  require(non_negative(peak), "bernoulli: peak must be >= 0");
  require(probability >= 0.0 && probability <= 1.0, "bernoulli: probability must lie in [0, 1]");
  return {DistributionKind::bernoulli, {peak, probability}};
}

DistributionSpec DistributionSpec::constant(double value) {
  require(non_negative(value), "constant: value must be >= 0");
  return {DistributionKind::constant, {value}};
}

DistributionSpec DistributionSpec::uniform(double low, double high) {
  require(non_negative(low) && non_negative(high), "uniform: bounds must be >= 0");
  require(low <= high, "uniform: low must not exceed high");
  return {DistributionKind::uniform, {low, high}};
}

DistributionSpec DistributionSpec::empirical(std::vector<double> samples) {
  require(!samples.empty(), "empirical: sample list must not be empty");
  for (double s : samples) require(non_negative(s), "empirical: samples must be >= 0");
  return {DistributionKind::empirical, std::move(samples)};
}

DistributionSpec DistributionSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  std::vector<double> values;
  if (colon != std::string_view::npos) {
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      values.push_back(parse_number(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
      if (rest.empty()) throw std::invalid_argument("trailing comma in distribution parameters");
    }
  }

  auto expect = [&](std::size_t count) {
    if (values.size() != count) {
      std::ostringstream os;
      os << "distribution '" << name << "' takes " << count << " parameter(s), got "
         << values.size();
      throw std::invalid_argument(os.str());
    }
  };

  if (name == "exponential") {
    expect(1);
    return exponential(values[0]);
  }
  if (name == "bernoulli") {
    expect(2);
    return bernoulli(values[0], values[1]);
  }
  if (name == "constant") {
    expect(1);
    return constant(values[0]);
  }
  if (name == "uniform") {
    expect(2);
    return uniform(values[0], values[1]);
  }
  if (name == "empirical") return empirical(std::move(values));
  throw std::invalid_argument("unknown distribution kind '" + std::string(name) + "'");
}

double DistributionSpec::mean() const {
  switch (kind_) {
    case DistributionKind::exponential:
    case DistributionKind::constant:
      return params_[0];
    case DistributionKind::bernoulli:
      return params_[0] * params_[1];
    case DistributionKind::uniform:
      return 0.5 * (params_[0] + params_[1]);
    case DistributionKind::empirical: {
      double sum = 0.0;
      for (double s : params_) sum += s;
      return sum / static_cast<double>(params_.size());
    }
  }
  return 0.0;
}

double DistributionSpec::variance() const {
  switch (kind_) {
    case DistributionKind::exponential:
      return params_[0] * params_[0];
    case DistributionKind::constant:
      return 0.0;
    case DistributionKind::bernoulli:
      return params_[0] * params_[0] * params_[1] * (1.0 - params_[1]);
    case DistributionKind::uniform: {
      const double w = params_[1] - params_[0];
      return w * w / 12.0;
    }
    case DistributionKind::empirical: {
      const double m = mean();
      double ss = 0.0;
      for (double s : params_) ss += (s - m) * (s - m);
      return ss / static_cast<double>(params_.size());
    }
  }
  return 0.0;
}

DistributionSpec DistributionSpec::with_mean(double target) const {
  require(non_negative(target), "target mean must be >= 0");
  switch (kind_) {
    case DistributionKind::exponential:
      return exponential(target);
    case DistributionKind::constant:
      return constant(target);
    default:
      break;
  }
  const double current = mean();
  if (!(current > 0.0))
    throw std::invalid_argument("cannot rescale a " + std::string(ehsim::to_string(kind_)) +
                                " distribution with zero mean");
  const double factor = target / current;
  switch (kind_) {
    case DistributionKind::bernoulli:
      return bernoulli(params_[0] * factor, params_[1]);
    case DistributionKind::uniform:
      return uniform(params_[0] * factor, params_[1] * factor);
    default: {
      std::vector<double> scaled = params_;
      for (double& s : scaled) s *= factor;
      return empirical(std::move(scaled));
    }
  }
}

std::string DistributionSpec::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << ehsim::to_string(kind_) << ':';
  for (std::size_t i = 0; i < params_.size(); ++i) os << (i ? "," : "") << params_[i];
  return os.str();
}

std::string_view to_string(DistributionKind kind) {
  switch (kind) {
    case DistributionKind::exponential: return "exponential";
    case DistributionKind::bernoulli: return "bernoulli";
    case DistributionKind::constant: return "constant";
    case DistributionKind::uniform: return "uniform";
    case DistributionKind::empirical: return "empirical";
  }
  return "unknown";
}

EnergyTrace sample_trace(const DistributionSpec& spec, std::size_t horizon, Seed seed) {
  if (horizon == 0) throw DomainError("horizon must be at least one block");
  std::mt19937_64 gen(seed.value);
  const auto& p = spec.params();
  std::vector<double> arrivals(horizon);
  for (double& e : arrivals) {
    const double u = unit_uniform(gen);
    switch (spec.kind()) {
      case DistributionKind::exponential:
        // 1 - u lies in (0, 1], so the log is finite.
        e = 0.0 - p[0] * std::log1p(-u);
        break;
      case DistributionKind::bernoulli:
        e = u < p[1] ? p[0] : 0.0;
        break;
      case DistributionKind::constant:
        e = p[0];
        break;
      case DistributionKind::uniform:
        e = p[0] + (p[1] - p[0]) * u;
        break;
      case DistributionKind::empirical:
        e = p[static_cast<std::size_t>(u * static_cast<double>(p.size()))];
        break;
    }
  }
  return EnergyTrace(std::move(arrivals));
}

}  // namespace ehsim
