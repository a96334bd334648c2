#include "ehsim/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>

#include "ehsim/opm.hpp"

#ifdef EHSIM_HAVE_OPENMP
#include <omp.h>
#endif

namespace ehsim {

std::string_view to_string(SweepParameter parameter) {
  return parameter == SweepParameter::mean ? "mean" : "horizon";
}

void SweepPlan::validate() const {
  if (replications == 0) throw std::invalid_argument("replications must be at least 1");
  if (values.empty()) throw std::invalid_argument("sweep values must not be empty");
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument("sweep values must be positive");
    if (parameter == SweepParameter::horizon && v != std::floor(v))
      throw std::invalid_argument("horizon sweep values must be whole block counts");
  }
  if (parameter == SweepParameter::mean && horizon == 0)
    throw std::invalid_argument("horizon must be at least 1");
  if (policies.empty()) throw std::invalid_argument("policy set must not be empty");
  for (std::size_t i = 0; i < policies.size(); ++i)
    for (std::size_t j = i + 1; j < policies.size(); ++j)
      if (policies[i] == policies[j])
        throw std::invalid_argument("policy '" + std::string(to_string(policies[i])) +
                                    "' listed twice");
  PolicyParams::from_mean(distribution.mean(), epsilon_rel, sat_alpha);
  config.validate();
}

const PolicyStats& SweepPoint::stats(PolicyKind kind) const {
  for (const auto& s : policies)
    if (s.kind == kind) return s;
  throw std::out_of_range("policy '" + std::string(to_string(kind)) + "' not in sweep result");
}

PolicySchedule run_policy(const EnergyTrace& trace, PolicyKind kind, double mean_arrival,
                          double epsilon_rel, double sat_alpha, const SimConfig& config) {
  if (kind == PolicyKind::ub) throw std::invalid_argument("the upper bound has no schedule");
  if (kind == PolicyKind::opm) return execute_opm(trace, config);
  const Policy policy(kind, PolicyParams::from_mean(mean_arrival, epsilon_rel, sat_alpha));
  return execute(trace, policy, config);
}

TraceOutcome simulate_trace(const EnergyTrace& trace, double mean_arrival,
                            const std::vector<PolicyKind>& policies, double epsilon_rel,
                            double sat_alpha, const SimConfig& config) {
  TraceOutcome out;
  out.upper_bound = upper_bound(trace, config);
  out.throughputs.reserve(policies.size());
  out.idle_blocks.reserve(policies.size());
  for (const PolicyKind kind : policies) {
    try {
      if (kind == PolicyKind::ub) {
        out.throughputs.push_back(out.upper_bound);
        out.idle_blocks.push_back(0);
        continue;
      }
      const auto schedule = run_policy(trace, kind, mean_arrival, epsilon_rel, sat_alpha, config);
      out.throughputs.push_back(throughput(schedule));
      if (is_online(kind)) {
        const Policy policy(kind, PolicyParams::from_mean(mean_arrival, epsilon_rel, sat_alpha));
        out.idle_blocks.push_back(idle_blocks(policy, schedule));
      } else {
        out.idle_blocks.push_back(0);
      }
    } catch (const std::exception& e) {
      throw SimulationError("policy " + std::string(to_string(kind)) + ": " + e.what());
    }
  }
  return out;
}

namespace {

// Flat per-task storage; task t = point * R + replication.
struct SweepBuffers {
  std::size_t policy_count = 0;
  std::vector<double> throughput;  // [task * policy_count + p]
  std::vector<double> idle;
  std::vector<double> bound;  // [task]
  std::vector<std::exception_ptr> errors;
};

struct PointSetup {
  DistributionSpec distribution;
  std::size_t horizon;
};

std::vector<PointSetup> setup_points(const SweepPlan& plan) {
  std::vector<PointSetup> points;
  points.reserve(plan.values.size());
  for (double v : plan.values) {
    if (plan.parameter == SweepParameter::mean)
      points.push_back({plan.distribution.with_mean(v), plan.horizon});
    else
      points.push_back({plan.distribution, static_cast<std::size_t>(v)});
  }
  return points;
}

void run_task(const SweepPlan& plan, const std::vector<PointSetup>& points, std::size_t task,
              SweepBuffers& buf) {
  const std::size_t point = task / plan.replications;
  const std::size_t rep = task % plan.replications;
  try {
    const auto& setup = points[point];
    const auto trace = sample_trace(setup.distribution, setup.horizon, Seed{plan.base_seed + rep});
    const auto outcome = simulate_trace(trace, setup.distribution.mean(), plan.policies,
                                        plan.epsilon_rel, plan.sat_alpha, plan.config);
    for (std::size_t p = 0; p < buf.policy_count; ++p) {
      buf.throughput[task * buf.policy_count + p] = outcome.throughputs[p];
      buf.idle[task * buf.policy_count + p] = static_cast<double>(outcome.idle_blocks[p]);
    }
    buf.bound[task] = outcome.upper_bound;
  } catch (const std::exception& e) {
    std::ostringstream os;
    os.precision(17);
    os << to_string(plan.parameter) << " = " << plan.values[point] << ", replication " << rep
       << ", " << e.what();
    buf.errors[task] = std::make_exception_ptr(SimulationError(os.str()));
  }
}

SweepBuffers allocate(const SweepPlan& plan) {
  const std::size_t tasks = plan.values.size() * plan.replications;
  SweepBuffers buf;
  buf.policy_count = plan.policies.size();
  buf.throughput.assign(tasks * buf.policy_count, 0.0);
  buf.idle.assign(tasks * buf.policy_count, 0.0);
  buf.bound.assign(tasks, 0.0);
  buf.errors.assign(tasks, nullptr);
  return buf;
}

// Fixed-order fold so the result does not depend on task scheduling.
SweepResult aggregate(const SweepPlan& plan, const SweepBuffers& buf) {
  for (const auto& err : buf.errors)
    if (err) std::rethrow_exception(err);

  const std::size_t reps = plan.replications;
  const double n = static_cast<double>(reps);
  SweepResult result;
  result.parameter = plan.parameter;
  for (std::size_t point = 0; point < plan.values.size(); ++point) {
    SweepPoint sp;
    sp.value = plan.values[point];
    double bound_sum = 0.0;
    for (std::size_t r = 0; r < reps; ++r) bound_sum += buf.bound[point * reps + r];
    sp.upper_bound_mean = bound_sum / n;

    for (std::size_t p = 0; p < buf.policy_count; ++p) {
      auto at = [&](const std::vector<double>& v, std::size_t r) {
        return v[(point * reps + r) * buf.policy_count + p];
      };
      double sum = 0.0;
      double idle_sum = 0.0;
      for (std::size_t r = 0; r < reps; ++r) {
        sum += at(buf.throughput, r);
        idle_sum += at(buf.idle, r);
      }
      const double mean = sum / n;
      double ss = 0.0;
      for (std::size_t r = 0; r < reps; ++r) {
        const double d = at(buf.throughput, r) - mean;
        ss += d * d;
      }
      PolicyStats stats{plan.policies[p]};
      stats.mean = mean;
      stats.stddev = reps > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
      stats.standard_error = stats.stddev / std::sqrt(n);
      stats.replications = reps;
      stats.mean_idle_blocks = idle_sum / n;
      if (stats.mean > sp.upper_bound_mean + plan.config.tolerance)
        throw InvariantViolation("mean throughput of " + std::string(to_string(stats.kind)) +
                                 " exceeds the mean upper bound");
      sp.policies.push_back(stats);
    }
    result.points.push_back(std::move(sp));
  }
  return result;
}

}  // namespace

SweepResult run_sweep(const SweepPlan& plan, int threads) {
  plan.validate();
  const auto points = setup_points(plan);
  auto buf = allocate(plan);
  const auto tasks = static_cast<std::int64_t>(plan.values.size() * plan.replications);

#ifdef EHSIM_HAVE_OPENMP
  const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(team)
  for (std::int64_t t = 0; t < tasks; ++t)
    run_task(plan, points, static_cast<std::size_t>(t), buf);
#else
  (void)threads;
  for (std::int64_t t = 0; t < tasks; ++t)
    run_task(plan, points, static_cast<std::size_t>(t), buf);
#endif

  return aggregate(plan, buf);
}

SweepResult run_sweep_serial(const SweepPlan& plan) {
  plan.validate();
  const auto points = setup_points(plan);
  auto buf = allocate(plan);
  const std::size_t tasks = plan.values.size() * plan.replications;
  for (std::size_t t = 0; t < tasks; ++t) run_task(plan, points, t, buf);
  return aggregate(plan, buf);
}

}  // namespace ehsim
