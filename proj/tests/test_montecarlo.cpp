#include <doctest.h>

#include <cmath>
#include <cstring>

#include "ehsim/montecarlo.hpp"

using namespace ehsim;

namespace {

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

void check_identical(const SweepResult& a, const SweepResult& b) {
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    const auto& pa = a.points[i];
    const auto& pb = b.points[i];
    CHECK(bit_equal(pa.value, pb.value));
    CHECK(bit_equal(pa.upper_bound_mean, pb.upper_bound_mean));
    REQUIRE(pa.policies.size() == pb.policies.size());
    for (std::size_t p = 0; p < pa.policies.size(); ++p) {
      CHECK(pa.policies[p].kind == pb.policies[p].kind);
      CHECK(bit_equal(pa.policies[p].mean, pb.policies[p].mean));
      CHECK(bit_equal(pa.policies[p].stddev, pb.policies[p].stddev));
      CHECK(bit_equal(pa.policies[p].standard_error, pb.policies[p].standard_error));
      CHECK(bit_equal(pa.policies[p].mean_idle_blocks, pb.policies[p].mean_idle_blocks));
    }
  }
}

}  // namespace

TEST_CASE("constant arrivals remove all randomness") {
  SweepPlan plan;
  plan.distribution = DistributionSpec::constant(5.0);
  plan.values = {5.0};
  plan.horizon = 64;
  plan.replications = 3;
  plan.epsilon_rel = 0.0;  // P = 5 exactly
  const auto result = run_sweep(plan);
  const auto& point = result.points.at(0);
  const double r5 = rate(5.0);
  for (auto kind : {PolicyKind::naive, PolicyKind::bet, PolicyKind::apa, PolicyKind::opm,
                    PolicyKind::ub}) {
    CAPTURE(to_string(kind));
    CHECK(point.stats(kind).mean == doctest::Approx(r5).epsilon(1e-14));
    CHECK(point.stats(kind).stddev == 0.0);
  }
  const double h = static_cast<double>(save_blocks(64, 0.5));
  CHECK(point.stats(PolicyKind::sat).mean == doctest::Approx((64.0 - h) / 64.0 * r5).epsilon(1e-14));
}

TEST_CASE("parallel sweep is bit-identical to the serial reference") {
  SweepPlan plan;
  plan.distribution = DistributionSpec::exponential(10.0);
  plan.values = {1.0, 5.0, 20.0};
  plan.horizon = 200;
  plan.replications = 40;
  plan.base_seed = 17;
  const auto serial = run_sweep_serial(plan);
  check_identical(serial, run_sweep(plan, 1));
  check_identical(serial, run_sweep(plan, 4));
  check_identical(run_sweep(plan, 3), run_sweep(plan, 3));
}

TEST_CASE("horizon sweep uses the template unchanged") {
  SweepPlan plan;
  plan.distribution = DistributionSpec::exponential(10.0);
  plan.parameter = SweepParameter::horizon;
  plan.values = {10.0, 100.0};
  plan.replications = 5;
  const auto r = run_sweep(plan);
  CHECK(r.parameter == SweepParameter::horizon);
  CHECK(r.points[0].value == 10.0);
  CHECK(r.points[1].value == 100.0);
}

TEST_CASE("common random numbers: replication r sees the seed base + r trace") {
  SweepPlan plan;
  plan.distribution = DistributionSpec::exponential(3.0);
  plan.values = {3.0};
  plan.horizon = 80;
  plan.replications = 1;
  plan.base_seed = 555;
  const auto result = run_sweep(plan);

  const auto trace = sample_trace(plan.distribution, plan.horizon, Seed{555});
  const auto direct =
      simulate_trace(trace, 3.0, plan.policies, plan.epsilon_rel, plan.sat_alpha, plan.config);
  for (std::size_t p = 0; p < plan.policies.size(); ++p)
    CHECK(bit_equal(result.points[0].policies[p].mean, direct.throughputs[p]));
  CHECK(bit_equal(result.points[0].upper_bound_mean, direct.upper_bound));
}

TEST_CASE("aggregate statistics") {
  SweepPlan plan;
  plan.distribution = DistributionSpec::exponential(10.0);
  plan.values = {10.0};
  plan.horizon = 50;
  plan.replications = 25;
  plan.policies = {PolicyKind::naive};
  const auto stats = run_sweep(plan).points[0].stats(PolicyKind::naive);

  double sum = 0.0, ss = 0.0;
  std::vector<double> x;
  for (std::uint64_t r = 0; r < 25; ++r) {
    const auto trace = sample_trace(plan.distribution, 50, Seed{plan.base_seed + r});
    double acc = 0.0;
    for (double e : trace.arrivals()) acc += rate(e);
    x.push_back(acc / 50.0);
    sum += x.back();
  }
  const double m = sum / 25.0;
  for (double v : x) ss += (v - m) * (v - m);
  CHECK(stats.mean == doctest::Approx(m).epsilon(1e-12));
  CHECK(stats.stddev == doctest::Approx(std::sqrt(ss / 24.0)).epsilon(1e-10));
  CHECK(stats.standard_error == doctest::Approx(stats.stddev / 5.0).epsilon(1e-14));
  CHECK(stats.replications == 25);
}

TEST_CASE("every mean stays below the mean bound") {
  SweepPlan plan;
  plan.distribution = DistributionSpec::uniform(0.0, 4.0);
  plan.values = {0.5, 2.0, 8.0};
  plan.horizon = 150;
  plan.replications = 20;
  for (const auto& point : run_sweep(plan).points)
    for (const auto& s : point.policies) CHECK(s.mean <= point.upper_bound_mean + 1e-9);
}

TEST_CASE("plan validation") {
  SweepPlan plan;
  plan.replications = 0;
  CHECK_THROWS_AS(run_sweep(plan), std::invalid_argument);

  plan = SweepPlan{};
  plan.values = {};
  CHECK_THROWS_AS(run_sweep(plan), std::invalid_argument);

  plan = SweepPlan{};
  plan.values = {-1.0};
  CHECK_THROWS_AS(run_sweep(plan), std::invalid_argument);

  plan = SweepPlan{};
  plan.parameter = SweepParameter::horizon;
  plan.values = {10.5};
  CHECK_THROWS_AS(run_sweep(plan), std::invalid_argument);

  plan = SweepPlan{};
  plan.policies = {PolicyKind::bet, PolicyKind::bet};
  CHECK_THROWS_AS(run_sweep(plan), std::invalid_argument);

  plan = SweepPlan{};
  plan.sat_alpha = 1.5;
  CHECK_THROWS_AS(run_sweep_serial(plan), std::invalid_argument);
}

TEST_CASE("simulation errors carry sweep context") {
  // Draws from an exponential law this wide overflow to infinity, which the
  // trace constructor rejects inside the replication task.
  SweepPlan plan;
  plan.distribution = DistributionSpec::exponential(1e308);
  plan.values = {1e308};
  plan.horizon = 100;
  plan.replications = 2;
  for (int threads : {1, 2}) {
    try {
      run_sweep(plan, threads);
      FAIL("expected a simulation error");
    } catch (const SimulationError& e) {
      const std::string what = e.what();
      CHECK(what.find("mean = ") != std::string::npos);
      CHECK(what.find("replication 0") != std::string::npos);
    }
  }

  CHECK_THROWS_AS(run_policy(EnergyTrace({1.0}), PolicyKind::ub, 1.0, 0.01, 0.5, {}),
                  std::invalid_argument);
}

TEST_CASE("zero-mean template cannot be rescaled") {
  SweepPlan plan;
  plan.distribution = DistributionSpec::empirical({0.0, 0.0});
  plan.values = {1.0};
  plan.replications = 1;
  CHECK_THROWS_AS(run_sweep(plan), std::invalid_argument);
}
