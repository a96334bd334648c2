#include "ehsim/opm.hpp"

#include <cmath>
#include <sstream>

namespace ehsim {

OpmSchedule opm_schedule(const EnergyTrace& trace) {
  const std::size_t n = trace.size();
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + trace[i];

  // Lower hull of (j, prefix[j]). Collinear vertices are dropped so every
  // stretch is as long as possible.
  std::vector<std::size_t> hull{0};
  for (std::size_t p = 1; p <= n; ++p) {
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2];
      const std::size_t b = hull.back();
      const double cross = static_cast<double>(b - a) * (prefix[p] - prefix[a]) -
                           (prefix[b] - prefix[a]) * static_cast<double>(p - a);
      if (cross > 0.0) break;
      hull.pop_back();
    }
    hull.push_back(p);
  }

  OpmSchedule out;
  out.powers.resize(n);
  for (std::size_t v = 1; v < hull.size(); ++v) {
    const std::size_t s = hull[v - 1];
    const std::size_t e = hull[v];
    const double level = (prefix[e] - prefix[s]) / static_cast<double>(e - s);
    for (std::size_t k = s; k < e; ++k) out.powers[k] = level;
  }
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (out.powers[i + 1] > out.powers[i]) out.change_points.push_back(i);
  return out;
}

PolicySchedule execute_opm(const EnergyTrace& trace, const SimConfig& config) {
  return evaluate(trace, opm_schedule(trace).powers, config);
}

OracleResult opm_oracle(const EnergyTrace& trace, double grid_step, const SimConfig& config) {
  const std::size_t n = trace.size();
  if (n > kOracleMaxBlocks) {
    std::ostringstream os;
    os << "opm_oracle: horizon " << n << " exceeds the exhaustive-search limit of "
       << kOracleMaxBlocks;
    throw DomainError(os.str());
  }
  if (!(grid_step > 0.0) || !std::isfinite(grid_step))
    throw DomainError("opm_oracle: grid step must be positive");

  // Cumulative harvest in whole grid units; the slack absorbs representation
  // error for arrivals that sit exactly on the grid.
  std::vector<long> harvest(n);
  double cumulative = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cumulative += trace[i];
    harvest[i] = static_cast<long>(std::floor(cumulative / grid_step + 1e-9));
  }

  std::vector<double> rate_of(static_cast<std::size_t>(harvest.back()) + 1);
  for (std::size_t u = 0; u < rate_of.size(); ++u)
    rate_of[u] = rate(static_cast<double>(u) * grid_step, config);

  std::vector<long> current(n, 0);
  std::vector<long> best(n, 0);
  double best_sum = -1.0;

  auto search = [&](auto&& self, std::size_t block, long used, double sum) -> void {
    const long available = harvest[block] - used;
    if (block + 1 == n) {
      current[block] = available;
      const double total = sum + rate_of[static_cast<std::size_t>(available)];
      if (total > best_sum) {
        best_sum = total;
        best = current;
      }
      return;
    }
    for (long q = 0; q <= available; ++q) {
      current[block] = q;
      self(self, block + 1, used + q, sum + rate_of[static_cast<std::size_t>(q)]);
    }
  };
  search(search, 0, 0, 0.0);

  OracleResult result;
  result.powers.reserve(n);
  for (long u : best) result.powers.push_back(static_cast<double>(u) * grid_step);
  result.throughput = best_sum / static_cast<double>(n);
  return result;
}

}  // namespace ehsim
