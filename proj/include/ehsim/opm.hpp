#ifndef EHSIM_OPM_HPP
#define EHSIM_OPM_HPP

#include <cstddef>
#include <vector>

#include "ehsim/model.hpp"

namespace ehsim {

/// Offline optimal schedule: the taut string under the cumulative-harvest
/// curve. Powers form a non-decreasing staircase.
struct OpmSchedule {
  std::vector<double> powers;
  /// Zero-based blocks after which the power strictly increases. Cumulative
  /// spend equals cumulative harvest at each of them.
  std::vector<std::size_t> change_points;
};

/// Starting from block s, the stretch ends at the largest j minimizing the
/// average arrival over s..j; that average is the stretch's power. Built as
/// the lower convex hull of the prefix-sum curve in O(L).
OpmSchedule opm_schedule(const EnergyTrace& trace);

/// Runs the offline schedule through the battery recursion.
PolicySchedule execute_opm(const EnergyTrace& trace, const SimConfig& config = {});

struct OracleResult {
  std::vector<double> powers;
  double throughput = 0.0;
};

inline constexpr std::size_t kOracleMaxBlocks = 6;

/// Exhaustive search over power vectors on {0, step, 2 step, ...} that
/// respect cumulative causality. The final block always drains what is
/// left, which loses nothing since rate is increasing. Horizons above
/// kOracleMaxBlocks are rejected.
OracleResult opm_oracle(const EnergyTrace& trace, double grid_step = 0.05,
                        const SimConfig& config = {});

}  // namespace ehsim

#endif  // EHSIM_OPM_HPP
