// Serialization of simulation results: CSV for sweeps, aligned text tables
// for single runs, JSON mirrors of both. Numbers are written in the shortest
// form that parses back to the same double, independent of locale.
#ifndef EHSIM_REPORT_HPP
#define EHSIM_REPORT_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ehsim/arrivals.hpp"
#include "ehsim/montecarlo.hpp"

namespace ehsim {

std::string format_double(double value);
double parse_double(std::string_view text);

inline constexpr std::string_view kSweepCsvHeader =
    "sweep_param,value,policy,mean_throughput,stddev,stderr,replications";

void write_sweep_csv(std::ostream& out, const SweepResult& result);
nlohmann::json sweep_to_json(const SweepResult& result);

struct SweepCsvRow {
  std::string sweep_param;
  double value = 0.0;
  std::string policy;
  double mean_throughput = 0.0;
  double stddev = 0.0;
  double standard_error = 0.0;
  std::size_t replications = 0;
};

/// Reads back a file produced by write_sweep_csv. Throws
/// std::invalid_argument on a malformed header or row.
std::vector<SweepCsvRow> read_sweep_csv(std::istream& in);

/// One trace, every requested policy.
struct RunReport {
  std::string distribution;
  std::size_t horizon = 0;
  std::uint64_t seed = 0;
  std::vector<PolicyKind> policies;
  std::vector<double> throughputs;
  std::vector<std::size_t> idle_blocks;
};

void write_run_table(std::ostream& out, const RunReport& report);
void write_run_csv(std::ostream& out, const RunReport& report);
nlohmann::json run_to_json(const RunReport& report);

/// Long-format per-block dump: policy,block,arrival,power,rate,battery.
void write_schedule_csv(std::ostream& out, const EnergyTrace& trace,
                        const std::vector<std::pair<PolicyKind, PolicySchedule>>& schedules);

}  // namespace ehsim

#endif  // EHSIM_REPORT_HPP
