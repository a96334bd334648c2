#include "ehsim/report.hpp"

#include <array>
#include <charconv>
#include <iomanip>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace ehsim {

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw std::runtime_error("failed to format number");
  return std::string(buf.data(), ptr);
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  return value;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << kSweepCsvHeader << '\n';
  const auto param = to_string(result.parameter);
  for (const auto& point : result.points) {
    for (const auto& s : point.policies) {
      out << param << ',' << format_double(point.value) << ',' << to_string(s.kind) << ','
          << format_double(s.mean) << ',' << format_double(s.stddev) << ','
          << format_double(s.standard_error) << ',' << s.replications << '\n';
    }
  }
}

nlohmann::json sweep_to_json(const SweepResult& result) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& point : result.points) {
    nlohmann::json policies = nlohmann::json::array();
    for (const auto& s : point.policies) {
      policies.push_back({{"policy", to_string(s.kind)},
                          {"mean_throughput", s.mean},
                          {"stddev", s.stddev},
                          {"stderr", s.standard_error},
                          {"replications", s.replications},
                          {"mean_idle_blocks", s.mean_idle_blocks}});
    }
    points.push_back({{"value", point.value},
                      {"upper_bound_mean", point.upper_bound_mean},
                      {"policies", std::move(policies)}});
  }
  return {{"sweep_param", to_string(result.parameter)}, {"points", std::move(points)}};
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    fields.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

}  // namespace

std::vector<SweepCsvRow> read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kSweepCsvHeader)
    throw std::invalid_argument("unexpected sweep CSV header");
  std::vector<SweepCsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 7) throw std::invalid_argument("sweep CSV row must have 7 fields: " + line);
    SweepCsvRow row;
    row.sweep_param = f[0];
    row.value = parse_double(f[1]);
    row.policy = f[2];
    row.mean_throughput = parse_double(f[3]);
    row.stddev = parse_double(f[4]);
    row.standard_error = parse_double(f[5]);
    std::size_t reps = 0;
    const auto [ptr, ec] = std::from_chars(f[6].data(), f[6].data() + f[6].size(), reps);
    if (ec != std::errc{} || ptr != f[6].data() + f[6].size())
      throw std::invalid_argument("bad replication count: " + line);
    row.replications = reps;
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_run_table(std::ostream& out, const RunReport& report) {
  out << "distribution " << report.distribution << ", L = " << report.horizon
      << ", seed = " << report.seed << '\n';
  out << std::left << std::setw(8) << "policy" << std::right << std::setw(22) << "throughput"
      << std::setw(8) << "idle" << '\n';
  for (std::size_t i = 0; i < report.policies.size(); ++i) {
    out << std::left << std::setw(8) << to_string(report.policies[i]) << std::right
        << std::setw(22) << format_double(report.throughputs[i]) << std::setw(8)
        << report.idle_blocks[i] << '\n';
  }
}

void write_run_csv(std::ostream& out, const RunReport& report) {
  out << "policy,throughput,idle_blocks\n";
  for (std::size_t i = 0; i < report.policies.size(); ++i)
    out << to_string(report.policies[i]) << ',' << format_double(report.throughputs[i]) << ','
        << report.idle_blocks[i] << '\n';
}

nlohmann::json run_to_json(const RunReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < report.policies.size(); ++i)
    rows.push_back({{"policy", to_string(report.policies[i])},
                    {"throughput", report.throughputs[i]},
                    {"idle_blocks", report.idle_blocks[i]}});
  return {{"distribution", report.distribution},
          {"L", report.horizon},
          {"seed", report.seed},
          {"policies", std::move(rows)}};
}

void write_schedule_csv(std::ostream& out, const EnergyTrace& trace,
                        const std::vector<std::pair<PolicyKind, PolicySchedule>>& schedules) {
  out << "policy,block,arrival,power,rate,battery\n";
  for (const auto& [kind, schedule] : schedules) {
    for (std::size_t i = 0; i < schedule.size(); ++i) {
      out << to_string(kind) << ',' << (i + 1) << ',' << format_double(trace[i]) << ','
          << format_double(schedule.powers[i]) << ',' << format_double(schedule.rates[i]) << ','
          << format_double(schedule.battery[i]) << '\n';
    }
  }
}

}  // namespace ehsim
