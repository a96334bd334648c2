#include "ehsim/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ehsim/report.hpp"

namespace ehsim::cli {

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw std::invalid_argument("empty entry in list '" + text + "'");
    items.push_back(item);
  }
  if (items.empty()) throw std::invalid_argument("empty list");
  return items;
}

std::uint64_t parse_seed(const std::string& text) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
    throw std::invalid_argument("seed must be an unsigned 64-bit integer, got '" + text + "'");
  return value;
}

double json_number(const nlohmann::json& v, const char* key) {
  if (!v.is_number()) throw std::invalid_argument(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

std::size_t json_count(const nlohmann::json& v, const char* key) {
  if (!v.is_number_unsigned() || v.get<std::size_t>() == 0)
    throw std::invalid_argument(std::string("'") + key + "' must be a positive integer");
  return v.get<std::size_t>();
}

std::vector<double> json_values(const nlohmann::json& v, const char* key) {
  if (!v.is_array() || v.empty())
    throw std::invalid_argument(std::string("'") + key + "' must be a non-empty array");
  std::vector<double> out;
  for (const auto& x : v) out.push_back(json_number(x, key));
  return out;
}

DistributionSpec distribution_from_json(const nlohmann::json& v) {
  if (v.is_string()) return DistributionSpec::parse(v.get<std::string>());
  if (!v.is_object() || !v.contains("kind"))
    throw std::invalid_argument("'dist' must be a string or an object with a 'kind'");
  const auto kind = v.at("kind").get<std::string>();
  auto field = [&](const char* name) {
    if (!v.contains(name))
      throw std::invalid_argument("distribution '" + kind + "' needs '" + name + "'");
    return json_number(v.at(name), name);
  };
  if (kind == "exponential") return DistributionSpec::exponential(field("mean"));
  if (kind == "bernoulli")
    return DistributionSpec::bernoulli(field("peak"), field("probability"));
  if (kind == "constant") return DistributionSpec::constant(field("value"));
  if (kind == "uniform") return DistributionSpec::uniform(field("low"), field("high"));
  if (kind == "empirical") {
    if (!v.contains("samples")) throw std::invalid_argument("empirical needs 'samples'");
    return DistributionSpec::empirical(json_values(v.at("samples"), "samples"));
  }
  throw std::invalid_argument("unknown distribution kind '" + kind + "'");
}

std::ostream& open_output(const std::string& path, std::ofstream& file, std::ostream& fallback) {
  if (path.empty()) return fallback;
  file.open(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output file '" + path + "'");
  return file;
}

// Raw flag values; an option counts only when given on the command line.
struct Flags {
  std::string config_path;
  std::string dist;
  std::size_t horizon = 0;
  std::string mean_sweep;
  std::string horizon_sweep;
  std::size_t reps = 0;
  std::string seed;
  std::string policies;
  double epsilon_rel = 0.0;
  double sat_alpha = 0.0;
  std::string log_base;
  std::string out;
  std::string format;
  std::string schedule_out;
  int threads = 0;
};

struct BoundOptions {
  CLI::Option* dist;
  CLI::Option* horizon;
  CLI::Option* mean_sweep = nullptr;
  CLI::Option* horizon_sweep = nullptr;
  CLI::Option* reps = nullptr;
  CLI::Option* seed;
  CLI::Option* policies;
  CLI::Option* epsilon_rel;
  CLI::Option* sat_alpha;
  CLI::Option* log_base;
  CLI::Option* out;
  CLI::Option* format;
  CLI::Option* schedule_out = nullptr;
  CLI::Option* threads = nullptr;
};

BoundOptions bind_common(CLI::App& cmd, Flags& f) {
  BoundOptions o{};
  cmd.add_option("--config", f.config_path, "JSON config file (flags override it)")
      ->check(CLI::ExistingFile);
  o.dist = cmd.add_option("--dist", f.dist,
                          "Arrival law kind:params, e.g. exponential:10, bernoulli:10,0.5");
  o.horizon = cmd.add_option("--L", f.horizon, "Number of blocks")->check(CLI::PositiveNumber);
  o.seed = cmd.add_option("--seed", f.seed, "Base seed (fallback: EH_SIM_SEED)");
  o.policies = cmd.add_option("--policies", f.policies, "Comma list of naive,sat,bet,apa,opm,ub");
  o.epsilon_rel = cmd.add_option("--epsilon-rel", f.epsilon_rel, "Relative margin, P = mean(1-eps)");
  o.sat_alpha = cmd.add_option("--sat-alpha", f.sat_alpha, "SAT save phase ceil(L^alpha)");
  o.log_base = cmd.add_option("--log-base", f.log_base, "Rate units: 2 (bits) or e (nats)");
  o.out = cmd.add_option("--out", f.out, "Output path (default stdout)");
  o.format = cmd.add_option("--format", f.format, "csv, json or table");
  return o;
}

void apply_flags(RunConfig& config, const Flags& f, const BoundOptions& o) {
  if (o.dist->count()) config.distribution = DistributionSpec::parse(f.dist);
  if (o.horizon->count()) config.horizon = f.horizon;
  if (o.mean_sweep && o.mean_sweep->count()) {
    config.mean_sweep = parse_value_list(f.mean_sweep);
    config.horizon_sweep.clear();
  }
  if (o.horizon_sweep && o.horizon_sweep->count()) {
    config.horizon_sweep = parse_value_list(f.horizon_sweep);
    if (!(o.mean_sweep && o.mean_sweep->count())) config.mean_sweep.clear();
  }
  if (o.reps && o.reps->count()) config.replications = f.reps;
  if (o.seed->count()) config.seed = parse_seed(f.seed);
  if (o.policies->count()) config.policies = parse_policy_list(f.policies);
  if (o.epsilon_rel->count()) config.epsilon_rel = f.epsilon_rel;
  if (o.sat_alpha->count()) config.sat_alpha = f.sat_alpha;
  if (o.log_base->count()) config.log_base = parse_log_base(f.log_base);
  if (o.out->count()) config.out = f.out;
  if (o.format->count()) config.format = parse_format(f.format);
  if (o.schedule_out && o.schedule_out->count()) config.schedule_out = f.schedule_out;
  if (o.threads && o.threads->count()) config.threads = f.threads;
}

RunConfig resolve(const Flags& f, const BoundOptions& o) {
  RunConfig config;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw std::invalid_argument("config file '" + f.config_path + "': " + e.what());
    }
    apply_config_file(config, doc);
  }
  if (!config.seed && !o.seed->count()) {
    if (const char* env = std::getenv("EH_SIM_SEED"); env && *env) config.seed = parse_seed(env);
  }
  apply_flags(config, f, o);
  if (!config.mean_sweep.empty() && !config.horizon_sweep.empty())
    throw std::invalid_argument("choose either a mean sweep or an L sweep, not both");
  return config;
}

SimConfig sim_config(const RunConfig& config) {
  SimConfig sim;
  sim.log_base = config.log_base;
  return sim;
}

void cmd_run(const RunConfig& config, std::ostream& stdout_stream) {
  const double mean_arrival = config.distribution.mean();
  const auto sim = sim_config(config);
  const std::uint64_t seed = config.seed_or_default();
  const auto trace = sample_trace(config.distribution, config.horizon, Seed{seed});

  RunReport report;
  report.distribution = config.distribution.to_string();
  report.horizon = config.horizon;
  report.seed = seed;
  report.policies = config.policies;

  const auto outcome = simulate_trace(trace, mean_arrival, config.policies, config.epsilon_rel,
                                      config.sat_alpha, sim);
  report.throughputs = outcome.throughputs;
  report.idle_blocks = outcome.idle_blocks;

  if (!config.schedule_out.empty()) {
    std::vector<std::pair<PolicyKind, PolicySchedule>> schedules;
    for (const auto kind : config.policies)
      if (kind != PolicyKind::ub)
        schedules.emplace_back(kind, run_policy(trace, kind, mean_arrival, config.epsilon_rel,
                                                config.sat_alpha, sim));
    std::ofstream file(config.schedule_out, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open '" + config.schedule_out + "'");
    write_schedule_csv(file, trace, schedules);
  }

  std::ofstream file;
  std::ostream& out = open_output(config.out, file, stdout_stream);
  switch (config.format.value_or(OutputFormat::table)) {
    case OutputFormat::table: write_run_table(out, report); break;
    case OutputFormat::csv: write_run_csv(out, report); break;
    case OutputFormat::json: out << run_to_json(report).dump(2) << '\n'; break;
  }
}

void cmd_sweep(const RunConfig& config, std::ostream& stdout_stream) {
  const auto plan = to_sweep_plan(config);
  const auto result = run_sweep(plan, config.threads);

  std::ofstream file;
  std::ostream& out = open_output(config.out, file, stdout_stream);
  switch (config.format.value_or(OutputFormat::csv)) {
    case OutputFormat::csv: write_sweep_csv(out, result); break;
    case OutputFormat::json: out << sweep_to_json(result).dump(2) << '\n'; break;
    case OutputFormat::table: {
      out << std::left << std::setw(10) << to_string(result.parameter) << std::setw(8)
          << "policy" << std::right << std::setw(22) << "mean" << std::setw(22) << "stderr"
          << '\n';
      for (const auto& p : result.points)
        for (const auto& s : p.policies)
          out << std::left << std::setw(10) << format_double(p.value) << std::setw(8)
              << to_string(s.kind) << std::right << std::setw(22) << format_double(s.mean)
              << std::setw(22) << format_double(s.standard_error) << '\n';
      break;
    }
  }
}

}  // namespace

std::vector<PolicyKind> parse_policy_list(const std::string& text) {
  std::vector<PolicyKind> kinds;
  for (const auto& name : split_list(text)) {
    const auto kind = parse_policy_kind(name);
    if (!kind) throw std::invalid_argument("unknown policy '" + name + "'");
    kinds.push_back(*kind);
  }
  return kinds;
}

std::vector<double> parse_value_list(const std::string& text) {
  std::vector<double> values;
  for (const auto& item : split_list(text)) values.push_back(parse_double(item));
  return values;
}

LogBase parse_log_base(const std::string& text) {
  if (text == "2") return LogBase::bits;
  if (text == "e") return LogBase::nats;
  throw std::invalid_argument("log base must be '2' or 'e', got '" + text + "'");
}

OutputFormat parse_format(const std::string& text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  if (text == "table") return OutputFormat::table;
  throw std::invalid_argument("format must be csv, json or table, got '" + text + "'");
}

void apply_config_file(RunConfig& config, const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("config file must hold a JSON object");
  for (const auto& [key, v] : doc.items()) {
    if (key == "dist") {
      config.distribution = distribution_from_json(v);
    } else if (key == "L") {
      config.horizon = json_count(v, "L");
    } else if (key == "sweep") {
      if (!v.is_object() || v.size() != 1 || !(v.contains("mean") || v.contains("L")))
        throw std::invalid_argument("'sweep' must hold exactly one of 'mean' or 'L'");
      if (v.contains("mean")) {
        config.mean_sweep = json_values(v.at("mean"), "sweep.mean");
        config.horizon_sweep.clear();
      } else {
        config.horizon_sweep = json_values(v.at("L"), "sweep.L");
        config.mean_sweep.clear();
      }
    } else if (key == "reps") {
      config.replications = json_count(v, "reps");
    } else if (key == "seed") {
      if (!v.is_number_unsigned()) throw std::invalid_argument("'seed' must be unsigned");
      config.seed = v.get<std::uint64_t>();
    } else if (key == "policies") {
      if (v.is_string()) {
        config.policies = parse_policy_list(v.get<std::string>());
      } else if (v.is_array()) {
        std::string joined;
        for (const auto& p : v) joined += (joined.empty() ? "" : ",") + p.get<std::string>();
        config.policies = parse_policy_list(joined);
      } else {
        throw std::invalid_argument("'policies' must be a string or array");
      }
    } else if (key == "epsilon_rel") {
      config.epsilon_rel = json_number(v, "epsilon_rel");
    } else if (key == "sat_alpha") {
      config.sat_alpha = json_number(v, "sat_alpha");
    } else if (key == "log_base") {
      config.log_base = parse_log_base(v.is_string() ? v.get<std::string>() : v.dump());
    } else if (key == "threads") {
      if (!v.is_number_integer()) throw std::invalid_argument("'threads' must be an integer");
      config.threads = v.get<int>();
    } else if (key == "output") {
      if (!v.is_object()) throw std::invalid_argument("'output' must be an object");
      for (const auto& [okey, ov] : v.items()) {
        if (okey == "path")
          config.out = ov.get<std::string>();
        else if (okey == "format")
          config.format = parse_format(ov.get<std::string>());
        else if (okey == "schedule")
          config.schedule_out = ov.get<std::string>();
        else
          throw std::invalid_argument("unknown key 'output." + okey + "'");
      }
    } else {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
}

SweepPlan to_sweep_plan(const RunConfig& config) {
  SweepPlan plan;
  plan.distribution = config.distribution;
  if (!config.horizon_sweep.empty()) {
    plan.parameter = SweepParameter::horizon;
    plan.values = config.horizon_sweep;
  } else {
    plan.parameter = SweepParameter::mean;
    plan.values = config.mean_sweep.empty() ? default_mean_grid() : config.mean_sweep;
  }
  plan.horizon = config.horizon;
  plan.replications = config.replications;
  plan.base_seed = config.seed_or_default();
  plan.policies = config.policies;
  plan.epsilon_rel = config.epsilon_rel;
  plan.sat_alpha = config.sat_alpha;
  plan.config = sim_config(config);
  plan.validate();
  return plan;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Energy-harvesting transmitter power-management simulator", "eh_sim"};
  app.require_subcommand(1);

  Flags run_flags;
  auto* run = app.add_subcommand("run", "Simulate one trace and print per-policy throughput");
  auto run_opts = bind_common(*run, run_flags);
  run_opts.schedule_out =
      run->add_option("--schedule-out", run_flags.schedule_out, "Write per-block schedules (CSV)");

  Flags sweep_flags;
  auto* sweep = app.add_subcommand("sweep", "Replicated sweep over the mean or the horizon");
  auto sweep_opts = bind_common(*sweep, sweep_flags);
  sweep_opts.mean_sweep =
      sweep->add_option("--mean-sweep", sweep_flags.mean_sweep, "Comma list of arrival means");
  sweep_opts.horizon_sweep =
      sweep->add_option("--L-sweep", sweep_flags.horizon_sweep, "Comma list of horizons");
  sweep_opts.reps =
      sweep->add_option("--reps", sweep_flags.reps, "Replications per point")
          ->check(CLI::PositiveNumber);
  sweep_opts.threads = sweep->add_option("--threads", sweep_flags.threads, "OpenMP threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  RunConfig config;
  try {
    config = run->parsed() ? resolve(run_flags, run_opts) : resolve(sweep_flags, sweep_opts);
    if (sweep->parsed())
      to_sweep_plan(config);
    else
      PolicyParams::from_mean(config.distribution.mean(), config.epsilon_rel, config.sat_alpha);
  } catch (const std::exception& e) {
    err << "eh_sim: " << e.what() << "\n" << "Run with --help for usage.\n";
    return 2;
  }

  try {
    if (run->parsed())
      cmd_run(config, out);
    else
      cmd_sweep(config, out);
  } catch (const std::exception& e) {
    err << "eh_sim: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace ehsim::cli
