#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ehsim/cli.hpp"
#include "ehsim/report.hpp"

using namespace ehsim;
namespace fs = std::filesystem;

namespace {

struct Invocation {
  int status;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "eh_sim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::map<std::string, double> parse_run_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);
  std::map<std::string, double> out;
  while (std::getline(is, line)) {
    const auto a = line.find(',');
    const auto b = line.find(',', a + 1);
    out[line.substr(0, a)] = parse_double(line.substr(a + 1, b - a - 1));
  }
  return out;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "ehsim_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("run: single trace table ordering") {
  const auto r = invoke({"run", "--dist", "exponential:10", "--L", "500", "--seed", "7",
                         "--policies", "naive,bet,apa,opm,ub", "--format", "csv"});
  REQUIRE(r.status == 0);
  const auto t = parse_run_csv(r.out);
  REQUIRE(t.size() == 5);
  CHECK(t.at("apa") <= t.at("opm") + 1e-12);
  CHECK(t.at("opm") <= t.at("ub") + 1e-9);
}

TEST_CASE("run: constant arrivals give rate(5) for the rate-preserving policies") {
  const auto r = invoke({"run", "--dist", "constant:5", "--L", "10", "--epsilon-rel", "0",
                         "--format", "csv"});
  REQUIRE(r.status == 0);
  const auto t = parse_run_csv(r.out);
  for (const char* p : {"naive", "bet", "apa", "opm"}) CHECK(t.at(p) == doctest::Approx(rate(5.0)).epsilon(1e-15));
}

TEST_CASE("run: defaults work") {
  const auto r = invoke({"run"});
  CHECK(r.status == 0);
  CHECK(r.out.find("exponential:10") != std::string::npos);
  CHECK(r.out.find("L = 500") != std::string::npos);
  for (const char* p : {"naive", "sat", "bet", "apa", "opm", "ub"})
    CHECK(r.out.find(p) != std::string::npos);
}

TEST_CASE("usage errors exit non-zero") {
  CHECK(invoke({"run", "--dist", "exponential"}).status == 2);
  CHECK(invoke({"run", "--dist", "bernoulli:1"}).status == 2);
  CHECK(invoke({"run", "--policies", "naive,magic"}).status == 2);
  CHECK(invoke({"run", "--log-base", "10"}).status == 2);
  CHECK(invoke({"sweep", "--mean-sweep", "1,2", "--L-sweep", "10"}).status == 2);
  CHECK(invoke({"sweep", "--reps", "0"}).status != 0);
  CHECK(invoke({"sweep", "--L-sweep", "10.5"}).status == 2);
  CHECK(invoke({"bogus"}).status != 0);
  CHECK(invoke({}).status != 0);
  CHECK(invoke({"run", "--sat-alpha", "2"}).status == 2);
}

TEST_CASE("sweep: degenerate constant sweep") {
  const auto r = invoke({"sweep", "--dist", "constant:1", "--mean-sweep", "1,10", "--reps", "2",
                         "--L", "20"});
  REQUIRE(r.status == 0);
  std::istringstream is(r.out);
  const auto rows = read_sweep_csv(is);
  CHECK(rows.size() == 2 * 6);
  for (const auto& row : rows) {
    CHECK(row.stddev == 0.0);
    CHECK(row.replications == 2);
  }
  CHECK(rows.front().value == 1.0);
  CHECK(rows.back().value == 10.0);
  CHECK(rows.back().policy == "ub");
}

TEST_CASE("sweep: file output is byte-identical across invocations") {
  const auto a = scratch("a.csv");
  const auto b = scratch("b.csv");
  const std::vector<std::string> common{"sweep", "--L-sweep", "20,80", "--reps", "5", "--seed", "3"};
  auto with_out = [&](const fs::path& p) {
    auto args = common;
    args.insert(args.end(), {"--out", p.string()});
    return args;
  };
  REQUIRE(invoke(with_out(a)).status == 0);
  REQUIRE(invoke(with_out(b)).status == 0);
  const auto text = slurp(a);
  CHECK(text == slurp(b));
  CHECK(text.find("horizon,20,") != std::string::npos);
}

TEST_CASE("config file with flag overrides") {
  const auto cfg = scratch("plan.json");
  {
    std::ofstream out(cfg);
    out << R"({
      "dist": {"kind": "constant", "value": 2},
      "L": 30,
      "sweep": {"mean": [2, 4]},
      "reps": 3,
      "seed": 11,
      "policies": ["naive", "ub"],
      "log_base": "e",
      "output": {"format": "json"}
    })";
  }
  const auto r = invoke({"sweep", "--config", cfg.string(), "--reps", "4"});
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["points"].size() == 2);
  CHECK(j["points"][0]["policies"][0]["replications"] == 4);
  CHECK(j["points"][1]["policies"][0]["mean_throughput"].get<double>() ==
        doctest::Approx(0.5 * std::log(5.0)).epsilon(1e-14));

  const auto bad = scratch("bad.json");
  {
    std::ofstream out(bad);
    out << R"({"dsit": "constant:1"})";
  }
  CHECK(invoke({"run", "--config", bad.string()}).status == 2);
}

TEST_CASE("EH_SIM_SEED is the seed fallback") {
  ::setenv("EH_SIM_SEED", "7", 1);
  const auto env = invoke({"run", "--format", "json"});
  ::unsetenv("EH_SIM_SEED");
  const auto flag = invoke({"run", "--seed", "7", "--format", "json"});
  const auto other = invoke({"run", "--seed", "8", "--format", "json"});
  REQUIRE(env.status == 0);
  CHECK(env.out == flag.out);
  CHECK(env.out != other.out);

  ::setenv("EH_SIM_SEED", "8", 1);
  CHECK(invoke({"run", "--seed", "7", "--format", "json"}).out == flag.out);
  ::unsetenv("EH_SIM_SEED");
}

TEST_CASE("run: schedule dump") {
  const auto path = scratch("schedule.csv");
  const auto r = invoke({"run", "--dist", "constant:3", "--L", "3", "--policies", "naive,apa",
                         "--schedule-out", path.string()});
  REQUIRE(r.status == 0);
  const auto text = slurp(path);
  CHECK(text.rfind("policy,block,arrival,power,rate,battery\n", 0) == 0);
  CHECK(text.find("naive,3,3,3,1,0") != std::string::npos);
  CHECK(text.find("apa,1,") != std::string::npos);
}
