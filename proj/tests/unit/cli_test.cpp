#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "ntnsim/app.hpp"

namespace fs = std::filesystem;

namespace {

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation cli(std::vector<std::string> args, std::map<std::string, std::string> env = {}) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = ntnsim::run_cli(args, out, err, [env](const char* name) -> const char* {
    auto it = env.find(name);
    return it == env.end() ? nullptr : it->second.c_str();
  });
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("ntnsim-cli-test-" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double field(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  for (std::string k, v; in >> k >> v;) {
    if (k == key) return std::stod(v);
  }
  FAIL("missing " << key);
  return 0.0;
}

}  // namespace

TEST_CASE("count lists and ranges") {
  using ntnsim::parse_count_list;
  CHECK(parse_count_list("10,20") == std::vector<std::uint64_t>{10, 20});
  CHECK(parse_count_list("10000:70000:10000").size() == 7);
  CHECK(parse_count_list("5,10:30:10") == std::vector<std::uint64_t>{5, 10, 20, 30});
  CHECK_THROWS(parse_count_list("0"));
  CHECK_THROWS(parse_count_list("10:5:1"));
  CHECK_THROWS(parse_count_list("1:5"));
  CHECK_THROWS(parse_count_list("x"));
  CHECK_THROWS(parse_count_list(""));
}

TEST_CASE("exactly one subcommand") {
  CHECK(cli({}).code == ntnsim::Usage);
  CHECK(cli({"run", "analyze"}).code == ntnsim::Usage);
  CHECK(cli({"--help"}).code == ntnsim::Ok);
  CHECK(cli({"bogus"}).code == ntnsim::Usage);
}

TEST_CASE("analyze prints the load figures") {
  const auto r = cli({"analyze", "--radius", "1", "--speed", "1", "--ues", "1000", "--dt", "1"});
  REQUIRE(r.code == 0);
  CHECK(field(r.out, "A_circle_km2") == doctest::Approx(3.141593).epsilon(1e-6));
  CHECK(field(r.out, "A_intersect_km2") == doctest::Approx(1.228370).epsilon(1e-6));
  CHECK(field(r.out, "A_hand-off_km2") == doctest::Approx(1.913223).epsilon(1e-6));
  CHECK(field(r.out, "N_hand-off") == doctest::Approx(609.0));
  const auto none = cli({"analyze", "--radius", "1", "--speed", "1", "--ues", "1000", "--dt", "0"});
  CHECK(field(none.out, "N_hand-off") == 0.0);
  CHECK(cli({"analyze", "--radius", "0", "--speed", "1", "--ues", "1", "--dt", "1"}).code == ntnsim::Usage);
  CHECK(cli({"analyze", "--radius", "1"}).code == ntnsim::Usage);
}

TEST_CASE("run rejects bad input before simulating") {
  CHECK(cli({"run", "--ues", "0"}).code == ntnsim::Usage);
  CHECK(cli({"run", "--protocol", "xn"}).code == ntnsim::Usage);
  const auto bad = cli({"run", "--ues", "100", "--set", "threshold_fraction=3"});
  CHECK(bad.code == ntnsim::Usage);
  CHECK(bad.err.find("threshold_fraction") != std::string::npos);
  CHECK(bad.out.empty());
  CHECK(cli({"run", "--ues", "100"}, {{"NTNSIM_PROCESSORS", "zero"}}).code == ntnsim::Usage);
  CHECK(cli({"run", "--config", "/nonexistent/file.toml"}).code == ntnsim::Usage);
}

TEST_CASE("run writes reports and is repeatable") {
  const auto a = scratch("run-a");
  const auto b = scratch("run-b");
  const auto ra = cli({"run", "--protocol", "gho", "--ues", "2000", "--seed", "20", "--out", a.string(), "-q"});
  const auto rb = cli({"run", "--protocol", "gho", "--ues", "2000", "--seed", "20", "--out", b.string(), "-q",
                       "--event-log"});
  REQUIRE(ra.code == 0);
  REQUIRE(rb.code == 0);
  CHECK(ra.err.empty());
  CHECK(ra.out == rb.out);
  CHECK(ra.out.starts_with("protocol,ue_count,seed,"));
  CHECK(ra.out.find("\ngho,2000,20,100.00,") != std::string::npos);
  CHECK(slurp(a / "summary.csv") == slurp(b / "summary.csv"));
  for (int k = 1; k <= 3; ++k) {
    const auto name = "timeseries/gho-2000-20-SAT" + std::to_string(k) + ".csv";
    CHECK(fs::exists(a / name));
    CHECK(slurp(a / name) == slurp(b / name));
  }
  CHECK(fs::exists(b / "events/gho-2000-20.csv"));
  CHECK_FALSE(fs::exists(a / "events"));
}

TEST_CASE("flags beat environment beats file") {
  const auto dir = scratch("precedence");
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "cfg.toml");
    f << "[scenario]\nprotocol = \"gho\"\nue_count = 500\nseed = 30\n";
  }
  const auto cfg = (dir / "cfg.toml").string();
  const auto file_only = cli({"run", "--config", cfg, "-q"});
  CHECK(file_only.out.find("\ngho,500,30,") != std::string::npos);
  const auto env = cli({"run", "--config", cfg, "-q"}, {{"NTNSIM_UE_COUNT", "600"}, {"NTNSIM_SEED", "40"}});
  CHECK(env.out.find("\ngho,600,40,") != std::string::npos);
  const auto flags = cli({"run", "--config", cfg, "--ues", "700", "--protocol", "ho", "-q"},
                         {{"NTNSIM_UE_COUNT", "600"}});
  CHECK(flags.out.find("\nho,700,30,") != std::string::npos);
}

TEST_CASE("compare runs the grid and orders output") {
  const auto dir = scratch("compare");
  const auto r = cli({"compare", "--ues", "1000,1500", "--seeds", "10,20", "--out", dir.string(), "--jobs", "2"});
  REQUIRE(r.code == 0);
  const auto summary = slurp(dir / "summary.csv");
  CHECK(std::count(summary.begin(), summary.end(), '\n') == 9);
  const auto aggregate = slurp(dir / "aggregate.csv");
  CHECK(aggregate == r.out);
  CHECK(std::count(aggregate.begin(), aggregate.end(), '\n') == 3);
  // Progress lines go to standard error only.
  CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 8);
  CHECK(summary.find("ho,1000,10,") < summary.find("ho,1000,20,"));
  CHECK(summary.find("\nho,1500,20,") < summary.find("\ngho,1000,10,"));
  CHECK(fs::exists(dir / "timeseries/ho-1500-20-SAT2.csv"));
  CHECK(fs::exists(dir / "aggregate.json"));
}
