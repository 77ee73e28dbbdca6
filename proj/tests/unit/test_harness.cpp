#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wishtrack/errors.hpp"
#include "wishtrack/harness/cli.hpp"
#include "wishtrack/harness/config.hpp"
#include "wishtrack/harness/montecarlo.hpp"
#include "wishtrack/harness/output.hpp"
#include "wishtrack/harness/rng.hpp"
#include "wishtrack/harness/scenarios.hpp"

using namespace wishtrack;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("wishtrack_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
    args.insert(args.begin(), "wishtrack");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return code;
}

}  // namespace

TEST_CASE("config defaults, overrides and validation") {
    ScenarioConfig c = ScenarioConfig::defaults(Scenario::Switching);
    CHECK(c.horizon == 20);
    CHECK(c.k_switch == 10);
    c.set("mc", "500");
    c.set("q", "2.5");
    c.set("emit_svg", "true");
    CHECK(c.mc == 500);
    CHECK(c.q == 2.5);
    CHECK(c.emit_svg);
    CHECK_NOTHROW(c.validate());
    CHECK_THROWS_AS(c.set("no_such_key", "1"), ConfigError);
    CHECK_THROWS_AS(c.set("mc", "many"), ConfigError);
    CHECK_THROWS_AS(c.set("q", "1.0x"), ConfigError);

    ScenarioConfig bad = c;
    bad.p = 0.4;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = c;
    bad.mc = 3;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = c;
    bad.k_switch = 20;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = c;
    bad.target_vx = 0.0;
    bad.target_vy = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    CHECK_THROWS_AS(parse_scenario("unknown"), ConfigError);

    const fs::path dir = scratch_dir("config");
    {
        std::ofstream f(dir / "run.cfg");
        f << "# comment\nmc = 123\n\nseed=9\n";
    }
    ScenarioConfig loaded = ScenarioConfig::defaults(Scenario::Motivating);
    loaded.load_file(dir / "run.cfg");
    CHECK(loaded.mc == 123);
    CHECK(loaded.seed == 9);
    CHECK(loaded.to_map().at("mc") == "123");
    {
        std::ofstream f(dir / "bad.cfg");
        f << "mc 5\n";
    }
    CHECK_THROWS_AS(loaded.load_file(dir / "bad.cfg"), ConfigError);
}

TEST_CASE("csv formatting") {
    CHECK(format_value(1.0) == "1");
    CHECK(format_value(0.1234567891234) == "0.123456789");
    CHECK(format_value(-2.5e-12) == "-2.5e-12");
    CsvTable t{"demo", {"k", "v"}, {{1, 0.5}, {2, 1.0 / 3.0}}};
    CHECK(to_csv(t) == "k,v\n1,0.5\n2,0.333333333\n");
    const std::string svg = to_svg(t, "demo");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
}

TEST_CASE("counter rng streams are keyed and reproducible") {
    CounterRng a(1, 2, 3), b(1, 2, 3), c(1, 3, 2), d(2, 2, 3);
    const auto x = a();
    CHECK(x == b());
    CHECK(x != c());
    CHECK(x != d());
    CHECK(a() != x);
}

TEST_CASE("monte carlo fold order is independent of worker count") {
    const auto run = [](std::size_t i) {
        CounterRng rng(5, i, 0);
        std::normal_distribution<double> N(0.0, 1.0);
        return N(rng);
    };
    std::vector<double> serial, parallel;
    std::vector<std::size_t> order;
    monte_carlo(1000, 1, run, [&](std::size_t, double v) { serial.push_back(v); }, 64);
    monte_carlo(
        1000, 8, run,
        [&](std::size_t i, double v) {
            order.push_back(i);
            parallel.push_back(v);
        },
        64);
    CHECK(serial == parallel);
    for (std::size_t i = 0; i < order.size(); ++i) CHECK(order[i] == i);

    std::atomic<int> calls{0};
    CHECK_THROWS_AS(monte_carlo(
                        100, 4,
                        [&](std::size_t i) {
                            ++calls;
                            if (i == 50) throw NonConvergence("boom");
                            return 0;
                        },
                        [](std::size_t, int) {}),
                    NonConvergence);
}

TEST_CASE("scenario rows satisfy the eigenvalue ordering") {
    ScenarioConfig c = ScenarioConfig::defaults(Scenario::Switching);
    c.mc = 200;
    c.workers = 2;
    const SwitchingResult r = run_switching(c);
    CHECK(r.nees.rows.size() == static_cast<std::size_t>(c.horizon));
    for (const auto* series : {&r.nees, &r.nis}) {
        for (const auto& row : series->rows) {
            CHECK(row.lambda_min <= row.lambda_mean + 1e-12);
            CHECK(row.lambda_mean <= row.lambda_max + 1e-12);
            CHECK(row.band_lower < 1.0);
            CHECK(row.band_upper > 1.0);
        }
    }

    ScenarioConfig m = ScenarioConfig::defaults(Scenario::Motivating);
    m.mc = 500;
    const MotivatingResult mr = run_motivating_example(m);
    CHECK(mr.interval.first == doctest::Approx(0.75));
    CHECK(mr.interval.second == doctest::Approx(1.25));
    CHECK(mr.coin > 1.0);
}

TEST_CASE("scenario output does not depend on the worker count") {
    ScenarioConfig c = ScenarioConfig::defaults(Scenario::Mismatch);
    c.mc = 64;
    c.horizon = 8;
    c.workers = 1;
    const auto one = run_scenario(c);
    c.workers = 5;
    const auto five = run_scenario(c);
    REQUIRE(one.size() == five.size());
    for (std::size_t i = 0; i < one.size(); ++i) CHECK(to_csv(one[i]) == to_csv(five[i]));
}

TEST_CASE("cli exit codes and outputs") {
    std::string out, err;
    CHECK(run_cli({"wishart", "cdf", "--m", "1", "--n", "5", "--at", "4.35", "--which", "max"}, &out) == kExitOk);
    CHECK(out.find("0.4997998") != std::string::npos);
    CHECK(out.find("exact") != std::string::npos);

    CHECK(run_cli({"wishart", "quantile", "--m", "2", "--n", "10", "--p", "0.95", "--which", "max"}, &out) == kExitOk);
    CHECK(run_cli({"wishart", "cdf", "--m", "3", "--n", "2", "--at", "1", "--which", "max"}, &out, &err) == kExitUsage);
    CHECK(run_cli({"wishart", "cdf", "--m", "0", "--n", "2", "--at", "1", "--which", "max"}, &out, &err) == kExitUsage);
    CHECK(run_cli({"wishart", "cdf", "--m", "2", "--n", "5", "--at", "1", "--which", "middle"}, &out, &err) ==
          kExitUsage);
    CHECK(run_cli({"frobnicate"}, &out, &err) == kExitUsage);
    CHECK(run_cli({"run", "motivating", "--set", "bogus=1"}, &out, &err) == kExitUsage);
    CHECK(run_cli({"run", "motivating", "--mc", "1"}, &out, &err) == kExitUsage);
    CHECK(run_cli({"--help"}, &out, &err) == kExitOk);
}

TEST_CASE("cli run is byte-identical across invocations") {
    const fs::path a = scratch_dir("run_a"), b = scratch_dir("run_b");
    REQUIRE(run_cli({"run", "motivating", "--mc", "100", "--seed", "7", "--out", a.string(), "--emit", "csv+svg"}) ==
            kExitOk);
    REQUIRE(run_cli({"run", "motivating", "--mc", "100", "--seed", "7", "--out", b.string(), "--workers", "3"}) ==
            kExitOk);
    CHECK(fs::exists(a / "motivating_nees.svg"));
    int compared = 0;
    for (const auto& entry : fs::directory_iterator(b)) {
        REQUIRE(fs::exists(a / entry.path().filename()));
        CHECK(slurp(entry.path()) == slurp(a / entry.path().filename()));
        ++compared;
    }
    CHECK(compared >= 3);

    const fs::path t = scratch_dir("table");
    REQUIRE(run_cli({"wishart", "table", "--m", "2", "--n-range", "5:15:5", "--out", t.string()}) == kExitOk);
    const std::string csv = slurp(t / "wishart_table.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    CHECK(run_cli({"wishart", "table", "--n-range", "5-15"}) == kExitUsage);
}
