// SPDX-License-Identifier: Apache-2.0
#include "wishtrack/harness/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wishtrack/errors.hpp"
#include "wishtrack/harness/config.hpp"
#include "wishtrack/harness/output.hpp"
#include "wishtrack/harness/scenarios.hpp"
#include "wishtrack/wishart.hpp"

namespace wishtrack {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::filesystem::path default_out_dir() {
    if (const char* env = std::getenv(kOutputEnv); env && *env) return env;
    return "out";
}

struct NRange {
    int first = 5, last = 100, step = 5;
};

NRange parse_range(const std::string& text) {
    NRange r;
    char c1 = 0, c2 = 0;
    std::istringstream is(text);
    if (!(is >> r.first >> c1 >> r.last) || c1 != ':') throw ConfigError("--n-range expects first:last[:step]");
    if (is >> c2) {
        if (c2 != ':' || !(is >> r.step)) throw ConfigError("--n-range expects first:last[:step]");
    }
    return r;
}

}  // namespace

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Matrix-valued NEES/NIS consistency measures and Wishart extreme-eigenvalue distributions"};
    app.require_subcommand(1);

    auto* wishart = app.add_subcommand("wishart", "Extreme-eigenvalue distributions of W_m(n, I)");
    wishart->require_subcommand(1);

    int m = 0, n = 0;
    double at = 0.0, p = 0.95;
    std::string which = "max";
    bool approx = false;
    const auto add_mn = [&](CLI::App* sub) {
        sub->add_option("--m", m, "dimension")->required();
        sub->add_option("--n", n, "degrees of freedom")->required();
    };
    const auto add_which = [&](CLI::App* sub) {
        sub->add_option("--which", which, "min or max")->check(CLI::IsMember({"min", "max"}))->required();
    };

    auto* cdf = wishart->add_subcommand("cdf", "CDF of lambda_min or lambda_max");
    add_mn(cdf);
    cdf->add_option("--at", at, "evaluation point")->required();
    add_which(cdf);
    cdf->add_flag("--approx", approx, "use the shifted-gamma approximation");

    auto* quantile = wishart->add_subcommand("quantile", "inverse CDF");
    add_mn(quantile);
    quantile->add_option("--p", p, "probability")->required();
    add_which(quantile);

    auto* expected = wishart->add_subcommand("expected", "expected extreme eigenvalues");
    add_mn(expected);

    auto* table = wishart->add_subcommand("table", "expected values and quantiles over a range of n");
    int table_m = 3;
    std::string range_text = "5:100:5";
    double table_p = 0.95;
    std::string table_out;
    table->add_option("--m", table_m, "dimension");
    table->add_option("--n-range", range_text, "first:last[:step]");
    table->add_option("--p", table_p, "upper quantile level; the lower one is 1-p");
    table->add_option("--out", table_out, "output directory");

    auto* run = app.add_subcommand("run", "run a Monte Carlo scenario");
    std::string scenario_name;
    std::optional<std::size_t> mc;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::string run_out, emit = "csv", config_file;
    std::vector<std::string> overrides;
    run->add_option("scenario", scenario_name, "motivating | switching | fusion-design | mismatch")
        ->required()
        ->check(CLI::IsMember({"motivating", "switching", "fusion-design", "mismatch"}));
    run->add_option("--mc", mc, "Monte Carlo runs");
    run->add_option("--seed", seed, "64-bit seed");
    run->add_option("--workers", workers, "worker threads");
    run->add_option("--out", run_out, "output directory");
    run->add_option("--emit", emit, "csv or csv+svg")->check(CLI::IsMember({"csv", "csv+svg"}));
    run->add_option("--config", config_file, "key=value parameter file");
    run->add_option("--set", overrides, "key=value parameter override")->allow_extra_args(false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*cdf) {
            const WishartLaw law(m, n);
            double v;
            EvaluationMethod method = law.method();
            if (approx) {
                v = which == "min" ? approx_cdf_lambda_min(law, at) : approx_cdf_lambda_max(law, at);
                method = EvaluationMethod::Approximation;
            } else {
                v = which == "min" ? cdf_lambda_min(law, at) : cdf_lambda_max(law, at);
            }
            out << "F_lambda_" << which << "(" << fmt(at) << ") = " << fmt(v) << " [" << to_string(method) << "]\n";
        } else if (*quantile) {
            const WishartLaw law(m, n);
            const double v = which == "min" ? quantile_lambda_min(law, p) : quantile_lambda_max(law, p);
            out << "F_lambda_" << which << "^-1(" << fmt(p) << ") = " << fmt(v) << "  (/n = " << fmt(v / n) << ") ["
                << to_string(law.method()) << "]\n";
        } else if (*expected) {
            const WishartLaw law(m, n);
            const double emin = expected_lambda_min(law), emax = expected_lambda_max(law);
            out << "E(lambda_min) = " << fmt(emin) << "  (/n = " << fmt(emin / n) << ")\n";
            out << "E(lambda_max) = " << fmt(emax) << "  (/n = " << fmt(emax / n) << ")\n";
            out << "[" << to_string(law.method()) << "]\n";
        } else if (*table) {
            const NRange r = parse_range(range_text);
            const CsvTable t = wishart_table(table_m, r.first, r.last, r.step, table_p);
            const std::filesystem::path dir = table_out.empty() ? default_out_dir() : std::filesystem::path(table_out);
            write_csv(t, dir);
            out << to_csv(t);
            out << "wrote " << (dir / (t.name + ".csv")).string() << "\n";
        } else if (*run) {
            ScenarioConfig config = ScenarioConfig::defaults(parse_scenario(scenario_name));
            config.out_dir = default_out_dir();
            if (!config_file.empty()) {
                config.load_file(config_file);
                config.scenario = parse_scenario(scenario_name);
            }
            for (const auto& kv : overrides) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos) throw ConfigError("--set expects key=value");
                config.set(kv.substr(0, eq), kv.substr(eq + 1));
            }
            if (mc) config.mc = *mc;
            if (seed) config.seed = *seed;
            if (workers) config.workers = *workers;
            if (!run_out.empty()) config.out_dir = run_out;
            config.emit_svg = config.emit_svg || emit == "csv+svg";
            config.validate();
            const std::vector<CsvTable> tables = run_scenario(config);
            write_tables(tables, config.out_dir, config.emit_svg);
            for (const auto& t : tables) out << "wrote " << (config.out_dir / (t.name + ".csv")).string() << "\n";
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitOk;
}

int cli_dispatch(int argc, const char* const* argv) { return cli_dispatch(argc, argv, std::cout, std::cerr); }

}  // namespace wishtrack
