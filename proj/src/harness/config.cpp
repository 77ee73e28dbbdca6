// SPDX-License-Identifier: Apache-2.0
#include "wishtrack/harness/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "wishtrack/errors.hpp"
#include "wishtrack/harness/montecarlo.hpp"

namespace wishtrack {

unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
    T v{};
    const std::string t = trim(text);
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw ConfigError("config: invalid value '" + text + "' for " + key);
    return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    if (t == "1" || t == "true" || t == "yes") return true;
    if (t == "0" || t == "false" || t == "no") return false;
    throw ConfigError("config: invalid boolean '" + text + "' for " + key);
}

std::string format(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

Scenario parse_scenario(const std::string& name) {
    if (name == "motivating") return Scenario::Motivating;
    if (name == "switching") return Scenario::Switching;
    if (name == "fusion-design") return Scenario::FusionDesign;
    if (name == "mismatch") return Scenario::Mismatch;
    throw ConfigError("unknown scenario '" + name + "'");
}

const char* to_string(Scenario scenario) {
    switch (scenario) {
        case Scenario::Motivating: return "motivating";
        case Scenario::Switching: return "switching";
        case Scenario::FusionDesign: return "fusion-design";
        case Scenario::Mismatch: return "mismatch";
    }
    return "?";
}

ScenarioConfig ScenarioConfig::defaults(Scenario scenario) {
    ScenarioConfig c;
    c.scenario = scenario;
    c.workers = default_workers();
    switch (scenario) {
        case Scenario::Motivating:
            c.horizon = 10;
            c.p = 0.995;
            break;
        case Scenario::Switching:
            c.horizon = 20;
            c.q = 5.0;
            c.sigma_v = 100.0;
            c.k_switch = 10;
            c.p = 0.995;
            c.target_vx = 100.0;
            break;
        case Scenario::FusionDesign:
            c.horizon = 60;
            c.q = 5.0;
            c.sigma_r = 100.0;
            c.sigma_phi_deg = 2.0;
            c.p = 0.999;
            c.sensor_x = 2000.0;
            c.target_x = 0.0;
            c.target_y = 20000.0;
            c.target_vx = 20.0;
            c.target_vy = -10.0;
            break;
        case Scenario::Mismatch:
            c.horizon = 60;
            c.q = 10.0;
            c.sigma_v = 10.0;
            c.alpha_true = 2.0;
            c.alpha_filter = 1.0;
            c.p = 0.995;
            break;
    }
    return c;
}

void ScenarioConfig::set(const std::string& raw_key, const std::string& value) {
    const std::string key = trim(raw_key);
    const std::map<std::string, std::function<void()>> setters = {
        {"scenario", [&] { scenario = parse_scenario(trim(value)); }},
        {"mc", [&] { mc = parse_number<std::size_t>(key, value); }},
        {"horizon", [&] { horizon = parse_number<int>(key, value); }},
        {"seed", [&] { seed = parse_number<std::uint64_t>(key, value); }},
        {"workers", [&] { workers = parse_number<unsigned>(key, value); }},
        {"T", [&] { T = parse_number<double>(key, value); }},
        {"q", [&] { q = parse_number<double>(key, value); }},
        {"sigma_v", [&] { sigma_v = parse_number<double>(key, value); }},
        {"sigma_r", [&] { sigma_r = parse_number<double>(key, value); }},
        {"sigma_phi_deg", [&] { sigma_phi_deg = parse_number<double>(key, value); }},
        {"alpha_true", [&] { alpha_true = parse_number<double>(key, value); }},
        {"alpha_filter", [&] { alpha_filter = parse_number<double>(key, value); }},
        {"k_switch", [&] { k_switch = parse_number<int>(key, value); }},
        {"p", [&] { p = parse_number<double>(key, value); }},
        {"v_max", [&] { v_max = parse_number<double>(key, value); }},
        {"target_x", [&] { target_x = parse_number<double>(key, value); }},
        {"target_y", [&] { target_y = parse_number<double>(key, value); }},
        {"target_vx", [&] { target_vx = parse_number<double>(key, value); }},
        {"target_vy", [&] { target_vy = parse_number<double>(key, value); }},
        {"sensor_x", [&] { sensor_x = parse_number<double>(key, value); }},
        {"out", [&] { out_dir = trim(value); }},
        {"emit_svg", [&] { emit_svg = parse_bool(key, value); }},
    };
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("config: unknown key '" + key + "'");
    it->second();
}

void ScenarioConfig::load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path.string());
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: " + path.string() + ":" + std::to_string(lineno) + ": expected key=value");
        set(line.substr(0, eq), line.substr(eq + 1));
    }
}

std::map<std::string, std::string> ScenarioConfig::to_map() const {
    return {
        {"scenario", to_string(scenario)},
        {"mc", std::to_string(mc)},
        {"horizon", std::to_string(horizon)},
        {"seed", std::to_string(seed)},
        {"T", format(T)},
        {"q", format(q)},
        {"sigma_v", format(sigma_v)},
        {"sigma_r", format(sigma_r)},
        {"sigma_phi_deg", format(sigma_phi_deg)},
        {"alpha_true", format(alpha_true)},
        {"alpha_filter", format(alpha_filter)},
        {"k_switch", std::to_string(k_switch)},
        {"p", format(p)},
        {"v_max", format(v_max)},
        {"target_x", format(target_x)},
        {"target_y", format(target_y)},
        {"target_vx", format(target_vx)},
        {"target_vy", format(target_vy)},
        {"sensor_x", format(sensor_x)},
    };
}

void ScenarioConfig::validate() const {
    const auto require = [](bool ok, const char* msg) {
        if (!ok) throw ConfigError(std::string("config: ") + msg);
    };
    const std::size_t stat_dim =
        scenario == Scenario::Switching || scenario == Scenario::FusionDesign ? 4 : 2;
    require(mc >= 1, "mc must be at least 1");
    require(mc >= stat_dim, "mc must be at least the statistic dimension");
    require(horizon >= 2, "horizon must be at least 2");
    require(p > 0.5 && p < 1.0, "p must lie in (0.5, 1)");
    require(T > 0.0 && std::isfinite(T), "T must be positive");
    require(q >= 0.0 && std::isfinite(q), "q must be non-negative");
    require(sigma_v > 0.0 && sigma_r > 0.0 && sigma_phi_deg > 0.0, "measurement sigmas must be positive");
    require(v_max > 0.0, "v_max must be positive");
    require(alpha_true != 0.0 && alpha_filter != 0.0, "alpha must be non-zero");
    require(workers >= 1, "workers must be at least 1");
    if (scenario == Scenario::Switching) {
        require(k_switch >= 1 && k_switch < horizon, "k_switch must lie in [1, horizon)");
        require(std::hypot(target_vx, target_vy) > 1e-9, "switching needs a non-zero initial velocity");
    }
    if (scenario == Scenario::FusionDesign) {
        require(sensor_x > 0.0, "sensor_x must be positive");
    }
}

}  // namespace wishtrack
