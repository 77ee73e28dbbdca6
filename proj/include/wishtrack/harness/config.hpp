// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

namespace wishtrack {

enum class Scenario { Motivating, Switching, FusionDesign, Mismatch };

Scenario parse_scenario(const std::string& name);
const char* to_string(Scenario scenario);

struct ScenarioConfig {
    Scenario scenario = Scenario::Motivating;
    std::size_t mc = 10000;
    int horizon = 10;
    std::uint64_t seed = 1;
    unsigned workers = 1;

    double T = 1.0;
    double q = 5.0;
    double sigma_v = 100.0;
    double sigma_r = 100.0;
    double sigma_phi_deg = 2.0;
    double alpha_true = 2.0;
    double alpha_filter = 1.0;
    int k_switch = 10;
    double p = 0.995;
    double v_max = 300.0;

    // Target initial state [x, y, vx, vy] in meters and m/s.
    double target_x = 0.0;
    double target_y = 0.0;
    double target_vx = 0.0;
    double target_vy = 0.0;
    // Sensors sit at (+-sensor_x, 0).
    double sensor_x = 2000.0;

    std::filesystem::path out_dir = "out";
    bool emit_svg = false;

    // Parameter values for a scenario before any overrides.
    static ScenarioConfig defaults(Scenario scenario);

    // key=value; unknown keys and malformed values raise ConfigError.
    void set(const std::string& key, const std::string& value);
    void load_file(const std::filesystem::path& path);
    std::map<std::string, std::string> to_map() const;

    // Throws ConfigError.
    void validate() const;
};

}  // namespace wishtrack
