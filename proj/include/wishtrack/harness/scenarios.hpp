// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include "wishtrack/harness/config.hpp"
#include "wishtrack/harness/output.hpp"

namespace wishtrack {

struct MotivatingResult {
    TimeSeriesStat nees;  // scalar column holds NEES / 2
    CsvTable histogram;   // bin_lower, bin_upper, empirical density, chi2 density
    double histogram_sup_error = 0.0;
    std::pair<double, double> interval;  // analytic credibility interval
    double coin = 0.0;
    double nci = 0.0;  // over the final step, Sigma known
};

struct SwitchingResult {
    TimeSeriesStat nees;
    TimeSeriesStat nis;
};

struct FusionDesignResult {
    TimeSeriesStat lkf;
    TimeSeriesStat ci;
    TimeSeriesStat le;
    CsvTable rmt;  // k, crlb, lkf, ci, le (normalized by crlb)
};

struct MismatchResult {
    TimeSeriesStat nis;  // run-averaged eigenvalues; extras carry detection and angle columns
};

MotivatingResult run_motivating_example(const ScenarioConfig& config);
SwitchingResult run_switching(const ScenarioConfig& config);
FusionDesignResult run_fusion_design(const ScenarioConfig& config);
MismatchResult run_mismatch(const ScenarioConfig& config);

std::vector<CsvTable> tables(const MotivatingResult& r);
std::vector<CsvTable> tables(const SwitchingResult& r);
std::vector<CsvTable> tables(const FusionDesignResult& r);
std::vector<CsvTable> tables(const MismatchResult& r);

// Runs the configured scenario and returns its tables.
std::vector<CsvTable> run_scenario(const ScenarioConfig& config);

// n, E(lambda_min)/n, E(lambda_max)/n, F_min^{-1}(1-p)/n, F_max^{-1}(p)/n
CsvTable wishart_table(int m, int n_first, int n_last, int n_step, double p);

}  // namespace wishtrack
