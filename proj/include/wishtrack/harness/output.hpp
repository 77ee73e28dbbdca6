// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "wishtrack/wishart.hpp"

namespace wishtrack {

struct TimeSeriesRow {
    int k = 0;
    double lambda_min = 0.0;
    double lambda_mean = 0.0;
    double lambda_max = 0.0;
    double band_lower = 0.0;
    double band_upper = 0.0;
    double chi2_lower = 0.0;
    double chi2_upper = 0.0;
    double scalar = 0.0;
    std::vector<double> extras;
};

struct TimeSeriesStat {
    std::string name;
    std::string scalar_name = "nees";
    std::vector<std::string> extra_names;
    EvaluationMethod band_method = EvaluationMethod::Exact;
    std::vector<TimeSeriesRow> rows;

    const TimeSeriesRow& at_k(int k) const;
    double extra(const TimeSeriesRow& row, const std::string& column) const;
};

// A CSV file: one header row, one row per record.
struct CsvTable {
    std::string name;  // file stem
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

CsvTable to_table(const TimeSeriesStat& series);

// 9 significant digits.
std::string format_value(double v);
std::string to_csv(const CsvTable& table);
void write_csv(const CsvTable& table, const std::filesystem::path& dir);

// Minimal line chart of every non-index column against the first column.
std::string to_svg(const CsvTable& table, const std::string& title);
void write_svg(const CsvTable& table, const std::filesystem::path& dir);

void write_tables(const std::vector<CsvTable>& tables, const std::filesystem::path& dir, bool svg);

}  // namespace wishtrack
