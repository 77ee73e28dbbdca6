// SPDX-License-Identifier: Apache-2.0
#include "wishtrack/harness/output.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "wishtrack/errors.hpp"

namespace wishtrack {

const TimeSeriesRow& TimeSeriesStat::at_k(int k) const {
    for (const auto& r : rows)
        if (r.k == k) return r;
    throw DomainError(name + ": no row for k=" + std::to_string(k));
}

double TimeSeriesStat::extra(const TimeSeriesRow& row, const std::string& column) const {
    const auto it = std::find(extra_names.begin(), extra_names.end(), column);
    if (it == extra_names.end()) throw DomainError(name + ": no column " + column);
    return row.extras.at(static_cast<std::size_t>(it - extra_names.begin()));
}

CsvTable to_table(const TimeSeriesStat& series) {
    CsvTable t;
    t.name = series.name;
    t.header = {"k", "lambda_min", "lambda_mean", "lambda_max", "band_lower",
                "band_upper", "chi2_lower", "chi2_upper", series.scalar_name};
    t.header.insert(t.header.end(), series.extra_names.begin(), series.extra_names.end());
    for (const auto& r : series.rows) {
        std::vector<double> row = {static_cast<double>(r.k), r.lambda_min, r.lambda_mean, r.lambda_max, r.band_lower,
                                   r.band_upper, r.chi2_lower, r.chi2_upper, r.scalar};
        row.insert(row.end(), r.extras.begin(), r.extras.end());
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::string format_value(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.9g", v);
    return buf.data();
}

std::string to_csv(const CsvTable& table) {
    std::ostringstream os;
    for (std::size_t i = 0; i < table.header.size(); ++i) os << (i ? "," : "") << table.header[i];
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_value(row[i]);
        os << '\n';
    }
    return os.str();
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << content;
    if (!out) throw ConfigError("failed writing " + path.string());
}

}  // namespace

void write_csv(const CsvTable& table, const std::filesystem::path& dir) {
    write_file(dir / (table.name + ".csv"), to_csv(table));
}

std::string to_svg(const CsvTable& table, const std::string& title) {
    constexpr double W = 720, H = 420, L = 70, R = 170, Tm = 40, B = 50;
    static const std::array<const char*, 8> colors = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                      "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto& r : table.rows) {
        if (r.empty()) continue;
        xmin = std::min(xmin, r[0]);
        xmax = std::max(xmax, r[0]);
        for (std::size_t c = 1; c < r.size(); ++c) {
            if (!std::isfinite(r[c])) continue;
            ymin = std::min(ymin, r[c]);
            ymax = std::max(ymax, r[c]);
        }
    }
    if (!(xmax > xmin)) xmax = xmin + 1.0;
    if (!(ymax > ymin)) ymax = ymin + 1.0;
    const auto sx = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
    const auto sy = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - Tm - B); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << L << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
    os << "<rect x=\"" << L << "\" y=\"" << Tm << "\" width=\"" << W - L - R << "\" height=\"" << H - Tm - B
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double yv = ymin + (ymax - ymin) * i / 4.0;
        const double xv = xmin + (xmax - xmin) * i / 4.0;
        os << "<text x=\"" << L - 6 << "\" y=\"" << sy(yv) + 4
           << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">" << format_value(yv) << "</text>\n";
        os << "<text x=\"" << sx(xv) << "\" y=\"" << H - B + 16
           << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">" << format_value(xv)
           << "</text>\n";
    }
    os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12
       << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" << table.header.front()
       << "</text>\n";
    for (std::size_t c = 1; c < table.header.size(); ++c) {
        const char* color = colors[(c - 1) % colors.size()];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& r : table.rows)
            if (c < r.size() && std::isfinite(r[c])) os << format_value(sx(r[0])) << ',' << format_value(sy(r[c])) << ' ';
        os << "\"/>\n";
        const double ly = Tm + 14.0 * static_cast<double>(c);
        os << "<line x1=\"" << W - R + 10 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 30 << "\" y2=\"" << ly
           << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << W - R + 34 << "\" y=\"" << ly + 4 << "\" font-family=\"sans-serif\" font-size=\"10\">"
           << table.header[c] << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

void write_svg(const CsvTable& table, const std::filesystem::path& dir) {
    write_file(dir / (table.name + ".svg"), to_svg(table, table.name));
}

void write_tables(const std::vector<CsvTable>& tables, const std::filesystem::path& dir, bool svg) {
    for (const auto& t : tables) {
        write_csv(t, dir);
        if (svg) write_svg(t, dir);
    }
}

}  // namespace wishtrack
