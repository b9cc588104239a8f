#pragma once

// CSV and SVG emission for sweep results.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "systolic/sweep.hpp"

namespace systolic {

inline constexpr const char* kCsvHeader = "m,n,p,dataflow,s_r,s_c,t,n_pe,n_c,energy_j,is_optimal";

/// "%.6e" with a compact exponent: 3.97575e-08 -> "3.975750e-8".
inline std::string format_scientific(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    std::string s(buf);
    const auto e = s.find('e');
    if (e == std::string::npos) return s;
    std::string mantissa = s.substr(0, e);
    std::string exp = s.substr(e + 1);
    std::string sign;
    if (!exp.empty() && (exp[0] == '-' || exp[0] == '+')) {
        if (exp[0] == '-') sign = "-";
        exp.erase(0, 1);
    }
    exp.erase(0, std::min(exp.find_first_not_of('0'), exp.size() - 1));
    return mantissa + "e" + sign + exp;
}

inline std::string csv_line(const SweepRow& row) {
    std::string out;
    for (Count v : {row.m, row.n, row.p}) out += std::to_string(v) + ",";
    out += std::string(short_name(row.flow)) + ",";
    for (Count v : {row.s_r, row.s_c, row.t, row.n_pe, row.n_c}) out += std::to_string(v) + ",";
    out += format_scientific(row.energy_j) + ",";
    out += row.is_optimal ? "true" : "false";
    return out;
}

inline std::string render_csv(const std::vector<SweepRow>& rows) {
    std::string out = std::string(kCsvHeader) + "\n";
    for (const auto& row : rows) out += csv_line(row) + "\n";
    return out;
}

namespace detail {

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot open " + path + " for writing");
    file << content;
    file.flush();
    if (!file) throw std::runtime_error("failed writing " + path);
}

}  // namespace detail

inline void emit_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    if (rows.empty()) throw std::invalid_argument("emit_csv: no rows");
    detail::write_file(path, render_csv(rows));
}

/// Inverse of render_csv.
inline std::vector<SweepRow> parse_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw std::runtime_error("parse_csv: missing or unexpected header");
    }
    std::vector<SweepRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 11) {
            throw std::runtime_error("parse_csv: line " + std::to_string(line_no) + " has " +
                                     std::to_string(fields.size()) + " fields");
        }
        auto integer = [&](std::size_t idx) { return static_cast<Count>(std::stoull(fields[idx])); };
        auto flow = parse_dataflow(fields[3]);
        if (!flow) throw std::runtime_error("parse_csv: bad dataflow on line " + std::to_string(line_no));
        rows.push_back(SweepRow{integer(0), integer(1), integer(2), *flow, integer(4), integer(5), integer(6),
                                integer(7), integer(8), std::strtod(fields[9].c_str(), nullptr),
                                fields[10] == "true"});
    }
    return rows;
}

// ---------------------------------------------------------------------------
// SVG grouped bar chart: one group per (m,n,p) config, bars WS/IS/OS, log10
// energy axis. Optimal bars get a dark outline and a star above them.

namespace detail {

struct ChartLayout {
    static constexpr double kLeft = 90.0;
    static constexpr double kRight = 130.0;
    static constexpr double kTop = 50.0;
    static constexpr double kBottom = 90.0;
    static constexpr double kPlotHeight = 320.0;
    static constexpr double kBarWidth = 16.0;
    static constexpr double kGroupGap = 22.0;
};

inline const char* flow_color(Dataflow f) {
    switch (f) {
        case Dataflow::WeightStationary: return "#1f77b4";
        case Dataflow::InputStationary: return "#ff7f0e";
        case Dataflow::OutputStationary: return "#2ca02c";
    }
    return "#777777";
}

inline std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace detail

inline std::string render_chart_svg(const std::vector<SweepRow>& rows) {
    using L = detail::ChartLayout;
    if (rows.empty()) throw std::invalid_argument("render_chart_svg: no rows");

    // Groups in first-seen order; rows arrive config-lexicographic already.
    std::vector<MatrixDims> groups;
    std::map<MatrixDims, std::vector<const SweepRow*>> by_group;
    for (const auto& row : rows) {
        auto d = row.dims();
        if (!by_group.count(d)) groups.push_back(d);
        by_group[d].push_back(&row);
    }

    double lo_e = rows.front().energy_j, hi_e = rows.front().energy_j;
    for (const auto& row : rows) {
        lo_e = std::min(lo_e, row.energy_j);
        hi_e = std::max(hi_e, row.energy_j);
    }
    // One decade of headroom below the smallest bar so it stays visible.
    const int lo_dec = static_cast<int>(std::floor(std::log10(lo_e))) - 1;
    int hi_dec = static_cast<int>(std::ceil(std::log10(hi_e)));
    if (hi_dec <= lo_dec) hi_dec = lo_dec + 1;

    const double group_width = 3 * L::kBarWidth + L::kGroupGap;
    const double plot_width = static_cast<double>(groups.size()) * group_width;
    const double width = L::kLeft + plot_width + L::kRight;
    const double height = L::kTop + L::kPlotHeight + L::kBottom;
    const double base_y = L::kTop + L::kPlotHeight;
    auto y_of = [&](double energy_j) {
        const double frac = (std::log10(energy_j) - lo_dec) / (hi_dec - lo_dec);
        return base_y - frac * L::kPlotHeight;
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::fixed2(width) + "\" height=\"" +
           detail::fixed2(height) + "\" viewBox=\"0 0 " + detail::fixed2(width) + " " + detail::fixed2(height) +
           "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + detail::fixed2(width) + "\" height=\"" + detail::fixed2(height) +
           "\" fill=\"#ffffff\"/>\n";
    svg += "<text x=\"" + detail::fixed2(width / 2) +
           "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">Dataflow energy comparison</text>\n";

    // y axis with decade ticks
    svg += "<line x1=\"" + detail::fixed2(L::kLeft) + "\" y1=\"" + detail::fixed2(L::kTop) + "\" x2=\"" +
           detail::fixed2(L::kLeft) + "\" y2=\"" + detail::fixed2(base_y) + "\" stroke=\"#000000\"/>\n";
    for (int dec = lo_dec; dec <= hi_dec; ++dec) {
        const double y = y_of(std::pow(10.0, dec));
        svg += "<line class=\"grid\" x1=\"" + detail::fixed2(L::kLeft) + "\" y1=\"" + detail::fixed2(y) +
               "\" x2=\"" + detail::fixed2(L::kLeft + plot_width) + "\" y2=\"" + detail::fixed2(y) +
               "\" stroke=\"#dddddd\"/>\n";
        svg += "<text x=\"" + detail::fixed2(L::kLeft - 6) + "\" y=\"" + detail::fixed2(y + 4) +
               "\" text-anchor=\"end\">1e" + std::to_string(dec) + "</text>\n";
    }
    svg += "<text x=\"20\" y=\"" + detail::fixed2(L::kTop + L::kPlotHeight / 2) +
           "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " + detail::fixed2(L::kTop + L::kPlotHeight / 2) +
           ")\">Energy (J, log scale)</text>\n";
    svg += "<line x1=\"" + detail::fixed2(L::kLeft) + "\" y1=\"" + detail::fixed2(base_y) + "\" x2=\"" +
           detail::fixed2(L::kLeft + plot_width) + "\" y2=\"" + detail::fixed2(base_y) +
           "\" stroke=\"#000000\"/>\n";

    for (std::size_t g = 0; g < groups.size(); ++g) {
        const auto& d = groups[g];
        const std::string label = std::to_string(d.m()) + "x" + std::to_string(d.n()) + "x" + std::to_string(d.p());
        const double gx = L::kLeft + L::kGroupGap / 2 + static_cast<double>(g) * group_width;
        svg += "<g class=\"config\" data-config=\"" + label + "\">\n";
        const auto& members = by_group[d];
        for (std::size_t b = 0; b < members.size(); ++b) {
            const SweepRow& row = *members[b];
            const double x = gx + static_cast<double>(static_cast<std::size_t>(row.flow)) * L::kBarWidth;
            const double y = y_of(row.energy_j);
            svg += "<rect class=\"bar " + std::string(short_name(row.flow)) + (row.is_optimal ? " optimal" : "") +
                   "\" data-energy=\"" + format_scientific(row.energy_j) + "\" x=\"" + detail::fixed2(x) +
                   "\" y=\"" + detail::fixed2(y) + "\" width=\"" + detail::fixed2(L::kBarWidth) + "\" height=\"" +
                   detail::fixed2(base_y - y) + "\" fill=\"" + detail::flow_color(row.flow) + "\"" +
                   (row.is_optimal ? " stroke=\"#000000\" stroke-width=\"2\"" : "") + "/>\n";
            if (row.is_optimal) {
                svg += "<text class=\"optimal-marker\" x=\"" + detail::fixed2(x + L::kBarWidth / 2) + "\" y=\"" +
                       detail::fixed2(y - 4) + "\" text-anchor=\"middle\">*</text>\n";
            }
        }
        svg += "<text x=\"" + detail::fixed2(gx + 1.5 * L::kBarWidth) + "\" y=\"" + detail::fixed2(base_y + 16) +
               "\" text-anchor=\"end\" transform=\"rotate(-35 " + detail::fixed2(gx + 1.5 * L::kBarWidth) + " " +
               detail::fixed2(base_y + 16) + ")\">" + label + "</text>\n";
        svg += "</g>\n";
    }

    const double legend_x = L::kLeft + plot_width + 20;
    for (auto f : kAllDataflows) {
        const double ly = L::kTop + 10 + 20 * static_cast<double>(static_cast<int>(f));
        svg += "<rect x=\"" + detail::fixed2(legend_x) + "\" y=\"" + detail::fixed2(ly - 10) +
               "\" width=\"12\" height=\"12\" fill=\"" + detail::flow_color(f) + "\"/>\n";
        svg += "<text x=\"" + detail::fixed2(legend_x + 18) + "\" y=\"" + detail::fixed2(ly) + "\">" +
               std::string(short_name(f)) + "</text>\n";
    }
    svg += "<text x=\"" + detail::fixed2(legend_x) + "\" y=\"" + detail::fixed2(L::kTop + 80) +
           "\">* minimum energy</text>\n";
    svg += "</svg>\n";
    return svg;
}

inline void emit_chart(const std::vector<SweepRow>& rows, const std::string& path) {
    if (rows.empty()) throw std::invalid_argument("emit_chart: no rows");
    detail::write_file(path, render_chart_svg(rows));
}

}  // namespace systolic
