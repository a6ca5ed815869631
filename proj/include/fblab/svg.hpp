#pragma once

// Tiny self-contained SVG line plots, enough to eyeball a profile or a front
// trajectory without any plotting stack.  Fixed canvas, linear axes, one
// polyline per series, a small legend.  Not meant for publication graphics.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fblab/csv.hpp"

namespace fblab::svg {

struct Series {
    std::string label;
    std::vector<double> x, y;
};

inline void write_line_plot(const std::string& path, const std::string& title,
                            const std::string& x_label, const std::string& y_label,
                            const std::vector<Series>& series) {
    static const char* palette[] = {"#1b6ca8", "#c0392b", "#1e8449", "#7d3c98",
                                    "#b7950b", "#34495e"};
    const double W = 640, H = 420, ml = 70, mr = 20, mt = 40, mb = 50;

    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    bool first = true;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size())
            throw std::invalid_argument("svg: series x/y size mismatch");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if (first) { x0 = x1 = s.x[i]; y0 = y1 = s.y[i]; first = false; }
            x0 = std::min(x0, s.x[i]); x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i]); y1 = std::max(y1, s.y[i]);
        }
    }
    if (x1 - x0 <= 0) x1 = x0 + 1;
    if (y1 - y0 <= 0) y1 = y0 + 1;
    const double ypad = 0.05 * (y1 - y0);
    y0 -= ypad; y1 += ypad;

    auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (W - ml - mr); };
    auto py = [&](double y) { return H - mb - (y - y0) / (y1 - y0) * (H - mt - mb); };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("svg: cannot open " + path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
        << "' viewBox='0 0 " << W << " " << H << "'>\n"
        << "<rect width='100%' height='100%' fill='white'/>\n"
        << "<text x='" << W / 2 << "' y='24' text-anchor='middle' font-size='16'>"
        << title << "</text>\n";

    // Axes with four ticks per side.
    out << "<line x1='" << ml << "' y1='" << H - mb << "' x2='" << W - mr << "' y2='"
        << H - mb << "' stroke='black'/>\n"
        << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << H - mb
        << "' stroke='black'/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = x0 + k * (x1 - x0) / 4, yv = y0 + k * (y1 - y0) / 4;
        out << "<line x1='" << px(xv) << "' y1='" << H - mb << "' x2='" << px(xv)
            << "' y2='" << H - mb + 5 << "' stroke='black'/>\n"
            << "<text x='" << px(xv) << "' y='" << H - mb + 18
            << "' text-anchor='middle' font-size='11'>" << csv::num(xv).substr(0, 8)
            << "</text>\n"
            << "<line x1='" << ml - 5 << "' y1='" << py(yv) << "' x2='" << ml << "' y2='"
            << py(yv) << "' stroke='black'/>\n"
            << "<text x='" << ml - 8 << "' y='" << py(yv) + 4
            << "' text-anchor='end' font-size='11'>" << csv::num(yv).substr(0, 8)
            << "</text>\n";
    }
    out << "<text x='" << (ml + W - mr) / 2 << "' y='" << H - 12
        << "' text-anchor='middle' font-size='13'>" << x_label << "</text>\n"
        << "<text x='16' y='" << (mt + H - mb) / 2
        << "' text-anchor='middle' font-size='13' transform='rotate(-90 16 "
        << (mt + H - mb) / 2 << ")'>" << y_label << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const char* color = palette[k % 6];
        out << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
        for (std::size_t i = 0; i < series[k].x.size(); ++i)
            if (std::isfinite(series[k].x[i]) && std::isfinite(series[k].y[i]))
                out << px(series[k].x[i]) << "," << py(series[k].y[i]) << " ";
        out << "'/>\n";
        if (!series[k].label.empty())
            out << "<text x='" << W - mr - 8 << "' y='" << mt + 16 * (k + 1)
                << "' text-anchor='end' font-size='12' fill='" << color << "'>"
                << series[k].label << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace fblab::svg
