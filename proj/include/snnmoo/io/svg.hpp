#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <string_view>

#include "snnmoo/io/format.hpp"

namespace snnmoo::io {

inline std::string xml_escape(std::string_view s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

// Two decimals are plenty for pixel coordinates.
inline std::string px(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", x);
    return buf;
}

inline std::string tick_label(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", x);
    return buf;
}

/// Linear map from a data interval onto a pixel interval.
struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    double px_lo = 0.0;
    double px_hi = 1.0;

    double operator()(double v) const { return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo); }
};

/// Data range widened by `margin` of its span on both sides; a degenerate
/// range is widened around its value.
inline std::pair<double, double> padded_range(double lo, double hi, double margin = 0.05) {
    if (!(hi > lo)) {
        const double pad = lo == 0.0 ? 0.5 : std::abs(lo) * 0.5;
        return {lo - pad, hi + pad};
    }
    const double span = hi - lo;
    return {lo - margin * span, hi + margin * span};
}

/// Categorical palette.
inline const char* series_color(std::size_t k) {
    static constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                              "#9467bd", "#8c564b", "#e377c2", "#17becf"};
    return palette[k % (sizeof(palette) / sizeof(palette[0]))];
}

/// Sequential colormap for t in [0, 1] (dark purple to yellow).
inline std::string ramp_color(double t) {
    t = std::clamp(t, 0.0, 1.0);
    const int r = static_cast<int>(std::lround(68 + t * (253 - 68)));
    const int g = static_cast<int>(std::lround(1 + t * (231 - 1)));
    const int b = static_cast<int>(std::lround(84 + t * (37 - 84)));
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

inline void draw_axes(std::ostream& out, const Axis& x, const Axis& y, const std::string& x_label,
                      const std::string& y_label, int ticks = 5) {
    out << "<g class=\"axes\" stroke=\"#000\" fill=\"none\">\n";
    out << "<line x1=\"" << px(x.px_lo) << "\" y1=\"" << px(y.px_lo) << "\" x2=\"" << px(x.px_hi) << "\" y2=\""
        << px(y.px_lo) << "\"/>\n";
    out << "<line x1=\"" << px(x.px_lo) << "\" y1=\"" << px(y.px_lo) << "\" x2=\"" << px(x.px_lo) << "\" y2=\""
        << px(y.px_hi) << "\"/>\n";
    out << "</g>\n<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int k = 0; k <= ticks; ++k) {
        const double vx = x.lo + (x.hi - x.lo) * k / ticks;
        const double vy = y.lo + (y.hi - y.lo) * k / ticks;
        out << "<text x=\"" << px(x(vx)) << "\" y=\"" << px(y.px_lo + 16) << "\" text-anchor=\"middle\">"
            << tick_label(vx) << "</text>\n";
        out << "<text x=\"" << px(x.px_lo - 6) << "\" y=\"" << px(y(vy) + 4) << "\" text-anchor=\"end\">"
            << tick_label(vy) << "</text>\n";
    }
    out << "</g>\n";
    out << "<text class=\"x-label\" x=\"" << px((x.px_lo + x.px_hi) / 2) << "\" y=\"" << px(y.px_lo + 36)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << xml_escape(x_label)
        << "</text>\n";
    out << "<text class=\"y-label\" transform=\"translate(" << px(x.px_lo - 46) << "," << px((y.px_lo + y.px_hi) / 2)
        << ") rotate(-90)\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << xml_escape(y_label) << "</text>\n";
}

}  // namespace snnmoo::io
