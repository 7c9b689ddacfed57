#pragma once

#include <algorithm>
#include <limits>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "snnmoo/analysis/front.hpp"
#include "snnmoo/io/svg.hpp"
#include "snnmoo/simulator.hpp"

namespace snnmoo::analysis {

inline std::string axis_title(const ParetoFront& front, std::size_t k) {
    const std::string name = k < front.objective_names.size() ? front.objective_names[k] : "objective " + std::to_string(k);
    if (name == "d_exc") {
        return "excitatory rate distance (Hz)";
    }
    if (name == "d_inh") {
        return "inhibitory rate distance (Hz)";
    }
    return name;
}

inline std::string series_label(const ParetoFront& front) {
    if (front.metadata.contains("label") && front.metadata["label"].is_string()) {
        return front.metadata["label"].get<std::string>();
    }
    return front.experiment.empty() ? "front" : front.experiment;
}

/// Scatter of the first two objectives, one stroke color per front. Fronts
/// with a third objective fill each marker from a color ramp over it.
inline std::string render_front_svg(std::span<const ParetoFront> fronts) {
    if (fronts.empty()) {
        throw std::invalid_argument("nothing to plot");
    }
    const std::size_t m = fronts.front().members.empty() ? fronts.front().objective_names.size()
                                                         : fronts.front().members.front().objectives.size();
    if (m < 2) {
        throw std::domain_error("front plots need at least two objectives");
    }
    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    double c_lo = x_lo, c_hi = -x_lo;
    for (const auto& front : fronts) {
        for (const auto& mem : front.members) {
            if (mem.objectives.size() != m) {
                throw std::domain_error("fronts differ in objective dimensionality");
            }
            x_lo = std::min(x_lo, mem.objectives[0]);
            x_hi = std::max(x_hi, mem.objectives[0]);
            y_lo = std::min(y_lo, mem.objectives[1]);
            y_hi = std::max(y_hi, mem.objectives[1]);
            if (m >= 3) {
                c_lo = std::min(c_lo, mem.objectives[2]);
                c_hi = std::max(c_hi, mem.objectives[2]);
            }
        }
    }
    if (!std::isfinite(x_lo)) {
        x_lo = y_lo = 0.0;
        x_hi = y_hi = 1.0;
    }
    const auto [xa, xb] = io::padded_range(x_lo, x_hi);
    const auto [ya, yb] = io::padded_range(y_lo, y_hi);
    const double width = 640, height = 480;
    const io::Axis x{xa, xb, 70.0, width - 190.0};
    const io::Axis y{ya, yb, height - 60.0, 20.0};

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" data-x-min=\"" << io::format_double(xa) << "\" data-x-max=\"" << io::format_double(xb)
        << "\" data-y-min=\"" << io::format_double(ya) << "\" data-y-max=\"" << io::format_double(yb) << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
    io::draw_axes(out, x, y, axis_title(fronts.front(), 0), axis_title(fronts.front(), 1));

    for (std::size_t s = 0; s < fronts.size(); ++s) {
        const auto color = io::series_color(s);
        out << "<g class=\"series\" data-series=\"" << io::xml_escape(series_label(fronts[s])) << "\"";
        if (fronts[s].metadata.contains("source") && fronts[s].metadata["source"].is_string()) {
            out << " data-source=\"" << io::xml_escape(fronts[s].metadata["source"].get<std::string>()) << "\"";
        }
        out << ">\n";
        for (const auto& mem : fronts[s].members) {
            std::string fill = color;
            if (m >= 3) {
                fill = io::ramp_color(c_hi > c_lo ? (mem.objectives[2] - c_lo) / (c_hi - c_lo) : 0.0);
            }
            out << "<circle class=\"marker\" data-x=\"" << io::format_double(mem.objectives[0]) << "\" data-y=\""
                << io::format_double(mem.objectives[1]) << "\" cx=\"" << io::px(x(mem.objectives[0])) << "\" cy=\""
                << io::px(y(mem.objectives[1])) << "\" r=\"4\" fill=\"" << fill << "\" stroke=\"" << color
                << "\"/>\n";
        }
        out << "</g>\n";
    }

    out << "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
    for (std::size_t s = 0; s < fronts.size(); ++s) {
        const double ly = 30.0 + 20.0 * static_cast<double>(s);
        out << "<g class=\"legend-entry\"><circle cx=\"" << io::px(width - 175) << "\" cy=\"" << io::px(ly)
            << "\" r=\"5\" fill=\"none\" stroke=\"" << io::series_color(s) << "\" stroke-width=\"2\"/><text x=\""
            << io::px(width - 164) << "\" y=\"" << io::px(ly + 4) << "\">" << io::xml_escape(series_label(fronts[s]))
            << "</text></g>\n";
    }
    if (m >= 3) {
        const double top = 40.0 + 20.0 * static_cast<double>(fronts.size());
        out << "<g class=\"colorbar\"><text x=\"" << io::px(width - 175) << "\" y=\"" << io::px(top)
            << "\">" << io::xml_escape(axis_title(fronts.front(), 2)) << "</text>\n";
        for (int k = 0; k <= 10; ++k) {
            out << "<rect x=\"" << io::px(width - 175) << "\" y=\"" << io::px(top + 8 + 12.0 * k)
                << "\" width=\"14\" height=\"12\" fill=\"" << io::ramp_color(1.0 - k / 10.0) << "\"/>\n";
        }
        out << "<text x=\"" << io::px(width - 155) << "\" y=\"" << io::px(top + 18) << "\">"
            << io::tick_label(c_hi) << "</text><text x=\"" << io::px(width - 155) << "\" y=\""
            << io::px(top + 138) << "\">" << io::tick_label(c_lo) << "</text></g>\n";
    }
    out << "</g>\n</svg>\n";
    return out.str();
}

inline void render_front_plot(std::span<const ParetoFront> fronts, const std::string& path) {
    const auto svg = render_front_svg(fronts);
    auto out = io::open_for_write(path);
    out << svg;
    io::finish_write(out, path);
}

/// Two stacked panels: spike raster (excitatory blue, inhibitory red) over
/// population rate traces.
inline void render_raster_plot(const SpikeRecord& record, const RateSeries& rates, const std::string& path) {
    const double width = 900, height = 620;
    const io::Axis tx{0.0, static_cast<double>(record.duration), 70.0, width - 30.0};
    const io::Axis ny{0.0, static_cast<double>(record.size()), 380.0, 20.0};
    double peak = 1.0;
    for (double r : rates.r_all) {
        peak = std::max(peak, r);
    }
    for (double r : rates.r_exc) {
        peak = std::max(peak, r);
    }
    for (double r : rates.r_inh) {
        peak = std::max(peak, r);
    }
    const io::Axis ry{0.0, peak * 1.05, height - 60.0, 440.0};

    auto out = io::open_for_write(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
    io::draw_axes(out, tx, ny, "time (ms)", "neuron");
    out << "<g class=\"raster\">\n";
    for (const auto& e : record.events) {
        out << "<rect x=\"" << io::px(tx(static_cast<double>(e.tick))) << "\" y=\""
            << io::px(ny(static_cast<double>(e.neuron))) << "\" width=\"1\" height=\"1\" fill=\""
            << (e.neuron < record.n_exc ? "#1f4fd6" : "#d62728") << "\"/>\n";
    }
    out << "</g>\n";
    io::draw_axes(out, tx, ry, "time (ms)", "rate (Hz)");
    auto trace = [&](const std::vector<double>& series, const char* color, const char* name) {
        out << "<polyline class=\"rate\" data-series=\"" << name << "\" fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1\" points=\"";
        for (std::size_t b = 0; b < series.size(); ++b) {
            const double t = static_cast<double>(b) * static_cast<double>(rates.bin);
            out << io::px(tx(t)) << ',' << io::px(ry(series[b])) << ' ';
        }
        out << "\"/>\n";
    };
    trace(rates.r_all, "#000", "all");
    trace(rates.r_exc, "#1f4fd6", "exc");
    trace(rates.r_inh, "#d62728", "inh");
    out << "</svg>\n";
    io::finish_write(out, path);
}

}  // namespace snnmoo::analysis
