#pragma once

#include <algorithm>
#include <fstream>
#include <string>
#include <vector>

#include "polarsim/errors.hpp"
#include "polarsim/sweep.hpp"
#include "polarsim/trajectory.hpp"

namespace polarsim {

/// Self-contained SVG emitters so figures reproduce without plotting stacks.
namespace svg {

namespace detail {

inline std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", x);
    return buf;
}

}  // namespace detail

/// theta_b / theta_r versus time for one or more trajectories. Blue solid
/// lines are theta_b, red are theta_r; extra trajectories are dashed.
inline void write_trajectory_plot(std::ostream& os, const std::vector<std::pair<std::string, const Trajectory*>>& series,
                                  int width = 640, int height = 420) {
    const double ml = 50, mr = 15, mt = 30, mb = 40;
    const double pw = width - ml - mr, ph = height - mt - mb;
    double t_max = 1e-9;
    for (const auto& [label, traj] : series)
        if (!traj->empty()) t_max = std::max(t_max, traj->back().t);
    auto x_of = [&](double t) { return ml + pw * t / t_max; };
    auto y_of = [&](double v) { return mt + ph * (1.0 - v); };
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"white\" stroke=\"black\"/>\n";
    for (double v : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        os << "<line x1=\"" << ml << "\" y1=\"" << detail::num(y_of(v)) << "\" x2=\"" << ml + pw << "\" y2=\""
           << detail::num(y_of(v)) << "\" stroke=\"#dddddd\"/>\n";
        os << "<text x=\"" << ml - 6 << "\" y=\"" << detail::num(y_of(v) + 4)
           << "\" font-size=\"11\" text-anchor=\"end\">" << detail::num(v) << "</text>\n";
    }
    os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 8 << "\" font-size=\"12\" text-anchor=\"middle\">t</text>\n";
    int series_idx = 0;
    for (const auto& [label, traj] : series) {
        const char* dash = series_idx == 0 ? "" : " stroke-dasharray=\"5,3\"";
        for (int comp = 0; comp < 2; ++comp) {
            os << "<polyline fill=\"none\" stroke=\"" << (comp == 0 ? "#1f4fd8" : "#d82f2f") << "\"" << dash
               << " stroke-width=\"1.5\" points=\"";
            for (const auto& s : traj->samples)
                os << detail::num(x_of(s.t)) << ',' << detail::num(y_of(comp == 0 ? s.state.theta_b : s.state.theta_r))
                   << ' ';
            os << "\"/>\n";
        }
        os << "<text x=\"" << ml + 6 << "\" y=\"" << mt + 14 + 14 * series_idx << "\" font-size=\"11\">" << label
           << "</text>\n";
        ++series_idx;
    }
    os << "</svg>\n";
}

inline void write_trajectory_plot(const std::string& path,
                                  const std::vector<std::pair<std::string, const Trajectory*>>& series,
                                  int width = 640, int height = 420) {
    std::ofstream os(path);
    if (!os) throw io_error("cannot open for writing: " + path);
    write_trajectory_plot(os, series, width, height);
    if (!os.flush()) throw io_error("write failed: " + path);
}

inline const char* regime_color(Regime r) {
    switch (r) {
        case Regime::Case1Consensus: return "#f2d544";          // yellow
        case Regime::Case2RedMajorityPolarization: return "#d84a3a";  // red
        case Regime::Case3BlueMajorityPolarization: return "#3a6fd8"; // blue
        case Regime::Case4NonPartisan: return "#4aa564";        // green
        default: return "#999999";
    }
}

/// Regime heatmap of a two-axis classify sweep.
inline void write_sweep_heatmap(std::ostream& os, const SweepResult& result, int cell_px = 6) {
    const int width = static_cast<int>(result.nx) * cell_px + 80;
    const int height = static_cast<int>(result.ny) * cell_px + 60;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    for (std::uint32_t y = 0; y < result.ny; ++y) {
        for (std::uint32_t x = 0; x < result.nx; ++x) {
            const SweepCell& cell = result.at(x, y);
            const char* color = cell.ok && cell.has_regime ? regime_color(cell.regime) : "#ffffff";
            os << "<rect x=\"" << 60 + x * cell_px << "\" y=\"" << 20 + (result.ny - 1 - y) * cell_px << "\" width=\""
               << cell_px << "\" height=\"" << cell_px << "\" fill=\"" << color << "\"/>\n";
        }
    }
    if (!result.spec.axes.empty())
        os << "<text x=\"" << 60 + result.nx * cell_px / 2 << "\" y=\"" << height - 10
           << "\" font-size=\"12\" text-anchor=\"middle\">" << to_string(result.spec.axes[0].axis) << "</text>\n";
    if (result.spec.axes.size() >= 2)
        os << "<text x=\"15\" y=\"" << 20 + result.ny * cell_px / 2 << "\" font-size=\"12\" text-anchor=\"middle\""
           << " transform=\"rotate(-90 15," << 20 + result.ny * cell_px / 2 << ")\">"
           << to_string(result.spec.axes[1].axis) << "</text>\n";
    os << "</svg>\n";
}

inline void write_sweep_heatmap(const std::string& path, const SweepResult& result, int cell_px = 6) {
    std::ofstream os(path);
    if (!os) throw io_error("cannot open for writing: " + path);
    write_sweep_heatmap(os, result, cell_px);
    if (!os.flush()) throw io_error("write failed: " + path);
}

}  // namespace svg
}  // namespace polarsim
