#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "polarsim/errors.hpp"
#include "polarsim/model.hpp"

namespace polarsim {

struct TrajectorySample {
    double t;
    PopulationState state;
};

/// Provenance carried by every trajectory so outputs are reproducible from
/// their metadata alone.
struct TrajectoryMeta {
    std::string source;  // "simulate" | "integrate" | "file"
    ModelParams params;
    PopulationState theta0;
    std::uint64_t seed = 0;
    std::uint32_t n_nodes = 0;
    std::uint32_t n_blue = 0;
    std::uint32_t n_red = 0;
    std::uint32_t record_stride = 1;
    double step_h = 0.0;
    double horizon = 0.0;
    bool stationary_stop = false;  // integration halted on an exactly stationary state
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    TrajectoryMeta meta;

    bool empty() const { return samples.empty(); }
    const TrajectorySample& front() const { return samples.front(); }
    const TrajectorySample& back() const { return samples.back(); }

    /// State at time t under the piecewise-constant interpolation (value of
    /// the last sample at or before t).
    PopulationState at(double t) const {
        if (samples.empty()) throw std::logic_error("empty trajectory");
        if (t <= samples.front().t) return samples.front().state;
        std::size_t lo = 0, hi = samples.size() - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi + 1) / 2;
            if (samples[mid].t <= t)
                lo = mid;
            else
                hi = mid - 1;
        }
        return samples[lo].state;
    }
};

namespace detail {

inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace detail

inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "t,theta_b,theta_r\n";
    for (const auto& s : traj.samples)
        os << detail::format_double(s.t) << ',' << detail::format_double(s.state.theta_b) << ','
           << detail::format_double(s.state.theta_r) << '\n';
}

inline void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    std::ofstream os(path);
    if (!os) throw io_error("cannot open for writing: " + path);
    write_trajectory_csv(os, traj);
    if (!os.flush()) throw io_error("write failed: " + path);
}

/// Read a `t,theta_b,theta_r` CSV. Only the samples are recovered; metadata
/// lives in the JSON sidecar.
inline Trajectory read_trajectory_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw io_error("cannot open trajectory file: " + path);
    Trajectory traj;
    traj.meta.source = "file";
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(is, line)) throw io_error(path + ": empty file");
    ++lineno;
    if (line.size() && line.back() == '\r') line.pop_back();
    if (line != "t,theta_b,theta_r")
        throw io_error_at(path, lineno, "expected header `t,theta_b,theta_r`, got `" + line + "`");
    double prev_t = -1.0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        double t, b, r;
        char c1, c2;
        if (!(ss >> t >> c1 >> b >> c2 >> r) || c1 != ',' || c2 != ',')
            throw io_error_at(path, lineno, "expected `t,theta_b,theta_r` row");
        if (t <= prev_t) throw io_error_at(path, lineno, "time values must be strictly increasing");
        prev_t = t;
        traj.samples.push_back({t, {b, r}});
    }
    if (traj.samples.empty()) throw io_error(path + ": no samples");
    return traj;
}

}  // namespace polarsim
