#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "polarsim/model.hpp"
#include "polarsim/trajectory.hpp"

namespace polarsim {

struct IntegrationConfig {
    double step_h = 1e-3;
    double horizon_t = 20.0;
    double stationary_tol = 1e-6;
    bool clamp = true;

    void validate() const {
        if (!(step_h > 0.0) || step_h > 1.0) throw std::invalid_argument("step_h must be in (0,1]");
        if (horizon_t < step_h) throw std::invalid_argument("horizon_t must be >= step_h");
        if (stationary_tol < 0.0) throw std::invalid_argument("stationary_tol must be >= 0");
    }
};

namespace detail {

// Region of one group's indicator argument relative to the inertia band:
// +1 adopt-1, -1 adopt-0, 0 keep-current. Arguments within snap_eps of the
// band edge count as inside; without this a trajectory that lands on a locus
// chatters at machine precision instead of sliding or crossing cleanly.
inline int band_region(double arg, double delta, double snap_eps) {
    if (arg > delta + snap_eps) return +1;
    if (arg < -delta - snap_eps) return -1;
    return 0;
}

inline double region_rate(int region, double theta) {
    return region > 0 ? 1.0 - theta : (region < 0 ? -theta : 0.0);
}

}  // namespace detail

/// Forward-Euler integration of the limit mean differential equation.
///
/// The drift is constant-shape between the indicator loci, so plain Euler is
/// accurate there; the only care needed is at the loci themselves. Steps
/// that would jump across a locus are clipped at the crossing, which is
/// exact because each argument is affine along the step segment. A group
/// whose argument sits on its locus contributes zero drift (the keep-current
/// band); when both groups do, the state is stationary and integration
/// stops. That is how the symmetric Case-4 trajectory halts at (0.5, 0.5)
/// instead of chattering around it.
inline Trajectory integrate(PopulationState theta0, const ModelParams& params, const IntegrationConfig& cfg = {}) {
    params.validate();
    cfg.validate();
    if (theta0.theta_b < 0 || theta0.theta_b > 1 || theta0.theta_r < 0 || theta0.theta_r > 1)
        throw std::invalid_argument("theta0 must lie in [0,1]^2");
    constexpr double snap_eps = 1e-13;

    Trajectory traj;
    traj.meta.source = "integrate";
    traj.meta.params = params;
    traj.meta.theta0 = theta0;
    traj.meta.step_h = cfg.step_h;
    traj.meta.horizon = cfg.horizon_t;

    PopulationState s = theta0;
    double t = 0.0;
    traj.samples.push_back({t, s});
    const std::uint64_t max_iter = static_cast<std::uint64_t>(std::ceil(cfg.horizon_t / cfg.step_h)) * 4 + 16;
    std::uint64_t iter = 0;
    while (t < cfg.horizon_t && iter++ < max_iter) {
        const DriftArguments a0 = drift_arguments(s, params);
        const int rb = detail::band_region(a0.blue, params.delta, snap_eps);
        const int rr = detail::band_region(a0.red, params.delta, snap_eps);
        const double gb = detail::region_rate(rb, s.theta_b);
        const double gr = detail::region_rate(rr, s.theta_r);
        if (gb == 0.0 && gr == 0.0) {
            traj.meta.stationary_stop = true;
            break;
        }
        double h = std::min(cfg.step_h, cfg.horizon_t - t);
        PopulationState next{s.theta_b + h * gb, s.theta_r + h * gr};
        if (cfg.clamp) next = clamp01(next);
        // Clip at the first locus the segment crosses: each argument is
        // affine in the step fraction, so the crossing fraction is exact.
        // Groups already sitting in the band contribute no drift and are not
        // clipped; they re-evaluate their region at the next step.
        const DriftArguments a1 = drift_arguments(next, params);
        double frac = 1.0;
        auto clip = [&](double from, double to, int region) {
            if (region == 0) return;
            auto edge_cross = [&](double edge) {
                if ((from < edge && to > edge) || (from > edge && to < edge))
                    frac = std::min(frac, (edge - from) / (to - from));
            };
            edge_cross(params.delta);
            if (params.delta != 0.0) edge_cross(-params.delta);
        };
        clip(a0.blue, a1.blue, rb);
        clip(a0.red, a1.red, rr);
        if (frac < 1.0) {
            next = {s.theta_b + frac * h * gb, s.theta_r + frac * h * gr};
            if (cfg.clamp) next = clamp01(next);
            h *= frac;
        }
        s = next;
        t += h;
        traj.samples.push_back({t, s});
    }
    return traj;
}

enum class Stability { Stable, Unstable, Indeterminate };

inline const char* to_string(Stability s) {
    switch (s) {
        case Stability::Stable: return "stable";
        case Stability::Unstable: return "unstable";
        default: return "indeterminate";
    }
}

struct StationaryReport {
    PopulationState point;
    bool reached = false;
    double reached_at = 0.0;
    std::optional<Stability> stability;  // set only by stability_probe
};

/// First time the drift magnitude stays below stationary_tol for a full unit
/// of t (or up to an early stationary stop), plus the terminal point.
inline StationaryReport find_stationary(const Trajectory& traj, const IntegrationConfig& cfg = {}) {
    if (traj.empty()) throw std::invalid_argument("empty trajectory");
    StationaryReport report;
    report.point = traj.back().state;
    const auto& samples = traj.samples;
    std::size_t run_start = samples.size();
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const bool at_end = i + 1 == samples.size();
        const auto g = drift(samples[i].state, traj.meta.params);
        double mag = std::hypot(g[0], g[1]);
        // an early integrator stop certifies the final state as stationary
        // even when the exact indicators sit a rounding error off the locus
        if (at_end && traj.meta.stationary_stop) mag = 0.0;
        if (mag < cfg.stationary_tol) {
            if (run_start == samples.size()) run_start = i;
            const double held = samples[i].t - samples[run_start].t;
            if (held >= 1.0 || (at_end && traj.meta.stationary_stop)) {
                report.reached = true;
                report.reached_at = samples[run_start].t;
                return report;
            }
        } else {
            run_start = samples.size();
        }
    }
    return report;
}

/// Probe local stability of a stationary point by integrating the four
/// axis-aligned +/-eps perturbations (clamped to the unit square). Stable if
/// every probe returns within eps/2 of the point by probe_horizon; unstable
/// if any probe leaves the 10*eps ball; indeterminate otherwise. The
/// thresholds are artifact conventions, not model quantities.
inline Stability stability_probe(PopulationState point, const ModelParams& params, double eps = 1e-3,
                                 double probe_horizon = 5.0, const IntegrationConfig& base_cfg = {}) {
    params.validate();
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be > 0");
    const auto g0 = drift(point, params);
    if (std::hypot(g0[0], g0[1]) > 1e-9)
        throw std::invalid_argument("stability probe requires a stationary point");
    IntegrationConfig cfg = base_cfg;
    cfg.horizon_t = probe_horizon;
    bool all_returned = true;
    bool any_diverged = false;
    const PopulationState probes[4] = {
        clamp01(PopulationState{point.theta_b + eps, point.theta_r}),
        clamp01(PopulationState{point.theta_b - eps, point.theta_r}),
        clamp01(PopulationState{point.theta_b, point.theta_r + eps}),
        clamp01(PopulationState{point.theta_b, point.theta_r - eps}),
    };
    for (const auto& start : probes) {
        const Trajectory traj = integrate(start, params, cfg);
        double max_dev = 0.0;
        for (const auto& sample : traj.samples)
            max_dev = std::max(max_dev, std::hypot(sample.state.theta_b - point.theta_b,
                                                   sample.state.theta_r - point.theta_r));
        const auto& end = traj.back().state;
        const double end_dev = std::hypot(end.theta_b - point.theta_b, end.theta_r - point.theta_r);
        if (end_dev > eps / 2.0) all_returned = false;
        if (max_dev > 10.0 * eps) any_diverged = true;
    }
    if (any_diverged) return Stability::Unstable;
    if (all_returned) return Stability::Stable;
    return Stability::Indeterminate;
}

/// Supremum over a shared time grid of the Euclidean distance between two
/// trajectories, both read through the piecewise-constant interpolation.
inline double sup_distance(const Trajectory& a, const Trajectory& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("empty trajectory");
    const double lo = std::max(a.front().t, b.front().t);
    const double hi = std::min(a.back().t, b.back().t);
    if (lo > hi) throw std::invalid_argument("trajectories do not overlap in time");
    double sup = 0.0;
    auto visit = [&](double t) {
        if (t < lo || t > hi) return;
        const PopulationState sa = a.at(t);
        const PopulationState sb = b.at(t);
        sup = std::max(sup, std::hypot(sa.theta_b - sb.theta_b, sa.theta_r - sb.theta_r));
    };
    visit(lo);
    for (const auto& s : a.samples) visit(s.t);
    for (const auto& s : b.samples) visit(s.t);
    visit(hi);
    return sup;
}

}  // namespace polarsim
