#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "polarsim/errors.hpp"
#include "polarsim/meanfield.hpp"
#include "polarsim/model.hpp"
#include "polarsim/parallel.hpp"
#include "polarsim/rng.hpp"
#include "polarsim/simulation.hpp"

namespace polarsim {

enum class SweepMode { Classify, IntegrateEndpoint, SimulateEndpoint };

inline const char* to_string(SweepMode m) {
    switch (m) {
        case SweepMode::Classify: return "classify";
        case SweepMode::IntegrateEndpoint: return "integrate-endpoint";
        default: return "simulate-endpoint";
    }
}

enum class SweepAxis { Alpha, Beta, Delta, RedFraction, Homophily, Theta0B, Theta0R };

inline const char* to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::Alpha: return "alpha";
        case SweepAxis::Beta: return "beta";
        case SweepAxis::Delta: return "delta";
        case SweepAxis::RedFraction: return "red_fraction";
        case SweepAxis::Homophily: return "homophily";
        case SweepAxis::Theta0B: return "theta0_b";
        default: return "theta0_r";
    }
}

inline SweepAxis sweep_axis_from_string(const std::string& s) {
    if (s == "alpha") return SweepAxis::Alpha;
    if (s == "beta") return SweepAxis::Beta;
    if (s == "delta") return SweepAxis::Delta;
    if (s == "red_fraction" || s == "r") return SweepAxis::RedFraction;
    if (s == "homophily" || s == "rho") return SweepAxis::Homophily;
    if (s == "theta0_b") return SweepAxis::Theta0B;
    if (s == "theta0_r") return SweepAxis::Theta0R;
    throw std::invalid_argument("unknown sweep axis: " + s);
}

struct AxisSpec {
    SweepAxis axis;
    double min;
    double max;
    std::uint32_t steps;  // number of grid points, >= 2

    double value(std::uint32_t i) const {
        return steps == 1 ? min : min + (max - min) * static_cast<double>(i) / (steps - 1);
    }
};

struct SimOptions {
    std::uint32_t n_nodes = 10000;
    double horizon = 20.0;
    std::uint32_t record_stride = 100;
    InitMode init = InitMode::Quota;
};

/// A grid experiment: up to two swept parameters, everything else fixed.
struct SweepSpec {
    std::vector<AxisSpec> axes;  // 0 (single cell), 1, or 2
    ModelParams base;
    PopulationState theta0{0.7, 0.7};
    SweepMode mode = SweepMode::Classify;
    double classify_tol = 1e-12;
    IntegrationConfig integration;
    SimOptions sim;
    std::uint64_t base_seed = 1;

    void validate() const {
        if (axes.size() > 2) throw std::invalid_argument("sweep supports at most 2 axes");
        for (const auto& ax : axes) {
            if (ax.steps < 2) throw std::invalid_argument("axis steps must be >= 2");
            if (!(ax.min <= ax.max)) throw std::invalid_argument("axis min must be <= max");
        }
        if (mode == SweepMode::Classify && base.delta != 0.0 &&
            std::none_of(axes.begin(), axes.end(), [](const AxisSpec& a) { return a.axis == SweepAxis::Delta; }))
            throw std::invalid_argument("classify sweeps require delta = 0");
    }
};

struct SweepCell {
    std::array<double, 2> axis_value{0.0, 0.0};
    bool has_regime = false;
    Regime regime = Regime::Boundary;
    bool has_endpoint = false;
    PopulationState endpoint;
    std::uint64_t seed = 0;
    bool ok = true;
    std::string error;
};

struct SweepResult {
    SweepSpec spec;
    std::uint32_t nx = 1;
    std::uint32_t ny = 1;
    std::vector<SweepCell> cells;  // row-major, index = y*nx + x
    double elapsed_seconds = 0.0;

    const SweepCell& at(std::uint32_t x, std::uint32_t y) const { return cells[static_cast<std::size_t>(y) * nx + x]; }
};

namespace detail {

inline void apply_axis(ModelParams& p, PopulationState& theta0, SweepAxis axis, double v) {
    switch (axis) {
        case SweepAxis::Alpha: p.alpha = v; break;
        case SweepAxis::Beta: p.beta = v; break;
        case SweepAxis::Delta: p.delta = v; break;
        case SweepAxis::RedFraction: p.red_fraction = v; break;
        case SweepAxis::Homophily: p.homophily = v; break;
        case SweepAxis::Theta0B: theta0.theta_b = v; break;
        case SweepAxis::Theta0R: theta0.theta_r = v; break;
    }
}

}  // namespace detail

/// Evaluate a parameter grid cell by cell. Failures are recorded in the cell
/// and never abort the sweep; cells are independent and each derives its own
/// seed from (base_seed, cell index), so results are identical for any
/// worker count.
inline SweepResult phase_sweep(const SweepSpec& spec, unsigned jobs = 1) {
    spec.validate();
    const auto t_start = std::chrono::steady_clock::now();
    SweepResult result;
    result.spec = spec;
    result.nx = spec.axes.size() >= 1 ? spec.axes[0].steps : 1;
    result.ny = spec.axes.size() >= 2 ? spec.axes[1].steps : 1;
    result.cells.resize(static_cast<std::size_t>(result.nx) * result.ny);

    parallel_for(result.cells.size(), jobs, [&](std::size_t idx) {
        SweepCell& cell = result.cells[idx];
        const std::uint32_t x = static_cast<std::uint32_t>(idx % result.nx);
        const std::uint32_t y = static_cast<std::uint32_t>(idx / result.nx);
        ModelParams p = spec.base;
        PopulationState theta0 = spec.theta0;
        if (!spec.axes.empty()) {
            cell.axis_value[0] = spec.axes[0].value(x);
            detail::apply_axis(p, theta0, spec.axes[0].axis, cell.axis_value[0]);
        }
        if (spec.axes.size() >= 2) {
            cell.axis_value[1] = spec.axes[1].value(y);
            detail::apply_axis(p, theta0, spec.axes[1].axis, cell.axis_value[1]);
        }
        cell.seed = derive_seed(spec.base_seed, "cell", idx);
        try {
            if (spec.mode == SweepMode::Classify || p.delta == 0.0) {
                cell.regime = classify_regime(p, spec.classify_tol);
                cell.has_regime = true;
            }
            if (spec.mode == SweepMode::IntegrateEndpoint) {
                const Trajectory traj = integrate(theta0, p, spec.integration);
                cell.endpoint = traj.back().state;
                cell.has_endpoint = true;
            } else if (spec.mode == SweepMode::SimulateEndpoint) {
                const std::uint32_t n = spec.sim.n_nodes;
                const auto n_red = static_cast<std::uint32_t>(std::floor(p.red_fraction * n + 0.5));
                const Network net = p.topology == Topology::StochasticBlock
                                        ? generate_sbm(n - n_red, n_red, p.homophily, derive_seed(cell.seed, "graph"))
                                        : generate_complete(n - n_red, n_red);
                Simulation sim(net, p, theta0, spec.sim.init, cell.seed);
                const Trajectory traj = sim.run(spec.sim.horizon, spec.sim.record_stride);
                cell.endpoint = traj.back().state;
                cell.has_endpoint = true;
            }
        } catch (const std::exception& e) {
            cell.ok = false;
            cell.error = e.what();
        }
    });
    result.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return result;
}

/// One row of a homophily scan.
struct ScanPoint {
    double rho;
    Regime regime;
    PopulationState endpoint;
};

/// Classify and integrate across a list of homophily values (block-model
/// couplings). Results keep the caller's order so regime thresholds can be
/// read off adjacent rows.
inline std::vector<ScanPoint> homophily_scan(const ModelParams& base, const std::vector<double>& rho_values,
                                             PopulationState theta0, double classify_tol = 1e-12,
                                             const IntegrationConfig& cfg = {}) {
    std::vector<ScanPoint> out;
    out.reserve(rho_values.size());
    for (double rho : rho_values) {
        ModelParams p = base;
        p.topology = Topology::StochasticBlock;
        p.homophily = rho;
        const Regime regime = classify_regime(p, classify_tol);
        const Trajectory traj = integrate(theta0, p, cfg);
        out.push_back({rho, regime, traj.back().state});
    }
    return out;
}

/// Indices i where the regime changes between rows i and i+1.
inline std::vector<std::size_t> regime_change_indices(const std::vector<ScanPoint>& scan) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i + 1 < scan.size(); ++i)
        if (scan[i].regime != scan[i + 1].regime) idx.push_back(i);
    return idx;
}

inline void write_sweep_csv(std::ostream& os, const SweepResult& result) {
    const auto& axes = result.spec.axes;
    for (const auto& ax : axes) os << to_string(ax.axis) << ',';
    os << "regime,theta_b,theta_r,seed,status,reason\n";
    for (const auto& cell : result.cells) {
        for (std::size_t a = 0; a < axes.size(); ++a) os << detail::format_double(cell.axis_value[a]) << ',';
        os << (cell.has_regime ? regime_id(cell.regime) : "") << ',';
        if (cell.has_endpoint)
            os << detail::format_double(cell.endpoint.theta_b) << ',' << detail::format_double(cell.endpoint.theta_r);
        else
            os << ',';
        os << ',' << cell.seed << ',' << (cell.ok ? "ok" : "failed") << ',';
        for (char c : cell.error) os << (c == ',' || c == '\n' ? ';' : c);
        os << '\n';
    }
}

inline void write_sweep_csv(const std::string& path, const SweepResult& result) {
    std::ofstream os(path);
    if (!os) throw io_error("cannot open for writing: " + path);
    write_sweep_csv(os, result);
    if (!os.flush()) throw io_error("write failed: " + path);
}

}  // namespace polarsim
