#include <cmath>
#include <sstream>

#include <catch_amalgamated.hpp>

#include "polarsim/scenario.hpp"
#include "polarsim/svg.hpp"
#include "polarsim/sweep.hpp"
#include "support.hpp"

using namespace polarsim;
using testsupport::dist2;

namespace {

ModelParams fc(double alpha, double beta, double r, double delta = 0.0) {
    ModelParams p;
    p.alpha = alpha;
    p.beta = beta;
    p.red_fraction = r;
    p.delta = delta;
    return p;
}

}  // namespace

TEST_CASE("single-cell sweep classifies the fixed point") {
    SweepSpec spec;
    spec.base = fc(0.8, 0.7, 0.5);
    spec.mode = SweepMode::Classify;
    const auto result = phase_sweep(spec);
    REQUIRE(result.cells.size() == 1);
    REQUIRE(result.cells[0].ok);
    REQUIRE(result.cells[0].regime == Regime::Case1Consensus);
}

TEST_CASE("classification and integration endpoints agree off boundary") {
    SweepSpec spec;
    spec.base = fc(0.5, 0.45, 0.5);
    spec.axes = {{SweepAxis::Alpha, 0.1, 1.0, 15}, {SweepAxis::RedFraction, 0.2, 0.8, 15}};
    spec.mode = SweepMode::IntegrateEndpoint;
    spec.theta0 = {0.7, 0.7};
    spec.integration.horizon_t = 30.0;
    const auto result = phase_sweep(spec, 2);
    int checked = 0;
    for (const auto& cell : result.cells) {
        REQUIRE(cell.ok);
        REQUIRE(cell.has_regime);
        REQUIRE(cell.has_endpoint);
        if (cell.regime == Regime::Boundary) continue;
        ModelParams p = spec.base;
        p.alpha = cell.axis_value[0];
        p.red_fraction = cell.axis_value[1];
        REQUIRE(dist2(cell.endpoint, predict_limit_symmetric(0.7, p)) < 1e-6);
        ++checked;
    }
    REQUIRE(checked >= 200);
}

TEST_CASE("simulate-endpoint cells land near the integrated endpoint away from instability") {
    SweepSpec spec;
    spec.base = fc(0.8, 0.6, 0.5);
    spec.axes = {{SweepAxis::RedFraction, 0.3, 0.7, 3}};
    spec.theta0 = {0.7, 0.7};
    spec.sim.n_nodes = 2000;
    spec.sim.horizon = 20.0;
    spec.mode = SweepMode::SimulateEndpoint;
    const auto simulated = phase_sweep(spec, 2);
    spec.mode = SweepMode::IntegrateEndpoint;
    const auto integrated = phase_sweep(spec, 2);
    for (std::size_t i = 0; i < simulated.cells.size(); ++i) {
        REQUIRE(simulated.cells[i].ok);
        const Regime regime = integrated.cells[i].regime;
        if (regime == Regime::Case4NonPartisan || regime == Regime::Boundary) continue;
        const double gap = std::max(std::abs(simulated.cells[i].endpoint.theta_b - integrated.cells[i].endpoint.theta_b),
                                    std::abs(simulated.cells[i].endpoint.theta_r - integrated.cells[i].endpoint.theta_r));
        REQUIRE(gap < 0.05);
    }
}

TEST_CASE("sweeps are deterministic across worker counts") {
    SweepSpec spec;
    spec.base = fc(0.6, 0.5, 0.5);
    spec.axes = {{SweepAxis::Alpha, 0.2, 0.9, 8}, {SweepAxis::Beta, 0.1, 0.9, 8}};
    spec.mode = SweepMode::IntegrateEndpoint;
    const auto a = phase_sweep(spec, 1);
    const auto b = phase_sweep(spec, 3);
    REQUIRE(a.cells.size() == b.cells.size());
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        REQUIRE(a.cells[i].axis_value == b.cells[i].axis_value);
        REQUIRE(a.cells[i].regime == b.cells[i].regime);
        REQUIRE(a.cells[i].endpoint == b.cells[i].endpoint);
        REQUIRE(a.cells[i].seed == b.cells[i].seed);
    }
}

TEST_CASE("label-change fraction thins out as the grid refines") {
    auto changes = [](std::uint32_t k) {
        SweepSpec spec;
        spec.base = fc(0.5, 0.5, 0.5);
        spec.axes = {{SweepAxis::Alpha, 0.31, 0.99, k}, {SweepAxis::RedFraction, 0.21, 0.79, k}};
        spec.mode = SweepMode::Classify;
        const auto result = phase_sweep(spec, 2);
        std::size_t boundary_cells = 0, diffs = 0;
        for (std::uint32_t y = 0; y < k; ++y)
            for (std::uint32_t x = 0; x < k; ++x) {
                boundary_cells += result.at(x, y).regime == Regime::Boundary;
                if (x + 1 < k && result.at(x, y).regime != result.at(x + 1, y).regime) ++diffs;
                if (y + 1 < k && result.at(x, y).regime != result.at(x, y + 1).regime) ++diffs;
            }
        REQUIRE(boundary_cells == 0);  // exact equalities do not occur on a generic grid
        return static_cast<double>(diffs) / (k * k);
    };
    REQUIRE(changes(100) < changes(25));
}

TEST_CASE("homophily scan") {
    const ModelParams base = fc(0.8, 0.7, 0.65);
    SECTION("regime ladder and endpoints at rho 0.7 / 0.5 / 0.3") {
        IntegrationConfig cfg;
        cfg.horizon_t = 30.0;
        const auto scan = homophily_scan(base, {0.7, 0.5, 0.3}, {0.7, 0.7}, 1e-12, cfg);
        REQUIRE(scan.size() == 3);
        REQUIRE(scan[0].regime == Regime::Case1Consensus);
        REQUIRE(scan[1].regime == Regime::Case2RedMajorityPolarization);
        REQUIRE(scan[2].regime == Regime::Case4NonPartisan);
        REQUIRE(dist2(scan[0].endpoint, {1, 1}) < 1e-6);
        REQUIRE(dist2(scan[1].endpoint, {0, 1}) < 1e-6);
        REQUIRE(dist2(scan[2].endpoint, {0.5, 0.5}) < 1e-9);
        REQUIRE(regime_change_indices(scan) == std::vector<std::size_t>{0, 1});
    }
    SECTION("the neutral point equals the fully connected run") {
        const auto scan = homophily_scan(base, {0.5}, {0.7, 0.7});
        ModelParams complete = base;
        complete.topology = Topology::FullyConnected;
        const auto traj = integrate({0.7, 0.7}, complete);
        REQUIRE(scan[0].endpoint == traj.back().state);
    }
    SECTION("no out-group hate keeps consensus at every homophily") {
        ModelParams loveonly = fc(0.8, 0.0, 0.65);
        for (const auto& pt : homophily_scan(loveonly, {0.9, 0.7, 0.5, 0.3, 0.1}, {0.7, 0.7}))
            REQUIRE(pt.regime == Regime::Case1Consensus);
    }
}

TEST_CASE("scenario suites") {
    const std::string dir = POLARSIM_SCENARIO_DIR;
    SECTION("tipping-minority-flip rises then splits") {
        const auto result = scenario_suite("tipping-minority-flip", dir);
        REQUIRE(result.legs.size() == 1);
        const auto& mf = result.legs[0].mean_field;
        REQUIRE(dist2(mf.back().state, {0, 1}) < 1e-6);
        double peak = 0;
        for (const auto& s : mf.samples) peak = std::max(peak, s.state.theta_b);
        REQUIRE(peak > 0.68);
        REQUIRE(result.legs[0].stochastic.has_value());
    }
    SECTION("majority-flip abandons the popular choice") {
        const auto result = scenario_suite("majority-flip", dir);
        REQUIRE(dist2(result.legs[0].mean_field.back().state, {1, 0}) < 1e-6);
    }
    SECTION("breaking-unity ladder") {
        const auto result = scenario_suite("breaking-unity", dir);
        REQUIRE(result.legs.size() == 3);
        REQUIRE(dist2(result.legs[0].mean_field.back().state, {1, 1}) < 1e-6);
        REQUIRE(dist2(result.legs[1].mean_field.back().state, {0, 1}) < 1e-6);
        REQUIRE(dist2(result.legs[2].mean_field.back().state, {0.5, 0.5}) < 1e-9);
    }
    SECTION("regression bundles") {
        const auto lb = scenario_suite("large-beta", dir);
        REQUIRE(dist2(lb.legs[0].mean_field.back().state, {0.5, 0.5}) < 1e-9);
        REQUIRE(dist2(lb.legs[1].mean_field.back().state, {0, 1}) < 1e-6);
        REQUIRE(dist2(lb.legs[2].mean_field.back().state, {1, 0}) < 1e-6);
        const auto la = scenario_suite("large-alpha", dir);
        REQUIRE(dist2(la.legs[0].mean_field.back().state, {1, 1}) < 1e-6);
        REQUIRE(dist2(la.legs[1].mean_field.back().state, {1, 1}) < 1e-6);
        REQUIRE(dist2(la.legs[2].mean_field.back().state, {0, 1}) < 1e-6);
    }
    SECTION("unknown scenario name errors") {
        REQUIRE_THROWS_WITH(scenario_suite("no-such-scenario", dir),
                            Catch::Matchers::ContainsSubstring("no-such-scenario"));
    }
}

TEST_CASE("sweep CSV output") {
    SweepSpec spec;
    spec.base = fc(0.8, 0.7, 0.5);
    spec.axes = {{SweepAxis::Alpha, 0.2, 0.8, 3}};
    spec.mode = SweepMode::Classify;
    const auto result = phase_sweep(spec);
    std::ostringstream os;
    write_sweep_csv(os, result);
    const std::string text = os.str();
    REQUIRE(text.find("alpha,regime,") == 0);
    REQUIRE(text.find("ok") != std::string::npos);
}
