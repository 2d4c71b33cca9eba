// Acceptance suite. Runs each criterion at its pinned tolerance and prints
// one pass/fail line per criterion; the process exits nonzero if any fail.
// Criterion numbers can be passed as arguments to run a subset.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "polarsim/meanfield.hpp"
#include "polarsim/model.hpp"
#include "polarsim/network.hpp"
#include "polarsim/scenario.hpp"
#include "polarsim/simulation.hpp"
#include "polarsim/sweep.hpp"
#include "support.hpp"

using namespace polarsim;
using testsupport::dist2;
namespace fs = std::filesystem;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

ModelParams fc(double alpha, double beta, double r) {
    ModelParams p;
    p.alpha = alpha;
    p.beta = beta;
    p.red_fraction = r;
    return p;
}

ModelParams sbm(double alpha, double beta, double r, double rho) {
    ModelParams p = fc(alpha, beta, r);
    p.topology = Topology::StochasticBlock;
    p.homophily = rho;
    return p;
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

// --- criterion 1: mean-field terminal states match the four-case limit
// prediction over >= 1000 draws per case, tolerance 1e-6.
void criterion1(Check& c) {
    auto rng = testsupport::make_rng(0xACC00001ULL);
    const Regime cases[4] = {Regime::Case1Consensus, Regime::Case2RedMajorityPolarization,
                             Regime::Case3BlueMajorityPolarization, Regime::Case4NonPartisan};
    IntegrationConfig cfg;
    cfg.horizon_t = 30.0;
    for (const Regime want : cases) {
        for (int i = 0; i < 1000; ++i) {
            const auto p = testsupport::draw_params_for_regime(rng, want, 1e-3);
            double theta0 = testsupport::rand_in(rng, 0.05, 0.95);
            while (std::abs(theta0 - 0.5) < 1e-3) theta0 = testsupport::rand_in(rng, 0.05, 0.95);
            const auto traj = integrate({theta0, theta0}, p, cfg);
            const auto predicted = predict_limit_symmetric(theta0, p);
            const double err = dist2(traj.back().state, predicted);
            c.require(err < 1e-6, std::string(regime_id(want)) + " draw " + std::to_string(i) +
                                      ": terminal off prediction by " + fmt(err));
            if (!c.ok) return;
        }
    }
    c.detail = "4000 draws matched within 1e-6";
}

// --- criterion 2: integration reaches a consensus corner iff the
// reachability test allows it, over >= 1000 asymmetric draws.
void criterion2(Check& c) {
    auto rng = testsupport::make_rng(0xACC00002ULL);
    IntegrationConfig cfg;
    cfg.horizon_t = 40.0;
    int checked = 0;
    while (checked < 1000) {
        const auto p = testsupport::draw_params_off_boundary(rng, 1e-3);
        const PopulationState theta0{testsupport::rand_in(rng, 0.02, 0.98), testsupport::rand_in(rng, 0.02, 0.98)};
        if (std::abs(theta0.theta_b - 0.5) < 1e-3 || std::abs(theta0.theta_r - 0.5) < 1e-3) continue;
        if (std::abs(theta0.theta_b - theta0.theta_r) < 1e-3) continue;
        const auto args = drift_arguments(theta0, p);
        if (std::abs(args.blue) < 1e-3 || std::abs(args.red) < 1e-3) continue;
        ++checked;
        const bool predicted = consensus_reachable(theta0, p);
        const auto end = integrate(theta0, p, cfg).back().state;
        const bool reached = dist2(end, {0, 0}) < 1e-6 || dist2(end, {1, 1}) < 1e-6;
        c.require(reached == predicted, "draw " + std::to_string(checked) + ": reachability " +
                                            (predicted ? "true" : "false") + " but terminal (" +
                                            fmt(end.theta_b) + ", " + fmt(end.theta_r) + ")");
        if (!c.ok) return;
    }
    c.detail = "1000 draws, 100% agreement";
}

// --- criterion 3: 100x100 classify sweep shows four connected regions with
// boundaries on r/(1-r) = alpha/beta and r/(1-r) = beta/alpha, and no
// consensus cell left of alpha/beta = 1.
void criterion3(Check& c) {
    SweepSpec spec;
    spec.base = fc(0.5, 0.35, 0.5);
    spec.axes = {{SweepAxis::Alpha, 0.035, 0.995, 100}, {SweepAxis::RedFraction, 0.17, 0.72, 100}};
    spec.mode = SweepMode::Classify;
    const auto result = phase_sweep(spec, 2);

    std::set<Regime> present;
    for (const auto& cell : result.cells) {
        if (!cell.ok) {
            c.require(false, "cell failed: " + cell.error);
            return;
        }
        present.insert(cell.regime);
        const double x = cell.axis_value[0] / spec.base.beta;
        if (x < 1.0)
            c.require(cell.regime != Regime::Case1Consensus,
                      "consensus cell at alpha/beta = " + fmt(x) + " < 1");
    }
    c.require(present.count(Regime::Boundary) == 0, "unexpected boundary cells on a generic grid");
    for (const Regime r : {Regime::Case1Consensus, Regime::Case2RedMajorityPolarization,
                           Regime::Case3BlueMajorityPolarization, Regime::Case4NonPartisan})
        c.require(present.count(r) == 1, std::string("regime ") + regime_id(r) + " missing from the diagram");
    if (!c.ok) return;

    // each regime's cells form one 4-connected component
    const auto nx = result.nx, ny = result.ny;
    std::vector<int> comp(nx * ny, -1);
    int n_comp = 0;
    for (std::uint32_t start = 0; start < nx * ny; ++start) {
        if (comp[start] != -1) continue;
        const Regime label = result.cells[start].regime;
        std::vector<std::uint32_t> stack{start};
        comp[start] = n_comp;
        while (!stack.empty()) {
            const auto idx = stack.back();
            stack.pop_back();
            const std::uint32_t x = idx % nx, y = idx / nx;
            const std::uint32_t nbr[4][2] = {{x + 1, y}, {x - 1, y}, {x, y + 1}, {x, y - 1}};
            for (const auto& [xx, yy] : nbr) {
                if (xx >= nx || yy >= ny) continue;
                const auto j = yy * nx + xx;
                if (comp[j] == -1 && result.cells[j].regime == label) {
                    comp[j] = n_comp;
                    stack.push_back(j);
                }
            }
        }
        ++n_comp;
    }
    c.require(n_comp == 4, "expected 4 connected regions, found " + std::to_string(n_comp));

    // every label change between neighbors straddles one of the two curves
    auto ratios = [&](const SweepCell& cell) {
        const double x = cell.axis_value[0] / spec.base.beta;
        const double r = cell.axis_value[1];
        const double y = r / (1.0 - r);
        return std::pair<double, double>{y - x, x * y - 1.0};
    };
    for (std::uint32_t y = 0; y < ny && c.ok; ++y)
        for (std::uint32_t x = 0; x < nx && c.ok; ++x) {
            const auto& a = result.at(x, y);
            const std::pair<std::uint32_t, std::uint32_t> next[2] = {{x + 1, y}, {x, y + 1}};
            for (const auto& [xx, yy] : next) {
                if (xx >= nx || yy >= ny) continue;
                const auto& b = result.at(xx, yy);
                if (a.regime == b.regime) continue;
                const auto [pa, qa] = ratios(a);
                const auto [pb, qb] = ratios(b);
                c.require(pa * pb < 0.0 || qa * qb < 0.0,
                          "label change away from both boundary curves near alpha=" + fmt(a.axis_value[0]) +
                              " r=" + fmt(a.axis_value[1]));
            }
        }
    if (c.ok) c.detail = "4 connected regions, boundaries on both ratio curves";
}

// --- criterion 4: homophily flip at alpha=0.8 beta=0.7 r=0.65. Mean field
// exact; stochastic N=10000 endpoints within 0.05 sup norm; rho=0.3
// classifies Case 4 with an unstable center.
void criterion4(Check& c) {
    IntegrationConfig cfg;
    cfg.horizon_t = 25.0;
    const PopulationState theta0{0.7, 0.7};

    const auto mf_consensus = integrate(theta0, sbm(0.8, 0.7, 0.65, 0.7), cfg).back().state;
    c.require(dist2(mf_consensus, {1, 1}) < 1e-6, "rho=0.7 mean field missed (1,1)");
    const auto mf_split = integrate(theta0, sbm(0.8, 0.7, 0.65, 0.5), cfg).back().state;
    c.require(dist2(mf_split, {0, 1}) < 1e-6, "rho=0.5 mean field missed (0,1)");
    c.require(classify_regime(sbm(0.8, 0.7, 0.65, 0.3)) == Regime::Case4NonPartisan, "rho=0.3 not Case 4");
    c.require(stability_probe({0.5, 0.5}, sbm(0.8, 0.7, 0.65, 0.3)) == Stability::Unstable,
              "center not flagged unstable at rho=0.3");
    if (!c.ok) return;

    const auto endpoint_of = [&](double rho, std::uint64_t seed) {
        const auto net = generate_sbm(3500, 6500, rho, seed);
        Simulation sim(net, sbm(0.8, 0.7, 0.65, rho), theta0, InitMode::Quota, seed + 1);
        return sim.run(25.0, 100).back().state;
    };
    const auto s07 = endpoint_of(0.7, 0xACC40001ULL);
    c.require(std::max(std::abs(s07.theta_b - 1.0), std::abs(s07.theta_r - 1.0)) <= 0.05,
              "rho=0.7 stochastic endpoint (" + fmt(s07.theta_b) + ", " + fmt(s07.theta_r) + ") off (1,1)");
    const auto s05 = endpoint_of(0.5, 0xACC40002ULL);
    c.require(std::max(std::abs(s05.theta_b - 0.0), std::abs(s05.theta_r - 1.0)) <= 0.05,
              "rho=0.5 stochastic endpoint (" + fmt(s05.theta_b) + ", " + fmt(s05.theta_r) + ") off (0,1)");
    if (c.ok) c.detail = "mean field exact, N=10000 endpoints within 0.05, rho=0.3 unstable Case 4";
}

// --- criterion 5: stochastic-to-mean-field convergence in N for the
// consensus scenario; median sup-distance shrinks and is <= 0.05 at N=10000.
void criterion5(Check& c) {
    const auto p = fc(0.8, 0.7, 0.5);
    IntegrationConfig cfg;
    cfg.horizon_t = 10.0;
    const auto mf = integrate({0.7, 0.7}, p, cfg);
    const auto median_sup = [&](std::uint32_t half, std::uint64_t seed_base) {
        std::vector<double> sups;
        for (int s = 0; s < 10; ++s) {
            const auto net = generate_complete(half, half);
            Simulation sim(net, p, {0.7, 0.7}, InitMode::Quota, derive_seed(seed_base, "rep", s));
            const auto traj = sim.run(10.0, 1);
            sups.push_back(sup_distance(traj, mf));
        }
        std::sort(sups.begin(), sups.end());
        return 0.5 * (sups[4] + sups[5]);
    };
    const double med_small = median_sup(500, 0xACC50001ULL);
    const double med_large = median_sup(5000, 0xACC50002ULL);
    c.require(med_small > med_large, "median sup at N=1000 (" + fmt(med_small) +
                                         ") does not exceed N=10000 (" + fmt(med_large) + ")");
    c.require(med_large <= 0.05, "N=10000 median sup " + fmt(med_large) + " > 0.05");
    if (c.ok) c.detail = "medians " + fmt(med_small) + " (N=1e3) > " + fmt(med_large) + " (N=1e4) <= 0.05";
}

// --- criterion 6: Monte Carlo expected one-step change equals drift/N
// within 3 standard errors at theta=(0.7,0.7), N=1000.
void criterion6(Check& c) {
    const auto net = generate_complete(500, 500);
    const auto p = fc(0.8, 0.7, 0.5);
    Simulation sim(net, p, {0.7, 0.7}, InitMode::Quota, 0xACC60001ULL);
    const auto est = expected_step(sim, 100000, 0xACC60002ULL);
    const double want = 0.3 / 1000.0;
    for (int comp = 0; comp < 2; ++comp) {
        const double dev = std::abs(est.mean[comp] - want);
        c.require(dev <= 3.0 * est.stderr_[comp],
                  "component " + std::to_string(comp) + " off by " + fmt(dev) + " > 3 SE (" +
                      fmt(3.0 * est.stderr_[comp]) + ")");
    }
    if (c.ok)
        c.detail = "mean (" + fmt(est.mean[0]) + ", " + fmt(est.mean[1]) + ") vs 3e-4, SE " + fmt(est.stderr_[0]);
}

// --- criterion 7: tipping scenarios, mean field exact and stochastic
// endpoints within 0.05 at N=10000.
void criterion7(Check& c) {
    const std::string dir = POLARSIM_SCENARIO_DIR;

    const auto tipping = scenario_suite("tipping-minority-flip", dir);
    const auto& mf_tip = tipping.legs[0].mean_field;
    c.require(dist2(mf_tip.back().state, {0, 1}) < 1e-6, "tipping mean field missed (0,1)");
    double peak = 0.0;
    std::size_t peak_idx = 0;
    for (std::size_t i = 0; i < mf_tip.samples.size(); ++i)
        if (mf_tip.samples[i].state.theta_b > peak) {
            peak = mf_tip.samples[i].state.theta_b;
            peak_idx = i;
        }
    c.require(peak > 0.68 && peak_idx > 0 && peak_idx + 1 < mf_tip.samples.size(),
              "blue trajectory lacks an interior maximum");
    c.require(tipping.legs[0].stochastic.has_value(), "tipping scenario lacks a stochastic leg");
    if (!c.ok) return;
    const auto tip_end = tipping.legs[0].stochastic->back().state;
    c.require(std::max(std::abs(tip_end.theta_b - 0.0), std::abs(tip_end.theta_r - 1.0)) <= 0.05,
              "tipping stochastic endpoint (" + fmt(tip_end.theta_b) + ", " + fmt(tip_end.theta_r) + ") off (0,1)");

    const auto majority = scenario_suite("majority-flip", dir);
    c.require(dist2(majority.legs[0].mean_field.back().state, {1, 0}) < 1e-6, "majority-flip mean field missed (1,0)");
    const auto maj_end = majority.legs[0].stochastic->back().state;
    c.require(std::max(std::abs(maj_end.theta_b - 1.0), std::abs(maj_end.theta_r - 0.0)) <= 0.05,
              "majority-flip stochastic endpoint (" + fmt(maj_end.theta_b) + ", " + fmt(maj_end.theta_r) +
                  ") off (1,0)");
    if (c.ok) c.detail = "both flips reproduced, stochastic endpoints within 0.05";
}

// --- criterion 8: re-running any CLI invocation from its emitted meta.json
// yields byte-identical CSV outputs.
void criterion8(Check& c) {
    const fs::path base = fs::temp_directory_path() / "polarsim_acceptance_c8";
    std::error_code ec;
    fs::remove_all(base, ec);
    fs::create_directories(base);
    const std::string cli = POLARSIM_CLI_PATH;

    const auto run = [&](const std::string& args) {
        const std::string cmd = cli + " " + args + " >/dev/null 2>&1";
        return WEXITSTATUS(std::system(cmd.c_str()));
    };
    const auto slurp = [](const fs::path& path) {
        std::ifstream is(path, std::ios::binary);
        std::ostringstream os;
        os << is.rdbuf();
        return os.str();
    };
    const auto rerun_identical = [&](const std::string& label, const std::string& args,
                                     const std::string& csv_name) {
        const fs::path a = base / (label + "_a");
        const fs::path b = base / (label + "_b");
        if (run(args + " --out " + a.string()) != 0) {
            c.require(false, label + ": first run failed");
            return;
        }
        if (run(label.substr(0, label.find('_')) + " --config " + (a / "meta.json").string() + " --out " +
                b.string()) != 0) {
            c.require(false, label + ": rerun from meta.json failed");
            return;
        }
        const auto bytes_a = slurp(a / csv_name);
        const auto bytes_b = slurp(b / csv_name);
        c.require(!bytes_a.empty() && bytes_a == bytes_b, label + ": " + csv_name + " differs across reruns");
    };

    rerun_identical("simulate_sbm",
                    "simulate --alpha 0.8 --beta 0.7 --r 0.6 --rho 0.6 --n 500 --seed 97 --horizon 3",
                    "trajectory.csv");
    rerun_identical("integrate_case2", "integrate --alpha 0.8 --beta 0.7 --r 0.65 --theta0 0.68 0.6",
                    "trajectory.csv");
    rerun_identical("sweep_classify",
                    "sweep --axis alpha:0.1:0.9:6 --axis red_fraction:0.25:0.75:6 --beta 0.5 --mode integrate",
                    "sweep.csv");
    if (c.ok) c.detail = "simulate, integrate and sweep reruns byte-identical";
}

struct Criterion {
    int id;
    const char* name;
    double budget_s;  // 0 = no budget
    std::function<void(Check&)> fn;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria = {
        {1, "four-case limit equivalence (4x1000 draws, 1e-6)", 30.0, criterion1},
        {2, "consensus-reachability iff-check (1000 asymmetric draws)", 60.0, criterion2},
        {3, "phase diagram structure (100x100 classify sweep)", 5.0, criterion3},
        {4, "homophily flip at rho 0.7/0.5/0.3", 60.0, criterion4},
        {5, "stochastic-to-mean-field convergence in N", 300.0, criterion5},
        {6, "expected one-step law at theta=(0.7,0.7)", 30.0, criterion6},
        {7, "tipping scenarios (minority and majority flips)", 60.0, criterion7},
        {8, "CLI determinism from meta.json", 0.0, criterion8},
    };
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& crit : criteria) {
        if (!wanted.empty() && !wanted.count(crit.id)) continue;
        Check check;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            crit.fn(check);
        } catch (const std::exception& e) {
            check.require(false, std::string("exception: ") + e.what());
        }
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (check.ok && crit.budget_s > 0.0 && elapsed > crit.budget_s)
            check.require(false, "runtime " + fmt(elapsed) + "s exceeds budget " + fmt(crit.budget_s) + "s");
        std::printf("%s  criterion %d [%6.2fs]  %s%s%s\n", check.ok ? "PASS" : "FAIL", crit.id, elapsed, crit.name,
                    check.detail.empty() ? "" : " -- ", check.detail.c_str());
        failures += check.ok ? 0 : 1;
    }
    return failures;
}
