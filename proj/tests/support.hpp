#pragma once

// Shared draw helpers and independent oracles for the test suites. Oracles
// re-derive expected values through a separate code path from the library.

#include <array>
#include <cmath>
#include <random>

#include "polarsim/model.hpp"

namespace testsupport {

inline std::mt19937_64 make_rng(std::uint64_t seed = 0x5eedULL) { return std::mt19937_64{seed}; }

inline double rand_in(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

/// Literal transcription of the limit equation's right-hand side, written
/// directly from the indicator definitions; checks the production drift path.
inline std::array<double, 2> drift_oracle(double tb, double tr, double alpha, double beta, double delta, double r) {
    const double arg_b = alpha * (1 - r) * (2 * tb - 1) - beta * r * (2 * tr - 1);
    const double arg_r = alpha * r * (2 * tr - 1) - beta * (1 - r) * (2 * tb - 1);
    const double p01b = arg_b > delta ? 1.0 : 0.0;
    const double p10b = arg_b < -delta ? 1.0 : 0.0;
    const double p01r = arg_r > delta ? 1.0 : 0.0;
    const double p10r = arg_r < -delta ? 1.0 : 0.0;
    return {(1 - tb) * p01b - tb * p10b, (1 - tr) * p01r - tr * p10r};
}

/// Random fully-connected or block-model parameters whose classification is
/// `want`, rejected until every defining comparison clears `margin`.
inline polarsim::ModelParams draw_params_for_regime(std::mt19937_64& rng, polarsim::Regime want, double margin,
                                                    bool allow_sbm = true) {
    using namespace polarsim;
    for (;;) {
        ModelParams p;
        p.alpha = rand_in(rng, 0.02, 1.0);
        p.beta = rand_in(rng, 0.0, 1.0);
        p.red_fraction = rand_in(rng, 0.05, 0.95);
        if (allow_sbm && rng() % 2 == 0) {
            p.topology = Topology::StochasticBlock;
            p.homophily = rand_in(rng, 0.05, 0.95);
        }
        if (classify_regime(p, margin) == want) return p;
    }
}

/// Any non-boundary parameter draw (uniform over the four regimes' union).
inline polarsim::ModelParams draw_params_off_boundary(std::mt19937_64& rng, double margin, bool allow_sbm = true) {
    using namespace polarsim;
    for (;;) {
        ModelParams p;
        p.alpha = rand_in(rng, 0.02, 1.0);
        p.beta = rand_in(rng, 0.0, 1.0);
        p.red_fraction = rand_in(rng, 0.05, 0.95);
        if (allow_sbm && rng() % 2 == 0) {
            p.topology = Topology::StochasticBlock;
            p.homophily = rand_in(rng, 0.05, 0.95);
        }
        if (classify_regime(p, margin) != Regime::Boundary) return p;
    }
}

inline double dist2(polarsim::PopulationState a, polarsim::PopulationState b) {
    return std::hypot(a.theta_b - b.theta_b, a.theta_r - b.theta_r);
}

}  // namespace testsupport
