#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace polarsim {

enum class Topology { FullyConnected, StochasticBlock };

inline const char* to_string(Topology t) {
    return t == Topology::FullyConnected ? "complete" : "sbm";
}

/// Model parameters of the affective cascade dynamics.
///
/// alpha weighs conformity with same-party neighbors (in-group love), beta
/// weighs opposition to the other party (out-group hate), delta is the
/// inertia threshold the net social signal must clear before a node switches
/// its choice. red_fraction is the share of red nodes, homophily the
/// same-party link probability of the block model (ignored for the fully
/// connected topology).
struct ModelParams {
    double alpha = 0.5;
    double beta = 0.5;
    double delta = 0.0;
    double red_fraction = 0.5;
    double homophily = 0.5;
    Topology topology = Topology::FullyConnected;

    void validate() const {
        auto in_closed = [](double x) { return x >= 0.0 && x <= 1.0; };
        auto in_open = [](double x) { return x > 0.0 && x < 1.0; };
        if (!in_closed(alpha)) throw std::invalid_argument("alpha must be in [0,1], got " + std::to_string(alpha));
        if (!in_closed(beta)) throw std::invalid_argument("beta must be in [0,1], got " + std::to_string(beta));
        if (!in_closed(delta)) throw std::invalid_argument("delta must be in [0,1], got " + std::to_string(delta));
        if (!in_open(red_fraction))
            throw std::invalid_argument("red_fraction must be in (0,1), got " + std::to_string(red_fraction));
        if (!in_open(homophily))
            throw std::invalid_argument("homophily must be in (0,1), got " + std::to_string(homophily));
    }
};

/// Couplings after folding the topology into the fully connected form: the
/// block model rescales in-group love by rho and out-group hate by 1-rho.
struct EffectiveCouplings {
    double alpha_eff;
    double beta_eff;
};

inline EffectiveCouplings effective_couplings(const ModelParams& p) {
    if (p.topology == Topology::StochasticBlock) return {p.alpha * p.homophily, p.beta * (1.0 - p.homophily)};
    return {p.alpha, p.beta};
}

/// Fractions of each group currently holding choice-1.
struct PopulationState {
    double theta_b = 0.0;
    double theta_r = 0.0;

    friend bool operator==(const PopulationState&, const PopulationState&) = default;
};

inline double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

inline PopulationState clamp01(PopulationState s) { return {clamp01(s.theta_b), clamp01(s.theta_r)}; }

/// Indicator arguments of the limit drift: the net social signal a blue
/// (resp. red) updater sees at population state s. Positive favors choice-1.
struct DriftArguments {
    double blue;
    double red;
};

inline DriftArguments drift_arguments(PopulationState s, const ModelParams& p) {
    const auto [ae, be] = effective_couplings(p);
    const double r = p.red_fraction;
    const double ub = 2.0 * s.theta_b - 1.0;
    const double ur = 2.0 * s.theta_r - 1.0;
    return {ae * (1.0 - r) * ub - be * r * ur, ae * r * ur - be * (1.0 - r) * ub};
}

/// Right-hand side of the limit mean differential equation.
///
/// Each group's rate is (1-theta)*p01 - theta*p10 where the adoption
/// indicators fire on strict threshold crossings: p01 when the group's
/// argument exceeds +delta, p10 when it falls below -delta. Arguments inside
/// the closed band [-delta, +delta] contribute nothing (the keep-current
/// branch of the update rule).
inline std::array<double, 2> drift(PopulationState s, const ModelParams& p) {
    const DriftArguments a = drift_arguments(s, p);
    const double db = a.blue > p.delta ? (1.0 - s.theta_b) : (a.blue < -p.delta ? -s.theta_b : 0.0);
    const double dr = a.red > p.delta ? (1.0 - s.theta_r) : (a.red < -p.delta ? -s.theta_r : 0.0);
    return {db, dr};
}

/// Asymptotic regimes for zero inertia and a party-independent initial
/// state. Boundary is reported when a defining comparison is within
/// tolerance instead of guessing a side.
enum class Regime {
    Case1Consensus,
    Case2RedMajorityPolarization,
    Case3BlueMajorityPolarization,
    Case4NonPartisan,
    Boundary,
};

inline const char* regime_id(Regime r) {
    switch (r) {
        case Regime::Case1Consensus: return "Case1";
        case Regime::Case2RedMajorityPolarization: return "Case2";
        case Regime::Case3BlueMajorityPolarization: return "Case3";
        case Regime::Case4NonPartisan: return "Case4";
        case Regime::Boundary: return "Boundary";
    }
    return "?";
}

inline const char* regime_label(Regime r) {
    switch (r) {
        case Regime::Case1Consensus: return "consensus";
        case Regime::Case2RedMajorityPolarization: return "party-line polarization (red majority)";
        case Regime::Case3BlueMajorityPolarization: return "party-line polarization (blue majority)";
        case Regime::Case4NonPartisan: return "non-partisan polarization";
        case Regime::Boundary: return "boundary";
    }
    return "?";
}

/// Classify the asymptotic regime from the effective couplings and group
/// sizes. The defining ratio comparisons are evaluated by cross
/// multiplication so degenerate couplings (alpha_eff or beta_eff zero)
/// classify correctly. The two products are exactly the drift arguments at
/// the all-ones corner: consensus is a stable endpoint for a group iff its
/// corner argument is positive.
inline Regime classify_regime(const ModelParams& p, double tol = 1e-12) {
    p.validate();
    if (p.delta != 0.0) throw std::invalid_argument("classifier requires zero inertia (delta = 0)");
    if (tol < 0.0) throw std::invalid_argument("classification tolerance must be >= 0");
    const auto [ae, be] = effective_couplings(p);
    const double r = p.red_fraction;
    const double blue_corner = ae * (1.0 - r) - be * r;  // sign of alpha/beta - r/(1-r)
    const double red_corner = ae * r - be * (1.0 - r);   // sign of r/(1-r) - beta/alpha
    if (std::abs(blue_corner) <= tol || std::abs(red_corner) <= tol) return Regime::Boundary;
    if (red_corner > 0.0)
        return blue_corner > 0.0 ? Regime::Case1Consensus : Regime::Case2RedMajorityPolarization;
    return blue_corner > 0.0 ? Regime::Case3BlueMajorityPolarization : Regime::Case4NonPartisan;
}

/// Predicted limit state for a party-independent initial fraction theta0.
///
/// The party-line cases assign the majority group to the initially popular
/// choice; the component ordering follows the sign of the drift arguments at
/// the initial state, which persists along the trajectory.
inline PopulationState predict_limit_symmetric(double theta0, const ModelParams& p, double tol = 1e-12) {
    if (theta0 < 0.0 || theta0 > 1.0) throw std::invalid_argument("theta0 must be in [0,1]");
    if (theta0 == 0.5) throw std::invalid_argument("ambiguous at theta0=0.5");
    const Regime regime = classify_regime(p, tol);
    if (regime == Regime::Boundary) throw std::invalid_argument("boundary regime: no limit prediction");
    const bool up = theta0 > 0.5;
    switch (regime) {
        case Regime::Case1Consensus: return up ? PopulationState{1.0, 1.0} : PopulationState{0.0, 0.0};
        case Regime::Case2RedMajorityPolarization:
            return up ? PopulationState{0.0, 1.0} : PopulationState{1.0, 0.0};
        case Regime::Case3BlueMajorityPolarization:
            return up ? PopulationState{1.0, 0.0} : PopulationState{0.0, 1.0};
        default: return {0.5, 0.5};  // Case4
    }
}

/// Whether consensus is reached from a group-dependent initial state.
///
/// True iff the regime is Case 1 and the initial imbalance ratio
/// (2*theta_b-1)/(2*theta_r-1) lies strictly inside
/// (beta*r/(alpha*(1-r)), alpha*r/(beta*(1-r))), evaluated by cross
/// multiplication with the sign of 2*theta_r-1 handled explicitly. The two
/// cross products are the drift arguments at theta0: consensus is reachable
/// iff both groups start moving toward the side red initially favors.
inline bool consensus_reachable(PopulationState theta0, const ModelParams& p, double tol = 1e-12) {
    if (theta0.theta_b == 0.5 || theta0.theta_r == 0.5)
        throw std::invalid_argument("degenerate initial state: component at 0.5 makes the ratio undefined");
    const Regime regime = classify_regime(p, tol);
    if (regime == Regime::Boundary) throw std::invalid_argument("boundary regime: reachability undetermined");
    if (regime != Regime::Case1Consensus) return false;
    const DriftArguments a = drift_arguments(theta0, p);
    if (theta0.theta_r > 0.5) return a.blue > 0.0 && a.red > 0.0;
    return a.blue < 0.0 && a.red < 0.0;
}

/// A line a*theta_b + b*theta_r + c = 0 in state space.
struct AffineLocus {
    double a;
    double b;
    double c;

    double eval(PopulationState s) const { return a * s.theta_b + b * s.theta_r + c; }
};

/// Zero sets of the adoption indicators: where each group's drift argument
/// equals +delta or -delta. Trajectories reverse trend when they cross the
/// locus of their own group; at delta=0 the pair of each group collapses to
/// a single line through (0.5, 0.5).
struct TippingLines {
    AffineLocus blue_plus;
    AffineLocus blue_minus;
    AffineLocus red_plus;
    AffineLocus red_minus;
};

inline TippingLines tipping_boundaries(const ModelParams& p) {
    p.validate();
    const auto [ae, be] = effective_couplings(p);
    const double r = p.red_fraction;
    // blue argument: 2*ae*(1-r)*theta_b - 2*be*r*theta_r - (ae*(1-r) - be*r)
    const double ab = 2.0 * ae * (1.0 - r);
    const double bb = -2.0 * be * r;
    const double cb = -(ae * (1.0 - r) - be * r);
    // red argument: -2*be*(1-r)*theta_b + 2*ae*r*theta_r - (ae*r - be*(1-r))
    const double ar = -2.0 * be * (1.0 - r);
    const double br = 2.0 * ae * r;
    const double cr = -(ae * r - be * (1.0 - r));
    return {
        {ab, bb, cb - p.delta},
        {ab, bb, cb + p.delta},
        {ar, br, cr - p.delta},
        {ar, br, cr + p.delta},
    };
}

}  // namespace polarsim
