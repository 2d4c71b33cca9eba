#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "polarsim/model.hpp"
#include "polarsim/network.hpp"
#include "polarsim/parallel.hpp"
#include "polarsim/rng.hpp"
#include "polarsim/trajectory.hpp"

namespace polarsim {

/// Degree-normalized neighbor statistics an updating node observes: counts
/// of in-/out-group neighbors holding each choice, divided by degree.
struct NeighborStats {
    double d_in0 = 0.0;
    double d_in1 = 0.0;
    double d_out0 = 0.0;
    double d_out1 = 0.0;
};

using Choice = std::uint8_t;  // 0 or 1

/// One node's update: adopt 1 if the net signal exceeds +delta, adopt 0 if
/// it falls below -delta, keep the current choice otherwise. Raw alpha and
/// beta apply here; topology enters only through which neighbors exist.
inline Choice apply_update_rule(const NeighborStats& s, const ModelParams& p, Choice current) {
    const double signal = p.alpha * (s.d_in1 - s.d_in0) - p.beta * (s.d_out1 - s.d_out0);
    if (signal > p.delta) return 1;
    if (signal < -p.delta) return 0;
    return current;
}

enum class InitMode { Quota, Bernoulli };

inline const char* to_string(InitMode m) { return m == InitMode::Quota ? "quota" : "bernoulli"; }

/// Asynchronous single-node dynamics on a fixed network: at every step one
/// node drawn uniformly (with replacement) re-evaluates its choice against
/// its neighbors. Group tallies are cached and kept in sync incrementally.
class Simulation {
public:
    Simulation(const Network& net, const ModelParams& params, PopulationState theta0, InitMode mode,
               std::uint64_t seed)
        : net_(&net), params_(params), rng_(derive_seed(seed, "sim-steps")) {
        params_.validate();
        if (net.blue_count() == 0 || net.red_count() == 0)
            throw std::invalid_argument("simulation needs at least one node in each party");
        if (theta0.theta_b < 0 || theta0.theta_b > 1 || theta0.theta_r < 0 || theta0.theta_r > 1)
            throw std::invalid_argument("theta0 must lie in [0,1]^2");
        theta0_ = theta0;
        seed_ = seed;
        init_mode_ = mode;
        choices_.assign(net.size(), 0);
        std::mt19937_64 init_rng(derive_seed(seed, "sim-init"));
        if (mode == InitMode::Quota) {
            init_quota(theta0.theta_b, Party::Blue, init_rng);
            init_quota(theta0.theta_r, Party::Red, init_rng);
        } else {
            for (NodeId v = 0; v < net.size(); ++v) {
                const double p = net.party(v) == Party::Blue ? theta0.theta_b : theta0.theta_r;
                choices_[v] = sample_unit_open(init_rng) <= p ? 1 : 0;
            }
        }
        recount();
    }

    /// Restart from an explicit per-node assignment (used by symmetry and
    /// regression tests).
    static Simulation from_choices(const Network& net, const ModelParams& params, std::vector<Choice> choices,
                                   std::uint64_t seed) {
        Simulation sim(net, params, {0.0, 0.0}, InitMode::Quota, seed);
        if (choices.size() != net.size()) throw std::invalid_argument("choice vector size mismatch");
        sim.choices_ = std::move(choices);
        sim.recount();
        sim.theta0_ = sim.state();
        return sim;
    }

    const Network& network() const { return *net_; }
    const ModelParams& params() const { return params_; }
    std::uint64_t clock() const { return clock_; }
    std::uint64_t seed() const { return seed_; }
    const std::vector<Choice>& choices() const { return choices_; }

    PopulationState state() const {
        return {static_cast<double>(blue_ones_) / net_->blue_count(),
                static_cast<double>(red_ones_) / net_->red_count()};
    }

    NeighborStats neighbor_stats(NodeId v) const {
        const std::uint32_t deg = net_->degree(v);
        if (deg == 0) return {};
        std::uint32_t in1, in_total, out1, out_total;
        if (net_->is_complete()) {
            const bool blue = net_->party(v) == Party::Blue;
            const std::uint32_t same_ones = blue ? blue_ones_ : red_ones_;
            in_total = (blue ? net_->blue_count() : net_->red_count()) - 1;
            in1 = same_ones - choices_[v];
            out_total = blue ? net_->red_count() : net_->blue_count();
            out1 = blue ? red_ones_ : blue_ones_;
        } else {
            in1 = in_total = out1 = out_total = 0;
            const Party mine = net_->party(v);
            net_->for_each_neighbor(v, [&](NodeId u) {
                if (net_->party(u) == mine) {
                    ++in_total;
                    in1 += choices_[u];
                } else {
                    ++out_total;
                    out1 += choices_[u];
                }
            });
        }
        const double d = deg;
        return {(in_total - in1) / d, in1 / d, (out_total - out1) / d, out1 / d};
    }

    /// Execute one update; returns whether the sampled node changed choice.
    bool step() {
        const NodeId v = static_cast<NodeId>(sample_below(rng_, net_->size()));
        const Choice before = choices_[v];
        const Choice after = apply_update_rule(neighbor_stats(v), params_, before);
        ++clock_;
        if (after == before) return false;
        choices_[v] = after;
        const int delta = after ? 1 : -1;
        if (net_->party(v) == Party::Blue)
            blue_ones_ += delta;
        else
            red_ones_ += delta;
        assert(tallies_consistent());
        return true;
    }

    /// Run ceil(horizon_t * N) steps recording the population state every
    /// record_stride steps on the interpolated clock t = k/N. Initial and
    /// final states are always recorded.
    Trajectory run(double horizon_t, std::uint32_t record_stride = 1) {
        if (horizon_t <= 0.0) throw std::invalid_argument("horizon must be > 0");
        if (record_stride == 0) throw std::invalid_argument("record stride must be >= 1");
        const double n = net_->size();
        const std::uint64_t total = static_cast<std::uint64_t>(std::ceil(horizon_t * n));
        Trajectory traj;
        traj.meta = make_meta(horizon_t, record_stride);
        traj.samples.reserve(total / record_stride + 2);
        const std::uint64_t k0 = clock_;
        traj.samples.push_back({static_cast<double>(clock_ - k0) / n, state()});
        for (std::uint64_t i = 1; i <= total; ++i) {
            step();
            if (i % record_stride == 0 || i == total)
                traj.samples.push_back({static_cast<double>(clock_ - k0) / n, state()});
        }
        return traj;
    }

    bool tallies_consistent() const {
        std::uint32_t b = 0, r = 0;
        for (NodeId v = 0; v < net_->size(); ++v) {
            if (net_->party(v) == Party::Blue)
                b += choices_[v];
            else
                r += choices_[v];
        }
        return b == blue_ones_ && r == red_ones_;
    }

private:
    void init_quota(double theta, Party who, std::mt19937_64& rng) {
        const std::uint32_t group_n = who == Party::Blue ? net_->blue_count() : net_->red_count();
        const auto quota = static_cast<std::uint32_t>(std::floor(theta * group_n + 0.5));  // round half up
        std::vector<NodeId> members;
        members.reserve(group_n);
        for (NodeId v = 0; v < net_->size(); ++v)
            if (net_->party(v) == who) members.push_back(v);
        // Fisher-Yates prefix: the first `quota` slots are a uniform sample
        // without replacement.
        for (std::uint32_t i = 0; i < quota; ++i) {
            const auto j = i + static_cast<std::uint32_t>(sample_below(rng, members.size() - i));
            std::swap(members[i], members[j]);
            choices_[members[i]] = 1;
        }
    }

    void recount() {
        blue_ones_ = red_ones_ = 0;
        for (NodeId v = 0; v < net_->size(); ++v) {
            if (net_->party(v) == Party::Blue)
                blue_ones_ += choices_[v];
            else
                red_ones_ += choices_[v];
        }
    }

    TrajectoryMeta make_meta(double horizon, std::uint32_t stride) const {
        TrajectoryMeta m;
        m.source = "simulate";
        m.params = params_;
        m.theta0 = theta0_;
        m.seed = seed_;
        m.n_nodes = net_->size();
        m.n_blue = net_->blue_count();
        m.n_red = net_->red_count();
        m.record_stride = stride;
        m.horizon = horizon;
        return m;
    }

    const Network* net_;
    ModelParams params_;
    PopulationState theta0_;
    InitMode init_mode_ = InitMode::Quota;
    std::uint64_t seed_ = 0;
    std::vector<Choice> choices_;
    std::uint32_t blue_ones_ = 0;
    std::uint32_t red_ones_ = 0;
    std::uint64_t clock_ = 0;
    std::mt19937_64 rng_;
};

/// Monte Carlo estimate of the expected one-step state change from a frozen
/// state, with its standard error. Complete topology only, where a single
/// hypothetical update is O(1).
struct ExpectedStep {
    std::array<double, 2> mean;
    std::array<double, 2> stderr_;
};

inline ExpectedStep expected_step(const Simulation& sim, std::uint64_t reps, std::uint64_t seed) {
    if (!sim.network().is_complete())
        throw std::invalid_argument("expected_step requires the complete topology");
    if (reps < 2) throw std::invalid_argument("expected_step needs reps >= 2");
    const Network& net = sim.network();
    std::mt19937_64 rng(derive_seed(seed, "expected-step"));
    double sum_b = 0, sum_r = 0, sq_b = 0, sq_r = 0;
    for (std::uint64_t i = 0; i < reps; ++i) {
        const NodeId v = static_cast<NodeId>(sample_below(rng, net.size()));
        const Choice before = sim.choices()[v];
        const Choice after = apply_update_rule(sim.neighbor_stats(v), sim.params(), before);
        double db = 0, dr = 0;
        if (after != before) {
            const double delta = after ? 1.0 : -1.0;
            if (net.party(v) == Party::Blue)
                db = delta / net.blue_count();
            else
                dr = delta / net.red_count();
        }
        sum_b += db;
        sum_r += dr;
        sq_b += db * db;
        sq_r += dr * dr;
    }
    const double n = static_cast<double>(reps);
    const double mb = sum_b / n, mr = sum_r / n;
    const double vb = (sq_b / n - mb * mb) * n / (n - 1.0);
    const double vr = (sq_r / n - mr * mr) * n / (n - 1.0);
    return {{mb, mr}, {std::sqrt(vb / n), std::sqrt(vr / n)}};
}

/// Pointwise mean/stddev envelope over independently seeded repetitions of
/// one scenario, plus each repetition's final state. Reduction order is
/// fixed by repetition index, so results do not depend on the worker count.
struct Ensemble {
    std::vector<double> times;
    std::vector<PopulationState> mean;
    std::vector<PopulationState> stddev;
    std::vector<PopulationState> finals;
};

inline Ensemble run_ensemble(const Network& net, const ModelParams& params, PopulationState theta0, InitMode mode,
                             double horizon_t, std::uint32_t record_stride, std::uint32_t n_reps,
                             std::uint64_t seed_base, unsigned jobs = 1) {
    if (n_reps < 2) throw std::invalid_argument("ensemble needs n_reps >= 2");
    std::vector<Trajectory> runs(n_reps);
    parallel_for(n_reps, jobs, [&](std::size_t i) {
        Simulation sim(net, params, theta0, mode, derive_seed(seed_base, "rep", i));
        runs[i] = sim.run(horizon_t, record_stride);
    });
    const std::size_t m = runs[0].samples.size();
    Ensemble out;
    out.times.reserve(m);
    for (const auto& s : runs[0].samples) out.times.push_back(s.t);
    out.mean.assign(m, {});
    out.stddev.assign(m, {});
    for (const auto& run : runs) {
        if (run.samples.size() != m) throw std::logic_error("ensemble repetitions disagree on the time grid");
        out.finals.push_back(run.back().state);
    }
    for (std::size_t j = 0; j < m; ++j) {
        double sb = 0, sr = 0;
        for (const auto& run : runs) {
            sb += run.samples[j].state.theta_b;
            sr += run.samples[j].state.theta_r;
        }
        const double mb = sb / n_reps, mr = sr / n_reps;
        double qb = 0, qr = 0;
        for (const auto& run : runs) {
            const double eb = run.samples[j].state.theta_b - mb;
            const double er = run.samples[j].state.theta_r - mr;
            qb += eb * eb;
            qr += er * er;
        }
        out.mean[j] = {mb, mr};
        out.stddev[j] = {std::sqrt(qb / (n_reps - 1)), std::sqrt(qr / (n_reps - 1))};
    }
    return out;
}

}  // namespace polarsim
