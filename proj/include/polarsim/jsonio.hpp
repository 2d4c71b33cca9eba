#pragma once

#include <string>

#include <json.hpp>

#include "polarsim/errors.hpp"
#include "polarsim/model.hpp"
#include "polarsim/simulation.hpp"
#include "polarsim/trajectory.hpp"

namespace polarsim {

using json = nlohmann::json;

/// Range/type checked field extraction; errors name the offending key path.
namespace jsondetail {

inline double require_number(const json& j, const std::string& path, const std::string& key) {
    if (!j.contains(key)) throw std::invalid_argument("config error at " + path + "." + key + ": missing");
    if (!j.at(key).is_number())
        throw std::invalid_argument("config error at " + path + "." + key + ": expected a number");
    return j.at(key).get<double>();
}

inline double number_or(const json& j, const std::string& path, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number())
        throw std::invalid_argument("config error at " + path + "." + key + ": expected a number");
    return j.at(key).get<double>();
}

inline double checked_range(double v, double lo, double hi, bool open, const std::string& path,
                            const std::string& key) {
    const bool ok = open ? (v > lo && v < hi) : (v >= lo && v <= hi);
    if (!ok)
        throw std::invalid_argument("config error at " + path + "." + key + ": must be in " +
                                    (open ? "(" : "[") + std::to_string(lo) + "," + std::to_string(hi) +
                                    (open ? ")" : "]") + ", got " + std::to_string(v));
    return v;
}

}  // namespace jsondetail

inline json params_to_json(const ModelParams& p) {
    json j;
    j["alpha"] = p.alpha;
    j["beta"] = p.beta;
    j["delta"] = p.delta;
    j["red_fraction"] = p.red_fraction;
    j["homophily"] = p.homophily;
    j["topology"] = to_string(p.topology);
    return j;
}

inline ModelParams params_from_json(const json& j, const std::string& path = "params") {
    using namespace jsondetail;
    ModelParams p;
    p.alpha = checked_range(require_number(j, path, "alpha"), 0, 1, false, path, "alpha");
    p.beta = checked_range(require_number(j, path, "beta"), 0, 1, false, path, "beta");
    p.delta = checked_range(number_or(j, path, "delta", 0.0), 0, 1, false, path, "delta");
    p.red_fraction = checked_range(require_number(j, path, "red_fraction"), 0, 1, true, path, "red_fraction");
    p.homophily = checked_range(number_or(j, path, "homophily", 0.5), 0, 1, true, path, "homophily");
    std::string topo = j.value("topology", j.contains("homophily") ? "sbm" : "complete");
    if (topo == "complete")
        p.topology = Topology::FullyConnected;
    else if (topo == "sbm")
        p.topology = Topology::StochasticBlock;
    else
        throw std::invalid_argument("config error at " + path + ".topology: expected `complete` or `sbm`, got " +
                                    topo);
    return p;
}

inline json meta_to_json(const TrajectoryMeta& m) {
    json j;
    j["source"] = m.source;
    j["params"] = params_to_json(m.params);
    j["theta0"] = {m.theta0.theta_b, m.theta0.theta_r};
    j["seed"] = m.seed;
    j["n_nodes"] = m.n_nodes;
    j["n_blue"] = m.n_blue;
    j["n_red"] = m.n_red;
    j["record_stride"] = m.record_stride;
    j["step_h"] = m.step_h;
    j["horizon"] = m.horizon;
    j["stationary_stop"] = m.stationary_stop;
    return j;
}

}  // namespace polarsim
