#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "polarsim/jsonio.hpp"
#include "polarsim/meanfield.hpp"
#include "polarsim/network.hpp"
#include "polarsim/simulation.hpp"

namespace polarsim {

/// Stochastic counterpart of a scenario leg; absent legs run mean-field only.
struct ScenarioSim {
    std::uint32_t n_nodes = 10000;
    std::uint64_t seed = 1;
    std::uint32_t record_stride = 10;
    InitMode init = InitMode::Quota;
};

struct ScenarioLeg {
    std::string label;
    ModelParams params;
    PopulationState theta0;
    double horizon = 20.0;
    std::optional<ScenarioSim> sim;
};

/// A named, version-pinned experiment: the repository's scenario files carry
/// concrete parameter values for qualitative regimes that are described but
/// not numerically pinned elsewhere.
struct ScenarioSpec {
    std::string name;
    std::string description;
    std::vector<ScenarioLeg> legs;
};

struct ScenarioLegResult {
    ScenarioLeg leg;
    Trajectory mean_field;
    std::optional<Trajectory> stochastic;
};

struct ScenarioResult {
    ScenarioSpec spec;
    std::vector<ScenarioLegResult> legs;
};

inline ScenarioSpec load_scenario(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw io_error("cannot open scenario file: " + path);
    json j;
    try {
        j = json::parse(is);
    } catch (const json::parse_error& e) {
        throw io_error(path + ": " + e.what());
    }
    if (j.value("schema_version", 0) != 1)
        throw io_error(path + ": unsupported schema_version (expected 1)");
    ScenarioSpec spec;
    spec.name = j.value("name", "");
    spec.description = j.value("description", "");
    if (!j.contains("legs") || !j.at("legs").is_array() || j.at("legs").empty())
        throw io_error(path + ": scenario needs a non-empty `legs` array");
    std::size_t i = 0;
    for (const auto& lj : j.at("legs")) {
        const std::string where = "legs[" + std::to_string(i++) + "]";
        ScenarioLeg leg;
        leg.label = lj.value("label", std::to_string(i));
        leg.params = params_from_json(lj.at("params"), where + ".params");
        if (!lj.contains("theta0") || !lj.at("theta0").is_array() || lj.at("theta0").size() != 2)
            throw io_error(path + ": " + where + ".theta0 must be [theta_b, theta_r]");
        leg.theta0 = {lj.at("theta0")[0].get<double>(), lj.at("theta0")[1].get<double>()};
        leg.horizon = lj.value("horizon", 20.0);
        if (lj.contains("sim")) {
            const auto& sj = lj.at("sim");
            ScenarioSim sim;
            sim.n_nodes = sj.value("n", 10000u);
            sim.seed = sj.value("seed", std::uint64_t{1});
            sim.record_stride = sj.value("record_stride", 10u);
            sim.init = sj.value("init", "quota") == "bernoulli" ? InitMode::Bernoulli : InitMode::Quota;
            leg.sim = sim;
        }
        spec.legs.push_back(std::move(leg));
    }
    return spec;
}

inline ScenarioResult run_scenario(const ScenarioSpec& spec) {
    ScenarioResult result;
    result.spec = spec;
    for (const auto& leg : spec.legs) {
        ScenarioLegResult lr;
        lr.leg = leg;
        IntegrationConfig cfg;
        cfg.horizon_t = leg.horizon;
        lr.mean_field = integrate(leg.theta0, leg.params, cfg);
        if (leg.sim) {
            const auto& sc = *leg.sim;
            const auto n_red = static_cast<std::uint32_t>(std::floor(leg.params.red_fraction * sc.n_nodes + 0.5));
            const Network net =
                leg.params.topology == Topology::StochasticBlock
                    ? generate_sbm(sc.n_nodes - n_red, n_red, leg.params.homophily, derive_seed(sc.seed, "graph"))
                    : generate_complete(sc.n_nodes - n_red, n_red);
            Simulation sim(net, leg.params, leg.theta0, sc.init, sc.seed);
            lr.stochastic = sim.run(leg.horizon, sc.record_stride);
        }
        result.legs.push_back(std::move(lr));
    }
    return result;
}

/// Load and run `<dir>/<name>.json`.
inline ScenarioResult scenario_suite(const std::string& name, const std::string& scenarios_dir) {
    const std::string path = scenarios_dir + "/" + name + ".json";
    std::ifstream probe(path);
    if (!probe) throw std::invalid_argument("unknown scenario `" + name + "` (no file " + path + ")");
    return run_scenario(load_scenario(path));
}

}  // namespace polarsim
