// polarsim command-line front end: seeded, reproducible experiments on the
// affective cascade model. Every output directory receives a meta.json that
// regenerates its CSVs byte for byte.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polarsim/config.hpp"
#include "polarsim/jsonio.hpp"
#include "polarsim/meanfield.hpp"
#include "polarsim/model.hpp"
#include "polarsim/network.hpp"
#include "polarsim/scenario.hpp"
#include "polarsim/simulation.hpp"
#include "polarsim/svg.hpp"
#include "polarsim/sweep.hpp"
#include "polarsim/trajectory.hpp"
#include "polarsim/version.hpp"

namespace fs = std::filesystem;
using namespace polarsim;

namespace {

// Option layering: built-in defaults, then --config file values, then flags
// the user actually passed. The resolved json is what meta.json records.
class OptionSet {
public:
    explicit OptionSet(json defaults) : resolved_(std::move(defaults)) {}

    template <class T>
    CLI::Option* bind(CLI::App& cmd, const std::string& flag, T& var, const std::string& key,
                      const std::string& desc) {
        auto* opt = cmd.add_option(flag, var, desc);
        appliers_.emplace_back([opt, &var, key](json& j) {
            if (opt->count()) j[key] = var;
        });
        return opt;
    }

    CLI::Option* bind_flag(CLI::App& cmd, const std::string& flag, bool& var, const std::string& key,
                           const std::string& desc) {
        auto* opt = cmd.add_flag(flag, var, desc);
        appliers_.emplace_back([opt, &var, key](json& j) {
            if (opt->count()) j[key] = var;
        });
        return opt;
    }

    void on_flags(std::function<void(json&)> fn) { appliers_.push_back(std::move(fn)); }

    json resolve(const std::string& config_path, const std::string& command) const {
        json j = resolved_;
        if (!config_path.empty()) {
            const RunConfig rc = load_run_config(config_path);
            if (rc.command != command)
                throw std::invalid_argument("config error: file is for command `" + rc.command + "`, expected `" +
                                            command + "`");
            for (const auto& [k, v] : rc.options.items()) j[k] = v;
        }
        for (const auto& fn : appliers_) fn(j);
        return j;
    }

private:
    json resolved_;
    std::vector<std::function<void(json&)>> appliers_;
};

std::string default_out_dir() {
    const char* env = std::getenv("POLARSIM_OUT_DIR");
    return env && *env ? env : ".";
}

json default_param_json() {
    return params_to_json(ModelParams{});
}

void bind_params(CLI::App& cmd, OptionSet& opts, ModelParams& scratch, std::string& topology) {
    opts.bind(cmd, "--alpha", scratch.alpha, "alpha", "in-group love, in [0,1]");
    opts.bind(cmd, "--beta", scratch.beta, "beta", "out-group hate, in [0,1]");
    opts.bind(cmd, "--delta", scratch.delta, "delta", "inertia threshold, in [0,1]");
    opts.bind(cmd, "--r,--red-fraction", scratch.red_fraction, "red_fraction", "fraction of red nodes, in (0,1)");
    auto* rho = opts.bind(cmd, "--rho,--homophily", scratch.homophily, "homophily", "same-party link probability, in (0,1)");
    auto* topo = opts.bind(cmd, "--topology", topology, "topology", "complete | sbm")
                     ->check(CLI::IsMember({"complete", "sbm"}));
    // Passing --rho without an explicit --topology means the block model.
    opts.on_flags([rho, topo](json& j) {
        if (rho->count() && !topo->count()) j["topology"] = "sbm";
    });
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw io_error("cannot create output directory " + dir.string() + ": " + ec.message());
}

struct GroupSizes {
    std::uint32_t n_blue;
    std::uint32_t n_red;
};

// Explicit group sizes win; otherwise split n by red_fraction (round half up).
GroupSizes resolve_sizes(const json& opts) {
    if (opts.contains("n_blue") && opts.contains("n_red"))
        return {opts.at("n_blue").get<std::uint32_t>(), opts.at("n_red").get<std::uint32_t>()};
    const auto n = opts.at("n").get<std::uint32_t>();
    const double r = opts.at("red_fraction").get<double>();
    const auto n_red = static_cast<std::uint32_t>(std::floor(r * n + 0.5));
    return {n - n_red, n_red};
}

PopulationState theta0_from(const json& opts) {
    return {opts.at("theta0_b").get<double>(), opts.at("theta0_r").get<double>()};
}

int run_simulate(json opts) {
    const GroupSizes sizes = resolve_sizes(opts);
    if (sizes.n_blue == 0 || sizes.n_red == 0)
        throw std::invalid_argument("config error at n: both groups need at least one node");
    opts["n_blue"] = sizes.n_blue;
    opts["n_red"] = sizes.n_red;
    opts["n"] = sizes.n_blue + sizes.n_red;
    opts["red_fraction"] = static_cast<double>(sizes.n_red) / (sizes.n_blue + sizes.n_red);
    const ModelParams params = params_from_json(opts, "simulate");
    const auto seed = opts.at("seed").get<std::uint64_t>();
    const Network net = params.topology == Topology::StochasticBlock
                            ? generate_sbm(sizes.n_blue, sizes.n_red, params.homophily, derive_seed(seed, "graph"))
                            : generate_complete(sizes.n_blue, sizes.n_red);
    const std::string init = opts.at("init").get<std::string>();
    if (init != "quota" && init != "bernoulli")
        throw std::invalid_argument("config error at simulate.init: expected quota|bernoulli, got " + init);
    const InitMode mode = init == "bernoulli" ? InitMode::Bernoulli : InitMode::Quota;
    Simulation sim(net, params, theta0_from(opts), mode, seed);
    const Trajectory traj = sim.run(opts.at("horizon").get<double>(), opts.at("record_stride").get<std::uint32_t>());

    const fs::path dir = opts.at("out").get<std::string>();
    ensure_dir(dir);
    write_trajectory_csv((dir / "trajectory.csv").string(), traj);
    write_meta(dir, {"simulate", opts});
    if (opts.value("svg", false))
        svg::write_trajectory_plot((dir / "trajectory.svg").string(), {{"simulation", &traj}});
    const auto endpoint = traj.back().state;
    std::printf("simulate: N=%u steps=%llu final=(%.6f, %.6f) -> %s\n", net.size(),
                static_cast<unsigned long long>(sim.clock()), endpoint.theta_b, endpoint.theta_r,
                (dir / "trajectory.csv").string().c_str());
    return 0;
}

int run_integrate(json opts) {
    const ModelParams params = params_from_json(opts, "integrate");
    IntegrationConfig cfg;
    cfg.step_h = opts.at("step_h").get<double>();
    cfg.horizon_t = opts.at("horizon").get<double>();
    const Trajectory traj = integrate(theta0_from(opts), params, cfg);
    const fs::path dir = opts.at("out").get<std::string>();
    ensure_dir(dir);
    write_trajectory_csv((dir / "trajectory.csv").string(), traj);
    write_meta(dir, {"integrate", opts});
    if (opts.value("svg", false))
        svg::write_trajectory_plot((dir / "trajectory.svg").string(), {{"mean field", &traj}});
    const auto report = find_stationary(traj, cfg);
    const auto endpoint = traj.back().state;
    std::printf("integrate: t_end=%.4f final=(%.6f, %.6f) stationary=%s -> %s\n", traj.back().t, endpoint.theta_b,
                endpoint.theta_r, report.reached ? "yes" : "no", (dir / "trajectory.csv").string().c_str());
    return 0;
}

int run_classify(const json& opts) {
    const ModelParams params = params_from_json(opts, "classify");
    const double tol = opts.at("tol").get<double>();
    const Regime regime = classify_regime(params, tol);
    const auto couplings = effective_couplings(params);
    json out;
    out["regime"] = regime_id(regime);
    out["label"] = regime_label(regime);
    out["alpha_eff"] = couplings.alpha_eff;
    out["beta_eff"] = couplings.beta_eff;
    if (opts.contains("theta0") && regime != Regime::Boundary) {
        const double theta0 = opts.at("theta0").get<double>();
        const PopulationState limit = predict_limit_symmetric(theta0, params, tol);
        out["theta0"] = theta0;
        out["predicted_limit"] = {limit.theta_b, limit.theta_r};
    }
    std::cout << out.dump(2) << '\n';
    return 0;
}

int run_consensus_check(const json& opts) {
    const ModelParams params = params_from_json(opts, "consensus-check");
    const PopulationState theta0 = theta0_from(opts);
    json out;
    out["regime"] = regime_id(classify_regime(params, opts.at("tol").get<double>()));
    out["theta0"] = {theta0.theta_b, theta0.theta_r};
    out["consensus_reachable"] = consensus_reachable(theta0, params, opts.at("tol").get<double>());
    std::cout << out.dump(2) << '\n';
    return 0;
}

int run_compare(const std::string& file_a, const std::string& file_b) {
    const Trajectory a = read_trajectory_csv(file_a);
    const Trajectory b = read_trajectory_csv(file_b);
    try {
        std::printf("%.9g\n", sup_distance(a, b));
    } catch (const std::invalid_argument& e) {
        throw io_error(std::string(e.what()) + " (" + file_a + ", " + file_b + ")");
    }
    return 0;
}

AxisSpec parse_axis(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t pos = 0; (pos = text.find(':', start)) != std::string::npos; start = pos + 1)
        parts.push_back(text.substr(start, pos - start));
    parts.push_back(text.substr(start));
    if (parts.size() != 4)
        throw std::invalid_argument("axis must be `name:min:max:steps`, got `" + text + "`");
    AxisSpec ax;
    ax.axis = sweep_axis_from_string(parts[0]);
    try {
        ax.min = std::stod(parts[1]);
        ax.max = std::stod(parts[2]);
        ax.steps = static_cast<std::uint32_t>(std::stoul(parts[3]));
    } catch (const std::exception&) {
        throw std::invalid_argument("axis must be `name:min:max:steps`, got `" + text + "`");
    }
    return ax;
}

json sweep_spec_to_json(const SweepSpec& spec) {
    json j;
    j["mode"] = to_string(spec.mode);
    j["axes"] = json::array();
    for (const auto& ax : spec.axes)
        j["axes"].push_back({{"name", to_string(ax.axis)}, {"min", ax.min}, {"max", ax.max}, {"steps", ax.steps}});
    j["base"] = params_to_json(spec.base);
    j["theta0"] = {spec.theta0.theta_b, spec.theta0.theta_r};
    j["classify_tol"] = spec.classify_tol;
    j["base_seed"] = spec.base_seed;
    j["sim"] = {{"n", spec.sim.n_nodes},
                {"horizon", spec.sim.horizon},
                {"record_stride", spec.sim.record_stride},
                {"init", to_string(spec.sim.init)}};
    return j;
}

int run_sweep(json opts, unsigned jobs) {
    SweepSpec spec;
    for (const auto& ax : opts.at("axes")) spec.axes.push_back(parse_axis(ax.get<std::string>()));
    spec.base = params_from_json(opts, "sweep");
    spec.theta0 = theta0_from(opts);
    const std::string mode = opts.at("mode").get<std::string>();
    if (mode == "classify")
        spec.mode = SweepMode::Classify;
    else if (mode == "integrate")
        spec.mode = SweepMode::IntegrateEndpoint;
    else if (mode == "simulate")
        spec.mode = SweepMode::SimulateEndpoint;
    else
        throw std::invalid_argument("config error at mode: expected classify|integrate|simulate, got " + mode);
    spec.classify_tol = opts.at("tol").get<double>();
    spec.base_seed = opts.at("seed").get<std::uint64_t>();
    spec.sim.n_nodes = opts.at("sim_n").get<std::uint32_t>();
    spec.sim.horizon = opts.at("sim_horizon").get<double>();
    spec.sim.record_stride = opts.at("sim_stride").get<std::uint32_t>();
    spec.integration.horizon_t = opts.at("integrate_horizon").get<double>();

    const SweepResult result = phase_sweep(spec, jobs);
    const fs::path dir = opts.at("out").get<std::string>();
    ensure_dir(dir);
    write_sweep_csv((dir / "sweep.csv").string(), result);
    std::size_t failed = 0;
    for (const auto& cell : result.cells) failed += cell.ok ? 0 : 1;
    json manifest;
    manifest["spec"] = sweep_spec_to_json(spec);
    manifest["nx"] = result.nx;
    manifest["ny"] = result.ny;
    manifest["cells"] = result.cells.size();
    manifest["failed"] = failed;
    manifest["elapsed_seconds"] = result.elapsed_seconds;
    manifest["tool_version"] = POLARSIM_VERSION;
    {
        std::ofstream os(dir / "manifest.json");
        if (!os) throw io_error("cannot open for writing: " + (dir / "manifest.json").string());
        os << manifest.dump(2) << '\n';
    }
    write_meta(dir, {"sweep", opts});
    if (opts.value("svg", false)) svg::write_sweep_heatmap((dir / "heatmap.svg").string(), result);
    std::printf("sweep: %ux%u cells, %zu failed, %.2fs -> %s\n", result.nx, result.ny, failed,
                result.elapsed_seconds, (dir / "sweep.csv").string().c_str());
    return 0;
}

int run_scenario_cmd(json opts) {
    const std::string name = opts.at("name").get<std::string>();
    const ScenarioResult result = scenario_suite(name, opts.at("scenarios_dir").get<std::string>());
    const fs::path dir = opts.at("out").get<std::string>();
    ensure_dir(dir);
    for (const auto& leg : result.legs) {
        const std::string stem = name + "_" + leg.leg.label;
        write_trajectory_csv((dir / (stem + "_meanfield.csv")).string(), leg.mean_field);
        if (leg.stochastic) write_trajectory_csv((dir / (stem + "_sim.csv")).string(), *leg.stochastic);
        // per-leg sidecar: legs carry their own parameters
        json sidecar;
        sidecar["mean_field"] = meta_to_json(leg.mean_field.meta);
        if (leg.stochastic) sidecar["stochastic"] = meta_to_json(leg.stochastic->meta);
        std::ofstream os(dir / (stem + "_meta.json"));
        if (!os) throw io_error("cannot open for writing: " + (dir / (stem + "_meta.json")).string());
        os << sidecar.dump(2) << '\n';
        if (opts.value("svg", false)) {
            std::vector<std::pair<std::string, const Trajectory*>> series{{"mean field", &leg.mean_field}};
            if (leg.stochastic) series.push_back({"simulation", &*leg.stochastic});
            svg::write_trajectory_plot((dir / (stem + ".svg")).string(), series);
        }
    }
    write_meta(dir, {"scenario", opts});
    std::printf("scenario %s: %zu legs -> %s\n", name.c_str(), result.legs.size(), dir.string().c_str());
    return 0;
}

int run_gen_graph(json opts) {
    const GroupSizes sizes = resolve_sizes(opts);
    opts["n_blue"] = sizes.n_blue;
    opts["n_red"] = sizes.n_red;
    opts["n"] = sizes.n_blue + sizes.n_red;
    const bool sbm = opts.contains("rho");
    const Network net = sbm ? generate_sbm(sizes.n_blue, sizes.n_red, opts.at("rho").get<double>(),
                                           opts.at("seed").get<std::uint64_t>())
                            : generate_complete(sizes.n_blue, sizes.n_red);
    const fs::path dir = opts.at("out").get<std::string>();
    ensure_dir(dir);
    save_network(net, (dir / "edges.txt").string(), (dir / "party.txt").string());
    write_meta(dir, {"gen-graph", opts});
    std::printf("gen-graph: N=%u edges=%zu -> %s\n", net.size(), net.edge_count(), (dir / "edges.txt").string().c_str());
    return 0;
}

int run_inspect_graph(const json& opts) {
    const Network net =
        load_network(opts.at("edges").get<std::string>(), opts.at("party").get<std::string>());
    std::uint32_t min_deg = net.size(), max_deg = 0, isolated = 0;
    for (NodeId v = 0; v < net.size(); ++v) {
        const auto d = net.degree(v);
        min_deg = std::min(min_deg, d);
        max_deg = std::max(max_deg, d);
        isolated += d == 0;
    }
    json out;
    out["n"] = net.size();
    out["n_blue"] = net.blue_count();
    out["n_red"] = net.red_count();
    out["edges"] = net.edge_count();
    out["min_degree"] = min_deg;
    out["max_degree"] = max_deg;
    out["isolated"] = isolated;
    try {
        out["homophily_estimate"] = homophily_estimate(net);
    } catch (const std::invalid_argument&) {
        out["homophily_estimate"] = nullptr;
    }
    std::cout << out.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polarsim: affective-polarization cascade model toolkit"};
    app.set_version_flag("--version", POLARSIM_VERSION);
    app.require_subcommand(1);
    unsigned jobs = 1;
    app.add_option("--jobs", jobs, "worker threads for sweeps and ensembles")->capture_default_str();

    ModelParams scratch;      // flag targets; resolved values live in json
    std::string topology = "complete";
    std::string config_path;
    std::vector<double> theta0_pair;
    double theta0_scalar = 0.7;
    std::string out_dir;
    bool svg_flag = false;

    // ---- simulate ----
    auto* simulate = app.add_subcommand("simulate", "run the stochastic agent model, write trajectory CSV");
    json sim_defaults = default_param_json();
    sim_defaults["n"] = 1000;
    sim_defaults["theta0_b"] = 0.7;
    sim_defaults["theta0_r"] = 0.7;
    sim_defaults["init"] = "quota";
    sim_defaults["seed"] = 1;
    sim_defaults["horizon"] = 20.0;
    sim_defaults["record_stride"] = 1;
    sim_defaults["out"] = default_out_dir();
    sim_defaults["svg"] = false;
    OptionSet sim_opts(sim_defaults);
    std::uint32_t n_total = 1000, n_blue = 0, n_red = 0;
    std::uint64_t seed = 1;
    double horizon = 20.0;
    std::uint32_t stride = 1;
    std::string init_mode = "quota";
    bind_params(*simulate, sim_opts, scratch, topology);
    {
        auto* n_opt = sim_opts.bind(*simulate, "--n", n_total, "n", "total node count (split by --r)");
        auto* nb_opt = sim_opts.bind(*simulate, "--n-blue", n_blue, "n_blue", "blue node count");
        auto* nr_opt = sim_opts.bind(*simulate, "--n-red", n_red, "n_red", "red node count");
        nb_opt->needs(nr_opt);
        nr_opt->needs(nb_opt);
        sim_opts.on_flags([n_opt, nb_opt, nr_opt](json& j) {
            if (n_opt->count() && !nb_opt->count()) {
                j.erase("n_blue");
                j.erase("n_red");
            }
            if (nb_opt->count() && nr_opt->count()) j.erase("n");
        });
    }
    sim_opts.bind(*simulate, "--theta0", theta0_pair, "theta0", "initial fractions: theta_b theta_r")
        ->expected(2);
    sim_opts.on_flags([&theta0_pair](json& j) {
        if (j.contains("theta0")) {
            j["theta0_b"] = j["theta0"][0];
            j["theta0_r"] = j["theta0"][1];
            j.erase("theta0");
        }
    });
    sim_opts.bind(*simulate, "--init", init_mode, "init", "quota | bernoulli")
        ->check(CLI::IsMember({"quota", "bernoulli"}));
    sim_opts.bind(*simulate, "--seed", seed, "seed", "base seed for graph, init and steps");
    sim_opts.bind(*simulate, "--horizon", horizon, "horizon", "run length in interpolated time t = k/N");
    sim_opts.bind(*simulate, "--stride", stride, "record_stride", "record every this many steps");
    sim_opts.bind(*simulate, "--out", out_dir, "out", "output directory");
    sim_opts.bind_flag(*simulate, "--svg", svg_flag, "svg", "also write an SVG plot");
    simulate->add_option("--config", config_path, "meta.json or config file to start from");

    // ---- integrate ----
    auto* integrate_cmd = app.add_subcommand("integrate", "integrate the mean-field equation, write trajectory CSV");
    json int_defaults = default_param_json();
    int_defaults["theta0_b"] = 0.7;
    int_defaults["theta0_r"] = 0.7;
    int_defaults["step_h"] = 1e-3;
    int_defaults["horizon"] = 20.0;
    int_defaults["out"] = default_out_dir();
    int_defaults["svg"] = false;
    OptionSet int_opts(int_defaults);
    double step_h = 1e-3;
    bind_params(*integrate_cmd, int_opts, scratch, topology);
    int_opts.bind(*integrate_cmd, "--theta0", theta0_pair, "theta0", "initial fractions: theta_b theta_r")
        ->expected(2);
    int_opts.on_flags([&theta0_pair](json& j) {
        if (j.contains("theta0")) {
            j["theta0_b"] = j["theta0"][0];
            j["theta0_r"] = j["theta0"][1];
            j.erase("theta0");
        }
    });
    int_opts.bind(*integrate_cmd, "--step,--step-h", step_h, "step_h", "Euler step in t");
    int_opts.bind(*integrate_cmd, "--horizon", horizon, "horizon", "integration horizon in t");
    int_opts.bind(*integrate_cmd, "--out", out_dir, "out", "output directory");
    int_opts.bind_flag(*integrate_cmd, "--svg", svg_flag, "svg", "also write an SVG plot");
    integrate_cmd->add_option("--config", config_path, "meta.json or config file to start from");

    // ---- classify ----
    auto* classify_cmd = app.add_subcommand("classify", "print the asymptotic regime as JSON");
    json cls_defaults = default_param_json();
    cls_defaults["tol"] = 1e-12;
    OptionSet cls_opts(cls_defaults);
    double tol = 1e-12;
    bind_params(*classify_cmd, cls_opts, scratch, topology);
    cls_opts.bind(*classify_cmd, "--tol", tol, "tol", "boundary tolerance");
    cls_opts.bind(*classify_cmd, "--theta0", theta0_scalar, "theta0", "symmetric initial fraction for the limit prediction");
    classify_cmd->add_option("--config", config_path, "meta.json or config file to start from");

    // ---- consensus-check ----
    auto* consensus_cmd = app.add_subcommand("consensus-check", "evaluate consensus reachability from theta0");
    json con_defaults = default_param_json();
    con_defaults["theta0_b"] = 0.6;
    con_defaults["theta0_r"] = 0.6;
    con_defaults["tol"] = 1e-12;
    OptionSet con_opts(con_defaults);
    bind_params(*consensus_cmd, con_opts, scratch, topology);
    con_opts.bind(*consensus_cmd, "--theta0", theta0_pair, "theta0", "initial fractions: theta_b theta_r")
        ->expected(2);
    con_opts.on_flags([&theta0_pair](json& j) {
        if (j.contains("theta0")) {
            j["theta0_b"] = j["theta0"][0];
            j["theta0_r"] = j["theta0"][1];
            j.erase("theta0");
        }
    });
    con_opts.bind(*consensus_cmd, "--tol", tol, "tol", "boundary tolerance");
    consensus_cmd->add_option("--config", config_path, "meta.json or config file to start from");

    // ---- sweep ----
    auto* sweep_cmd = app.add_subcommand("sweep", "grid experiments: classify / integrate / simulate per cell");
    json swp_defaults = default_param_json();
    swp_defaults["axes"] = json::array();
    swp_defaults["mode"] = "classify";
    swp_defaults["theta0_b"] = 0.7;
    swp_defaults["theta0_r"] = 0.7;
    swp_defaults["tol"] = 1e-12;
    swp_defaults["seed"] = 1;
    swp_defaults["sim_n"] = 10000;
    swp_defaults["sim_horizon"] = 20.0;
    swp_defaults["sim_stride"] = 100;
    swp_defaults["integrate_horizon"] = 20.0;
    swp_defaults["out"] = default_out_dir();
    swp_defaults["svg"] = false;
    OptionSet swp_opts(swp_defaults);
    std::vector<std::string> axis_strings;
    std::string sweep_mode = "classify";
    std::uint32_t sim_n = 10000, sim_stride = 100;
    double sim_horizon = 20.0, integrate_horizon = 20.0;
    bind_params(*sweep_cmd, swp_opts, scratch, topology);
    swp_opts.bind(*sweep_cmd, "--axis", axis_strings, "axes", "swept axis `name:min:max:steps` (repeat up to 2)");
    swp_opts.bind(*sweep_cmd, "--mode", sweep_mode, "mode", "classify | integrate | simulate")
        ->check(CLI::IsMember({"classify", "integrate", "simulate"}));
    swp_opts.bind(*sweep_cmd, "--theta0", theta0_pair, "theta0", "initial fractions: theta_b theta_r")
        ->expected(2);
    swp_opts.on_flags([&theta0_pair](json& j) {
        if (j.contains("theta0")) {
            j["theta0_b"] = j["theta0"][0];
            j["theta0_r"] = j["theta0"][1];
            j.erase("theta0");
        }
    });
    swp_opts.bind(*sweep_cmd, "--tol", tol, "tol", "boundary tolerance for classification");
    swp_opts.bind(*sweep_cmd, "--seed", seed, "seed", "base seed; cells derive their own");
    swp_opts.bind(*sweep_cmd, "--sim-n", sim_n, "sim_n", "nodes per cell in simulate mode");
    swp_opts.bind(*sweep_cmd, "--sim-horizon", sim_horizon, "sim_horizon", "horizon per cell in simulate mode");
    swp_opts.bind(*sweep_cmd, "--sim-stride", sim_stride, "sim_stride", "record stride in simulate mode");
    swp_opts.bind(*sweep_cmd, "--integrate-horizon", integrate_horizon, "integrate_horizon",
                  "horizon per cell in integrate mode");
    swp_opts.bind(*sweep_cmd, "--out", out_dir, "out", "output directory");
    swp_opts.bind_flag(*sweep_cmd, "--svg", svg_flag, "svg", "also write a regime heatmap SVG");
    sweep_cmd->add_option("--config", config_path, "meta.json or config file to start from");

    // ---- compare ----
    auto* compare_cmd = app.add_subcommand("compare", "print the sup-distance between two trajectory CSVs");
    std::string file_a, file_b;
    compare_cmd->add_option("a", file_a, "first trajectory CSV")->required();
    compare_cmd->add_option("b", file_b, "second trajectory CSV")->required();

    // ---- scenario ----
    auto* scenario_cmd = app.add_subcommand("scenario", "run a named scenario suite from scenarios/");
    json scn_defaults;
    scn_defaults["scenarios_dir"] = "scenarios";
    scn_defaults["out"] = default_out_dir();
    scn_defaults["svg"] = false;
    OptionSet scn_opts(scn_defaults);
    std::string scenario_name, scenarios_dir = "scenarios";
    scn_opts.bind(*scenario_cmd, "--name", scenario_name, "name", "scenario name");
    scn_opts.bind(*scenario_cmd, "--scenarios-dir", scenarios_dir, "scenarios_dir", "directory of scenario JSON files");
    scn_opts.bind(*scenario_cmd, "--out", out_dir, "out", "output directory");
    scn_opts.bind_flag(*scenario_cmd, "--svg", svg_flag, "svg", "also write SVG plots");
    scenario_cmd->add_option("--config", config_path, "meta.json or config file to start from");

    // ---- gen-graph ----
    auto* gen_cmd = app.add_subcommand("gen-graph", "generate and save a network");
    json gen_defaults;
    gen_defaults["n"] = 1000;
    gen_defaults["red_fraction"] = 0.5;
    gen_defaults["seed"] = 1;
    gen_defaults["out"] = default_out_dir();
    OptionSet gen_opts(gen_defaults);
    double gen_rho = 0.5, gen_r = 0.5;
    gen_opts.bind(*gen_cmd, "--n", n_total, "n", "total node count (split by --r)");
    {
        auto* nb_opt = gen_opts.bind(*gen_cmd, "--n-blue", n_blue, "n_blue", "blue node count");
        auto* nr_opt = gen_opts.bind(*gen_cmd, "--n-red", n_red, "n_red", "red node count");
        nb_opt->needs(nr_opt);
        nr_opt->needs(nb_opt);
    }
    gen_opts.bind(*gen_cmd, "--r,--red-fraction", gen_r, "red_fraction", "fraction of red nodes");
    gen_opts.bind(*gen_cmd, "--rho", gen_rho, "rho", "block-model homophily; omit for a complete graph");
    gen_opts.bind(*gen_cmd, "--seed", seed, "seed", "sampling seed");
    gen_opts.bind(*gen_cmd, "--out", out_dir, "out", "output directory");
    gen_cmd->add_option("--config", config_path, "meta.json or config file to start from");

    // ---- inspect-graph ----
    auto* inspect_cmd = app.add_subcommand("inspect-graph", "print summary statistics of a saved network");
    std::string edges_path, party_path;
    inspect_cmd->add_option("--edges", edges_path, "edge-list file")->required();
    inspect_cmd->add_option("--party", party_path, "party-label file")->required();

    // top-level options (--jobs) remain usable after a subcommand name
    for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; })) sub->fallthrough();

    try {
        app.parse(argc, argv);
        if (simulate->parsed()) return run_simulate(sim_opts.resolve(config_path, "simulate"));
        if (integrate_cmd->parsed()) return run_integrate(int_opts.resolve(config_path, "integrate"));
        if (classify_cmd->parsed()) return run_classify(cls_opts.resolve(config_path, "classify"));
        if (consensus_cmd->parsed()) return run_consensus_check(con_opts.resolve(config_path, "consensus-check"));
        if (sweep_cmd->parsed()) return run_sweep(swp_opts.resolve(config_path, "sweep"), jobs);
        if (compare_cmd->parsed()) return run_compare(file_a, file_b);
        if (scenario_cmd->parsed()) {
            json opts = scn_opts.resolve(config_path, "scenario");
            if (!opts.contains("name")) throw std::invalid_argument("scenario: --name (or a config with one) is required");
            return run_scenario_cmd(opts);
        }
        if (gen_cmd->parsed()) return run_gen_graph(gen_opts.resolve(config_path, "gen-graph"));
        if (inspect_cmd->parsed()) return run_inspect_graph({{"edges", edges_path}, {"party", party_path}});
        return 1;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints usage/help on the right stream
        return code == 0 ? 0 : 1;
    } catch (const io_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\nrun with --help for usage\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
