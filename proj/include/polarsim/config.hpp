#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include "polarsim/jsonio.hpp"
#include "polarsim/version.hpp"

namespace polarsim {

/// Fully resolved invocation: the subcommand plus every option it ran with.
/// Serialized verbatim into meta.json so any output can be regenerated from
/// its own sidecar.
struct RunConfig {
    std::string command;
    json options;
};

inline json make_meta(const RunConfig& cfg) {
    json j;
    j["schema_version"] = 1;
    j["tool"] = "polarsim";
    j["tool_version"] = POLARSIM_VERSION;
    j["command"] = cfg.command;
    j["config"] = cfg.options;
    return j;
}

inline void write_meta(const std::filesystem::path& dir, const RunConfig& cfg) {
    std::ofstream os(dir / "meta.json");
    if (!os) throw io_error("cannot open for writing: " + (dir / "meta.json").string());
    os << make_meta(cfg).dump(2) << '\n';
    if (!os.flush()) throw io_error("write failed: " + (dir / "meta.json").string());
}

/// Read a config or meta.json file back into a RunConfig. Errors are
/// configuration errors (usage, exit 1), not data errors.
inline RunConfig load_run_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open config file: " + path);
    json j;
    try {
        j = json::parse(is);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config error in " + path + ": " + e.what());
    }
    if (j.value("schema_version", 0) != 1)
        throw std::invalid_argument("config error at schema_version: expected 1");
    RunConfig cfg;
    if (!j.contains("command") || !j.at("command").is_string())
        throw std::invalid_argument("config error at command: missing or not a string");
    cfg.command = j.at("command").get<std::string>();
    if (!j.contains("config") || !j.at("config").is_object())
        throw std::invalid_argument("config error at config: missing or not an object");
    cfg.options = j.at("config");
    return cfg;
}

}  // namespace polarsim
