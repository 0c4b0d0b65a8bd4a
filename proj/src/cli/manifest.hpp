#pragma once

// Run manifest: what was run, with which resolved parameters, and which
// files it wrote. Parameters are kept as flag strings so that a manifest
// can be turned back into a config file for the same run.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace fracmech::cli {

struct RunManifest {
    std::string subcommand;
    std::string version;
    std::vector<std::pair<std::string, std::string>> parameters;  // flag name without dashes -> value
    std::map<std::string, double> tolerances;
    std::vector<std::string> outputs;
    double wall_seconds = 0.0;
    nlohmann::json results = nlohmann::json::object();

    [[nodiscard]] nlohmann::json to_json() const;
    static RunManifest from_json(const nlohmann::json& j);

    void write(const std::string& path) const;
};

/// `key = value` lines; '#' and ';' start comments. Lists may be written
/// bare (1,0) or quoted ("1,0").
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path);

/// The inverse of read_config for a manifest's parameter echo.
std::string to_config_text(const std::vector<std::pair<std::string, std::string>>& parameters);

}  // namespace fracmech::cli
