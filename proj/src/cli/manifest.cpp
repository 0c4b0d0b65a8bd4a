#include "cli/manifest.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fracmech::cli {

nlohmann::json RunManifest::to_json() const {
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [k, v] : parameters) params[k] = v;
    return {
        {"subcommand", subcommand},
        {"version", version},
        {"parameters", params},
        {"tolerances", tolerances},
        {"outputs", outputs},
        {"wall_seconds", wall_seconds},
        {"results", results},
    };
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
    RunManifest m;
    m.subcommand = j.at("subcommand").get<std::string>();
    m.version = j.at("version").get<std::string>();
    for (const auto& [k, v] : j.at("parameters").items()) m.parameters.emplace_back(k, v.get<std::string>());
    m.tolerances = j.at("tolerances").get<std::map<std::string, double>>();
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    m.wall_seconds = j.at("wall_seconds").get<double>();
    m.results = j.value("results", nlohmann::json::object());
    return m;
}

void RunManifest::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open manifest for writing: " + path);
    out << to_json().dump(2) << '\n';
    if (!out) throw std::runtime_error("failed writing manifest: " + path);
}

std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file: " + path);
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& item : CLI::ConfigINI().from_config(in)) {
        if (!item.parents.empty()) {
            throw std::runtime_error("config sections are not supported: [" + item.parents.front() + "]");
        }
        std::string value;
        for (std::size_t i = 0; i < item.inputs.size(); ++i) value += (i ? "," : "") + item.inputs[i];
        out.emplace_back(item.name, value);
    }
    return out;
}

std::string to_config_text(const std::vector<std::pair<std::string, std::string>>& parameters) {
    std::ostringstream os;
    for (const auto& [k, v] : parameters) os << k << " = " << v << '\n';
    return os.str();
}

}  // namespace fracmech::cli
