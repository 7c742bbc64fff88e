#include "run_config.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>
#include <qb/errors.hpp>

#ifndef QB_VERSION
#define QB_VERSION "0.0.0"
#endif

namespace qbcli {

using nlohmann::json;
using qb::ConfigError;

Engine parse_engine(const std::string& name) {
    if (name == "analytic") return Engine::Analytic;
    if (name == "dephasing") return Engine::Dephasing;
    if (name == "dense") return Engine::Dense;
    throw ConfigError("unknown engine '" + name + "' (expected analytic, dephasing or dense)");
}

const char* engine_name(Engine engine) {
    switch (engine) {
        case Engine::Analytic: return "analytic";
        case Engine::Dephasing: return "dephasing";
        case Engine::Dense: return "dense";
    }
    return "analytic";
}

void RunConfig::validate() const {
    if (n_sites < 1) throw ConfigError("n must be set to a positive site count");
    if (kicks < 0) throw ConfigError("kicks must be set to a count >= 0");
    if (std::isnan(beta)) throw ConfigError("beta must be set");
    if (beta < 0.0) throw ConfigError("beta must be >= 0");
    if (gamma_z < 0.0) throw ConfigError("gamma-z must be >= 0");
    if (gamma < 0.0) throw ConfigError("gamma must be >= 0");
    if (omega0 <= 0.0) throw ConfigError("omega0 must be > 0");
    if (!(dt > 0.0)) throw ConfigError("dt must be > 0");
    switch (engine) {
        case Engine::Analytic:
            if (gamma_z != 0.0 || gamma != 0.0)
                throw ConfigError("the analytic engine is closed evolution: gamma-z and gamma must be 0");
            break;
        case Engine::Dephasing:
            if (gamma != 0.0)
                throw ConfigError("the dephasing engine has no thermal channel: gamma must be 0");
            break;
        case Engine::Dense:
            if (n_sites > 12)
                throw ConfigError("the dense engine is capped at n = 12 sites");
            break;
    }
    if (ergotropy && engine != Engine::Dense)
        throw ConfigError("ergotropy needs the full state and is only available with the dense engine");
}

namespace {

// beta is the one field with a meaningful infinity; JSON has no literal for
// it, so the echo writes the string "inf" and the parser takes either form.
double number_or_inf(const json& value, const char* key) {
    if (value.is_number()) return value.get<double>();
    if (value.is_string()) {
        const auto& s = value.get<std::string>();
        if (s == "inf" || s == "+inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    }
    throw ConfigError(std::string(key) + " must be a number or \"inf\"");
}

double number_field(const json& object, const char* key, double fallback) {
    if (!object.contains(key)) return fallback;
    if (!object[key].is_number()) throw ConfigError(std::string(key) + " must be a number");
    return object[key].get<double>();
}

void check_keys(const json& object, std::initializer_list<const char*> known, const char* where) {
    for (const auto& item : object.items()) {
        bool ok = false;
        for (const char* key : known) ok = ok || item.key() == key;
        if (!ok) throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
}

}  // namespace

void apply_config_json(RunConfig& config, const json& doc, bool allow_axes) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    check_keys(doc,
               {"n", "kicks", "charger", "thermal", "channels", "engine", "dt", "ergotropy", "out",
                "version", "axes", "gamma_z_times_n"},
               "config");
    if (!allow_axes && (doc.contains("axes") || doc.contains("gamma_z_times_n")))
        throw ConfigError("sweep keys (axes, gamma_z_times_n) are not valid in a trajectory config");
    if (doc.contains("n")) {
        if (!doc["n"].is_number_integer()) throw ConfigError("n must be an integer");
        config.n_sites = doc["n"].get<int>();
    }
    if (doc.contains("kicks")) {
        if (!doc["kicks"].is_number_integer()) throw ConfigError("kicks must be an integer");
        config.kicks = doc["kicks"].get<long long>();
    }
    if (doc.contains("charger")) {
        const json& c = doc["charger"];
        check_keys(c, {"j", "b", "g"}, "charger");
        config.charger.j = number_field(c, "j", config.charger.j);
        config.charger.b = number_field(c, "b", config.charger.b);
        config.charger.g = number_field(c, "g", config.charger.g);
    }
    if (doc.contains("thermal")) {
        const json& t = doc["thermal"];
        check_keys(t, {"j_th", "h_th", "beta"}, "thermal");
        config.j_th = number_field(t, "j_th", config.j_th);
        config.h_th = number_field(t, "h_th", config.h_th);
        if (t.contains("beta")) config.beta = number_or_inf(t["beta"], "beta");
    }
    if (doc.contains("channels")) {
        const json& ch = doc["channels"];
        check_keys(ch, {"gamma_z", "gamma", "omega0"}, "channels");
        config.gamma_z = number_field(ch, "gamma_z", config.gamma_z);
        config.gamma = number_field(ch, "gamma", config.gamma);
        config.omega0 = number_field(ch, "omega0", config.omega0);
    }
    if (doc.contains("engine")) {
        if (!doc["engine"].is_string()) throw ConfigError("engine must be a string");
        config.engine = parse_engine(doc["engine"].get<std::string>());
    }
    if (doc.contains("dt")) config.dt = number_field(doc, "dt", config.dt);
    if (doc.contains("ergotropy")) {
        if (!doc["ergotropy"].is_boolean()) throw ConfigError("ergotropy must be a boolean");
        config.ergotropy = doc["ergotropy"].get<bool>();
    }
    if (doc.contains("out")) {
        if (!doc["out"].is_string() && !doc["out"].is_null()) throw ConfigError("out must be a string");
        if (doc["out"].is_string()) config.out = doc["out"].get<std::string>();
    }
}

void apply_config_file(RunConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    apply_config_json(config, doc, false);
}

std::string config_json(const RunConfig& config) {
    json doc;
    // Unset sentinels stay out of the echo: a sweep base may leave n, kicks
    // or beta to its axes, and absence is the one spelling that reparses.
    if (config.n_sites >= 1) doc["n"] = config.n_sites;
    if (config.kicks >= 0) doc["kicks"] = config.kicks;
    doc["charger"] = {{"j", config.charger.j}, {"b", config.charger.b}, {"g", config.charger.g}};
    doc["thermal"] = {{"j_th", config.j_th}, {"h_th", config.h_th}};
    if (std::isinf(config.beta))
        doc["thermal"]["beta"] = "inf";
    else if (!std::isnan(config.beta))
        doc["thermal"]["beta"] = config.beta;
    doc["channels"] = {{"gamma_z", config.gamma_z}, {"gamma", config.gamma}, {"omega0", config.omega0}};
    doc["engine"] = engine_name(config.engine);
    doc["dt"] = config.dt;
    doc["ergotropy"] = config.ergotropy;
    doc["version"] = QB_VERSION;
    return doc.dump();
}

}  // namespace qbcli
