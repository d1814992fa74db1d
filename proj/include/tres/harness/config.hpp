#ifndef TRES_HARNESS_CONFIG_HPP
#define TRES_HARNESS_CONFIG_HPP

// Experiment configuration: a JSON document whose every block is optional and
// whose unknown keys are rejected.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "../algorithms/bongard.hpp"
#include "../algorithms/policy_gradient.hpp"
#include "../algorithms/t_resilience.hpp"
#include "../measurement.hpp"

namespace tres {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline const std::vector<std::string>& known_algorithms()
{
    static const std::vector<std::string> names = {"t_resilience", "local_search", "policy_gradient", "bongard",
                                                   "reference"};
    return names;
}

struct BudgetConfig {
    int population = 40;
    int generations = 400;
    int transfer_period = 16;
    double threshold = -0.1;
    int local_search_iterations = 25;
    int policy_gradient_iterations = 2;
    int bongard_actions = 25;
    int bongard_model_population = 36;
    int bongard_model_generations = 40;
};

struct ExperimentConfig {
    std::vector<std::string> scenarios{"B", "C", "D", "E", "F"};
    std::vector<std::string> algorithms{"t_resilience", "local_search"};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    BudgetConfig budget;
    NoiseModel noise;
    GeometryConfig geometry;
    SimConfig simulator;
    std::string output = "out";
    int workers = 0; // 0 -> TRES_WORKERS or hardware concurrency

    void validate() const
    {
        if (scenarios.empty() || algorithms.empty() || seeds.empty())
            throw ConfigError("scenarios, algorithms and seeds must be non-empty");
        for (const auto& s : scenarios)
            scenario_from_tag(s);
        for (const auto& a : algorithms)
            if (std::find(known_algorithms().begin(), known_algorithms().end(), a) == known_algorithms().end())
                throw ConfigError("unknown algorithm '" + a + "'");
        const auto& b = budget;
        if (b.population < 2 || b.population % 2)
            throw ConfigError("population must be even and at least 2");
        if (b.transfer_period < 1 || b.generations < b.transfer_period)
            throw ConfigError("generations must be at least the transfer period, which must be positive");
        if (b.local_search_iterations < 1 || b.policy_gradient_iterations < 1)
            throw ConfigError("iteration budgets must be positive");
        if (b.bongard_actions < 1 || b.bongard_actions > 36)
            throw ConfigError("bongard_actions must lie in [1, 36]");
        if (b.bongard_model_population < 2 || b.bongard_model_population % 2 || b.bongard_model_generations < 0)
            throw ConfigError("bongard model population must be even and at least 2");
        noise.validate();
        if (simulator.ticks < 1 || !(simulator.dt > 0) || !(simulator.gait.frequency > 0))
            throw ConfigError("simulator needs ticks >= 1, dt > 0, frequency > 0");
        default_morphology(geometry);
    }
};

namespace detail {

inline void reject_unknown(const nlohmann::json& j, const std::set<std::string>& allowed, const std::string& where)
{
    if (!j.is_object())
        throw ConfigError(where + " must be an object");
    for (const auto& [key, _] : j.items())
        if (!allowed.count(key))
            throw ConfigError("unknown key '" + key + "' in " + where);
}

template <class T>
void read(const nlohmann::json& j, const char* key, T& out)
{
    if (!j.contains(key))
        return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

inline std::string support_name(SupportModel s) { return s == SupportModel::level ? "level" : "tipping"; }

} // namespace detail

inline ExperimentConfig config_from_json(const nlohmann::json& j)
{
    using detail::read;
    detail::reject_unknown(j, {"scenarios", "algorithms", "seeds", "budget", "noise", "geometry", "simulator", "output",
                               "workers"},
                           "config");
    ExperimentConfig c;
    read(j, "scenarios", c.scenarios);
    read(j, "algorithms", c.algorithms);
    read(j, "seeds", c.seeds);
    read(j, "output", c.output);
    read(j, "workers", c.workers);
    if (j.contains("budget")) {
        const auto& b = j["budget"];
        detail::reject_unknown(b, {"population", "generations", "transfer_period", "threshold", "local_search_iterations",
                                   "policy_gradient_iterations", "bongard_actions", "bongard_model_population",
                                   "bongard_model_generations"},
                               "budget");
        read(b, "population", c.budget.population);
        read(b, "generations", c.budget.generations);
        read(b, "transfer_period", c.budget.transfer_period);
        read(b, "threshold", c.budget.threshold);
        read(b, "local_search_iterations", c.budget.local_search_iterations);
        read(b, "policy_gradient_iterations", c.budget.policy_gradient_iterations);
        read(b, "bongard_actions", c.budget.bongard_actions);
        read(b, "bongard_model_population", c.budget.bongard_model_population);
        read(b, "bongard_model_generations", c.budget.bongard_model_generations);
    }
    if (j.contains("noise")) {
        const auto& n = j["noise"];
        detail::reject_unknown(n, {"multiplicative", "additive", "outlier_probability", "outlier_scale", "orientation", "seed"},
                               "noise");
        read(n, "multiplicative", c.noise.multiplicative);
        read(n, "additive", c.noise.additive);
        read(n, "outlier_probability", c.noise.outlier_probability);
        read(n, "outlier_scale", c.noise.outlier_scale);
        read(n, "orientation", c.noise.orientation);
        read(n, "seed", c.noise.seed);
    }
    if (j.contains("geometry")) {
        const auto& g = j["geometry"];
        detail::reject_unknown(g, {"attach_radius", "coxa", "femur", "tibia"}, "geometry");
        read(g, "attach_radius", c.geometry.attach_radius);
        read(g, "coxa", c.geometry.coxa);
        read(g, "femur", c.geometry.femur);
        read(g, "tibia", c.geometry.tibia);
    }
    if (j.contains("simulator")) {
        const auto& s = j["simulator"];
        detail::reject_unknown(s, {"dt", "ticks", "frequency", "dof1_range", "dof23_range", "contact_eps", "hull_margin",
                                   "support", "max_tilt"},
                               "simulator");
        read(s, "dt", c.simulator.dt);
        read(s, "ticks", c.simulator.ticks);
        read(s, "frequency", c.simulator.gait.frequency);
        read(s, "dof1_range", c.simulator.gait.dof1_range);
        read(s, "dof23_range", c.simulator.gait.dof23_range);
        read(s, "contact_eps", c.simulator.contact_eps);
        read(s, "hull_margin", c.simulator.hull_margin);
        read(s, "max_tilt", c.simulator.max_tilt);
        std::string support = detail::support_name(c.simulator.support);
        read(s, "support", support);
        if (support == "level")
            c.simulator.support = SupportModel::level;
        else if (support == "tipping")
            c.simulator.support = SupportModel::tipping;
        else
            throw ConfigError("simulator.support must be 'level' or 'tipping'");
    }
    try {
        c.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return c;
}

inline nlohmann::json environment_json(const ExperimentConfig& c)
{
    return {{"geometry",
             {{"attach_radius", c.geometry.attach_radius},
              {"coxa", c.geometry.coxa},
              {"femur", c.geometry.femur},
              {"tibia", c.geometry.tibia}}},
            {"simulator",
             {{"dt", c.simulator.dt},
              {"ticks", c.simulator.ticks},
              {"frequency", c.simulator.gait.frequency},
              {"dof1_range", c.simulator.gait.dof1_range},
              {"dof23_range", c.simulator.gait.dof23_range},
              {"contact_eps", c.simulator.contact_eps},
              {"hull_margin", c.simulator.hull_margin},
              {"support", detail::support_name(c.simulator.support)},
              {"max_tilt", c.simulator.max_tilt}}}};
}

/// Fully expanded config; feeding it back yields the same config.
inline nlohmann::json to_json(const ExperimentConfig& c)
{
    nlohmann::json j = environment_json(c);
    j["scenarios"] = c.scenarios;
    j["algorithms"] = c.algorithms;
    j["seeds"] = c.seeds;
    j["output"] = c.output;
    j["workers"] = c.workers;
    const auto& b = c.budget;
    j["budget"] = {{"population", b.population},
                   {"generations", b.generations},
                   {"transfer_period", b.transfer_period},
                   {"threshold", b.threshold},
                   {"local_search_iterations", b.local_search_iterations},
                   {"policy_gradient_iterations", b.policy_gradient_iterations},
                   {"bongard_actions", b.bongard_actions},
                   {"bongard_model_population", b.bongard_model_population},
                   {"bongard_model_generations", b.bongard_model_generations}};
    j["noise"] = {{"multiplicative", c.noise.multiplicative},
                  {"additive", c.noise.additive},
                  {"outlier_probability", c.noise.outlier_probability},
                  {"outlier_scale", c.noise.outlier_scale},
                  {"orientation", c.noise.orientation},
                  {"seed", c.noise.seed}};
    return j;
}

inline ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in, nullptr, true, true);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config " + path + " is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

/// 64-bit FNV-1a of the canonical JSON of the settings that shape results.
/// The output directory and worker count are excluded.
inline std::string config_hash(const ExperimentConfig& c)
{
    nlohmann::json j = to_json(c);
    j.erase("output");
    j.erase("workers");
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : j.dump()) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline SimConfig sim_config_from_environment(const nlohmann::json& env)
{
    nlohmann::json j = {{"simulator", env.at("simulator")}, {"geometry", env.at("geometry")}};
    return config_from_json(j).simulator;
}

inline GeometryConfig geometry_from_environment(const nlohmann::json& env)
{
    nlohmann::json j = {{"simulator", env.at("simulator")}, {"geometry", env.at("geometry")}};
    return config_from_json(j).geometry;
}

} // namespace tres

#endif // TRES_HARNESS_CONFIG_HPP
