#ifndef TRES_HARNESS_RUNNER_HPP
#define TRES_HARNESS_RUNNER_HPP

// Executes every (scenario, algorithm, seed) cell of a config and writes
// <output>/<scenario>/<algorithm>/seed_<s>/{run.jsonl,result.json}.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "../algorithms/bongard.hpp"
#include "../algorithms/local_search.hpp"
#include "../algorithms/policy_gradient.hpp"
#include "../algorithms/reference.hpp"
#include "../algorithms/t_resilience.hpp"
#include "config.hpp"

namespace tres {

struct CellId {
    std::string scenario;
    std::string algorithm;
    std::uint64_t seed = 0;
};

inline std::filesystem::path cell_dir(const std::string& root, const CellId& id)
{
    return std::filesystem::path(root) / id.scenario / id.algorithm / ("seed_" + std::to_string(id.seed));
}

/// Independent streams for the algorithm and for the sensors, both from the seed.
inline Rng cell_rng(std::uint64_t seed, std::uint32_t stream, std::uint64_t salt = 0)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream,
                      static_cast<std::uint32_t>(salt), static_cast<std::uint32_t>(salt >> 32)};
    return Rng(seq);
}

/// Real-test cap for each algorithm under a budget block.
inline int declared_tests(const std::string& algorithm, const BudgetConfig& b)
{
    if (algorithm == "t_resilience")
        return b.generations / b.transfer_period + 1;
    if (algorithm == "local_search")
        return b.local_search_iterations + 1;
    if (algorithm == "policy_gradient")
        return 15 * b.policy_gradient_iterations;
    if (algorithm == "bongard")
        return b.bongard_actions + 1;
    if (algorithm == "reference")
        return 1;
    throw ConfigError("unknown algorithm '" + algorithm + "'");
}

/// Runs one cell in memory; ground truth is attached after the algorithm returns.
inline RunResult run_cell(const ExperimentConfig& cfg, const CellId& id)
{
    const Morphology intact = default_morphology(cfg.geometry);
    const Morphology damaged = apply_damage(intact, id.scenario);
    NoiseModel noise = cfg.noise;
    const Rng sensor_seed = cell_rng(id.seed, 2, cfg.noise.seed);
    noise.seed = Rng(sensor_seed)();
    const int workers = cfg.workers > 0 ? cfg.workers : default_workers();
    const auto& b = cfg.budget;
    SimulatedRobot robot(damaged, noise, cfg.simulator, declared_tests(id.algorithm, b));
    Rng rng = cell_rng(id.seed, 1);

    const auto started = std::chrono::steady_clock::now();
    RunResult r;
    if (id.algorithm == "t_resilience") {
        TResilienceConfig t;
        t.population = b.population;
        t.generations = b.generations;
        t.transfer_period = b.transfer_period;
        t.threshold = b.threshold;
        r = t_resilience(intact, cfg.simulator, robot, t, rng, workers);
    } else if (id.algorithm == "local_search") {
        r = local_search(robot, b.local_search_iterations, rng);
    } else if (id.algorithm == "policy_gradient") {
        r = policy_gradient(robot, {b.policy_gradient_iterations, 15}, rng);
    } else if (id.algorithm == "bongard") {
        BongardConfig bc;
        bc.actions = b.bongard_actions;
        bc.model_population = b.bongard_model_population;
        bc.model_generations = b.bongard_model_generations;
        bc.controller_population = b.population;
        bc.controller_generations = b.generations;
        r = bongard(robot, intact, cfg.simulator, bc, rng, workers);
    } else if (id.algorithm == "reference") {
        r = reference_run(robot);
    } else {
        throw ConfigError("unknown algorithm '" + id.algorithm + "'");
    }
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    r.scenario = id.scenario;
    r.seed = id.seed;
    annotate_ground_truth(r, robot);
    return r;
}

inline nlohmann::json result_document(const ExperimentConfig& cfg, const RunResult& r)
{
    nlohmann::json j = to_json(r);
    j["config_hash"] = config_hash(cfg);
    j["environment"] = environment_json(cfg);
    return j;
}

inline void write_cell(const ExperimentConfig& cfg, const CellId& id, const RunResult& r)
{
    const auto dir = cell_dir(cfg.output, id);
    std::filesystem::create_directories(dir);
    const std::string hash = config_hash(cfg);
    {
        std::ofstream log(dir / "run.jsonl");
        log << nlohmann::json{{"type", "header"},
                              {"config_hash", hash},
                              {"seed", id.seed},
                              {"scenario", id.scenario},
                              {"algorithm", id.algorithm},
                              {"config", to_json(cfg)}}
                   .dump()
            << '\n';
        for (const auto& line : r.log)
            log << line.dump() << '\n';
        for (const auto& rec : r.transfers)
            log << to_json(rec).dump() << '\n';
        log << nlohmann::json{{"type", "summary"},
                              {"config_hash", hash},
                              {"seed", id.seed},
                              {"real_tests", r.real_tests},
                              {"wall_seconds", r.wall_seconds}}
                   .dump()
            << '\n';
    }
    std::ofstream out(dir / "result.json");
    out << result_document(cfg, r).dump(2) << '\n';
}

struct RunSummary {
    int completed = 0;
    std::vector<std::string> failures;
};

/// Every cell runs even if others fail; failures are reported, not thrown.
inline RunSummary run_experiment(const ExperimentConfig& cfg, std::ostream* progress = nullptr)
{
    cfg.validate();
    RunSummary summary;
    for (const auto& scenario : cfg.scenarios)
        for (const auto& algorithm : cfg.algorithms)
            for (auto seed : cfg.seeds) {
                const CellId id{scenario, algorithm, seed};
                try {
                    const RunResult r = run_cell(cfg, id);
                    write_cell(cfg, id, r);
                    ++summary.completed;
                    if (progress)
                        *progress << scenario << ' ' << algorithm << " seed " << seed << ": final "
                                  << (r.final_ground_truth ? *r.final_ground_truth : r.final_measured) << " m, "
                                  << r.real_tests << " tests, " << r.wall_seconds << " s\n";
                } catch (const std::exception& e) {
                    summary.failures.push_back(scenario + "/" + algorithm + "/seed_" + std::to_string(seed) + ": " +
                                               e.what());
                    if (progress)
                        *progress << "FAILED " << summary.failures.back() << '\n';
                }
            }
    return summary;
}

} // namespace tres

#endif // TRES_HARNESS_RUNNER_HPP
