#ifndef TRES_ALGORITHMS_T_RESILIENCE_HPP
#define TRES_ALGORITHMS_T_RESILIENCE_HPP

// Optimizes (self-model performance, predicted transferability, diversity) on
// the undamaged self-model; every `transfer_period` generations one random
// population member is tried on the robot and the transferability model is
// refitted. The self-model itself is never updated.

#include <algorithm>
#include <chrono>
#include <optional>
#include <random>
#include <vector>

#include "../nsga2.hpp"
#include "../self_model.hpp"
#include "run_result.hpp"

namespace tres {

struct TResilienceConfig {
    int population = 40;
    int generations = 400;
    int transfer_period = 16;
    double threshold = -0.1; // transferable when predicted score >= threshold
    SvrParams svr;
    bool snapshots = false;           // full population per generation in the log
    double wall_clock_seconds = 0;    // 0 disables the time budget
};

inline int scheduled_transfers(const TResilienceConfig& cfg) { return cfg.generations / cfg.transfer_period; }

namespace detail {

inline BatchEvaluator<Controller> t_res_evaluator(SelfModel& model, const std::optional<Regressor>& regressor)
{
    return [&model, &regressor](const std::vector<Controller>& batch) {
        const auto outcomes = model.evaluate_batch(batch);
        const auto div = diversity_scores(batch);
        std::vector<Objectives> out(batch.size());
        for (std::size_t i = 0; i < batch.size(); ++i)
            out[i] = {outcomes[i]->performance, predict(regressor, outcomes[i]->descriptor), div[i]};
        return out;
    };
}

inline nlohmann::json generation_stats(int generation, const Population<Controller>& pop)
{
    double best_perf = -1e300, best_t = -1e300, mean_t = 0;
    for (const auto& ind : pop) {
        best_perf = std::max(best_perf, ind.objectives[0]);
        best_t = std::max(best_t, ind.objectives[1]);
        mean_t += ind.objectives[1];
    }
    mean_t /= static_cast<double>(pop.size());
    return {{"type", "generation_stats"},
            {"generation", generation},
            {"best_sim_performance", best_perf},
            {"best_predicted_transferability", best_t},
            {"mean_predicted_transferability", mean_t}};
}

} // namespace detail

/// Final choice: among the (performance, predicted transferability) non-dominated
/// members whose prediction clears the threshold, validate the best simulated
/// one on the robot; then return the best measured trial of the whole run.
/// With an empty transferable set no extra test is spent.
inline void select_final(const Population<Controller>& archive, SelfModel& model,
                         const std::optional<Regressor>& regressor, RealRobot& robot, double threshold,
                         int generation, RunResult& result)
{
    std::vector<Objectives> two;
    std::vector<const SimOutcome*> outcomes;
    for (const auto& ind : archive) {
        const SimOutcome& o = model.evaluate(ind.genome);
        outcomes.push_back(&o);
        two.push_back({o.performance, predict(regressor, o.descriptor)});
    }
    int pick = -1;
    const auto fronts = fast_nondominated_sort(two);
    if (!fronts.empty())
        for (int i : fronts.front())
            if (two[i][1] >= threshold && (pick < 0 || two[i][0] > two[pick][0]))
                pick = i;
    result.extra["transferable_set_empty"] = pick < 0;

    if (pick >= 0) {
        if (robot.remaining() > 0) {
            const Controller& c = archive[pick].genome;
            const Measurement m = robot.test(c);
            TransferRecord rec = trial_record(c, m, "validation", generation);
            rec.descriptor = outcomes[pick]->descriptor;
            rec.sim_performance = outcomes[pick]->performance;
            rec.exact_score = exact_transferability(outcomes[pick]->performance, m.displacement);
            result.transfers.push_back(std::move(rec));
        } else {
            result.budget_exhausted = true;
        }
    }
    const int best = best_measured(result.transfers);
    if (best >= 0)
        set_final(result, result.transfers[best]);
}

inline RunResult t_resilience(const Morphology& self_model, const SimConfig& sim, RealRobot& robot,
                              const TResilienceConfig& cfg, Rng& rng, int workers = default_workers())
{
    if (cfg.transfer_period < 1 || cfg.generations < cfg.transfer_period)
        throw std::invalid_argument("need at least one transfer: generations >= transfer period >= 1");
    const auto started = std::chrono::steady_clock::now();
    auto out_of_time = [&] {
        return cfg.wall_clock_seconds > 0 &&
               std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count() > cfg.wall_clock_seconds;
    };

    RunResult result;
    result.algorithm = "t_resilience";
    SelfModel model(self_model, sim, workers);
    std::optional<Regressor> regressor;
    std::vector<TransferRecord> training;
    const auto evaluate = detail::t_res_evaluator(model, regressor);
    const Variation<Controller> vary = [](const Controller& c, Rng& r) { return mutate(c, r); };

    std::vector<Controller> genomes;
    for (int i = 0; i < cfg.population; ++i)
        genomes.push_back(random_controller(rng));
    Population<Controller> pop = evaluate_population(genomes, evaluate);

    int generation = 0;
    auto evolve = [&](int steps) {
        for (int j = 0; j < steps && !out_of_time(); ++j) {
            pop = nsga2_step(pop, evaluate, vary, rng);
            ++generation;
            result.log.push_back(detail::generation_stats(generation, pop));
            if (cfg.snapshots)
                result.log.push_back(generation_snapshot<Controller>(
                    generation, pop, [](const Controller& c) { return to_json(c); }));
        }
    };

    for (int t = 0; t < scheduled_transfers(cfg); ++t) {
        const Controller chosen =
            pop[std::uniform_int_distribution<std::size_t>(0, pop.size() - 1)(rng)].genome;
        const SimOutcome& sim_out = model.evaluate(chosen);
        Measurement m;
        try {
            m = robot.test(chosen);
        } catch (const BudgetExhausted&) {
            result.budget_exhausted = true;
            break;
        }
        TransferRecord rec = trial_record(chosen, m, "transfer", generation);
        rec.descriptor = sim_out.descriptor;
        rec.sim_performance = sim_out.performance;
        rec.exact_score = exact_transferability(sim_out.performance, m.displacement);
        result.transfers.push_back(rec);
        training.push_back(std::move(rec));
        regressor = fit(training, cfg.svr);
        evolve(cfg.transfer_period);
    }
    evolve(cfg.generations - generation);

    // objectives of the survivors were computed with the current model already
    select_final(pop, model, regressor, robot, cfg.threshold, generation, result);
    result.real_tests = robot.tests_used();
    if (regressor)
        result.extra["regressor_training_rmse"] = regressor->training_rmse;
    result.extra["generations_run"] = generation;
    result.extra["self_model_simulations"] = model.simulations();
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

} // namespace tres

#endif // TRES_ALGORITHMS_T_RESILIENCE_HPP
