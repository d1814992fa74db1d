#ifndef TRES_ALGORITHMS_BONGARD_HPP
#define TRES_ALGORITHMS_BONGARD_HPP

// Self-modeling baseline: identify a damaged body model from single-leg
// posture probes (orientation only), then optimize a gait on the best model
// and try the winner once.

#include <array>
#include <limits>
#include <map>
#include <random>
#include <vector>

#include "../nsga2.hpp"
#include "../self_model.hpp"
#include "run_result.hpp"

namespace tres {

inline constexpr std::array<double, 6> kModelLengthScales = {0.0, 0.5, 0.75, 1.0, 1.25, 1.5};
inline constexpr int kUnitScaleLevel = 3;

/// 30 parameters: per leg femur scale, tibia scale and three actuator flags.
struct BongardModel {
    std::array<std::uint8_t, kLegs> femur{};
    std::array<std::uint8_t, kLegs> tibia{};
    std::array<std::array<bool, kDofsPerLeg>, kLegs> powered{};

    static BongardModel undamaged()
    {
        BongardModel m;
        m.femur.fill(kUnitScaleLevel);
        m.tibia.fill(kUnitScaleLevel);
        for (auto& p : m.powered)
            p = {true, true, true};
        return m;
    }

    std::uint64_t key() const
    {
        std::uint64_t k = 0;
        for (int i = 0; i < kLegs; ++i) {
            k = k * 6 + femur[i];
            k = k * 6 + tibia[i];
            for (bool b : powered[i])
                k = k * 2 + (b ? 1 : 0);
        }
        return k;
    }

    /// Flat 30-vector (scale values, flags as 0/1) for the diversity objective.
    std::vector<double> values() const
    {
        std::vector<double> v;
        v.reserve(30);
        for (int i = 0; i < kLegs; ++i) {
            v.push_back(kModelLengthScales[femur[i]]);
            v.push_back(kModelLengthScales[tibia[i]]);
            for (bool b : powered[i])
                v.push_back(b ? 1.0 : 0.0);
        }
        return v;
    }

    Morphology apply_to(const Morphology& prior) const
    {
        Morphology m = prior;
        for (int i = 0; i < kLegs; ++i) {
            m.legs[i].femur = prior.legs[i].femur * kModelLengthScales[femur[i]];
            m.legs[i].tibia_scale = prior.legs[i].tibia_scale * kModelLengthScales[tibia[i]];
            m.legs[i].powered = powered[i];
        }
        return m;
    }

    friend bool operator==(const BongardModel&, const BongardModel&) = default;
};

/// Each parameter changes with probability `rate`: lengths are redrawn
/// uniformly from the six scales, flags are flipped.
inline BongardModel mutate_model(const BongardModel& m, Rng& rng, double rate = 0.1)
{
    std::bernoulli_distribution hit(rate);
    std::uniform_int_distribution<int> level(0, static_cast<int>(kModelLengthScales.size()) - 1);
    BongardModel out = m;
    for (int i = 0; i < kLegs; ++i) {
        if (hit(rng))
            out.femur[i] = static_cast<std::uint8_t>(level(rng));
        if (hit(rng))
            out.tibia[i] = static_cast<std::uint8_t>(level(rng));
        for (auto&& b : out.powered[i])
            if (hit(rng))
                b = !b;
    }
    return out;
}

inline nlohmann::json to_json(const BongardModel& m)
{
    nlohmann::json legs = nlohmann::json::array();
    for (int i = 0; i < kLegs; ++i)
        legs.push_back({{"femur_scale", kModelLengthScales[m.femur[i]]},
                        {"tibia_scale", kModelLengthScales[m.tibia[i]]},
                        {"powered", m.powered[i]}});
    return legs;
}

struct BongardConfig {
    int actions = 25;
    int model_population = 36;
    int model_generations = 40; // per tested action
    int controller_population = 40;
    int controller_generations = 400;
    ActionTable table;
};

/// Predicted probe outcomes, memoized per (model, action).
class ProbePredictor {
public:
    ProbePredictor(Morphology prior, ActionTable table, SimConfig sim)
        : _prior(std::move(prior)), _table(table), _sim(sim)
    {
    }

    const Orientation& operator()(const BongardModel& m, int action)
    {
        const auto key = std::make_pair(m.key(), action);
        auto it = _cache.find(key);
        if (it != _cache.end())
            return it->second;
        const Orientation o = orientation_outcome(m.apply_to(_prior), _actions[action], _table, _sim);
        return _cache.emplace(key, o).first->second;
    }

private:
    Morphology _prior;
    ActionTable _table;
    SimConfig _sim;
    std::vector<BongardAction> _actions = action_set();
    std::map<std::pair<std::uint64_t, int>, Orientation> _cache;
};

/// Mean squared roll/pitch error over the tested probes.
inline double model_mse(const BongardModel& m, const std::vector<ProbeRecord>& omega, ProbePredictor& predictor)
{
    if (omega.empty())
        return 0.0;
    double s = 0;
    for (const auto& p : omega) {
        const Orientation& o = predictor(m, action_index(p.action));
        s += (o.roll - p.roll) * (o.roll - p.roll) + (o.pitch - p.pitch) * (o.pitch - p.pitch);
    }
    return s / (2.0 * static_cast<double>(omega.size()));
}

/// Untested action with the largest disagreement (roll variance + pitch
/// variance) across the models; exact ties are broken uniformly at random.
inline int select_action(const std::vector<BongardModel>& models, const std::vector<bool>& tested,
                         ProbePredictor& predictor, Rng& rng, std::vector<double>* variances = nullptr)
{
    const int n_actions = static_cast<int>(tested.size());
    std::vector<double> var(n_actions, -1.0);
    for (int a = 0; a < n_actions; ++a) {
        if (tested[a])
            continue;
        double mr = 0, mp = 0;
        for (const auto& m : models) {
            mr += predictor(m, a).roll;
            mp += predictor(m, a).pitch;
        }
        mr /= static_cast<double>(models.size());
        mp /= static_cast<double>(models.size());
        double v = 0;
        for (const auto& m : models) {
            const auto& o = predictor(m, a);
            v += (o.roll - mr) * (o.roll - mr) + (o.pitch - mp) * (o.pitch - mp);
        }
        var[a] = v / static_cast<double>(models.size());
    }
    const double best = *std::max_element(var.begin(), var.end());
    if (best < 0)
        throw std::logic_error("no untested action left");
    std::vector<int> ties;
    for (int a = 0; a < n_actions; ++a)
        if (!tested[a] && var[a] == best)
            ties.push_back(a);
    if (variances)
        *variances = var;
    return ties[std::uniform_int_distribution<std::size_t>(0, ties.size() - 1)(rng)];
}

inline RunResult bongard(RealRobot& robot, const Morphology& prior, const SimConfig& sim, const BongardConfig& cfg,
                         Rng& rng, int workers = default_workers())
{
    const auto actions = action_set();
    if (cfg.actions < 1 || cfg.actions > static_cast<int>(actions.size()))
        throw std::invalid_argument("probe count must lie in [1, 36]");
    RunResult result;
    result.algorithm = "bongard";
    ProbePredictor predictor(prior, cfg.table, sim);

    // stage 1: model identification
    const BatchEvaluator<BongardModel> eval_models = [&](const std::vector<BongardModel>& batch) {
        std::vector<std::vector<double>> flat;
        for (const auto& m : batch)
            flat.push_back(m.values());
        const auto div = diversity_scores(flat);
        std::vector<Objectives> out(batch.size());
        for (std::size_t i = 0; i < batch.size(); ++i)
            out[i] = {-model_mse(batch[i], result.probes, predictor), div[i]};
        return out;
    };
    const Variation<BongardModel> vary_model = [](const BongardModel& m, Rng& r) { return mutate_model(m, r); };
    Population<BongardModel> models = evaluate_population(
        std::vector<BongardModel>(cfg.model_population, BongardModel::undamaged()), eval_models);

    std::vector<bool> tested(actions.size(), false);
    try {
        for (int t = 0; t < cfg.actions; ++t) {
            std::vector<BongardModel> genomes;
            for (const auto& ind : models)
                genomes.push_back(ind.genome);
            const int a = select_action(genomes, tested, predictor, rng);
            const OrientationReading reading = robot.probe(actions[a]);
            tested[a] = true;
            result.probes.push_back({actions[a], reading.roll, reading.pitch, reading.test_id});
            models = evaluate_population(genomes, eval_models);
            for (int g = 0; g < cfg.model_generations; ++g)
                models = nsga2_step(models, eval_models, vary_model, rng);
            result.log.push_back({{"type", "model_stats"},
                                  {"probe", t + 1},
                                  {"action", a},
                                  {"best_mse", -models.front().objectives[0]}});
        }
    } catch (const BudgetExhausted&) {
        result.budget_exhausted = true;
    }

    std::size_t best_model = 0;
    double best_mse = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < models.size(); ++i) {
        const double mse = model_mse(models[i].genome, result.probes, predictor);
        if (mse < best_mse) {
            best_mse = mse;
            best_model = i;
        }
    }
    const BongardModel chosen = models[best_model].genome;
    result.extra["best_model"] = to_json(chosen);
    result.extra["best_model_mse"] = best_mse;
    result.extra["prior_model_mse"] = model_mse(BongardModel::undamaged(), result.probes, predictor);

    // stage 2: gait optimization on the identified model
    SelfModel model(chosen.apply_to(prior), sim, workers);
    const BatchEvaluator<Controller> eval_ctrl = [&](const std::vector<Controller>& batch) {
        const auto outcomes = model.evaluate_batch(batch);
        const auto div = diversity_scores(batch);
        std::vector<Objectives> out(batch.size());
        for (std::size_t i = 0; i < batch.size(); ++i)
            out[i] = {outcomes[i]->performance, div[i]};
        return out;
    };
    std::vector<Controller> start;
    for (int i = 0; i < cfg.controller_population; ++i)
        start.push_back(random_controller(rng));
    auto ctrl = evaluate_population(start, eval_ctrl);
    const Variation<Controller> vary = [](const Controller& c, Rng& r) { return mutate(c, r); };
    for (int g = 0; g < cfg.controller_generations; ++g)
        ctrl = nsga2_step(ctrl, eval_ctrl, vary, rng);

    std::size_t pick = 0;
    for (std::size_t i = 0; i < ctrl.size(); ++i)
        if (ctrl[i].rank == 1 && (ctrl[pick].rank != 1 || ctrl[i].objectives[0] > ctrl[pick].objectives[0]))
            pick = i;
    const Controller& winner = ctrl[pick].genome;
    try {
        const Measurement m = robot.test(winner);
        TransferRecord rec = trial_record(winner, m, "transfer", cfg.controller_generations);
        const SimOutcome& o = model.evaluate(winner);
        rec.sim_performance = o.performance;
        rec.descriptor = o.descriptor;
        rec.exact_score = exact_transferability(o.performance, m.displacement);
        result.transfers.push_back(rec);
        set_final(result, rec);
    } catch (const BudgetExhausted&) {
        result.budget_exhausted = true;
    }
    result.real_tests = robot.tests_used();
    return result;
}

} // namespace tres

#endif // TRES_ALGORITHMS_BONGARD_HPP
