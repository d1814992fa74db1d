#ifndef TRES_ALGORITHMS_POLICY_GRADIENT_HPP
#define TRES_ALGORITHMS_POLICY_GRADIENT_HPP

#include <limits>

#include "run_result.hpp"

namespace tres {

struct PolicyGradientConfig {
    int iterations = 2;
    int perturbations = 15;
};

/// One finite-difference update of `c` from measured perturbations. An empty
/// group averages to -inf, so a group with data always beats it.
inline Controller policy_gradient_update(const Controller& c, const std::vector<Controller>& perturbed,
                                         const std::vector<double>& scores)
{
    constexpr double none = -std::numeric_limits<double>::infinity();
    Controller next = c;
    for (int j = 0; j < kControllerParams; ++j) {
        double sum[3] = {0, 0, 0}; // equal, greater, less
        int count[3] = {0, 0, 0};
        for (std::size_t i = 0; i < perturbed.size(); ++i) {
            const int g = perturbed[i].level(j) == c.level(j) ? 0 : perturbed[i].level(j) > c.level(j) ? 1 : 2;
            sum[g] += scores[i];
            ++count[g];
        }
        const double a0 = count[0] ? sum[0] / count[0] : none;
        const double ap = count[1] ? sum[1] / count[1] : none;
        const double am = count[2] ? sum[2] / count[2] : none;
        if (a0 > std::max(ap, am))
            continue;
        next.set_level(j, ap > am ? std::min(c.level(j) + 1, kGridLevels - 1) : std::max(c.level(j) - 1, 0));
    }
    return next;
}

/// The answer is the best measured controller among all those tried.
inline RunResult policy_gradient(RealRobot& robot, const PolicyGradientConfig& cfg, Rng& rng)
{
    if (cfg.iterations < 1 || cfg.perturbations < 1)
        throw std::invalid_argument("policy gradient needs positive iterations and perturbations");
    RunResult result;
    result.algorithm = "policy_gradient";
    Controller c = random_controller(rng);
    try {
        for (int it = 1; it <= cfg.iterations; ++it) {
            std::vector<Controller> perturbed;
            std::vector<double> scores;
            for (int i = 0; i < cfg.perturbations; ++i) {
                perturbed.push_back(perturb(c, rng));
                const Measurement m = robot.test(perturbed.back());
                scores.push_back(m.displacement);
                result.transfers.push_back(trial_record(perturbed.back(), m, "trial", it));
            }
            c = policy_gradient_update(c, perturbed, scores);
        }
    } catch (const BudgetExhausted&) {
        result.budget_exhausted = true;
    }
    result.extra["last_iterate"] = to_json(c);
    const int best = best_measured(result.transfers);
    if (best >= 0)
        set_final(result, result.transfers[best]);
    result.real_tests = robot.tests_used();
    return result;
}

} // namespace tres

#endif // TRES_ALGORITHMS_POLICY_GRADIENT_HPP
