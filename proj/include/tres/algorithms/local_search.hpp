#ifndef TRES_ALGORITHMS_LOCAL_SEARCH_HPP
#define TRES_ALGORITHMS_LOCAL_SEARCH_HPP

#include "run_result.hpp"

namespace tres {

/// Random start (one test), then `iterations` perturb-and-keep-if-better trials.
inline RunResult local_search(RealRobot& robot, int iterations, Rng& rng)
{
    if (iterations < 1)
        throw std::invalid_argument("local search needs at least one iteration");
    RunResult result;
    result.algorithm = "local_search";
    Controller current = random_controller(rng);
    int current_idx = -1;
    try {
        const Measurement m = robot.test(current);
        result.transfers.push_back(trial_record(current, m, "trial", 0));
        current_idx = 0;
        for (int it = 1; it <= iterations; ++it) {
            const Controller candidate = perturb(current, rng);
            const Measurement mc = robot.test(candidate);
            result.transfers.push_back(trial_record(candidate, mc, "trial", it));
            if (mc.displacement > result.transfers[current_idx].measured_performance) {
                current = candidate;
                current_idx = static_cast<int>(result.transfers.size()) - 1;
            }
        }
    } catch (const BudgetExhausted&) {
        result.budget_exhausted = true;
    }
    if (current_idx >= 0)
        set_final(result, result.transfers[current_idx]);
    result.real_tests = robot.tests_used();
    return result;
}

} // namespace tres

#endif // TRES_ALGORITHMS_LOCAL_SEARCH_HPP
