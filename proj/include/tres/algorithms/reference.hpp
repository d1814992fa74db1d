#ifndef TRES_ALGORITHMS_REFERENCE_HPP
#define TRES_ALGORITHMS_REFERENCE_HPP

#include "run_result.hpp"

namespace tres {

/// No adaptation: the hand-designed tripod gait, tried once.
inline RunResult reference_run(RealRobot& robot)
{
    RunResult result;
    result.algorithm = "reference";
    const Controller c = reference_controller();
    try {
        result.transfers.push_back(trial_record(c, robot.test(c), "trial", 0));
        set_final(result, result.transfers.back());
    } catch (const BudgetExhausted&) {
        result.budget_exhausted = true;
    }
    result.real_tests = robot.tests_used();
    return result;
}

} // namespace tres

#endif // TRES_ALGORITHMS_REFERENCE_HPP
