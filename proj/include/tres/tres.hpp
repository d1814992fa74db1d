#ifndef TRES_TRES_HPP
#define TRES_TRES_HPP

#include "algorithms/bongard.hpp"
#include "algorithms/local_search.hpp"
#include "algorithms/policy_gradient.hpp"
#include "algorithms/reference.hpp"
#include "algorithms/run_result.hpp"
#include "algorithms/t_resilience.hpp"
#include "controller.hpp"
#include "harness/compare.hpp"
#include "harness/config.hpp"
#include "harness/runner.hpp"
#include "harness/trace.hpp"
#include "measurement.hpp"
#include "morphology.hpp"
#include "nsga2.hpp"
#include "parallel.hpp"
#include "probe_action.hpp"
#include "robot.hpp"
#include "self_model.hpp"
#include "simulator.hpp"
#include "stats.hpp"
#include "transferability.hpp"

#endif // TRES_TRES_HPP
