#ifndef TRES_ALGORITHMS_RUN_RESULT_HPP
#define TRES_ALGORITHMS_RUN_RESULT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "../robot.hpp"
#include "../transferability.hpp"

namespace tres {

struct ProbeRecord {
    BongardAction action;
    double roll = 0;
    double pitch = 0;
    int test_id = -1;
};

/// Everything an adaptation run produced. Ground-truth fields stay empty until
/// the harness annotates the result from the robot's motion-capture log.
struct RunResult {
    std::string algorithm;
    std::string scenario;
    std::uint64_t seed = 0;
    std::vector<TransferRecord> transfers; // every controller trial, in execution order
    std::vector<ProbeRecord> probes;
    std::optional<Controller> final_controller;
    int final_test_id = -1;
    double final_measured = 0;
    std::optional<double> final_sim;
    std::optional<double> final_ground_truth;
    int real_tests = 0;
    bool budget_exhausted = false;
    double wall_seconds = 0;
    std::vector<nlohmann::json> log; // per-generation lines for run.jsonl
    nlohmann::json extra = nlohmann::json::object();
};

/// Index of the highest measured trial; earliest wins ties. -1 if none.
inline int best_measured(const std::vector<TransferRecord>& records)
{
    int best = -1;
    for (int i = 0; i < static_cast<int>(records.size()); ++i)
        if (best < 0 || records[i].measured_performance > records[best].measured_performance)
            best = i;
    return best;
}

inline void set_final(RunResult& r, const TransferRecord& rec)
{
    r.final_controller = rec.controller;
    r.final_test_id = rec.test_id;
    r.final_measured = rec.measured_performance;
    r.final_sim = rec.sim_performance;
}

/// Copies motion-capture values for every trial into the result.
inline void annotate_ground_truth(RunResult& r, const SimulatedRobot& robot)
{
    for (auto& rec : r.transfers)
        if (robot.has_ground_truth(rec.test_id))
            rec.ground_truth_performance = robot.ground_truth_of(rec.test_id);
    if (r.final_test_id >= 0 && robot.has_ground_truth(r.final_test_id))
        r.final_ground_truth = robot.ground_truth_of(r.final_test_id);
}

inline TransferRecord trial_record(const Controller& c, const Measurement& m, const std::string& kind, int generation)
{
    TransferRecord rec;
    rec.controller = c;
    rec.measured_performance = m.displacement;
    rec.fallen = m.fallen;
    rec.test_id = m.test_id;
    rec.kind = kind;
    rec.generation = generation;
    return rec;
}

/// result.json content. Wall time is left out so reruns are byte-identical.
inline nlohmann::json to_json(const RunResult& r)
{
    auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    nlohmann::json j;
    j["algorithm"] = r.algorithm;
    j["scenario"] = r.scenario;
    j["seed"] = r.seed;
    j["real_tests"] = r.real_tests;
    j["budget_exhausted"] = r.budget_exhausted;
    j["final_controller"] = r.final_controller ? to_json(*r.final_controller) : nlohmann::json(nullptr);
    j["final_test_id"] = r.final_test_id;
    j["final_measured"] = r.final_measured;
    j["final_sim"] = opt(r.final_sim);
    j["final_ground_truth"] = opt(r.final_ground_truth);
    auto& tr = j["transfers"] = nlohmann::json::array();
    for (const auto& rec : r.transfers)
        tr.push_back(to_json(rec));
    auto& pr = j["probes"] = nlohmann::json::array();
    for (const auto& p : r.probes)
        pr.push_back({{"leg", p.action.leg},
                      {"position", p.action.position},
                      {"variant", p.action.variant},
                      {"roll", p.roll},
                      {"pitch", p.pitch},
                      {"test_id", p.test_id}});
    j["extra"] = r.extra;
    return j;
}

inline RunResult run_result_from_json(const nlohmann::json& j)
{
    auto opt = [&](const char* key) -> std::optional<double> {
        if (!j.contains(key) || j.at(key).is_null())
            return std::nullopt;
        return j.at(key).get<double>();
    };
    RunResult r;
    r.algorithm = j.at("algorithm").get<std::string>();
    r.scenario = j.at("scenario").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.real_tests = j.at("real_tests").get<int>();
    r.budget_exhausted = j.at("budget_exhausted").get<bool>();
    if (!j.at("final_controller").is_null())
        r.final_controller = controller_from_json(j.at("final_controller"));
    r.final_test_id = j.at("final_test_id").get<int>();
    r.final_measured = j.at("final_measured").get<double>();
    r.final_sim = opt("final_sim");
    r.final_ground_truth = opt("final_ground_truth");
    for (const auto& t : j.at("transfers"))
        r.transfers.push_back(transfer_record_from_json(t));
    for (const auto& p : j.at("probes"))
        r.probes.push_back({{p.at("leg").get<int>(), p.at("position").get<int>(), p.at("variant").get<int>()},
                            p.at("roll").get<double>(),
                            p.at("pitch").get<double>(),
                            p.at("test_id").get<int>()});
    r.extra = j.value("extra", nlohmann::json::object());
    return r;
}

} // namespace tres

#endif // TRES_ALGORITHMS_RUN_RESULT_HPP
