// Command-line driver: run experiment cells, compare algorithms, draw traces,
// or simulate a single controller.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <tres/tres.hpp>

namespace {

struct RunFlags {
    std::string config_path;
    std::vector<std::string> scenarios;
    std::vector<std::string> algorithms;
    std::vector<std::uint64_t> seeds;
    std::optional<int> budget_tests;
    std::optional<int> generations;
    std::optional<int> population;
    std::optional<int> transfer_period;
    std::optional<double> noise_multiplicative;
    std::optional<double> noise_additive;
    std::optional<double> noise_outlier_probability;
    std::optional<double> noise_outlier_scale;
    std::optional<double> noise_orientation;
    std::optional<std::string> out;
};

tres::ExperimentConfig resolve(const RunFlags& f)
{
    tres::ExperimentConfig cfg = f.config_path.empty() ? tres::ExperimentConfig{} : tres::load_config(f.config_path);
    if (!f.scenarios.empty())
        cfg.scenarios = f.scenarios;
    if (!f.algorithms.empty())
        cfg.algorithms = f.algorithms;
    if (!f.seeds.empty())
        cfg.seeds = f.seeds;
    auto& b = cfg.budget;
    if (f.population)
        b.population = *f.population;
    if (f.transfer_period)
        b.transfer_period = *f.transfer_period;
    if (f.generations)
        b.generations = *f.generations;
    if (f.budget_tests) {
        // matched real-test count across algorithms
        const int n = *f.budget_tests;
        if (n < 2)
            throw tres::ConfigError("--budget-tests must be at least 2");
        if (!f.generations)
            b.generations = (n - 1) * b.transfer_period;
        b.local_search_iterations = n - 1;
        b.policy_gradient_iterations = std::max(1, n / 15);
        b.bongard_actions = std::min(n - 1, 36);
    }
    if (f.noise_multiplicative)
        cfg.noise.multiplicative = *f.noise_multiplicative;
    if (f.noise_additive)
        cfg.noise.additive = *f.noise_additive;
    if (f.noise_outlier_probability)
        cfg.noise.outlier_probability = *f.noise_outlier_probability;
    if (f.noise_outlier_scale)
        cfg.noise.outlier_scale = *f.noise_outlier_scale;
    if (f.noise_orientation)
        cfg.noise.orientation = *f.noise_orientation;
    if (f.out)
        cfg.output = *f.out;
    cfg.validate();
    return cfg;
}

int cmd_run(const RunFlags& f, bool dry_run)
{
    const auto cfg = resolve(f);
    if (dry_run) {
        std::cout << tres::to_json(cfg).dump(2) << '\n';
        return 0;
    }
    std::cerr << "config " << tres::config_hash(cfg) << ", output " << cfg.output << '\n';
    const auto summary = tres::run_experiment(cfg, &std::cerr);
    std::cerr << summary.completed << " cell(s) completed, " << summary.failures.size() << " failed\n";
    for (const auto& f2 : summary.failures)
        std::cerr << "  " << f2 << '\n';
    return summary.failures.empty() ? 0 : 1;
}

int cmd_compare(const std::string& dir, const std::string& focal, std::string out)
{
    if (out.empty())
        out = dir;
    const auto rep = tres::compare_results(dir, focal, out);
    tres::write_report_text(std::cout, rep);
    return 0;
}

int cmd_trace(const std::string& result_path, std::string out)
{
    std::ifstream in(result_path);
    if (!in)
        throw std::runtime_error("cannot open " + result_path);
    const auto doc = nlohmann::json::parse(in);
    const auto result = tres::run_result_from_json(doc);
    if (!result.final_controller)
        throw std::runtime_error(result_path + " has no final controller");
    const auto& env = doc.at("environment");
    const tres::SimConfig sim = tres::sim_config_from_environment(env);
    const tres::Morphology body =
        tres::apply_damage(tres::default_morphology(tres::geometry_from_environment(env)), result.scenario);
    const auto reference = tres::simulate(body, tres::reference_controller(), sim);
    const auto learned = tres::simulate(body, *result.final_controller, sim);
    if (out.empty())
        out = (std::filesystem::path(result_path).parent_path() / "trace.svg").string();
    std::ofstream svg(out);
    tres::write_trace_svg(svg, reference, learned);
    std::cerr << "wrote " << out << " (reference " << tres::forward_displacement(reference) << " m, learned "
              << tres::forward_displacement(learned) << " m)\n";
    return 0;
}

int cmd_simulate(const std::string& scenario, const std::string& controller_csv, const std::string& config_path)
{
    const tres::ExperimentConfig cfg = config_path.empty() ? tres::ExperimentConfig{} : tres::load_config(config_path);
    const auto body = tres::apply_damage(tres::default_morphology(cfg.geometry), scenario);
    const auto c = controller_csv.empty() ? tres::reference_controller() : tres::controller_from_csv(controller_csv);
    const auto tr = tres::simulate(body, c, cfg.simulator);
    tres::write_trajectory_csv(std::cout, tr);
    std::cerr << "displacement " << tres::forward_displacement(tr) << " m" << (tr.fallen ? " (fell)" : "") << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Damage recovery for a simulated hexapod: T-Resilience and baselines"};
    app.require_subcommand(1);

    RunFlags flags;
    bool dry_run = false;
    auto* run = app.add_subcommand("run", "run every (scenario, algorithm, seed) cell");
    run->add_option("--config", flags.config_path, "JSON experiment config")->check(CLI::ExistingFile);
    run->add_option("--scenario", flags.scenarios, "damage scenarios (A-F)")->delimiter(',');
    run->add_option("--algorithm", flags.algorithms,
                    "t_resilience, local_search, policy_gradient, bongard, reference")
        ->delimiter(',');
    run->add_option("--seeds", flags.seeds, "replicate seeds")->delimiter(',');
    run->add_option("--budget-tests", flags.budget_tests, "matched real-test budget per run");
    run->add_option("--generations", flags.generations, "T-Resilience generations");
    run->add_option("--pop", flags.population, "population size (even)");
    run->add_option("--transfer-period", flags.transfer_period, "generations between transfers");
    run->add_option("--noise-multiplicative", flags.noise_multiplicative, "relative odometry noise std");
    run->add_option("--noise-additive", flags.noise_additive, "absolute odometry noise std (m)");
    run->add_option("--noise-outlier-probability", flags.noise_outlier_probability, "gross error probability");
    run->add_option("--noise-outlier-scale", flags.noise_outlier_scale, "gross error half-width (m)");
    run->add_option("--noise-orientation", flags.noise_orientation, "accelerometer noise std (rad)");
    run->add_option("--out", flags.out, "output directory");
    run->add_flag("--dry-run", dry_run, "print the resolved config and exit");

    std::string results_dir, focal = "t_resilience", compare_out;
    auto* compare = app.add_subcommand("compare", "rank-sum comparison tables from a results tree");
    compare->add_option("results", results_dir, "directory written by `run`")->required();
    compare->add_option("--focal", focal, "algorithm compared against all others");
    compare->add_option("--out", compare_out, "where to write comparison.csv/.txt (default: results dir)");

    std::string result_file, trace_out;
    auto* trace = app.add_subcommand("trace", "SVG top view of reference vs final controller");
    trace->add_option("result", result_file, "result.json of one cell")->required()->check(CLI::ExistingFile);
    trace->add_option("--out", trace_out, "SVG path (default: next to result.json)");

    std::string sim_scenario = "A", sim_controller, sim_config;
    auto* simulate = app.add_subcommand("simulate", "trajectory CSV of one controller");
    simulate->add_option("--scenario", sim_scenario, "damage scenario");
    simulate->add_option("--controller", sim_controller, "24 comma-separated values (default: reference gait)");
    simulate->add_option("--config", sim_config, "config providing geometry/simulator blocks")->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);
    try {
        if (*run)
            return cmd_run(flags, dry_run);
        if (*compare)
            return cmd_compare(results_dir, focal, compare_out);
        if (*trace)
            return cmd_trace(result_file, trace_out);
        if (*simulate)
            return cmd_simulate(sim_scenario, sim_controller, sim_config);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
