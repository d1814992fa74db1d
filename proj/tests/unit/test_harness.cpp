#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include <tres/tres.hpp>

using namespace tres;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("tres_harness_" + name);
    fs::remove_all(p);
    return p;
}

ExperimentConfig tiny_config(const fs::path& out)
{
    ExperimentConfig cfg;
    cfg.scenarios = {"B", "E"};
    cfg.algorithms = {"t_resilience", "local_search"};
    cfg.seeds = {1, 2, 3, 4, 5};
    cfg.budget.population = 6;
    cfg.budget.generations = 8;
    cfg.budget.transfer_period = 4;
    cfg.budget.local_search_iterations = 3;
    cfg.output = out.string();
    cfg.workers = 1;
    return cfg;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Every opening tag is closed in order and attribute quotes balance.
bool well_formed(const std::string& xml)
{
    std::vector<std::string> stack;
    const std::regex tag(R"(<(/?)([A-Za-z]+)([^<>]*?)(/?)>)");
    std::size_t consumed = 0;
    for (auto it = std::sregex_iterator(xml.begin(), xml.end(), tag); it != std::sregex_iterator(); ++it) {
        const auto& m = *it;
        if (xml.substr(consumed, m.position() - consumed).find_first_of("<>") != std::string::npos)
            return false;
        consumed = m.position() + m.length();
        if (std::count(m[3].first, m[3].second, '"') % 2)
            return false;
        if (m[1].length()) {
            if (stack.empty() || stack.back() != m[2].str())
                return false;
            stack.pop_back();
        } else if (!m[4].length()) {
            stack.push_back(m[2]);
        }
    }
    return stack.empty() && xml.find_first_of("<>", consumed) == std::string::npos;
}

} // namespace

TEST(Config, DefaultsAndRoundTrip)
{
    const ExperimentConfig d;
    EXPECT_EQ(d.scenarios, (std::vector<std::string>{"B", "C", "D", "E", "F"}));
    EXPECT_EQ(declared_tests("t_resilience", d.budget), 26);
    EXPECT_EQ(declared_tests("local_search", d.budget), 26);
    EXPECT_EQ(declared_tests("policy_gradient", d.budget), 30);
    EXPECT_EQ(declared_tests("bongard", d.budget), 26);
    const auto back = config_from_json(to_json(d));
    EXPECT_EQ(to_json(back), to_json(d));
    EXPECT_EQ(config_hash(back), config_hash(d));
}

TEST(Config, UnknownKeysRejected)
{
    EXPECT_THROW(config_from_json({{"sceanrios", {"B"}}}), ConfigError);
    EXPECT_THROW(config_from_json({{"budget", {{"populaton", 10}}}}), ConfigError);
    EXPECT_THROW(config_from_json({{"noise", {{"sigma", 0.1}}}}), ConfigError);
    EXPECT_THROW(config_from_json({{"algorithms", {"simulated_annealing"}}}), ConfigError);
    EXPECT_THROW(config_from_json({{"scenarios", {"Z"}}}), ConfigError);
    EXPECT_THROW(config_from_json({{"budget", {{"population", 7}}}}), ConfigError);
    EXPECT_THROW(config_from_json({{"seeds", "one"}}), ConfigError);
    EXPECT_NO_THROW(config_from_json({{"scenarios", {"A"}}, {"simulator", {{"support", "level"}}}}));
}

TEST(Config, HashIgnoresOutputAndWorkers)
{
    ExperimentConfig a, b;
    b.output = "elsewhere";
    b.workers = 3;
    EXPECT_EQ(config_hash(a), config_hash(b));
    b.noise.multiplicative = 0.06;
    EXPECT_NE(config_hash(a), config_hash(b));
    EXPECT_EQ(config_hash(a).size(), 16u);
}

TEST(Config, LoadsFileWithComments)
{
    const fs::path dir = scratch_dir("load");
    fs::create_directories(dir);
    std::ofstream(dir / "c.json") << "{\n  // two scenarios\n  \"scenarios\": [\"B\", \"C\"],\n  \"seeds\": [7]\n}\n";
    const auto cfg = load_config((dir / "c.json").string());
    EXPECT_EQ(cfg.scenarios.size(), 2u);
    EXPECT_EQ(cfg.seeds, (std::vector<std::uint64_t>{7}));
    EXPECT_THROW(load_config((dir / "missing.json").string()), ConfigError);
    fs::remove_all(dir);
}

TEST(Runner, WritesOneResultPerCellAndIsDeterministic)
{
    const fs::path a = scratch_dir("run_a"), b = scratch_dir("run_b");
    const auto sa = run_experiment(tiny_config(a));
    EXPECT_EQ(sa.completed, 20);
    EXPECT_TRUE(sa.failures.empty());
    int files = 0;
    for (const auto& e : fs::recursive_directory_iterator(a))
        files += e.path().filename() == "result.json";
    EXPECT_EQ(files, 20);

    run_experiment(tiny_config(b));
    for (const auto& e : fs::recursive_directory_iterator(a)) {
        if (e.path().filename() != "result.json")
            continue;
        const auto rel = fs::relative(e.path(), a);
        EXPECT_EQ(slurp(e.path()), slurp(b / rel)) << rel;
    }

    const auto doc = nlohmann::json::parse(slurp(cell_dir(a.string(), {"B", "t_resilience", 3}) / "result.json"));
    EXPECT_EQ(doc.at("config_hash"), config_hash(tiny_config(a)));
    EXPECT_EQ(doc.at("real_tests"), 8 / 4 + 1);
    EXPECT_FALSE(doc.at("final_ground_truth").is_null());
    EXPECT_FALSE(doc.contains("wall_seconds"));

    std::ifstream log(cell_dir(a.string(), {"E", "local_search", 1}) / "run.jsonl");
    std::string line, last;
    int n = 0;
    while (std::getline(log, line)) {
        const auto j = nlohmann::json::parse(line);
        if (n++ == 0) {
            EXPECT_EQ(j.at("type"), "header");
        }
        last = line;
    }
    EXPECT_EQ(nlohmann::json::parse(last).at("type"), "summary");
    EXPECT_EQ(n, 1 + 4 + 1);
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(Runner, SeedsAndAlgorithmsUseSeparateStreams)
{
    Rng a = cell_rng(1, 1), b = cell_rng(1, 2), c = cell_rng(2, 1), d = cell_rng(1, 1);
    const auto x = a();
    EXPECT_NE(x, b());
    EXPECT_NE(x, c());
    EXPECT_EQ(x, d());
}

namespace {

void write_fake(const fs::path& root, const std::string& scenario, const std::string& algorithm, std::uint64_t seed,
                double truth)
{
    RunResult r;
    r.algorithm = algorithm;
    r.scenario = scenario;
    r.seed = seed;
    r.final_ground_truth = truth;
    const fs::path dir = cell_dir(root.string(), {scenario, algorithm, seed});
    fs::create_directories(dir);
    std::ofstream(dir / "result.json") << to_json(r).dump(2);
}

} // namespace

TEST(Compare, RatioFromResultTree)
{
    const fs::path root = scratch_dir("compare");
    for (std::uint64_t s = 1; s <= 5; ++s) {
        write_fake(root, "B", "t_resilience", s, 0.4);
        write_fake(root, "B", "local_search", s, 0.2);
        write_fake(root, "C", "t_resilience", s, 0.3);
        write_fake(root, "C", "local_search", s, 0.3);
        write_fake(root, "D", "t_resilience", s, 0.3);
        write_fake(root, "D", "local_search", s, s % 2 ? 0.0 : -0.1);
    }
    const auto rep = compare_results(root.string(), "t_resilience", root.string());
    ASSERT_EQ(rep.rows.size(), 3u);
    EXPECT_EQ(rep.rows[0].ratio_text(), "2.00");
    EXPECT_LT(rep.rows[0].p_value, 0.05);
    EXPECT_EQ(rep.rows[1].p_value, 1.0);
    EXPECT_EQ(rep.rows[1].ratio_text(), "1.00");
    EXPECT_EQ(rep.rows[2].ratio_text(), "+++");
    EXPECT_TRUE(fs::exists(root / "comparison.csv"));
    EXPECT_NE(slurp(root / "comparison.txt").find("+++"), std::string::npos);
    fs::remove_all(root);
}

TEST(Trace, TwoPathsAndWellFormed)
{
    const auto body = default_morphology();
    const auto ref = simulate(body, reference_controller());
    Rng rng(3);
    const auto other = simulate(body, random_controller(rng));
    std::ostringstream os;
    write_trace_svg(os, ref, other);
    const std::string svg = os.str();
    EXPECT_TRUE(well_formed(svg));
    std::size_t paths = 0;
    for (std::size_t p = svg.find("<path"); p != std::string::npos; p = svg.find("<path", p + 1))
        ++paths;
    EXPECT_EQ(paths, 2u);
    EXPECT_NE(svg.find("stroke-dasharray"), std::string::npos);
    EXPECT_FALSE(well_formed("<svg><g></svg>"));
}

TEST(Trace, ReferenceWalksForwardOnIntactBody)
{
    const auto tr = simulate(default_morphology(), reference_controller());
    double high = tr.poses.front().x;
    for (const auto& p : tr.poses) {
        EXPECT_GE(p.x, high - 0.01);
        high = std::max(high, p.x);
    }
    EXPECT_GT(forward_displacement(tr), 0.1);
}

TEST(Trace, StillControllerIsSingleDot)
{
    const auto tr = simulate(default_morphology(), Controller{});
    std::ostringstream os;
    write_trace_svg(os, tr, tr);
    const std::string svg = os.str();
    const std::regex path_d(R"re(<path d="([^"]*)")re");
    int paths = 0;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), path_d); it != std::sregex_iterator(); ++it) {
        ++paths;
        std::istringstream d((*it)[1].str());
        std::string op;
        double x0, y0, x, y;
        d >> op >> x0 >> y0;
        while (d >> op >> x >> y) {
            EXPECT_EQ(x, x0);
            EXPECT_EQ(y, y0);
        }
    }
    EXPECT_EQ(paths, 2);
}

TEST(Trace, EnvironmentRebuildsSimulator)
{
    ExperimentConfig cfg;
    cfg.simulator.ticks = 50;
    cfg.geometry.tibia = 0.1;
    const auto env = environment_json(cfg);
    EXPECT_EQ(sim_config_from_environment(env).ticks, 50);
    EXPECT_EQ(geometry_from_environment(env).tibia, 0.1);
}
