#ifndef TRES_HARNESS_COMPARE_HPP
#define TRES_HARNESS_COMPARE_HPP

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "../algorithms/run_result.hpp"
#include "../stats.hpp"

namespace tres {

/// Final score used in comparisons: ground truth when recorded, else the robot's own estimate.
inline double comparison_value(const RunResult& r)
{
    return r.final_ground_truth ? *r.final_ground_truth : r.final_measured;
}

/// samples[scenario][algorithm] from every result.json below `root`.
inline std::map<std::string, std::map<std::string, std::vector<double>>> collect_results(const std::string& root)
{
    namespace fs = std::filesystem;
    if (!fs::is_directory(root))
        throw std::invalid_argument("results directory " + root + " does not exist");
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(root))
        if (entry.is_regular_file() && entry.path().filename() == "result.json")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::map<std::string, std::map<std::string, std::vector<double>>> samples;
    for (const auto& f : files) {
        std::ifstream in(f);
        const RunResult r = run_result_from_json(nlohmann::json::parse(in));
        samples[r.scenario][r.algorithm].push_back(comparison_value(r));
    }
    return samples;
}

/// Writes comparison.csv and comparison.txt into `out_dir`.
inline ComparisonReport compare_results(const std::string& root, const std::string& focal, const std::string& out_dir)
{
    const ComparisonReport rep = build_report(collect_results(root), focal);
    std::filesystem::create_directories(out_dir);
    std::ofstream csv(std::filesystem::path(out_dir) / "comparison.csv");
    write_report_csv(csv, rep);
    std::ofstream txt(std::filesystem::path(out_dir) / "comparison.txt");
    write_report_text(txt, rep);
    return rep;
}

} // namespace tres

#endif // TRES_HARNESS_COMPARE_HPP
