#ifndef TRES_STATS_HPP
#define TRES_STATS_HPP

// Rank tests and box-plot summaries for replicate comparisons.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tres {

/// Mid-ranks (1-based) of `v`; tied values share the mean of their positions.
inline std::vector<double> mid_ranks(const std::vector<double>& v)
{
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]])
            ++j;
        const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k)
            ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

inline double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

inline constexpr std::size_t kExactRankSumLimit = 20;

namespace detail {

/// Exact two-sided p of the rank sum of `k` items drawn from `doubled` ranks
/// (ranks times two, so mid-ranks are integers): P(|S - E| >= |observed - E|).
inline double exact_subset_sum_p(const std::vector<int>& doubled, int k, int observed)
{
    const int total = std::accumulate(doubled.begin(), doubled.end(), 0);
    // table[j][s]: number of j-subsets with doubled rank sum s
    std::vector<std::vector<double>> table(k + 1, std::vector<double>(total + 1, 0.0));
    table[0][0] = 1;
    for (int r : doubled)
        for (int j = k; j >= 1; --j)
            for (int s = total; s >= r; --s)
                table[j][s] += table[j - 1][s - r];
    const int n = static_cast<int>(doubled.size());
    // twice the mean sum is k * total / n; compare 2 n |S - E| to stay in integers
    const long long center = static_cast<long long>(k) * total;
    const long long obs = std::llabs(static_cast<long long>(n) * observed - center);
    double hit = 0, all = 0;
    for (int s = 0; s <= total; ++s) {
        const double c = table[k][s];
        if (c == 0)
            continue;
        all += c;
        if (std::llabs(static_cast<long long>(n) * s - center) >= obs)
            hit += c;
    }
    return std::min(1.0, hit / all);
}

} // namespace detail

/// Two-sided Wilcoxon rank-sum (Mann-Whitney) p-value. Exact distribution of
/// the mid-rank sum when the pooled size is at most 20; otherwise the normal
/// approximation with tie and continuity corrections.
inline double wilcoxon_rank_sum(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.empty() || y.empty())
        throw std::invalid_argument("rank-sum test needs two non-empty samples");
    std::vector<double> pooled = x;
    pooled.insert(pooled.end(), y.begin(), y.end());
    const auto ranks = mid_ranks(pooled);
    const std::size_t n = pooled.size();
    const std::size_t nx = x.size();
    if (n <= kExactRankSumLimit) {
        std::vector<int> doubled(n);
        int observed = 0;
        for (std::size_t i = 0; i < n; ++i) {
            doubled[i] = static_cast<int>(std::lround(2 * ranks[i]));
            if (i < nx)
                observed += doubled[i];
        }
        return detail::exact_subset_sum_p(doubled, static_cast<int>(nx), observed);
    }
    const double w = std::accumulate(ranks.begin(), ranks.begin() + static_cast<long>(nx), 0.0);
    const double ny = static_cast<double>(y.size());
    const double dn = static_cast<double>(n);
    const double mean = static_cast<double>(nx) * (dn + 1) / 2;
    std::map<double, int> ties;
    for (double v : pooled)
        ++ties[v];
    double tie_term = 0;
    for (const auto& [v, t] : ties)
        tie_term += static_cast<double>(t) * t * t - t;
    const double var = static_cast<double>(nx) * ny / 12.0 * ((dn + 1) - tie_term / (dn * (dn - 1)));
    if (!(var > 0))
        return 1.0;
    const double z = std::max(0.0, std::abs(w - mean) - 0.5) / std::sqrt(var);
    return std::min(1.0, 2 * normal_sf(z));
}

/// Exact two-sided one-sample Wilcoxon signed-rank p-value against zero.
/// Zero values are dropped; ties in |x| share mid-ranks.
inline double wilcoxon_signed_rank(const std::vector<double>& x)
{
    std::vector<double> nz;
    for (double v : x)
        if (v != 0)
            nz.push_back(v);
    if (nz.empty())
        return 1.0;
    std::vector<double> mag;
    for (double v : nz)
        mag.push_back(std::abs(v));
    const auto ranks = mid_ranks(mag);
    std::vector<int> doubled;
    int observed = 0;
    for (std::size_t i = 0; i < nz.size(); ++i) {
        doubled.push_back(static_cast<int>(std::lround(2 * ranks[i])));
        if (nz[i] > 0)
            observed += doubled.back();
    }
    // every sign pattern is equally likely: distribution of a sum over any subset
    const int total = std::accumulate(doubled.begin(), doubled.end(), 0);
    std::vector<double> count(total + 1, 0.0);
    count[0] = 1;
    for (int r : doubled)
        for (int s = total; s >= r; --s)
            count[s] += count[s - r];
    double hit = 0, all = 0;
    const int obs = std::abs(2 * observed - total);
    for (int s = 0; s <= total; ++s) {
        all += count[s];
        if (count[s] != 0 && std::abs(2 * s - total) >= obs)
            hit += count[s];
    }
    return std::min(1.0, hit / all);
}

struct BoxSummary {
    std::size_t n = 0;
    double median = 0;
    double lower_hinge = 0;
    double upper_hinge = 0;
    double lower_whisker = 0; // most extreme values within 1.5 IQR of the hinges
    double upper_whisker = 0;
};

inline double median_of(std::vector<double> v)
{
    if (v.empty())
        throw std::invalid_argument("median of an empty sample");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

/// Tukey hinges: medians of the lower and upper halves, the middle value
/// belonging to both halves when n is odd.
inline BoxSummary summarize(std::vector<double> v)
{
    if (v.empty())
        throw std::invalid_argument("cannot summarize an empty sample");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    BoxSummary b;
    b.n = n;
    b.median = median_of(v);
    const std::size_t half = (n + 1) / 2;
    b.lower_hinge = median_of(std::vector<double>(v.begin(), v.begin() + static_cast<long>(half)));
    b.upper_hinge = median_of(std::vector<double>(v.end() - static_cast<long>(half), v.end()));
    const double iqr = b.upper_hinge - b.lower_hinge;
    const double lo = b.lower_hinge - 1.5 * iqr, hi = b.upper_hinge + 1.5 * iqr;
    b.lower_whisker = *std::find_if(v.begin(), v.end(), [&](double x) { return x >= lo; });
    b.upper_whisker = *std::find_if(v.rbegin(), v.rend(), [&](double x) { return x <= hi; });
    return b;
}

/// One (scenario, focal algorithm vs other algorithm) comparison.
struct ComparisonRow {
    std::string scenario;
    std::string algorithm;   // focal
    std::string baseline;    // compared against
    BoxSummary focal;
    BoxSummary other;
    std::optional<double> ratio; // absent when the baseline median is <= 0
    double difference = 0;
    double p_value = 1;

    std::string ratio_text() const
    {
        if (!ratio)
            return "+++";
        std::ostringstream os;
        os << std::fixed << std::setprecision(2) << *ratio;
        return os.str();
    }
};

struct ComparisonReport {
    std::vector<ComparisonRow> rows;
    std::vector<std::string> missing; // cells that had no data
};

inline ComparisonRow compare_samples(const std::string& scenario, const std::string& algorithm,
                                     const std::vector<double>& focal, const std::string& baseline,
                                     const std::vector<double>& other)
{
    ComparisonRow row;
    row.scenario = scenario;
    row.algorithm = algorithm;
    row.baseline = baseline;
    row.focal = summarize(focal);
    row.other = summarize(other);
    if (row.other.median > 0)
        row.ratio = row.focal.median / row.other.median;
    row.difference = row.focal.median - row.other.median;
    row.p_value = wilcoxon_rank_sum(focal, other);
    return row;
}

/// `samples[scenario][algorithm]` -> focal-vs-every-other rows.
inline ComparisonReport build_report(const std::map<std::string, std::map<std::string, std::vector<double>>>& samples,
                                     const std::string& focal)
{
    ComparisonReport rep;
    for (const auto& [scenario, algos] : samples) {
        auto f = algos.find(focal);
        if (f == algos.end() || f->second.empty()) {
            rep.missing.push_back(scenario + "/" + focal);
            continue;
        }
        for (const auto& [algo, values] : algos) {
            if (algo == focal)
                continue;
            if (values.empty()) {
                rep.missing.push_back(scenario + "/" + algo);
                continue;
            }
            rep.rows.push_back(compare_samples(scenario, focal, f->second, algo, values));
        }
    }
    return rep;
}

inline void write_report_csv(std::ostream& os, const ComparisonReport& rep)
{
    os << "scenario,algorithm,baseline,n_algorithm,n_baseline,median_algorithm,median_baseline,"
          "lower_hinge_algorithm,upper_hinge_algorithm,lower_hinge_baseline,upper_hinge_baseline,ratio,difference,p_value\n";
    os << std::setprecision(10);
    for (const auto& r : rep.rows)
        os << r.scenario << ',' << r.algorithm << ',' << r.baseline << ',' << r.focal.n << ',' << r.other.n << ','
           << r.focal.median << ',' << r.other.median << ',' << r.focal.lower_hinge << ',' << r.focal.upper_hinge << ','
           << r.other.lower_hinge << ',' << r.other.upper_hinge << ',' << r.ratio_text() << ',' << r.difference << ','
           << r.p_value << '\n';
}

/// Three blocks (ratios, differences, p-values), scenarios down, baselines across.
inline void write_report_text(std::ostream& os, const ComparisonReport& rep)
{
    std::vector<std::string> scenarios, baselines;
    for (const auto& r : rep.rows) {
        if (std::find(scenarios.begin(), scenarios.end(), r.scenario) == scenarios.end())
            scenarios.push_back(r.scenario);
        if (std::find(baselines.begin(), baselines.end(), r.baseline) == baselines.end())
            baselines.push_back(r.baseline);
    }
    auto cell = [&](const std::string& s, const std::string& b) -> const ComparisonRow* {
        for (const auto& r : rep.rows)
            if (r.scenario == s && r.baseline == b)
                return &r;
        return nullptr;
    };
    auto block = [&](const std::string& title, auto&& fmt) {
        os << title << '\n' << std::left << std::setw(10) << "scenario";
        for (const auto& b : baselines)
            os << std::setw(18) << b;
        os << '\n';
        for (const auto& s : scenarios) {
            os << std::setw(10) << s;
            for (const auto& b : baselines) {
                const ComparisonRow* r = cell(s, b);
                os << std::setw(18) << (r ? fmt(*r) : std::string("-"));
            }
            os << '\n';
        }
        os << '\n';
    };
    const std::string focal = rep.rows.empty() ? std::string("?") : rep.rows.front().algorithm;
    auto num = [](double v, int prec) {
        std::ostringstream s;
        s << std::fixed << std::setprecision(prec) << v;
        return s.str();
    };
    block("Median ratio (" + focal + " / baseline; +++ = baseline median <= 0)",
          [](const ComparisonRow& r) { return r.ratio_text(); });
    block("Median difference (" + focal + " - baseline, m)", [&](const ComparisonRow& r) { return num(r.difference, 3); });
    block("Rank-sum p-value", [&](const ComparisonRow& r) { return num(r.p_value, 4); });
    for (const auto& m : rep.missing)
        os << "missing: " << m << '\n';
}

} // namespace tres

#endif // TRES_STATS_HPP
