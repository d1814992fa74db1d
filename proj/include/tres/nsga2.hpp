#ifndef TRES_NSGA2_HPP
#define TRES_NSGA2_HPP

// Elitist non-dominated sorting GA, generic over the genome type. All
// objectives are maximized.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "controller.hpp"

namespace tres {

using Objectives = std::vector<double>;

/// a is no worse than b everywhere and strictly better somewhere.
inline bool dominates(const Objectives& a, const Objectives& b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("objective vectors differ in length");
    bool strictly = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i])
            return false;
        if (a[i] > b[i])
            strictly = true;
    }
    return strictly;
}

/// Fronts of indices into `scores`, best first; order inside a front is ascending index.
inline std::vector<std::vector<int>> fast_nondominated_sort(const std::vector<Objectives>& scores)
{
    const int n = static_cast<int>(scores.size());
    std::vector<std::vector<int>> dominated(n);
    std::vector<int> counter(n, 0);
    std::vector<std::vector<int>> fronts(1);
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            if (p == q)
                continue;
            if (dominates(scores[p], scores[q]))
                dominated[p].push_back(q);
            else if (dominates(scores[q], scores[p]))
                ++counter[p];
        }
        if (counter[p] == 0)
            fronts[0].push_back(p);
    }
    if (fronts[0].empty())
        return {};
    for (std::size_t k = 0; !fronts[k].empty(); ++k) {
        std::vector<int> next;
        for (int p : fronts[k])
            for (int q : dominated[p])
                if (--counter[q] == 0)
                    next.push_back(q);
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(next));
    }
    fronts.pop_back();
    return fronts;
}

/// Crowding distance of each member of one front (same order as the input).
inline std::vector<double> crowding_distance(const std::vector<Objectives>& front)
{
    const std::size_t n = front.size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, 0.0);
    if (n == 0)
        return dist;
    if (n <= 2)
        return std::vector<double>(n, inf);
    const std::size_t m = front[0].size();
    std::vector<std::size_t> order(n);
    for (std::size_t obj = 0; obj < m; ++obj) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return front[a][obj] < front[b][obj]; });
        const double lo = front[order.front()][obj];
        const double hi = front[order.back()][obj];
        dist[order.front()] = inf;
        dist[order.back()] = inf;
        const double range = hi - lo;
        if (!(range > 0))
            continue;
        for (std::size_t k = 1; k + 1 < n; ++k)
            dist[order[k]] += (front[order[k + 1]][obj] - front[order[k - 1]][obj]) / range;
    }
    return dist;
}

/// Diversity: mean Euclidean distance to every member, self included, divided by N.
inline std::vector<double> diversity_scores(const std::vector<std::vector<double>>& genomes)
{
    const std::size_t n = genomes.size();
    std::vector<double> out(n, 0.0);
    if (n == 0)
        return out;
    std::vector<double> pair(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0;
            for (std::size_t k = 0; k < genomes[i].size(); ++k) {
                const double d = genomes[i][k] - genomes[j][k];
                s += d * d;
            }
            pair[i * n + j] = pair[j * n + i] = std::sqrt(s);
        }
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0;
        for (std::size_t j = 0; j < n; ++j)
            s += pair[i * n + j];
        out[i] = s / static_cast<double>(n);
    }
    return out;
}

inline std::vector<double> diversity_scores(const std::vector<Controller>& pop)
{
    std::vector<std::vector<double>> g;
    g.reserve(pop.size());
    for (const auto& c : pop) {
        const auto v = c.values();
        g.emplace_back(v.begin(), v.end());
    }
    return diversity_scores(g);
}

template <class Genome>
struct Individual {
    Genome genome;
    Objectives objectives;
    int rank = 1; // 1 = non-dominated
    double crowding = 0;
};

template <class Genome>
using Population = std::vector<Individual<Genome>>;

/// Evaluates a whole batch at once so population-relative objectives (diversity)
/// can see every candidate.
template <class Genome>
using BatchEvaluator = std::function<std::vector<Objectives>(const std::vector<Genome>&)>;

template <class Genome>
using Variation = std::function<Genome(const Genome&, Rng&)>;

/// Writes rank and crowding for every member; returns the fronts.
template <class Genome>
std::vector<std::vector<int>> assign_rank_and_crowding(Population<Genome>& pop)
{
    std::vector<Objectives> scores;
    scores.reserve(pop.size());
    for (const auto& ind : pop)
        scores.push_back(ind.objectives);
    auto fronts = fast_nondominated_sort(scores);
    for (std::size_t f = 0; f < fronts.size(); ++f) {
        std::vector<Objectives> fs;
        for (int i : fronts[f])
            fs.push_back(scores[i]);
        const auto cd = crowding_distance(fs);
        for (std::size_t k = 0; k < fronts[f].size(); ++k) {
            pop[fronts[f][k]].rank = static_cast<int>(f) + 1;
            pop[fronts[f][k]].crowding = cd[k];
        }
    }
    return fronts;
}

template <class Genome>
Population<Genome> evaluate_population(const std::vector<Genome>& genomes, const BatchEvaluator<Genome>& evaluate)
{
    auto scores = evaluate(genomes);
    if (scores.size() != genomes.size())
        throw std::runtime_error("evaluator returned the wrong number of score vectors");
    Population<Genome> pop(genomes.size());
    for (std::size_t i = 0; i < genomes.size(); ++i) {
        pop[i].genome = genomes[i];
        pop[i].objectives = std::move(scores[i]);
    }
    assign_rank_and_crowding(pop);
    return pop;
}

/// Lower rank wins, then larger crowding, then a coin flip.
template <class Genome>
std::size_t binary_tournament(const Population<Genome>& pop, Rng& rng)
{
    std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
    const std::size_t a = pick(rng);
    const std::size_t b = pick(rng);
    const auto& x = pop[a];
    const auto& y = pop[b];
    if (x.rank != y.rank)
        return x.rank < y.rank ? a : b;
    if (x.crowding != y.crowding)
        return x.crowding > y.crowding ? a : b;
    return std::bernoulli_distribution(0.5)(rng) ? a : b;
}

/// Keeps the best `n` of `pop` by (rank, crowding); ties keep the earlier member.
template <class Genome>
Population<Genome> truncate(Population<Genome> pop, std::size_t n)
{
    const auto fronts = assign_rank_and_crowding(pop);
    Population<Genome> out;
    out.reserve(n);
    for (const auto& front : fronts) {
        if (out.size() + front.size() <= n) {
            for (int i : front)
                out.push_back(pop[i]);
            continue;
        }
        std::vector<int> order = front;
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return pop[a].crowding > pop[b].crowding; });
        for (std::size_t k = 0; out.size() < n; ++k)
            out.push_back(pop[order[k]]);
        break;
    }
    return out;
}

/// One generation: N offspring by tournament + variation, union of 2N
/// re-evaluated in one batch, best N survive.
template <class Genome>
Population<Genome> nsga2_step(const Population<Genome>& pop, const BatchEvaluator<Genome>& evaluate,
                              const Variation<Genome>& vary, Rng& rng)
{
    if (pop.empty() || pop.size() % 2 != 0)
        throw std::invalid_argument("population size must be even and positive");
    std::vector<Genome> genomes;
    genomes.reserve(pop.size() * 2);
    for (const auto& ind : pop)
        genomes.push_back(ind.genome);
    for (std::size_t i = 0; i < pop.size(); ++i)
        genomes.push_back(vary(pop[binary_tournament(pop, rng)].genome, rng));
    return truncate(evaluate_population(genomes, evaluate), pop.size());
}

template <class Genome>
nlohmann::json generation_snapshot(int generation, const Population<Genome>& pop,
                                   const std::function<nlohmann::json(const Genome&)>& genome_json)
{
    nlohmann::json j;
    j["type"] = "generation";
    j["generation"] = generation;
    auto& members = j["population"] = nlohmann::json::array();
    for (const auto& ind : pop)
        members.push_back({{"genome", genome_json(ind.genome)}, {"objectives", ind.objectives}, {"rank", ind.rank}});
    return j;
}

} // namespace tres

#endif // TRES_NSGA2_HPP
