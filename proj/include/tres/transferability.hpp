#ifndef TRES_TRANSFERABILITY_HPP
#define TRES_TRANSFERABILITY_HPP

// Exact transferability of a tested controller and its linear approximation
// over contact descriptors, learned with nu-SVR.
//
// Scores are signed so that larger is better: a perfect sim/real match scores 0.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "controller.hpp"
#include "simulator.hpp"

namespace tres {

inline double exact_transferability(double sim_perf, double measured_perf)
{
    return -std::abs(sim_perf - measured_perf);
}

struct TransferRecord {
    Controller controller;
    Descriptor descriptor;                 // self-model contacts; empty when no self-model is involved
    std::optional<double> sim_performance; // absent for model-free algorithms
    double measured_performance = 0;
    std::optional<double> ground_truth_performance; // filled by the harness after the run
    double exact_score = 0;
    bool fallen = false;
    int generation = 0;
    int test_id = -1;
    std::string kind = "transfer"; // transfer | validation | trial
};

inline nlohmann::json to_json(const TransferRecord& r)
{
    nlohmann::json j;
    j["type"] = "transfer";
    j["kind"] = r.kind;
    j["test_id"] = r.test_id;
    j["generation"] = r.generation;
    j["controller"] = to_json(r.controller);
    std::string bits(r.descriptor.size(), '0');
    for (std::size_t i = 0; i < r.descriptor.size(); ++i)
        bits[i] = r.descriptor[i] ? '1' : '0';
    j["descriptor"] = bits;
    j["sim_performance"] = r.sim_performance ? nlohmann::json(*r.sim_performance) : nlohmann::json(nullptr);
    j["measured_performance"] = r.measured_performance;
    j["ground_truth_performance"] =
        r.ground_truth_performance ? nlohmann::json(*r.ground_truth_performance) : nlohmann::json(nullptr);
    j["exact_score"] = r.exact_score;
    j["fallen"] = r.fallen;
    return j;
}

inline TransferRecord transfer_record_from_json(const nlohmann::json& j)
{
    TransferRecord r;
    r.kind = j.at("kind").get<std::string>();
    r.test_id = j.at("test_id").get<int>();
    r.generation = j.at("generation").get<int>();
    r.controller = controller_from_json(j.at("controller"));
    for (char ch : j.at("descriptor").get<std::string>())
        r.descriptor.push_back(ch == '1' ? 1 : 0);
    if (!j.at("sim_performance").is_null())
        r.sim_performance = j.at("sim_performance").get<double>();
    r.measured_performance = j.at("measured_performance").get<double>();
    if (!j.at("ground_truth_performance").is_null())
        r.ground_truth_performance = j.at("ground_truth_performance").get<double>();
    r.exact_score = j.at("exact_score").get<double>();
    r.fallen = j.at("fallen").get<bool>();
    return r;
}

struct SvrParams {
    double nu = 0.5;
    double C = 1.0;
    double tolerance = 1e-3;
    long max_iterations = 10'000'000;
};

/// Affine model w . x + b.
struct Regressor {
    std::vector<double> weights;
    double bias = 0;
    int training_size = 0;
    double training_rmse = 0;

    double predict(const Descriptor& d) const
    {
        if (d.size() != weights.size())
            throw std::invalid_argument("descriptor length " + std::to_string(d.size()) + " does not match model length " +
                                        std::to_string(weights.size()));
        double s = bias;
        for (std::size_t i = 0; i < d.size(); ++i)
            if (d[i])
                s += weights[i];
        return s;
    }
};

/// Until the first transfer there is no model and every controller scores 0.
inline double predict(const std::optional<Regressor>& r, const Descriptor& d)
{
    return r ? r->predict(d) : 0.0;
}

namespace detail {

/// nu-SVR dual solved by SMO with second-order working-set selection
/// (Chang and Lin's Solver_NU without shrinking). Returns the expansion
/// coefficients and rho; the model is f(x) = sum coef_i K(x_i, x) - rho.
inline void solve_nu_svr(const std::vector<std::vector<double>>& gram, const std::vector<double>& target,
                         const SvrParams& p, std::vector<double>& coef, double& rho)
{
    const int l = static_cast<int>(target.size());
    const int n = 2 * l;
    constexpr double tau = 1e-12;
    const double C = p.C;
    std::vector<double> alpha(n), lin(n);
    std::vector<signed char> y(n);
    double sum = C * p.nu * l / 2;
    for (int i = 0; i < l; ++i) {
        alpha[i] = alpha[i + l] = std::min(sum, C);
        sum -= alpha[i];
        lin[i] = -target[i];
        y[i] = 1;
        lin[i + l] = target[i];
        y[i + l] = -1;
    }
    auto Q = [&](int i, int j) { return y[i] * y[j] * gram[i % l][j % l]; };
    std::vector<double> G = lin;
    for (int j = 0; j < n; ++j)
        if (alpha[j] != 0)
            for (int k = 0; k < n; ++k)
                G[k] += alpha[j] * Q(k, j);
    auto upper = [&](int t) { return alpha[t] >= C; };
    auto lower = [&](int t) { return alpha[t] <= 0; };

    for (long iter = 0; iter < p.max_iterations; ++iter) {
        double gmaxp = -std::numeric_limits<double>::infinity(), gmaxp2 = gmaxp;
        double gmaxn = gmaxp, gmaxn2 = gmaxp;
        int ip = -1, in = -1;
        for (int t = 0; t < n; ++t) {
            if (y[t] == 1) {
                if (!upper(t) && -G[t] >= gmaxp) {
                    gmaxp = -G[t];
                    ip = t;
                }
            } else if (!lower(t) && G[t] >= gmaxn) {
                gmaxn = G[t];
                in = t;
            }
        }
        int jmin = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) {
            if (y[j] == 1) {
                if (lower(j))
                    continue;
                gmaxp2 = std::max(gmaxp2, G[j]);
                const double diff = gmaxp + G[j];
                if (diff > 0) {
                    const double quad = Q(ip, ip) + Q(j, j) - 2 * Q(ip, j);
                    const double obj = -(diff * diff) / (quad > 0 ? quad : tau);
                    if (obj <= best) {
                        jmin = j;
                        best = obj;
                    }
                }
            } else {
                if (upper(j))
                    continue;
                gmaxn2 = std::max(gmaxn2, -G[j]);
                const double diff = gmaxn - G[j];
                if (diff > 0) {
                    const double quad = Q(in, in) + Q(j, j) - 2 * Q(in, j);
                    const double obj = -(diff * diff) / (quad > 0 ? quad : tau);
                    if (obj <= best) {
                        jmin = j;
                        best = obj;
                    }
                }
            }
        }
        if (std::max(gmaxp + gmaxp2, gmaxn + gmaxn2) < p.tolerance || jmin == -1)
            break;
        const int i = y[jmin] == 1 ? ip : in;
        const int j = jmin;

        // i and j share a label, so alpha_i + alpha_j is conserved
        const double old_i = alpha[i], old_j = alpha[j];
        double quad = Q(i, i) + Q(j, j) - 2 * Q(i, j);
        if (quad <= 0)
            quad = tau;
        const double delta = (G[i] - G[j]) / quad;
        const double total = alpha[i] + alpha[j];
        alpha[i] -= delta;
        alpha[j] += delta;
        if (total > C) {
            if (alpha[i] > C) {
                alpha[i] = C;
                alpha[j] = total - C;
            }
        } else if (alpha[j] < 0) {
            alpha[j] = 0;
            alpha[i] = total;
        }
        if (total > C) {
            if (alpha[j] > C) {
                alpha[j] = C;
                alpha[i] = total - C;
            }
        } else if (alpha[i] < 0) {
            alpha[i] = 0;
            alpha[j] = total;
        }
        const double di = alpha[i] - old_i, dj = alpha[j] - old_j;
        for (int k = 0; k < n; ++k)
            G[k] += Q(k, i) * di + Q(k, j) * dj;
    }

    // rho from the free variables of each label; midpoint of the bounds otherwise
    double r[2];
    for (int side = 0; side < 2; ++side) {
        const signed char label = side == 0 ? 1 : -1;
        double ub = std::numeric_limits<double>::infinity(), lb = -ub, free_sum = 0;
        int free_count = 0;
        for (int t = 0; t < n; ++t) {
            if (y[t] != label)
                continue;
            if (upper(t))
                lb = std::max(lb, G[t]);
            else if (lower(t))
                ub = std::min(ub, G[t]);
            else {
                ++free_count;
                free_sum += G[t];
            }
        }
        r[side] = free_count > 0 ? free_sum / free_count : (ub + lb) / 2;
    }
    rho = (r[0] - r[1]) / 2;
    coef.assign(l, 0.0);
    for (int i = 0; i < l; ++i)
        coef[i] = alpha[i] - alpha[i + l];
}

} // namespace detail

/// Linear nu-SVR on (descriptor -> exact score). Fallen records and exact
/// duplicates are dropped first; returns nothing when no record remains.
inline std::optional<Regressor> fit(const std::vector<TransferRecord>& records, const SvrParams& params = {})
{
    std::map<std::pair<Descriptor, double>, int> seen;
    std::vector<const Descriptor*> xs;
    std::vector<double> ys;
    for (const auto& r : records) {
        if (r.fallen || r.descriptor.empty())
            continue;
        if (!seen.emplace(std::make_pair(r.descriptor, r.exact_score), 0).second)
            continue;
        if (!xs.empty() && xs.front()->size() != r.descriptor.size())
            throw std::invalid_argument("training descriptors differ in length");
        xs.push_back(&r.descriptor);
        ys.push_back(r.exact_score);
    }
    if (xs.empty())
        return std::nullopt;
    const std::size_t l = xs.size();
    const std::size_t dim = xs.front()->size();
    std::vector<std::vector<double>> gram(l, std::vector<double>(l, 0.0));
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t j = i; j < l; ++j) {
            double s = 0;
            for (std::size_t k = 0; k < dim; ++k)
                s += (*xs[i])[k] & (*xs[j])[k];
            gram[i][j] = gram[j][i] = s;
        }
    std::vector<double> coef;
    double rho = 0;
    detail::solve_nu_svr(gram, ys, params, coef, rho);

    Regressor reg;
    reg.weights.assign(dim, 0.0);
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t k = 0; k < dim; ++k)
            if ((*xs[i])[k])
                reg.weights[k] += coef[i];
    reg.bias = -rho;
    reg.training_size = static_cast<int>(l);
    double sse = 0;
    for (std::size_t i = 0; i < l; ++i) {
        const double e = reg.predict(*xs[i]) - ys[i];
        sse += e * e;
    }
    reg.training_rmse = std::sqrt(sse / l);
    return reg;
}

/// One line per weight, bias last.
inline void write_regressor_csv(std::ostream& os, const Regressor& r)
{
    os << "index,weight\n";
    for (std::size_t i = 0; i < r.weights.size(); ++i)
        os << i << ',' << r.weights[i] << '\n';
    os << "bias," << r.bias << '\n';
}

} // namespace tres

#endif // TRES_TRANSFERABILITY_HPP
