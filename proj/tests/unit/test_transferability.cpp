#include <cmath>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include <tres/transferability.hpp>

using namespace tres;

namespace {

TransferRecord record(Descriptor d, double score)
{
    TransferRecord r;
    r.descriptor = std::move(d);
    r.exact_score = score;
    return r;
}

Descriptor random_descriptor(Rng& rng, std::size_t n, double p = 0.5)
{
    std::bernoulli_distribution b(p);
    Descriptor d(n);
    for (auto& x : d)
        x = b(rng);
    return d;
}

/// Primal nu-SVR objective for a linear model; the optimal tube width is a
/// closed form given the residuals.
double primal_objective(const std::vector<double>& w, double b, const std::vector<Descriptor>& xs,
                        const std::vector<double>& ys, double C, double nu)
{
    std::vector<double> r;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double f = b;
        for (std::size_t k = 0; k < w.size(); ++k)
            f += w[k] * xs[i][k];
        r.push_back(std::abs(f - ys[i]));
    }
    // min over eps >= 0 of C (nu eps + mean(max(0, r - eps))): eps is a quantile of r
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> cands = r;
    cands.push_back(0.0);
    for (double eps : cands) {
        double s = 0;
        for (double ri : r)
            s += std::max(0.0, ri - eps);
        best = std::min(best, C * (nu * eps + s / r.size()));
    }
    double ww = 0;
    for (double v : w)
        ww += v * v;
    return 0.5 * ww + best;
}

} // namespace

TEST(ExactTransferability, Examples)
{
    EXPECT_EQ(exact_transferability(0.5, 0.5), 0.0);
    EXPECT_DOUBLE_EQ(exact_transferability(0.5, 0.3), -0.2);
    EXPECT_DOUBLE_EQ(exact_transferability(0.3, 0.5), -0.2);
    EXPECT_DOUBLE_EQ(exact_transferability(-0.1, 0.4), -0.5);
}

TEST(Regressor, AbsentModelPredictsZero)
{
    EXPECT_EQ(predict(std::nullopt, Descriptor(606, 1)), 0.0);
    EXPECT_FALSE(fit({}).has_value());
    TransferRecord fallen = record(Descriptor(10, 1), -0.3);
    fallen.fallen = true;
    EXPECT_FALSE(fit({fallen}).has_value());
}

TEST(Regressor, ZeroWeightsGiveBias)
{
    Regressor r;
    r.weights.assign(606, 0.0);
    r.bias = -0.07;
    Rng rng(1);
    EXPECT_EQ(r.predict(random_descriptor(rng, 606)), -0.07);
    EXPECT_THROW(r.predict(Descriptor(605, 0)), std::invalid_argument);
}

TEST(Regressor, SingleRecordInterpolates)
{
    Rng rng(2);
    for (double y : {-0.3, -0.05, 0.0}) {
        const Descriptor d = random_descriptor(rng, 606);
        const auto reg = fit({record(d, y)});
        ASSERT_TRUE(reg);
        EXPECT_NEAR(reg->predict(d), y, 1e-3);
        EXPECT_EQ(reg->training_size, 1);
    }
}

TEST(Regressor, DuplicatesAreDropped)
{
    Rng rng(3);
    std::vector<TransferRecord> base;
    for (int i = 0; i < 8; ++i)
        base.push_back(record(random_descriptor(rng, 60), -0.1 * (i % 3)));
    auto doubled = base;
    doubled.insert(doubled.end(), base.begin(), base.end());
    const auto a = fit(base);
    const auto b = fit(doubled);
    ASSERT_TRUE(a && b);
    EXPECT_EQ(b->training_size, 8);
    for (std::size_t k = 0; k < a->weights.size(); ++k)
        EXPECT_NEAR(a->weights[k], b->weights[k], 1e-6);
    EXPECT_NEAR(a->bias, b->bias, 1e-6);
}

TEST(Regressor, MismatchedDescriptorsRejected)
{
    EXPECT_THROW(fit({record(Descriptor(5, 1), -0.1), record(Descriptor(6, 1), -0.2)}), std::invalid_argument);
}

TEST(Regressor, DualSolutionIsPrimalOptimal)
{
    // the linear weights returned from the dual must minimize the primal objective:
    // random directions in (w, b) space never improve it beyond solver tolerance
    Rng rng(4);
    std::normal_distribution<double> n(0, 1);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<TransferRecord> recs;
        std::vector<Descriptor> xs;
        std::vector<double> ys;
        for (int i = 0; i < 20; ++i) {
            xs.push_back(random_descriptor(rng, 30, 0.4));
            ys.push_back(-0.1 * std::abs(n(rng)) + 0.05 * xs.back()[0]);
            recs.push_back(record(xs.back(), ys.back()));
        }
        SvrParams p;
        p.tolerance = 1e-8;
        const auto reg = fit(recs, p);
        ASSERT_TRUE(reg);
        const double f0 = primal_objective(reg->weights, reg->bias, xs, ys, p.C, p.nu);
        for (int k = 0; k < 200; ++k) {
            std::vector<double> w = reg->weights;
            const double step = 1e-3;
            for (auto& v : w)
                v += step * n(rng);
            const double b = reg->bias + step * n(rng);
            EXPECT_GE(primal_objective(w, b, xs, ys, p.C, p.nu), f0 - 1e-7);
        }
    }
}

TEST(Regressor, RecoversSparseLinearTruth)
{
    Rng rng(5);
    std::vector<double> w(100, 0.0);
    w[3] = -0.2;
    w[40] = 0.1;
    auto truth = [&](const Descriptor& d) {
        double s = -0.05;
        for (std::size_t k = 0; k < d.size(); ++k)
            s += w[k] * d[k];
        return s;
    };
    std::vector<TransferRecord> recs;
    for (int i = 0; i < 200; ++i) {
        const auto d = random_descriptor(rng, 100);
        recs.push_back(record(d, truth(d)));
    }
    const auto reg = fit(recs);
    ASSERT_TRUE(reg);
    double sse = 0;
    for (int i = 0; i < 200; ++i) {
        const auto d = random_descriptor(rng, 100);
        const double e = reg->predict(d) - truth(d);
        sse += e * e;
    }
    EXPECT_LT(std::sqrt(sse / 200), 0.02);
    EXPECT_LT(reg->weights[3], -0.1);
}

TEST(TransferRecord, JsonRoundTrip)
{
    Rng rng(6);
    TransferRecord r = record(random_descriptor(rng, 606), -0.12);
    r.controller = random_controller(rng);
    r.sim_performance = 0.4;
    r.measured_performance = 0.28;
    r.test_id = 7;
    r.generation = 32;
    const auto back = transfer_record_from_json(to_json(r));
    EXPECT_EQ(back.descriptor, r.descriptor);
    EXPECT_EQ(back.controller, r.controller);
    EXPECT_EQ(back.sim_performance, r.sim_performance);
    EXPECT_FALSE(back.ground_truth_performance.has_value());
    EXPECT_EQ(back.test_id, 7);
    EXPECT_EQ(back.kind, "transfer");
}

TEST(Regressor, CsvExport)
{
    Regressor r;
    r.weights = {0.5, -0.25};
    r.bias = 0.125;
    std::ostringstream os;
    write_regressor_csv(os, r);
    EXPECT_EQ(os.str(), "index,weight\n0,0.5\n1,-0.25\nbias,0.125\n");
}
