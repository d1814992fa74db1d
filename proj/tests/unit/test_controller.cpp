#include <cmath>
#include <map>
#include <numbers>

#include <gtest/gtest.h>

#include <tres/controller.hpp>

using namespace tres;

namespace {

bool on_grid(double v)
{
    const double s = v / 0.25;
    return std::abs(s - std::round(s)) < 1e-12 && v >= 0 && v <= 1;
}

} // namespace

TEST(ControlSignal, ZeroAtOrigin) { EXPECT_EQ(control_signal(0.0, 1.0, 0.0), 0.0); }

TEST(ControlSignal, QuarterPeriodPeak)
{
    EXPECT_NEAR(control_signal(0.25, 1.0, 0.0), std::tanh(4.0), 1e-15);
    EXPECT_NEAR(control_signal(0.25, 1.0, 0.0), 0.999329, 1e-6);
}

TEST(ControlSignal, HalfPhaseAntisymmetryAndBound)
{
    Rng rng(7);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 2000; ++i) {
        const double t = 3 * u(rng), a = u(rng), phi = u(rng);
        EXPECT_NEAR(control_signal(t, a, phi + 0.5), -control_signal(t, a, phi), 1e-12);
        EXPECT_LE(std::abs(control_signal(t, a, phi)), a * std::tanh(4.0) + 1e-15);
        EXPECT_NEAR(control_signal(t + 1, a, phi), control_signal(t, a, phi), 1e-12);
    }
}

TEST(JointTargets, ReferenceAtTimeZero)
{
    const auto q = joint_targets(reference_controller(), 0.0);
    for (int leg : {0, 2, 3, 5})
        EXPECT_NEAR(q[leg * 3], 0.0, 1e-15) << "leg " << leg;
}

TEST(JointTargets, ZeroAmplitudeIsStill)
{
    Controller c; // all zero
    c.set(0, Param::phi1, 0.5);
    for (double t : {0.0, 0.37, 1.9})
        for (double v : joint_targets(c, t))
            EXPECT_EQ(v, 0.0);
}

TEST(JointTargets, PeriodicAndElevationShared)
{
    Rng rng(3);
    GaitConfig g;
    g.frequency = 2.0;
    for (int i = 0; i < 50; ++i) {
        const Controller c = random_controller(rng);
        const double t = 0.03 * i;
        const auto a = joint_targets(c, t, g);
        const auto b = joint_targets(c, t + 1.0 / g.frequency, g);
        for (int k = 0; k < 18; ++k)
            EXPECT_NEAR(a[k], b[k], 1e-9);
        for (int leg = 0; leg < kLegs; ++leg) {
            EXPECT_EQ(a[leg * 3 + 1], a[leg * 3 + 2]);
            const double expect = control_signal(std::fmod(t * g.frequency, 1.0), c.get(leg, Param::alpha1),
                                                 c.get(leg, Param::phi1)) *
                                  g.dof1_range;
            EXPECT_NEAR(a[leg * 3], expect, 1e-12);
        }
    }
}

TEST(JointTargets, RejectsNonPositiveFrequency)
{
    GaitConfig g;
    g.frequency = 0;
    EXPECT_THROW(joint_targets(reference_controller(), 0.0, g), std::invalid_argument);
}

TEST(ReferenceController, MatchesTable)
{
    const Controller c = reference_controller();
    const double phi1[] = {0, 0.5, 0, 0, 0.5, 0};
    const double phi2[] = {0.25, 0.75, 0.25, 0.75, 0.25, 0.75};
    for (int leg = 0; leg < kLegs; ++leg) {
        EXPECT_EQ(c.get(leg, Param::alpha1), 1.0);
        EXPECT_EQ(c.get(leg, Param::phi1), phi1[leg]);
        EXPECT_EQ(c.get(leg, Param::alpha2), 0.25);
        EXPECT_EQ(c.get(leg, Param::phi2), phi2[leg]);
    }
    for (double v : c.values())
        EXPECT_TRUE(on_grid(v));
}

TEST(ReferenceController, TripodsShareElevationPhase)
{
    const Controller c = reference_controller();
    for (int leg : {0, 2, 4})
        EXPECT_EQ(c.get(leg, Param::phi2), 0.25);
    for (int leg : {1, 3, 5})
        EXPECT_EQ(c.get(leg, Param::phi2), 0.75);
}

TEST(RandomController, DeterministicPerSeed)
{
    Rng a(42), b(42);
    EXPECT_EQ(random_controller(a), random_controller(b));
}

TEST(RandomController, UniformOverGrid)
{
    // chi-square against the uniform law, 4 degrees of freedom per parameter
    constexpr int draws = 10000;
    Rng rng(11);
    std::array<std::array<int, 5>, kControllerParams> counts{};
    for (int i = 0; i < draws; ++i) {
        const Controller c = random_controller(rng);
        for (int p = 0; p < kControllerParams; ++p)
            ++counts[p][c.level(p)];
    }
    for (int p = 0; p < kControllerParams; ++p) {
        double chi2 = 0;
        for (int v = 0; v < 5; ++v) {
            EXPECT_NEAR(counts[p][v] / double(draws), 0.2, 0.02);
            const double e = draws / 5.0;
            chi2 += (counts[p][v] - e) * (counts[p][v] - e) / e;
        }
        EXPECT_LT(chi2, 18.47) << "parameter " << p; // 0.999 quantile, 4 dof
    }
}

TEST(Mutate, AverageChangeCount)
{
    Rng rng(5);
    Controller mid;
    for (int i = 0; i < kControllerParams; ++i)
        mid.set_level(i, 2);
    double changed = 0;
    constexpr int n = 10000;
    for (int i = 0; i < n; ++i) {
        const Controller m = mutate(mid, rng);
        for (int p = 0; p < kControllerParams; ++p) {
            changed += m.level(p) != mid.level(p);
            EXPECT_LE(std::abs(int(m.level(p)) - int(mid.level(p))), 1);
        }
    }
    EXPECT_NEAR(changed / n, 2.4, 0.2);
}

TEST(Mutate, ClampsAtBoundary)
{
    Rng rng(9);
    Controller zero; // every parameter at 0
    int up = 0;
    constexpr int n = 5000;
    for (int i = 0; i < n; ++i) {
        const Controller m = mutate(zero, rng);
        for (int p = 0; p < kControllerParams; ++p) {
            EXPECT_GE(m.value(p), 0.0);
            up += m.level(p) == 1;
        }
    }
    // only the upward half of the 10% can move a zero parameter
    EXPECT_NEAR(up / double(n * kControllerParams), 0.05, 0.005);
}

TEST(Mutate, ZeroRateIsIdentity)
{
    Rng rng(1);
    const Controller c = random_controller(rng);
    EXPECT_EQ(mutate(c, rng, 0.0), c);
}

TEST(Perturb, FromZeros)
{
    Rng rng(21);
    Controller zero;
    double zeros = 0;
    constexpr int n = 5000;
    for (int i = 0; i < n; ++i) {
        const Controller c = perturb(zero, rng);
        for (int p = 0; p < kControllerParams; ++p) {
            EXPECT_TRUE(c.value(p) == 0.0 || c.value(p) == 0.25);
            zeros += c.value(p) == 0.0;
        }
    }
    EXPECT_NEAR(zeros / (n * kControllerParams), 2.0 / 3.0, 0.01);
}

TEST(Perturb, FromOnesAndInteriorRate)
{
    Rng rng(22);
    Controller ones, mid;
    for (int i = 0; i < kControllerParams; ++i) {
        ones.set_level(i, 4);
        mid.set_level(i, 2);
    }
    double changed = 0;
    constexpr int n = 5000;
    for (int i = 0; i < n; ++i) {
        for (double v : perturb(ones, rng).values())
            EXPECT_TRUE(v == 0.75 || v == 1.0);
        const Controller m = perturb(mid, rng);
        for (int p = 0; p < kControllerParams; ++p)
            changed += m.level(p) != 2;
    }
    EXPECT_NEAR(changed / (n * kControllerParams), 2.0 / 3.0, 0.03);
}

TEST(Serialization, JsonAndCsvRoundTrip)
{
    Rng rng(4);
    for (int i = 0; i < 100; ++i) {
        const Controller c = random_controller(rng);
        EXPECT_EQ(controller_from_json(to_json(c)), c);
        EXPECT_EQ(controller_from_csv(to_csv(c)), c);
        const auto v = c.values();
        EXPECT_EQ(Controller::from_values(std::vector<double>(v.begin(), v.end())), c);
    }
}

TEST(Serialization, RejectsOffGridAndWrongLength)
{
    EXPECT_THROW(controller_from_csv("0.1,0,0"), std::invalid_argument);
    std::vector<double> v(24, 0.0);
    v[3] = 0.3;
    EXPECT_THROW(Controller::from_values(v), std::invalid_argument);
    v[3] = 1.25;
    EXPECT_THROW(Controller::from_values(v), std::invalid_argument);
    EXPECT_THROW(controller_from_csv("a,b"), std::invalid_argument);
}

TEST(Controller, KeyIsInjective)
{
    Rng rng(8);
    std::map<std::uint64_t, Controller> seen;
    for (int i = 0; i < 2000; ++i) {
        const Controller c = random_controller(rng);
        auto [it, fresh] = seen.emplace(c.key(), c);
        if (!fresh) {
            EXPECT_EQ(it->second, c);
        }
    }
}
