#ifndef TRES_ROBOT_HPP
#define TRES_ROBOT_HPP

// The only door algorithms have to the physical robot. Every query goes
// through RealRobot::test or RealRobot::probe, which count against the budget;
// ground truth lives in the concrete SimulatedRobot and is never part of the
// interface the algorithms receive.

#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "measurement.hpp"
#include "simulator.hpp"

namespace tres {

class BudgetExhausted : public std::runtime_error {
public:
    BudgetExhausted() : std::runtime_error("real-test budget exhausted") {}
};

/// What the robot reports after a trial: its own displacement estimate.
struct Measurement {
    int test_id = -1;
    double displacement = 0;
    bool fallen = false; // the robot knows when it ends up on its belly
};

struct OrientationReading {
    int test_id = -1;
    double roll = 0;
    double pitch = 0;
};

class RealRobot {
public:
    explicit RealRobot(int max_tests = std::numeric_limits<int>::max()) : _max_tests(max_tests) {}
    virtual ~RealRobot() = default;

    Measurement test(const Controller& c)
    {
        const int id = charge();
        Measurement m = run_trial(c, id);
        m.test_id = id;
        return m;
    }

    OrientationReading probe(const BongardAction& a)
    {
        const int id = charge();
        OrientationReading r = run_probe(a, id);
        r.test_id = id;
        return r;
    }

    int tests_used() const { return _used; }
    int max_tests() const { return _max_tests; }
    int remaining() const { return _max_tests - _used; }

protected:
    virtual Measurement run_trial(const Controller& c, int test_id) = 0;
    virtual OrientationReading run_probe(const BongardAction& a, int test_id) = 0;

private:
    int charge()
    {
        if (_used >= _max_tests)
            throw BudgetExhausted();
        return _used++;
    }

    int _max_tests;
    int _used = 0;
};

/// Damaged simulator plus noisy sensors, standing in for the hardware.
class SimulatedRobot : public RealRobot {
public:
    SimulatedRobot(Morphology body, NoiseModel noise, SimConfig sim = {},
                   int max_tests = std::numeric_limits<int>::max(), ActionTable table = {})
        : RealRobot(max_tests), _body(std::move(body)), _noise(noise), _sim(sim), _table(table), _rng(noise.seed)
    {
        _noise.validate();
    }

    /// Motion-capture value for a past trial; reporting only.
    double ground_truth_of(int test_id) const
    {
        auto it = _truth.find(test_id);
        if (it == _truth.end())
            throw std::out_of_range("no trial with id " + std::to_string(test_id));
        return it->second;
    }
    bool has_ground_truth(int test_id) const { return _truth.count(test_id) != 0; }
    const Morphology& body() const { return _body; }

protected:
    Measurement run_trial(const Controller& c, int test_id) override
    {
        const Trajectory tr = simulate(_body, c, _sim);
        _truth[test_id] = ground_truth(tr);
        Measurement m;
        m.displacement = measure_displacement(tr, _noise, _rng);
        m.fallen = tr.fallen;
        return m;
    }

    OrientationReading run_probe(const BongardAction& a, int) override
    {
        const Orientation o = measure_orientation(orientation_outcome(_body, a, _table, _sim), _noise, _rng);
        OrientationReading r;
        r.roll = o.roll;
        r.pitch = o.pitch;
        return r;
    }

private:
    Morphology _body;
    NoiseModel _noise;
    SimConfig _sim;
    ActionTable _table;
    Rng _rng;
    std::map<int, double> _truth;
};

} // namespace tres

#endif // TRES_ROBOT_HPP
