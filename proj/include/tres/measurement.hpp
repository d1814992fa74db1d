#ifndef TRES_MEASUREMENT_HPP
#define TRES_MEASUREMENT_HPP

// Noisy on-board displacement estimate and the exact ground-truth reading.

#include <random>
#include <stdexcept>

#include "simulator.hpp"

namespace tres {

struct NoiseModel {
    double multiplicative = 0.05;      // sigma_m, unitless
    double additive = 0.01;            // sigma_a, meters
    double outlier_probability = 0.02; // p_out
    double outlier_scale = 0.3;        // meters
    double orientation = 0.01;         // accelerometer noise on roll/pitch, radians
    std::uint64_t seed = 0;

    void validate() const
    {
        if (multiplicative < 0 || additive < 0 || orientation < 0 || outlier_scale < 0)
            throw std::invalid_argument("noise standard deviations must be non-negative");
        if (outlier_probability < 0 || outlier_probability > 1)
            throw std::invalid_argument("outlier probability must lie in [0, 1]");
    }

    static NoiseModel none()
    {
        NoiseModel n;
        n.multiplicative = n.additive = n.outlier_probability = n.orientation = 0;
        return n;
    }
};

inline double ground_truth(const Trajectory& tr) { return forward_displacement(tr); }

/// d (1 + e_m) + e_a, plus a uniform gross error with probability p_out.
///
/// Zero-variance terms draw nothing, so a noiseless model returns the exact value
/// and leaves `rng` untouched.
inline double measure_displacement(const Trajectory& tr, const NoiseModel& nm, Rng& rng)
{
    nm.validate();
    double d = ground_truth(tr);
    if (nm.multiplicative > 0)
        d *= 1.0 + std::normal_distribution<double>(0.0, nm.multiplicative)(rng);
    if (nm.additive > 0)
        d += std::normal_distribution<double>(0.0, nm.additive)(rng);
    if (nm.outlier_probability > 0 && std::bernoulli_distribution(nm.outlier_probability)(rng))
        d += std::uniform_real_distribution<double>(-nm.outlier_scale, nm.outlier_scale)(rng);
    return d;
}

inline Orientation measure_orientation(const Orientation& truth, const NoiseModel& nm, Rng& rng)
{
    nm.validate();
    Orientation o = truth;
    if (nm.orientation > 0) {
        std::normal_distribution<double> noise(0.0, nm.orientation);
        o.roll += noise(rng);
        o.pitch += noise(rng);
    }
    return o;
}

} // namespace tres

#endif // TRES_MEASUREMENT_HPP
