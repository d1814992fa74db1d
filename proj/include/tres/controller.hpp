#ifndef TRES_CONTROLLER_HPP
#define TRES_CONTROLLER_HPP

// Periodic 24-parameter hexapod controller: control signal, reference tripod
// gait, random generation and the two variation operators.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace tres {

using Rng = std::mt19937_64;

inline constexpr int kLegs = 6;
inline constexpr int kDofsPerLeg = 3;
inline constexpr int kControllerParams = 24;
inline constexpr int kGridLevels = 5;
inline constexpr double kGridStep = 0.25;

/// Which of the four per-leg parameters.
enum class Param : int { alpha1 = 0, phi1 = 1, alpha2 = 2, phi2 = 3 };

inline constexpr int param_index(int leg, Param p) { return leg * 4 + static_cast<int>(p); }

/// Amplitude/phase controller on the {0, 0.25, 0.5, 0.75, 1} grid.
///
/// Values are stored as grid indices so that every instance is valid by
/// construction. Flat layout is leg-major: (alpha1, phi1, alpha2, phi2) per leg.
class Controller {
public:
    Controller() { _levels.fill(0); }

    static Controller from_levels(const std::array<std::uint8_t, kControllerParams>& levels)
    {
        Controller c;
        for (int i = 0; i < kControllerParams; ++i) {
            if (levels[i] >= kGridLevels)
                throw std::invalid_argument("controller level out of range");
            c._levels[i] = levels[i];
        }
        return c;
    }

    /// Throws if any value is not on the 5-value grid.
    static Controller from_values(const std::vector<double>& values)
    {
        if (values.size() != kControllerParams)
            throw std::invalid_argument("controller needs 24 values, got " + std::to_string(values.size()));
        Controller c;
        for (int i = 0; i < kControllerParams; ++i) {
            const double scaled = values[i] / kGridStep;
            const double rounded = std::round(scaled);
            if (!(std::abs(scaled - rounded) < 1e-9) || rounded < 0 || rounded >= kGridLevels)
                throw std::invalid_argument("controller value off grid: " + std::to_string(values[i]));
            c._levels[i] = static_cast<std::uint8_t>(rounded);
        }
        return c;
    }

    double value(int i) const { return _levels[i] * kGridStep; }
    double get(int leg, Param p) const { return value(param_index(leg, p)); }
    std::uint8_t level(int i) const { return _levels[i]; }
    void set_level(int i, int lvl)
    {
        if (lvl < 0 || lvl >= kGridLevels)
            throw std::invalid_argument("controller level out of range");
        _levels[i] = static_cast<std::uint8_t>(lvl);
    }
    void set(int leg, Param p, double v)
    {
        auto c = from_values_single(v);
        _levels[param_index(leg, p)] = c;
    }

    std::array<double, kControllerParams> values() const
    {
        std::array<double, kControllerParams> out{};
        for (int i = 0; i < kControllerParams; ++i)
            out[i] = value(i);
        return out;
    }
    const std::array<std::uint8_t, kControllerParams>& levels() const { return _levels; }

    /// Base-5 packing; unique per controller, used for simulation caches.
    std::uint64_t key() const
    {
        std::uint64_t k = 0;
        for (auto l : _levels)
            k = k * kGridLevels + l;
        return k;
    }

    friend bool operator==(const Controller&, const Controller&) = default;

private:
    static std::uint8_t from_values_single(double v)
    {
        const double r = std::round(v / kGridStep);
        if (std::abs(v / kGridStep - r) > 1e-9 || r < 0 || r >= kGridLevels)
            throw std::invalid_argument("controller value off grid: " + std::to_string(v));
        return static_cast<std::uint8_t>(r);
    }

    std::array<std::uint8_t, kControllerParams> _levels;
};

/// Commanded joint angles, indexed leg * 3 + dof.
using JointTargets = std::array<double, kLegs * kDofsPerLeg>;

struct GaitConfig {
    double frequency = 1.0;                        // Hz
    double dof1_range = std::numbers::pi / 4.0;    // rad at |signal| = 1
    double dof23_range = std::numbers::pi / 4.0;
};

/// alpha * tanh(4 sin(2 pi (t + phi))), t in periods.
inline double control_signal(double t, double alpha, double phi)
{
    return alpha * std::tanh(4.0 * std::sin(2.0 * std::numbers::pi * (t + phi)));
}

inline JointTargets joint_targets(const Controller& c, double t_seconds, const GaitConfig& cfg = {})
{
    if (!(cfg.frequency > 0))
        throw std::invalid_argument("gait frequency must be positive");
    const double phase = std::fmod(t_seconds * cfg.frequency, 1.0);
    // phases live on the grid too, so one waveform sample per level suffices
    std::array<double, kGridLevels> wave{};
    for (int l = 0; l < kGridLevels; ++l)
        wave[l] = control_signal(phase, 1.0, l * kGridStep);
    JointTargets out{};
    for (int leg = 0; leg < kLegs; ++leg) {
        const double horiz = c.get(leg, Param::alpha1) * wave[c.level(param_index(leg, Param::phi1))];
        const double elev = c.get(leg, Param::alpha2) * wave[c.level(param_index(leg, Param::phi2))];
        out[leg * 3 + 0] = horiz * cfg.dof1_range;
        out[leg * 3 + 1] = elev * cfg.dof23_range;
        out[leg * 3 + 2] = elev * cfg.dof23_range;
    }
    return out;
}

/// Classic tripod: legs {0,2,4} and {1,3,5} alternate.
inline Controller reference_controller()
{
    static constexpr double phi1[kLegs] = {0.0, 0.5, 0.0, 0.0, 0.5, 0.0};
    static constexpr double phi2[kLegs] = {0.25, 0.75, 0.25, 0.75, 0.25, 0.75};
    Controller c;
    for (int leg = 0; leg < kLegs; ++leg) {
        c.set(leg, Param::alpha1, 1.0);
        c.set(leg, Param::phi1, phi1[leg]);
        c.set(leg, Param::alpha2, 0.25);
        c.set(leg, Param::phi2, phi2[leg]);
    }
    return c;
}

inline Controller random_controller(Rng& rng)
{
    std::uniform_int_distribution<int> level(0, kGridLevels - 1);
    Controller c;
    for (int i = 0; i < kControllerParams; ++i)
        c.set_level(i, level(rng));
    return c;
}

/// Each parameter moves one grid step with probability `rate` (up and down
/// equally likely); moves past 0 or 1 are clamped.
inline Controller mutate(const Controller& c, Rng& rng, double rate = 0.1)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Controller out = c;
    for (int i = 0; i < kControllerParams; ++i) {
        const double draw = u(rng);
        int lvl = c.level(i);
        if (draw < rate / 2)
            ++lvl;
        else if (draw < rate)
            --lvl;
        out.set_level(i, std::clamp(lvl, 0, kGridLevels - 1));
    }
    return out;
}

/// Every parameter gets an independent step drawn from {-0.25, 0, +0.25}, clamped to [0, 1].
inline Controller perturb(const Controller& c, Rng& rng)
{
    std::uniform_int_distribution<int> delta(-1, 1);
    Controller out = c;
    for (int i = 0; i < kControllerParams; ++i)
        out.set_level(i, std::clamp(c.level(i) + delta(rng), 0, kGridLevels - 1));
    return out;
}

inline nlohmann::json to_json(const Controller& c)
{
    auto v = c.values();
    return nlohmann::json(std::vector<double>(v.begin(), v.end()));
}

inline Controller controller_from_json(const nlohmann::json& j)
{
    if (!j.is_array())
        throw std::invalid_argument("controller JSON must be an array");
    return Controller::from_values(j.get<std::vector<double>>());
}

inline std::string to_csv(const Controller& c)
{
    std::ostringstream os;
    for (int i = 0; i < kControllerParams; ++i)
        os << (i ? "," : "") << c.value(i);
    return os.str();
}

inline Controller controller_from_csv(const std::string& line)
{
    std::vector<double> values;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            values.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw std::invalid_argument("bad controller CSV cell: '" + cell + "'");
        }
    }
    return Controller::from_values(values);
}

} // namespace tres

#endif // TRES_CONTROLLER_HPP
