#ifndef TRES_MORPHOLOGY_HPP
#define TRES_MORPHOLOGY_HPP

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "controller.hpp"

namespace tres {

// Leg numbering goes around the body: 0 right-front, 1 right-middle,
// 2 right-hind, 3 left-hind, 4 left-middle, 5 left-front. Body frame is
// x forward, y left, z up.
inline constexpr int mirror_leg(int leg) { return kLegs - 1 - leg; }

struct LegGeometry {
    double attach_x = 0;
    double attach_y = 0;
    double attach_yaw = 0; // direction the leg points at zero DOF-1 angle
    double coxa = 0;
    double femur = 0;
    double tibia = 0;
    double tibia_scale = 1.0;
    std::array<bool, kDofsPerLeg> powered{true, true, true};
    bool present = true;

    double effective_tibia() const { return tibia * tibia_scale; }
    /// Coxa or femur of zero length removes everything distal, so no foot remains.
    bool has_foot() const { return present && coxa > 0 && femur > 0; }
};

struct GeometryConfig {
    double attach_radius = 0.12;
    double coxa = 0.04;
    double femur = 0.08;
    double tibia = 0.12;
};

struct Morphology {
    std::array<LegGeometry, kLegs> legs{};
    double com_x = 0; // body mass center offset in the body frame
    double com_y = 0;
    double com_z = 0; // height above the leg attachment plane

    int present_legs() const
    {
        int n = 0;
        for (const auto& l : legs)
            n += l.has_foot() ? 1 : 0;
        return n;
    }
};

inline Morphology default_morphology(const GeometryConfig& g = {})
{
    if (g.attach_radius < 0 || g.coxa < 0 || g.femur < 0 || g.tibia < 0)
        throw std::invalid_argument("geometry lengths must be non-negative");
    constexpr double pi = std::numbers::pi;
    // exact negation between mirrored legs keeps the body bilaterally symmetric
    static constexpr std::array<double, kLegs> yaw = {-pi / 6, -pi / 2, -5 * pi / 6, 5 * pi / 6, pi / 2, pi / 6};
    Morphology m;
    for (int i = 0; i < kLegs; ++i) {
        auto& leg = m.legs[i];
        leg.attach_yaw = yaw[i];
        leg.attach_x = g.attach_radius * std::cos(yaw[i]);
        leg.attach_y = g.attach_radius * std::sin(yaw[i]);
        leg.coxa = g.coxa;
        leg.femur = g.femur;
        leg.tibia = g.tibia;
    }
    return m;
}

struct DamageOp {
    enum class Kind { remove_leg, unpower_leg, scale_tibia };
    Kind kind;
    int leg;
    double scale = 1.0;
};

/// A tagged test case (A-F) or an arbitrary list of damage operators.
struct DamageScenario {
    std::string tag; // "A".."F" or "custom"
    std::vector<DamageOp> ops;
};

inline DamageScenario scenario_from_tag(const std::string& tag)
{
    using K = DamageOp::Kind;
    if (tag == "A")
        return {tag, {}};
    if (tag == "B") // left middle leg no longer powered
        return {tag, {{K::unpower_leg, 4}}};
    if (tag == "C") // terminal part of front right leg shortened by half
        return {tag, {{K::scale_tibia, 0, 0.5}}};
    if (tag == "D") // right hind leg lost
        return {tag, {{K::remove_leg, 2}}};
    if (tag == "E") // middle right leg lost
        return {tag, {{K::remove_leg, 1}}};
    if (tag == "F") // middle right and front left legs lost
        return {tag, {{K::remove_leg, 1}, {K::remove_leg, 5}}};
    throw std::invalid_argument("unknown damage scenario '" + tag + "'");
}

inline Morphology apply_damage(Morphology m, const DamageScenario& s)
{
    for (const auto& op : s.ops) {
        if (op.leg < 0 || op.leg >= kLegs)
            throw std::invalid_argument("damage operator references leg " + std::to_string(op.leg));
        auto& leg = m.legs[op.leg];
        switch (op.kind) {
        case DamageOp::Kind::remove_leg:
            leg.present = false;
            break;
        case DamageOp::Kind::unpower_leg:
            leg.powered = {false, false, false};
            break;
        case DamageOp::Kind::scale_tibia:
            if (op.scale < 0)
                throw std::invalid_argument("tibia scale must be non-negative");
            leg.tibia_scale *= op.scale;
            break;
        }
    }
    return m;
}

inline Morphology apply_damage(const Morphology& m, const std::string& tag)
{
    return apply_damage(m, scenario_from_tag(tag));
}

} // namespace tres

#endif // TRES_MORPHOLOGY_HPP
