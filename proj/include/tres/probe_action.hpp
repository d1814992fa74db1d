#ifndef TRES_PROBE_ACTION_HPP
#define TRES_PROBE_ACTION_HPP

#include <array>
#include <numbers>
#include <vector>

#include "controller.hpp"

namespace tres {

/// Single-leg posture used to probe the body's orientation response.
struct BongardAction {
    int leg = 0;
    int position = 0; // 0 -> -pi/6, 1 -> +pi/6 on DOF 1
    int variant = 0;  // elevation variant a, b, c

    friend bool operator==(const BongardAction&, const BongardAction&) = default;
};

struct ElevationVariant {
    double femur;
    double tibia;
};

/// (femur, tibia) angles for variants a, b, c.
struct ActionTable {
    double dof1_position = std::numbers::pi / 6;
    std::array<ElevationVariant, 3> variants{{{0.0, 0.0}, {std::numbers::pi / 4, 0.0}, {-std::numbers::pi / 4, 0.0}}};

    double dof1(const BongardAction& a) const { return a.position == 0 ? -dof1_position : dof1_position; }
};

inline std::vector<BongardAction> action_set()
{
    std::vector<BongardAction> out;
    out.reserve(kLegs * 6);
    for (int leg = 0; leg < kLegs; ++leg)
        for (int pos = 0; pos < 2; ++pos)
            for (int var = 0; var < 3; ++var)
                out.push_back({leg, pos, var});
    return out;
}

inline constexpr int action_index(const BongardAction& a) { return a.leg * 6 + a.position * 3 + a.variant; }

} // namespace tres

#endif // TRES_PROBE_ACTION_HPP
