#ifndef TRES_SIMULATOR_HPP
#define TRES_SIMULATOR_HPP

// Deterministic quasi-static hexapod model.
//
// Each tick: commanded angles -> foot positions in the body frame -> support
// set and ground plane -> planar body motion from the stance feet, which are
// assumed not to slip between consecutive ticks.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "controller.hpp"
#include "morphology.hpp"
#include "probe_action.hpp"

namespace tres {

/// How the ground plane under the feet is found.
///
/// `level`: the body stays level; support feet are those within contact_eps of
/// the lowest foot, and the robot falls unless they hold the mass center.
/// `tipping`: the body settles on the least-tilted facet of the feet's lower
/// hull that holds the mass center; it falls only when no such facet exists,
/// the tilt exceeds max_tilt, or the body itself touches the ground.
enum class SupportModel { level, tipping };

struct SimConfig {
    GaitConfig gait;
    double dt = 0.03;
    int ticks = 100;
    double contact_eps = 0.005;
    double hull_margin = 0.0;
    SupportModel support = SupportModel::tipping;
    double max_tilt = 0.5; // rad
};

struct Pose2 {
    double x = 0;
    double y = 0;
    double heading = 0;
};

using ContactRow = std::array<bool, kLegs>;
using Descriptor = std::vector<std::uint8_t>;

struct Trajectory {
    double dt = 0.03;
    int ticks = 0; // E; every per-tick vector has E + 1 entries
    std::vector<Pose2> poses;
    std::vector<ContactRow> contacts;
    std::vector<double> roll;
    std::vector<double> pitch;
    std::vector<JointTargets> joints;
    bool fallen = false;
    int fall_tick = -1;
};

struct Orientation {
    double roll = 0;
    double pitch = 0;
    bool stable = true;
};

namespace detail {

using Vec3 = Eigen::Vector3d;

struct Feet {
    std::array<Vec3, kLegs> pos{};
    std::array<bool, kLegs> valid{};    // foot exists and can bear load
    std::array<bool, kLegs> anchored{}; // foot resists horizontal sliding
};

inline Vec3 foot_position(const LegGeometry& leg, double dof1, double dof2, double dof3)
{
    // DOF 2 lifts the femur; DOF 3 rotates the tibia back by the same sense, so
    // equal commands keep the tibia vertical.
    const double tibia = leg.effective_tibia();
    const double reach = leg.coxa + leg.femur * std::cos(dof2) + tibia * std::sin(dof2 - dof3);
    const double z = leg.femur * std::sin(dof2) - tibia * std::cos(dof2 - dof3);
    const double dir = leg.attach_yaw + dof1;
    return {leg.attach_x + reach * std::cos(dir), leg.attach_y + reach * std::sin(dir), z};
}

inline Feet compute_feet(const Morphology& m, const JointTargets& q)
{
    Feet f;
    for (int i = 0; i < kLegs; ++i) {
        const auto& leg = m.legs[i];
        // unpowered servos are backdrivable: a limp elevation joint folds
        // under load, a limp DOF 1 lets the foot slide
        f.valid[i] = leg.has_foot() && leg.powered[1] && leg.powered[2];
        f.anchored[i] = f.valid[i] && leg.powered[0];
        if (leg.has_foot())
            f.pos[i] = foot_position(m.legs[i], q[i * 3], q[i * 3 + 1], q[i * 3 + 2]);
    }
    return f;
}

struct Point2 {
    double x, y;
};

inline double cross(const Point2& o, const Point2& a, const Point2& b)
{
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

/// Small fixed-capacity point set; at most one point per leg.
struct PointSet {
    std::array<Point2, kLegs> pts{};
    int size = 0;
    void push(const Point2& p) { pts[size++] = p; }
};

/// Counter-clockwise convex hull (monotone chain), collinear points dropped.
inline PointSet convex_hull(PointSet in)
{
    std::sort(in.pts.begin(), in.pts.begin() + in.size,
              [](const Point2& a, const Point2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    if (in.size < 3)
        return in;
    std::array<Point2, 2 * kLegs> hull{};
    int k = 0;
    for (int i = 0; i < in.size; ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], in.pts[i]) <= 0)
            --k;
        hull[k++] = in.pts[i];
    }
    for (int i = in.size - 2, t = k + 1; i >= 0; --i) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], in.pts[i]) <= 0)
            --k;
        hull[k++] = in.pts[i];
    }
    PointSet out;
    for (int i = 0; i < k - 1; ++i)
        out.push(hull[i]);
    return out;
}

/// True when p is inside the polygon by at least `margin` (margin 0 accepts the boundary).
inline bool inside_hull(const PointSet& support, const Point2& p, double margin)
{
    const PointSet hull = convex_hull(support);
    if (hull.size < 3)
        return false;
    for (int i = 0; i < hull.size; ++i) {
        const auto& a = hull.pts[i];
        const auto& b = hull.pts[(i + 1) % hull.size];
        const double len = std::hypot(b.x - a.x, b.y - a.y);
        if (cross(a, b, p) / len < margin - 1e-12)
            return false;
    }
    return true;
}

struct Support {
    bool stable = false;
    ContactRow contacts{};
    Eigen::Matrix3d to_ground = Eigen::Matrix3d::Identity(); // body frame -> ground-aligned frame
    double roll = 0;
    double pitch = 0;
};

/// Least-squares plane z = a x + b y + c through the contact feet.
inline void fit_plane(const Feet& f, const ContactRow& contacts, double& roll, double& pitch)
{
    Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
    Eigen::Vector3d atb = Eigen::Vector3d::Zero();
    int n = 0;
    for (int i = 0; i < kLegs; ++i) {
        if (!contacts[i])
            continue;
        const Eigen::Vector3d row(f.pos[i].x(), f.pos[i].y(), 1.0);
        ata += row * row.transpose();
        atb += row * f.pos[i].z();
        ++n;
    }
    if (n < 3) {
        roll = pitch = 0;
        return;
    }
    const Eigen::Vector3d coef = ata.ldlt().solve(atb);
    pitch = std::atan(coef.x());
    roll = -std::atan(coef.y());
}

inline Eigen::Matrix3d rotation_to_up(const Vec3& normal)
{
    return Eigen::Quaterniond::FromTwoVectors(normal, Vec3::UnitZ()).toRotationMatrix();
}

inline Support level_support(const Morphology& m, const Feet& f, const SimConfig& cfg)
{
    Support s;
    double zmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kLegs; ++i)
        if (f.valid[i])
            zmin = std::min(zmin, f.pos[i].z());
    PointSet pts;
    for (int i = 0; i < kLegs; ++i) {
        s.contacts[i] = f.valid[i] && f.pos[i].z() <= zmin + cfg.contact_eps;
        if (s.contacts[i])
            pts.push({f.pos[i].x(), f.pos[i].y()});
    }
    s.stable = pts.size >= 3 && inside_hull(pts, {m.com_x, m.com_y}, cfg.hull_margin);
    fit_plane(f, s.contacts, s.roll, s.pitch);
    return s;
}

/// Enumerates planes through three feet with every other foot on or above
/// them. `require_stable` restricts to planes whose contact polygon holds the
/// mass center; otherwise the least-tilted such plane is returned.
inline std::optional<Support> best_facet(const Morphology& m, const Feet& f, const SimConfig& cfg, bool require_stable)
{
    std::array<int, kLegs> idx{};
    int n = 0;
    for (int i = 0; i < kLegs; ++i)
        if (f.valid[i])
            idx[n++] = i;
    std::optional<Support> best;
    double best_nz = -1;
    const Vec3 com(m.com_x, m.com_y, m.com_z);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = b + 1; c < n; ++c) {
                const Vec3& pa = f.pos[idx[a]];
                Vec3 normal = (f.pos[idx[b]] - pa).cross(f.pos[idx[c]] - pa);
                const double norm = normal.norm();
                if (norm < 1e-12)
                    continue;
                normal /= norm;
                if (normal.z() < 0)
                    normal = -normal;
                if (normal.z() <= best_nz + 1e-15 || normal.z() < 1e-9)
                    continue;
                bool below = false;
                ContactRow contacts{};
                for (int q = 0; q < n; ++q) {
                    const double d = normal.dot(f.pos[idx[q]] - pa);
                    if (d < -1e-9) {
                        below = true;
                        break;
                    }
                    contacts[idx[q]] = d <= cfg.contact_eps;
                }
                if (below)
                    continue;
                const Eigen::Matrix3d rot = rotation_to_up(normal);
                if (require_stable) {
                    PointSet pts;
                    for (int q = 0; q < kLegs; ++q)
                        if (contacts[q]) {
                            const Vec3 g = rot * f.pos[q];
                            pts.push({g.x(), g.y()});
                        }
                    const Vec3 gc = rot * com;
                    if (!inside_hull(pts, {gc.x(), gc.y()}, cfg.hull_margin))
                        continue;
                }
                Support s;
                s.stable = true;
                s.contacts = contacts;
                s.to_ground = rot;
                best = s;
                best_nz = normal.z();
            }
    if (best)
        fit_plane(f, best->contacts, best->roll, best->pitch);
    return best;
}

inline Support tipping_support(const Morphology& m, const Feet& f, const SimConfig& cfg)
{
    auto facet = best_facet(m, f, cfg, true);
    if (!facet) {
        Support s;
        s.stable = false;
        return s;
    }
    const Eigen::Matrix3d& rot = facet->to_ground;
    const Vec3 up = rot.transpose() * Vec3::UnitZ();
    int anchor = 0;
    while (!facet->contacts[anchor])
        ++anchor;
    for (const auto& leg : m.legs) {
        // the body hull must stay above the ground plane
        const Vec3 corner(leg.attach_x, leg.attach_y, 0.0);
        if (up.dot(corner - f.pos[anchor]) < 0)
            facet->stable = false;
    }
    if (std::acos(std::clamp(up.z(), -1.0, 1.0)) > cfg.max_tilt)
        facet->stable = false;
    return *facet;
}

inline Support solve_support(const Morphology& m, const Feet& f, const SimConfig& cfg)
{
    return cfg.support == SupportModel::level ? level_support(m, f, cfg) : tipping_support(m, f, cfg);
}

/// Rigid planar motion q = R(angle) p + t best mapping p onto q in least squares.
struct Rigid2 {
    double angle = 0;
    double tx = 0;
    double ty = 0;
};

inline Rigid2 fit_rigid2(const PointSet& ps, const PointSet& qs)
{
    Rigid2 out;
    const std::size_t n = ps.size;
    const auto& p = ps.pts;
    const auto& q = qs.pts;
    if (n == 0)
        return out;
    double pcx = 0, pcy = 0, qcx = 0, qcy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        pcx += p[i].x;
        pcy += p[i].y;
        qcx += q[i].x;
        qcy += q[i].y;
    }
    pcx /= n;
    pcy /= n;
    qcx /= n;
    qcy /= n;
    if (n >= 2) {
        double sin_sum = 0, cos_sum = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double px = p[i].x - pcx, py = p[i].y - pcy;
            const double qx = q[i].x - qcx, qy = q[i].y - qcy;
            sin_sum += px * qy - py * qx;
            cos_sum += px * qx + py * qy;
        }
        if (std::abs(sin_sum) + std::abs(cos_sum) > 1e-18)
            out.angle = std::atan2(sin_sum, cos_sum);
    }
    const double c = std::cos(out.angle), s = std::sin(out.angle);
    out.tx = qcx - (c * pcx - s * pcy);
    out.ty = qcy - (s * pcx + c * pcy);
    return out;
}

/// Body pose after the feet moved by `motion` in the body frame while staying
/// fixed in the world: world <- world o motion^-1.
inline Pose2 advance(const Pose2& w, const Rigid2& motion)
{
    const double c = std::cos(motion.angle), s = std::sin(motion.angle);
    const double ux = -(c * motion.tx + s * motion.ty);
    const double uy = -(-s * motion.tx + c * motion.ty);
    const double ch = std::cos(w.heading), sh = std::sin(w.heading);
    return {w.x + ch * ux - sh * uy, w.y + sh * ux + ch * uy, w.heading - motion.angle};
}

inline PointSet ground_points(const Feet& f, const ContactRow& which, const Eigen::Matrix3d& rot)
{
    PointSet out;
    for (int i = 0; i < kLegs; ++i)
        if (which[i] && f.anchored[i]) {
            const Vec3 g = rot * f.pos[i];
            out.push({g.x(), g.y()});
        }
    return out;
}

} // namespace detail

/// Applied joint angles: commanded, except unpowered DOFs hold their t = 0 command.
inline JointTargets applied_angles(const Morphology& m, const JointTargets& commanded, const JointTargets& frozen)
{
    JointTargets q = commanded;
    for (int leg = 0; leg < kLegs; ++leg)
        for (int d = 0; d < kDofsPerLeg; ++d)
            if (!m.legs[leg].powered[d])
                q[leg * 3 + d] = frozen[leg * 3 + d];
    return q;
}

inline Trajectory simulate(const Morphology& m, const Controller& c, const SimConfig& cfg = {}, const Pose2& start = {})
{
    if (cfg.ticks < 1)
        throw std::invalid_argument("simulation needs at least one tick");
    Trajectory tr;
    tr.dt = cfg.dt;
    tr.ticks = cfg.ticks;
    const std::size_t samples = static_cast<std::size_t>(cfg.ticks) + 1;
    tr.poses.reserve(samples);
    tr.contacts.reserve(samples);
    tr.roll.reserve(samples);
    tr.pitch.reserve(samples);
    tr.joints.reserve(samples);

    const JointTargets frozen = joint_targets(c, 0.0, cfg.gait);
    Pose2 pose = start;
    detail::Feet prev_feet;
    detail::Support prev_support;

    for (int k = 0; k <= cfg.ticks; ++k) {
        const JointTargets q = applied_angles(m, joint_targets(c, k * cfg.dt, cfg.gait), frozen);
        const detail::Feet feet = detail::compute_feet(m, q);
        const detail::Support support = detail::solve_support(m, feet, cfg);
        if (!support.stable) {
            tr.fallen = true;
            tr.fall_tick = k;
            for (; k <= cfg.ticks; ++k) {
                tr.poses.push_back(pose);
                tr.contacts.push_back(ContactRow{});
                tr.roll.push_back(tr.roll.empty() ? 0.0 : tr.roll.back());
                tr.pitch.push_back(tr.pitch.empty() ? 0.0 : tr.pitch.back());
                tr.joints.push_back(q);
            }
            break;
        }
        if (k > 0) {
            const auto before = detail::ground_points(prev_feet, prev_support.contacts, prev_support.to_ground);
            const auto after = detail::ground_points(feet, prev_support.contacts, support.to_ground);
            pose = detail::advance(pose, detail::fit_rigid2(before, after));
        }
        tr.poses.push_back(pose);
        tr.contacts.push_back(support.contacts);
        tr.roll.push_back(support.roll);
        tr.pitch.push_back(support.pitch);
        tr.joints.push_back(q);
        prev_feet = feet;
        prev_support = support;
    }
    return tr;
}

/// x(E) - x(0); a fallen trial scores 0.
inline double forward_displacement(const Trajectory& tr)
{
    if (tr.fallen || tr.poses.empty())
        return 0.0;
    return tr.poses.back().x - tr.poses.front().x;
}

/// Leg-major, tick-minor binary contact matrix of length 6 (E + 1).
inline Descriptor contact_descriptor(const Trajectory& tr)
{
    const std::size_t samples = tr.contacts.size();
    Descriptor d(kLegs * samples, 0);
    for (int leg = 0; leg < kLegs; ++leg)
        for (std::size_t k = 0; k < samples; ++k)
            d[leg * samples + k] = tr.contacts[k][leg] ? 1 : 0;
    return d;
}

/// Body orientation with every leg at neutral except the acting one.
inline Orientation orientation_outcome(const Morphology& m, const BongardAction& a, const ActionTable& table = {},
                                       const SimConfig& cfg = {})
{
    if (a.leg < 0 || a.leg >= kLegs || a.position < 0 || a.position > 1 || a.variant < 0 || a.variant > 2)
        throw std::invalid_argument("invalid probe action");
    JointTargets commanded{};
    commanded[a.leg * 3 + 0] = table.dof1(a);
    commanded[a.leg * 3 + 1] = table.variants[a.variant].femur;
    commanded[a.leg * 3 + 2] = table.variants[a.variant].tibia;
    const JointTargets q = applied_angles(m, commanded, JointTargets{});
    const auto feet = detail::compute_feet(m, q);

    Orientation out;
    if (cfg.support == SupportModel::level) {
        const auto s = detail::level_support(m, feet, cfg);
        return {s.roll, s.pitch, s.stable};
    }
    if (auto s = detail::best_facet(m, feet, cfg, true)) {
        out = {s->roll, s->pitch, true};
    } else if (auto any = detail::best_facet(m, feet, cfg, false)) {
        out = {any->roll, any->pitch, false};
    } else {
        out.stable = false;
    }
    return out;
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& tr)
{
    os << "tick,x,y,heading,roll,pitch,c0,c1,c2,c3,c4,c5,fallen\n";
    for (std::size_t k = 0; k < tr.poses.size(); ++k) {
        const auto& p = tr.poses[k];
        os << k << ',' << p.x << ',' << p.y << ',' << p.heading << ',' << tr.roll[k] << ',' << tr.pitch[k];
        for (int leg = 0; leg < kLegs; ++leg)
            os << ',' << (tr.contacts[k][leg] ? 1 : 0);
        const bool down = tr.fallen && static_cast<int>(k) >= tr.fall_tick;
        os << ',' << (down ? 1 : 0) << '\n';
    }
}

} // namespace tres

#endif // TRES_SIMULATOR_HPP
