#include "fastron/kcd.hpp"

#include <stdexcept>
#include <utility>

namespace fastron {

Workspace::Workspace(std::vector<ConvexPolygon> obstacles, Aabb bounds) : bounds_(bounds) {
    obstacles_.reserve(obstacles.size());
    for (ConvexPolygon& poly : obstacles) {
        std::vector<Vec2> clipped = clip_to_box(poly, bounds_);
        if (clipped.size() < 3) continue;
        try {
            obstacles_.emplace_back(std::move(clipped));
        } catch (const std::invalid_argument&) {
            // Degenerate sliver after clipping; drop it.
        }
    }
}

Label kcd_check(const ArmModel& arm, const Configuration& q, const Workspace& w,
                KcdStats* stats) {
    if (q.size() != arm.dof()) throw std::invalid_argument("kcd_check: dof mismatch");

    const auto start = stats ? std::chrono::steady_clock::now()
                             : std::chrono::steady_clock::time_point{};

    bool hit = false;
    Vec2 pos = arm.base;
    double angle = 0.0;
    const double half_t = 0.5 * arm.link_thickness;
    for (std::size_t k = 0; k < arm.dof() && !hit; ++k) {
        angle += q[k];
        const double len = arm.link_lengths[k];
        const Vec2 dir{std::cos(angle), std::sin(angle)};
        const Vec2 end = pos + dir * len;
        const LinkShape link{(pos + end) * 0.5, Vec2{0.5 * len, half_t}, angle};
        for (const ConvexPolygon& obstacle : w.obstacles()) {
            if (gjk_intersects(link, obstacle)) {
                hit = true;
                break;
            }
        }
        pos = end;
    }

    if (stats) {
        const auto elapsed = std::chrono::steady_clock::now() - start;
        stats->query_count.fetch_add(1, std::memory_order_relaxed);
        stats->total_time_ns.fetch_add(
            static_cast<std::uint64_t>(
                std::chrono::duration_cast<std::chrono::nanoseconds>(elapsed).count()),
            std::memory_order_relaxed);
    }
    return hit ? Label::kCollision : Label::kFree;
}

std::size_t relabel(const ArmModel& arm, const Workspace& w, Dataset& d,
                    std::span<const std::size_t> indices, KcdStats* stats) {
    for (std::size_t i : indices)
        if (i >= d.size()) throw std::invalid_argument("relabel: index out of range");

    std::size_t flips = 0;
    Configuration q(d.dof());
    for (std::size_t i : indices) {
        const auto p = d.point(i);
        q.assign(p.begin(), p.end());
        const Label fresh = kcd_check(arm, q, w, stats);
        if (d.set_label(i, fresh)) ++flips;
    }
    return flips;
}

}  // namespace fastron
