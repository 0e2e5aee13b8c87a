#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <span>
#include <vector>

#include "fastron/dataset.hpp"
#include "fastron/geometry.hpp"
#include "fastron/types.hpp"

namespace fastron {

// Workspace snapshot: convex polygon obstacles inside an axis-aligned bound.
// Obstacles are clipped to the bounds on construction; obstacles that clip
// away to nothing (or to a degenerate sliver) are dropped.
class Workspace {
public:
    Workspace(std::vector<ConvexPolygon> obstacles, Aabb bounds);

    std::span<const ConvexPolygon> obstacles() const { return obstacles_; }
    const Aabb& bounds() const { return bounds_; }

private:
    std::vector<ConvexPolygon> obstacles_;
    Aabb bounds_;
};

// Query count and accumulated wall time of the KCD oracle. Counters are
// atomic so concurrent kcd_check calls may share one instance.
struct KcdStats {
    std::atomic<std::uint64_t> query_count{0};
    std::atomic<std::uint64_t> total_time_ns{0};

    void reset() {
        query_count.store(0, std::memory_order_relaxed);
        total_time_ns.store(0, std::memory_order_relaxed);
    }
    std::uint64_t queries() const { return query_count.load(std::memory_order_relaxed); }
    std::chrono::nanoseconds total_time() const {
        return std::chrono::nanoseconds(total_time_ns.load(std::memory_order_relaxed));
    }
};

// Kinematic collision detection: FK then GJK of every link against every
// obstacle. Touching contact counts as collision. Throws
// std::invalid_argument on a dof mismatch.
Label kcd_check(const ArmModel& arm, const Configuration& q, const Workspace& w,
                KcdStats* stats = nullptr);

// Re-labels the dataset at `indices` with fresh KCD results and returns how
// many labels flipped. Requires exclusive access to the dataset.
std::size_t relabel(const ArmModel& arm, const Workspace& w, Dataset& d,
                    std::span<const std::size_t> indices, KcdStats* stats = nullptr);

}  // namespace fastron
