#pragma once

#include <chrono>
#include <cstdint>
#include <ostream>
#include <vector>

#include "fastron/dataset.hpp"
#include "fastron/rng.hpp"
#include "fastron/types.hpp"

namespace fastron {

// Pluggable collision checker for the planner; implementations wrap either
// the KCD oracle or the learned proxy model.
class CollisionChecker {
public:
    virtual ~CollisionChecker() = default;
    virtual Label classify(const Configuration& q) = 0;
};

struct RrtParams {
    double step_size = 0.2;          // rad
    double goal_bias = 0.05;
    std::size_t max_iterations = 10000;
    double edge_resolution = 0.05;   // rad, <= step_size
    double goal_tolerance = 0.1;     // rad
    std::uint64_t seed = 0;
    JointBounds bounds;              // sampling region; empty = [-pi, pi)^dof
};

struct PlanResult {
    std::vector<Configuration> path;  // empty on failure
    std::size_t iterations = 0;
    std::chrono::nanoseconds checker_time{0};  // collision-checking stage only
    std::size_t checker_queries = 0;
};

// True iff every interpolated configuration between a and b, at spacing at
// most `resolution` and including both endpoints, is classified free.
bool edge_free(CollisionChecker& checker, const Configuration& a, const Configuration& b,
               double resolution);

// Standard RRT in joint space. The first sample is always the goal (direct
// connection attempt), after which the goal is drawn with probability
// goal_bias. Throws std::invalid_argument when start or goal is classified
// in-collision by the checker. Deterministic given the seed.
PlanResult rrt_plan(const Configuration& start, const Configuration& goal,
                    CollisionChecker& checker, const RrtParams& params);

// One configuration per row, angles comma-separated.
void write_path_csv(const std::vector<Configuration>& path, std::ostream& out);

}  // namespace fastron
