#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fastron/active_learning.hpp"
#include "fastron/checkers.hpp"
#include "fastron/dataset.hpp"
#include "fastron/geometry.hpp"
#include "fastron/kcd.hpp"
#include "fastron/model.hpp"
#include "fastron/planner.hpp"

namespace fastron::bench {

enum class MotionKind { kStatic, kLinearBounce };
enum class SamplerKind { kAuto, kGrid, kUniformRandom };

// Everything a benchmark run needs, parsed from a flat key = value config
// file. Negative values mean "derive the default from the arm geometry".
struct ScenarioSpec {
    // arm
    std::size_t dof = 2;
    std::vector<double> link_lengths;  // empty: total_reach/dof per link
    double total_reach = 2.0;
    double link_thickness = -1.0;  // default 0.05 * total reach

    // workspace + obstacles
    double workspace_halfwidth = -1.0;  // default 1.1 * reach
    std::size_t obstacle_count = 1;
    double obstacle_radius_min = 0.18;
    double obstacle_radius_max = 0.40;
    int obstacle_vertices_min = 6;
    int obstacle_vertices_max = 16;
    double obstacle_center_min = 0.45;  // annulus around the arm base
    double obstacle_center_max = 1.15;
    double base_clearance = 0.2;
    double min_cobs_fraction = 0.02;  // re-place obstacles until this share of
                                      // the dataset is in collision
    std::vector<ConvexPolygon> fixed_obstacles;  // overrides random generation

    // obstacle motion (dynamic bench)
    MotionKind motion = MotionKind::kLinearBounce;
    double obstacle_speed = -1.0;  // m per cycle; default 0.02 * workspace width
    std::size_t cycles = 100;

    // dataset
    SamplerKind sampler = SamplerKind::kAuto;
    std::size_t n = 625;
    double gamma = 10.0;
    double joint_halfwidth = -1.0;  // per-joint range [-h, h); default pi (full revolute range)

    // model
    double collision_bias = 100.0;
    std::size_t max_updates = 5000;

    // active learning
    double allowance_fraction = 0.3;
    long long allowance = -1;  // explicit override of the fraction
    double exploit_proportion = 0.8;
    std::size_t neighbor_rounds = 4;

    // evaluation / bench protocol
    std::size_t eval_set_size = 10000;
    std::size_t repeats = 5;   // scenes per configuration
    std::size_t replans = 5;   // RRT replans per scene
    bool timing = true;        // off: all duration columns emit 0 (reproducible CSV)
    std::vector<std::size_t> n_sweep;          // dynamic bench N grid
    std::vector<double> allowance_sweep;       // dynamic bench A/N grid

    // RRT
    double min_plan_distance = 1.0;  // joint-space start-goal separation floor
    double rrt_step = 0.2;
    double rrt_goal_bias = 0.05;
    double rrt_edge_resolution = 0.02;
    double rrt_goal_tolerance = 0.1;
    std::size_t rrt_max_iterations = 10000;

    std::uint64_t seed = 1;

    ArmModel make_arm() const;
    Aabb make_bounds() const;
    double resolved_speed() const;
    JointBounds joint_bounds() const;
    std::size_t resolved_allowance(std::size_t dataset_size) const;
    SamplerSpec::Kind resolved_sampler(std::size_t dataset_size) const;
};

ScenarioSpec parse_scenario_text(const std::string& text);
ScenarioSpec parse_scenario_file(const std::string& path);

// A generated scene: the arm, bounds, obstacle polygons and their per-cycle
// velocities (linear motion with elastic bounce at the workspace bounds).
struct Scene {
    ArmModel arm;
    Aabb bounds;
    std::vector<ConvexPolygon> obstacles;
    std::vector<Vec2> velocities;

    Workspace workspace() const { return Workspace(obstacles, bounds); }
};

Scene make_scene(const ScenarioSpec& spec, std::size_t obstacle_count, Rng& rng);

// make_scene plus a full KCD labeling sweep of the dataset, re-placing the
// obstacles until at least min_cobs_fraction of the dataset is in collision
// (scenes the arm cannot touch measure nothing).
Scene make_labeled_scene(const ScenarioSpec& spec, std::size_t obstacle_count, Rng& rng,
                         Dataset& d);

void advance_obstacles(Scene& scene);

// Classification quality and timing of the proxy against the oracle over M
// fresh uniform configurations.
struct Metrics {
    std::optional<double> recall;  // empty when the sample has no true positives
    double fpr = 0.0;
    std::size_t tp = 0, fn = 0, fp = 0, tn = 0;
    std::size_t samples = 0;
    std::chrono::nanoseconds kcd_total{0};
    std::chrono::nanoseconds fcd_total{0};
    std::chrono::nanoseconds update_total{0};  // filled by the bench drivers

    double ratio() const {
        return fcd_total.count() == 0 ? 0.0
                                      : static_cast<double>(kcd_total.count()) /
                                            static_cast<double>(fcd_total.count());
    }
};

Metrics make_metrics(std::size_t tp, std::size_t fn, std::size_t fp, std::size_t tn);

Metrics evaluate(const FastronModel& model, const Dataset& d, const ArmModel& arm,
                 const Workspace& w, std::size_t samples, std::uint64_t seed,
                 bool timing = true);

// --- static bench (obstacle-count sweep) ---

struct StaticRow {
    std::size_t obstacle_count = 0;
    std::size_t scenes = 0;
    Metrics metrics;  // accumulated over scenes
    double support_mean = 0.0;
};

std::vector<StaticRow> run_static_bench(const ScenarioSpec& spec);
void write_static_csv(const std::vector<StaticRow>& rows, std::ostream& out);

// --- dynamic bench (moving obstacle, N x A sweep) ---

struct DynamicCycleRow {
    std::size_t n = 0;
    std::size_t allowance = 0;
    std::size_t cycle = 0;
    CycleStats stats;
    std::size_t kcd_queries = 0;  // KCD budget actually spent this cycle
    std::size_t support_count = 0;
    Metrics metrics;
};

struct DynamicAggregate {
    std::size_t n = 0;
    std::size_t allowance = 0;
    std::size_t cycles = 0;
    std::optional<double> recall_mean;
    double fpr_mean = 0.0;
    std::chrono::nanoseconds update_time_mean{0};  // select + relabel + model update
    std::size_t max_cycle_queries = 0;
};

struct DynamicResult {
    std::vector<DynamicCycleRow> rows;
    std::vector<DynamicAggregate> aggregates;
};

DynamicResult run_dynamic_bench(const ScenarioSpec& spec);
void write_dynamic_csv(const std::vector<DynamicCycleRow>& rows, std::ostream& out);

// --- RRT bench (FCD-RRT vs KCD-RRT collision-stage time) ---

struct RrtSceneRow {
    std::size_t scene = 0;
    bool skipped = false;        // no feasible blocked placement / start-goal pair
    std::size_t replans_done = 0;
    std::size_t fcd_success = 0;
    std::size_t kcd_success = 0;
    std::size_t dropped_blocked = 0;   // start/goal not free under both checkers
    std::size_t dropped_unpaired = 0;  // one planner failed; pair not comparable
    std::size_t fcd_checks = 0;
    std::size_t kcd_checks = 0;
    std::chrono::nanoseconds fcd_stage{0};  // includes per-replan update-cycle cost
    std::chrono::nanoseconds kcd_stage{0};
    double fcd_free_fraction = 1.0;  // fine-resolution KCD revalidation of returned paths
    double kcd_free_fraction = 1.0;
    std::size_t fcd_free_samples = 0;  // pooled revalidation tallies
    std::size_t fcd_samples = 0;
    std::size_t kcd_free_samples = 0;
    std::size_t kcd_samples = 0;
    std::vector<Configuration> last_fcd_path;
    std::vector<Configuration> last_kcd_path;
};

std::vector<RrtSceneRow> run_rrt_bench(const ScenarioSpec& spec);
void write_rrt_csv(const std::vector<RrtSceneRow>& rows, std::ostream& out);

}  // namespace fastron::bench
