#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fastron/bench.hpp"

namespace fastron::bench {

namespace {

using clock = std::chrono::steady_clock;

std::vector<std::size_t> all_indices(std::size_t n) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    return idx;
}

// One random obstacle in the annulus around the arm base, fully inside the
// bounds and clear of the base point.
ConvexPolygon place_obstacle(const ScenarioSpec& spec, const Aabb& bounds, Vec2 base, Rng& rng) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        const double angle = uniform_real(rng, 0.0, 2.0 * M_PI);
        const double dist = uniform_real(rng, spec.obstacle_center_min, spec.obstacle_center_max);
        const Vec2 center = base + Vec2{std::cos(angle), std::sin(angle)} * dist;
        ConvexPolygon poly = random_convex_polygon(
            rng, center, {spec.obstacle_radius_min, spec.obstacle_radius_max},
            {spec.obstacle_vertices_min, spec.obstacle_vertices_max});
        const Aabb box = poly.bounding_box();
        if (box.lo.x < bounds.lo.x || box.lo.y < bounds.lo.y || box.hi.x > bounds.hi.x ||
            box.hi.y > bounds.hi.y)
            continue;
        if (distance_to_polygon(base, poly) < spec.base_clearance) continue;
        return poly;
    }
    throw std::runtime_error("make_scene: could not place an obstacle inside the bounds");
}

Dataset build_scenario_dataset(const ScenarioSpec& spec, std::size_t n) {
    SamplerSpec sampler;
    sampler.kind = spec.resolved_sampler(n);
    sampler.n = n;
    sampler.dof = spec.dof;
    sampler.seed = derive_seed(spec.seed, 101);
    return Dataset::build(sampler, spec.joint_bounds(), spec.gamma);
}

ActiveLearningParams learner_params(const ScenarioSpec& spec, std::size_t dataset_size) {
    ActiveLearningParams params;
    params.allowance = spec.resolved_allowance(dataset_size);
    params.exploit_proportion = spec.exploit_proportion;
    params.neighbor_rounds = spec.neighbor_rounds;
    params.seed = derive_seed(spec.seed, 202);
    return params;
}

}  // namespace

// Generates a scene and fully KCD-labels the dataset against it, re-placing
// the obstacles until the arm actually interacts with them: scenes whose
// obstacles sit outside the reachable sweep have almost no C_obs points and
// measure nothing. Fixed obstacle lists are taken as-is.
Scene make_labeled_scene(const ScenarioSpec& spec, std::size_t obstacle_count, Rng& rng,
                         Dataset& d) {
    const auto indices = all_indices(d.size());
    const auto floor_count =
        static_cast<std::size_t>(spec.min_cobs_fraction * static_cast<double>(d.size()));
    for (int attempt = 0; attempt < 50; ++attempt) {
        Scene scene = make_scene(spec, obstacle_count, rng);
        relabel(scene.arm, scene.workspace(), d, indices);
        std::size_t in_collision = 0;
        for (std::size_t i = 0; i < d.size(); ++i)
            if (d.label(i) == Label::kCollision) ++in_collision;
        if (in_collision >= floor_count || !spec.fixed_obstacles.empty()) return scene;
    }
    throw std::runtime_error("make_labeled_scene: no placement reaches the C_obs floor");
}

Scene make_scene(const ScenarioSpec& spec, std::size_t obstacle_count, Rng& rng) {
    Scene scene{spec.make_arm(), spec.make_bounds(), {}, {}};
    if (!spec.fixed_obstacles.empty()) {
        scene.obstacles = spec.fixed_obstacles;
    } else {
        for (std::size_t i = 0; i < obstacle_count; ++i)
            scene.obstacles.push_back(place_obstacle(spec, scene.bounds, scene.arm.base, rng));
    }
    const double speed = spec.motion == MotionKind::kStatic ? 0.0 : spec.resolved_speed();
    for (std::size_t i = 0; i < scene.obstacles.size(); ++i) {
        const double heading = uniform_real(rng, 0.0, 2.0 * M_PI);
        scene.velocities.push_back(Vec2{std::cos(heading), std::sin(heading)} * speed);
    }
    return scene;
}

void advance_obstacles(Scene& scene) {
    for (std::size_t i = 0; i < scene.obstacles.size(); ++i) {
        ConvexPolygon moved = scene.obstacles[i].translated(scene.velocities[i]);
        // Elastic bounce keeps the polygon fully inside the bounds, so the
        // workspace clip never reshapes it.
        Aabb box = moved.bounding_box();
        Vec2 correction{0.0, 0.0};
        if (box.hi.x > scene.bounds.hi.x) {
            correction.x = -2.0 * (box.hi.x - scene.bounds.hi.x);
            scene.velocities[i].x = -scene.velocities[i].x;
        } else if (box.lo.x < scene.bounds.lo.x) {
            correction.x = 2.0 * (scene.bounds.lo.x - box.lo.x);
            scene.velocities[i].x = -scene.velocities[i].x;
        }
        if (box.hi.y > scene.bounds.hi.y) {
            correction.y = -2.0 * (box.hi.y - scene.bounds.hi.y);
            scene.velocities[i].y = -scene.velocities[i].y;
        } else if (box.lo.y < scene.bounds.lo.y) {
            correction.y = 2.0 * (scene.bounds.lo.y - box.lo.y);
            scene.velocities[i].y = -scene.velocities[i].y;
        }
        if (correction.x != 0.0 || correction.y != 0.0) moved = moved.translated(correction);
        scene.obstacles[i] = std::move(moved);
    }
}

Metrics make_metrics(std::size_t tp, std::size_t fn, std::size_t fp, std::size_t tn) {
    Metrics m;
    m.tp = tp;
    m.fn = fn;
    m.fp = fp;
    m.tn = tn;
    m.samples = tp + fn + fp + tn;
    if (tp + fn > 0)
        m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    if (fp + tn > 0)
        m.fpr = static_cast<double>(fp) / static_cast<double>(fp + tn);
    return m;
}

Metrics evaluate(const FastronModel& model, const Dataset& d, const ArmModel& arm,
                 const Workspace& w, std::size_t samples, std::uint64_t seed, bool timing) {
    Rng rng(seed);
    const std::size_t dof = arm.dof();
    const JointBounds& bounds = d.bounds();

    std::vector<double> coords(samples * dof);
    for (std::size_t i = 0; i < samples; ++i)
        for (std::size_t k = 0; k < dof; ++k)
            coords[i * dof + k] = uniform_real(rng, bounds.lo[k], bounds.hi[k]);

    std::vector<Label> truth(samples, Label::kFree);
    Configuration q(dof);

    const auto t0 = clock::now();
    for (std::size_t i = 0; i < samples; ++i) {
        q.assign(coords.begin() + static_cast<std::ptrdiff_t>(i * dof),
                 coords.begin() + static_cast<std::ptrdiff_t>((i + 1) * dof));
        truth[i] = kcd_check(arm, q, w);
    }
    const auto t1 = clock::now();

    std::vector<Label> predicted(samples, Label::kFree);
    const auto t2 = clock::now();
    for (std::size_t i = 0; i < samples; ++i) {
        predicted[i] =
            classify(model, d, std::span<const double>(coords.data() + i * dof, dof));
    }
    const auto t3 = clock::now();

    std::size_t tp = 0, fn = 0, fp = 0, tn = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        if (truth[i] == Label::kCollision)
            (predicted[i] == Label::kCollision ? tp : fn) += 1;
        else
            (predicted[i] == Label::kCollision ? fp : tn) += 1;
    }

    Metrics m = make_metrics(tp, fn, fp, tn);
    if (timing) {
        m.kcd_total = std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0);
        m.fcd_total = std::chrono::duration_cast<std::chrono::nanoseconds>(t3 - t2);
    }
    return m;
}

std::vector<StaticRow> run_static_bench(const ScenarioSpec& spec) {
    const Dataset base_dataset = build_scenario_dataset(spec, spec.n);
    std::vector<StaticRow> rows;

    for (std::size_t count = 1; count <= 5; ++count) {
        StaticRow row;
        row.obstacle_count = count;

        Dataset d = base_dataset;  // fresh labels per obstacle count
        double recall_sum = 0.0;
        std::size_t recall_scenes = 0;
        double fpr_sum = 0.0;
        double support_sum = 0.0;

        for (std::size_t rep = 0; rep < spec.repeats; ++rep) {
            Rng scene_rng(derive_seed(spec.seed, 1000 + count * 100 + rep));
            const Scene scene = make_labeled_scene(spec, count, scene_rng, d);
            const Workspace w = scene.workspace();

            FastronModel model(d.size(), spec.collision_bias, spec.max_updates);
            const auto t0 = clock::now();
            update(model, d);
            const auto t1 = clock::now();

            Metrics m = evaluate(model, d, scene.arm, w, spec.eval_set_size,
                                 derive_seed(spec.seed, 5000 + count * 100 + rep), spec.timing);
            if (spec.timing)
                m.update_total = std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0);

            if (m.recall) {
                recall_sum += *m.recall;
                ++recall_scenes;
            }
            fpr_sum += m.fpr;
            support_sum += static_cast<double>(model.support_count());
            row.metrics.kcd_total += m.kcd_total;
            row.metrics.fcd_total += m.fcd_total;
            row.metrics.update_total += m.update_total;
            row.metrics.samples += m.samples;
            row.metrics.tp += m.tp;
            row.metrics.fn += m.fn;
            row.metrics.fp += m.fp;
            row.metrics.tn += m.tn;
        }

        row.scenes = spec.repeats;
        if (recall_scenes > 0) row.metrics.recall = recall_sum / static_cast<double>(recall_scenes);
        row.metrics.fpr = fpr_sum / static_cast<double>(spec.repeats);
        row.support_mean = support_sum / static_cast<double>(spec.repeats);
        rows.push_back(std::move(row));
    }
    return rows;
}

DynamicResult run_dynamic_bench(const ScenarioSpec& spec) {
    DynamicResult result;
    const std::vector<std::size_t> n_values =
        spec.n_sweep.empty() ? std::vector<std::size_t>{spec.n} : spec.n_sweep;
    const std::vector<double> allowance_fractions =
        spec.allowance_sweep.empty() ? std::vector<double>{-1.0} : spec.allowance_sweep;

    for (std::size_t n : n_values) {
        const Dataset base_dataset = build_scenario_dataset(spec, n);
        for (double fraction : allowance_fractions) {
            ScenarioSpec cell = spec;
            cell.n = n;
            if (fraction >= 0.0) {
                cell.allowance = -1;
                cell.allowance_fraction = fraction;
            }

            Dataset d = base_dataset;
            Rng scene_rng(derive_seed(spec.seed, 3000 + n));
            Scene scene = make_labeled_scene(cell, cell.obstacle_count, scene_rng, d);

            Workspace w = scene.workspace();
            FastronModel model(d.size(), cell.collision_bias, cell.max_updates);
            update(model, d);

            const ActiveLearningParams params = learner_params(cell, d.size());
            Rng learn_rng(params.seed);
            KcdStats stats;

            DynamicAggregate agg;
            agg.n = n;
            agg.allowance = params.allowance;
            agg.cycles = cell.cycles;
            double recall_sum = 0.0;
            std::size_t recall_cycles = 0;
            double fpr_sum = 0.0;
            std::chrono::nanoseconds update_sum{0};

            for (std::size_t cycle = 1; cycle <= cell.cycles; ++cycle) {
                advance_obstacles(scene);
                w = scene.workspace();

                const std::uint64_t queries_before = stats.queries();
                DynamicCycleRow row;
                row.n = n;
                row.allowance = params.allowance;
                row.cycle = cycle;
                row.stats = update_cycle(model, d, scene.arm, w, params, learn_rng, &stats);
                row.kcd_queries = static_cast<std::size_t>(stats.queries() - queries_before);
                row.support_count = model.support_count();
                row.metrics = evaluate(model, d, scene.arm, w, cell.eval_set_size,
                                       derive_seed(spec.seed, 7000 + n * 31 + cycle), cell.timing);
                if (!cell.timing) {
                    row.stats.kcd_time = row.stats.select_time = row.stats.update_time =
                        std::chrono::nanoseconds{0};
                }

                agg.max_cycle_queries = std::max(agg.max_cycle_queries, row.kcd_queries);
                if (row.metrics.recall) {
                    recall_sum += *row.metrics.recall;
                    ++recall_cycles;
                }
                fpr_sum += row.metrics.fpr;
                update_sum += row.stats.kcd_time + row.stats.select_time + row.stats.update_time;
                result.rows.push_back(std::move(row));
            }

            if (recall_cycles > 0) agg.recall_mean = recall_sum / static_cast<double>(recall_cycles);
            fpr_sum /= static_cast<double>(cell.cycles);
            agg.fpr_mean = fpr_sum;
            agg.update_time_mean = update_sum / static_cast<long long>(cell.cycles);
            result.aggregates.push_back(agg);
        }
    }
    return result;
}

namespace {

// Fine-resolution KCD sweep over a path; returns {free samples, total samples}.
std::pair<std::size_t, std::size_t> revalidate_path(const std::vector<Configuration>& path,
                                                    const ArmModel& arm, const Workspace& w,
                                                    double resolution) {
    std::size_t free_count = 0, total = 0;
    if (path.empty()) return {0, 0};
    if (path.size() == 1) {
        ++total;
        if (kcd_check(arm, path[0], w) == Label::kFree) ++free_count;
        return {free_count, total};
    }
    Configuration q(path[0].size());
    for (std::size_t leg = 0; leg + 1 < path.size(); ++leg) {
        const Configuration& a = path[leg];
        const Configuration& b = path[leg + 1];
        double dist2 = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) dist2 += (a[k] - b[k]) * (a[k] - b[k]);
        const std::size_t segments =
            std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::sqrt(dist2) / resolution)));
        for (std::size_t s = (leg == 0 ? 0 : 1); s <= segments; ++s) {
            const double t = static_cast<double>(s) / static_cast<double>(segments);
            for (std::size_t k = 0; k < a.size(); ++k) q[k] = a[k] + (b[k] - a[k]) * t;
            ++total;
            if (kcd_check(arm, q, w) == Label::kFree) ++free_count;
        }
    }
    return {free_count, total};
}

// Obstacles scaled up about their centroids; placement uses this to keep
// start and goal clear of obstacles even after a few cycles of drift.
std::vector<ConvexPolygon> inflated_obstacles(const std::vector<ConvexPolygon>& obstacles,
                                              double factor) {
    std::vector<ConvexPolygon> out;
    out.reserve(obstacles.size());
    for (const ConvexPolygon& poly : obstacles) {
        const Vec2 c = poly.centroid();
        std::vector<Vec2> verts(poly.vertices().begin(), poly.vertices().end());
        for (Vec2& v : verts) v = c + (v - c) * factor;
        out.emplace_back(std::move(verts));
    }
    return out;
}

// Re-place every obstacle at a random position such that the straight
// joint-space segment from start to goal stays KCD-blocked while start and
// goal keep clearance from the (inflated) obstacles. Returns false when no
// blocking placement is found within the attempt cap.
bool place_blocking(Scene& scene, const ScenarioSpec& spec, const Configuration& start,
                    const Configuration& goal, Rng& rng) {
    const double check_res = spec.rrt_edge_resolution;
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::vector<ConvexPolygon> candidate;
        bool ok = true;
        for (std::size_t i = 0; i < scene.obstacles.size() && ok; ++i) {
            try {
                candidate.push_back(place_obstacle(spec, scene.bounds, scene.arm.base, rng));
            } catch (const std::runtime_error&) {
                ok = false;
            }
        }
        if (!ok) continue;

        Scene trial = scene;
        trial.obstacles = candidate;
        const Workspace padded(inflated_obstacles(candidate, 1.15), scene.bounds);
        KcdChecker clearance(trial.arm, padded);
        if (clearance.classify(start) == Label::kCollision ||
            clearance.classify(goal) == Label::kCollision)
            continue;
        const Workspace w = trial.workspace();
        KcdChecker checker(trial.arm, w);
        if (edge_free(checker, start, goal, check_res)) continue;  // straight approach open
        scene.obstacles = std::move(trial.obstacles);
        return true;
    }
    return false;
}

}  // namespace

std::vector<RrtSceneRow> run_rrt_bench(const ScenarioSpec& spec) {
    std::vector<RrtSceneRow> rows;
    const Dataset base_dataset = build_scenario_dataset(spec, spec.n);
    const JointBounds joint_bounds = spec.joint_bounds();

    RrtParams rrt;
    rrt.bounds = joint_bounds;
    rrt.step_size = spec.rrt_step;
    rrt.goal_bias = spec.rrt_goal_bias;
    rrt.max_iterations = spec.rrt_max_iterations;
    rrt.edge_resolution = spec.rrt_edge_resolution;
    rrt.goal_tolerance = spec.rrt_goal_tolerance;

    for (std::size_t scene_idx = 0; scene_idx < spec.repeats; ++scene_idx) {
        RrtSceneRow row;
        row.scene = scene_idx;
        Rng rng(derive_seed(spec.seed, 9000 + scene_idx));

        Scene scene = make_scene(spec, spec.obstacle_count, rng);
        Dataset d = base_dataset;

        // Scene setup: a KCD-free start/goal pair whose straight segment is
        // blocked by some obstacle placement, yet with a detour the planner
        // can actually find, and which the freshly trained proxy also
        // considers free (its padding can swallow tight endpoints). Setup
        // probes are not part of the timed comparison.
        Configuration start(spec.dof), goal(spec.dof);
        FastronModel model(d.size(), spec.collision_bias, spec.max_updates);
        Workspace w = scene.workspace();
        bool placed = false;
        for (int attempt = 0; attempt < 100 && !placed; ++attempt) {
            for (std::size_t k = 0; k < spec.dof; ++k) {
                start[k] = uniform_real(rng, joint_bounds.lo[k], joint_bounds.hi[k]);
                goal[k] = uniform_real(rng, joint_bounds.lo[k], joint_bounds.hi[k]);
            }
            double dist2 = 0.0;
            for (std::size_t k = 0; k < spec.dof; ++k)
                dist2 += (start[k] - goal[k]) * (start[k] - goal[k]);
            if (dist2 < spec.min_plan_distance * spec.min_plan_distance) continue;
            if (!place_blocking(scene, spec, start, goal, rng)) continue;

            w = scene.workspace();
            KcdChecker probe(scene.arm, w);
            RrtParams probe_params = rrt;
            probe_params.seed = derive_seed(spec.seed, 10000 + scene_idx * 100 + attempt);
            if (rrt_plan(start, goal, probe, probe_params).path.empty()) continue;

            relabel(scene.arm, w, d, all_indices(d.size()));
            model = FastronModel(d.size(), spec.collision_bias, spec.max_updates);
            update(model, d);
            placed = classify(model, d, start) == Label::kFree &&
                     classify(model, d, goal) == Label::kFree;
        }
        if (!placed) {
            row.skipped = true;
            rows.push_back(std::move(row));
            continue;
        }

        const ActiveLearningParams params = learner_params(spec, d.size());
        Rng learn_rng(derive_seed(spec.seed, 9500 + scene_idx));

        for (std::size_t replan = 0; replan < spec.replans; ++replan) {
            // The environment changes between plans: obstacles translate one
            // motion step and the model gets one maintenance cycle to catch
            // up, whose cost lands on the proxy planner's collision stage.
            advance_obstacles(scene);
            w = scene.workspace();

            const CycleStats cycle = update_cycle(model, d, scene.arm, w, params, learn_rng);
            const std::chrono::nanoseconds cycle_cost =
                cycle.kcd_time + cycle.select_time + cycle.update_time;

            KcdChecker kcd_checker(scene.arm, w);
            FcdChecker fcd_checker(model, d);
            // Both planners need free start/goal under their own checker; the
            // proxy may disagree near its padded boundary, in which case the
            // replan is dropped from the comparison.
            if (kcd_checker.classify(start) == Label::kCollision ||
                kcd_checker.classify(goal) == Label::kCollision ||
                fcd_checker.classify(start) == Label::kCollision ||
                fcd_checker.classify(goal) == Label::kCollision) {
                ++row.dropped_blocked;
                continue;
            }

            rrt.seed = derive_seed(spec.seed, 11000 + scene_idx * 100 + replan);
            const PlanResult kcd_plan = rrt_plan(start, goal, kcd_checker, rrt);
            const PlanResult fcd_plan = rrt_plan(start, goal, fcd_checker, rrt);

            if (!kcd_plan.path.empty()) ++row.kcd_success;
            if (!fcd_plan.path.empty()) ++row.fcd_success;
            // Timing compares like with like: drifting obstacles can close
            // the corridor entirely, turning one planner's run into a
            // max-iteration burn that says nothing about per-check cost.
            if (kcd_plan.path.empty() || fcd_plan.path.empty()) {
                ++row.dropped_unpaired;
                continue;
            }

            ++row.replans_done;
            row.kcd_stage += kcd_plan.checker_time;
            row.kcd_checks += kcd_plan.checker_queries;
            row.fcd_stage += fcd_plan.checker_time + cycle_cost;
            row.fcd_checks += fcd_plan.checker_queries;

            const double fine = spec.rrt_edge_resolution / 10.0;
            const auto [kf, kt] = revalidate_path(kcd_plan.path, scene.arm, w, fine);
            row.kcd_free_samples += kf;
            row.kcd_samples += kt;
            const auto [ff, ft] = revalidate_path(fcd_plan.path, scene.arm, w, fine);
            row.fcd_free_samples += ff;
            row.fcd_samples += ft;
            row.last_kcd_path = kcd_plan.path;
            row.last_fcd_path = fcd_plan.path;
        }

        if (row.kcd_samples > 0)
            row.kcd_free_fraction =
                static_cast<double>(row.kcd_free_samples) / static_cast<double>(row.kcd_samples);
        if (row.fcd_samples > 0)
            row.fcd_free_fraction =
                static_cast<double>(row.fcd_free_samples) / static_cast<double>(row.fcd_samples);
        if (!spec.timing) {
            row.fcd_stage = row.kcd_stage = std::chrono::nanoseconds{0};
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace fastron::bench
