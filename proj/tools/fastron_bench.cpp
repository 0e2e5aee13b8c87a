// Benchmark CLI: scenario-driven reproductions of the static obstacle sweep,
// the moving-obstacle update loop, and the FCD-RRT vs KCD-RRT comparison,
// plus a dataset labeling dump for repeatable experiments.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "fastron/bench.hpp"

namespace {

using fastron::bench::ScenarioSpec;

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    long long seed_override = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "scenario config file")->required();
    cmd->add_option("--out", args.out_path, "output file")->required();
    cmd->add_option("--seed", args.seed_override, "override the config seed");
}

ScenarioSpec load_spec(const CommonArgs& args) {
    ScenarioSpec spec = fastron::bench::parse_scenario_file(args.config_path);
    if (args.seed_override >= 0) spec.seed = static_cast<std::uint64_t>(args.seed_override);
    return spec;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fastron proxy-collision-detection benchmarks"};
    app.require_subcommand(1);

    CommonArgs static_args, dynamic_args, rrt_args, dump_args;
    std::string paths_dir;

    CLI::App* static_cmd =
        app.add_subcommand("static-bench", "obstacle-count sweep on static scenes");
    add_common(static_cmd, static_args);

    CLI::App* dynamic_cmd =
        app.add_subcommand("dynamic-bench", "moving-obstacle update loop, N x allowance sweep");
    add_common(dynamic_cmd, dynamic_args);

    CLI::App* rrt_cmd = app.add_subcommand("rrt-bench", "FCD-RRT vs KCD-RRT comparison");
    add_common(rrt_cmd, rrt_args);
    rrt_cmd->add_option("--paths", paths_dir, "directory for per-scene path CSV dumps");

    CLI::App* dump_cmd =
        app.add_subcommand("label-dump", "KCD-label the dataset and dump it as flat binary");
    add_common(dump_cmd, dump_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (static_cmd->parsed()) {
            const ScenarioSpec spec = load_spec(static_args);
            const auto rows = fastron::bench::run_static_bench(spec);
            auto out = open_out(static_args.out_path);
            fastron::bench::write_static_csv(rows, out);
            for (const auto& row : rows) {
                std::printf("obstacles=%zu recall=%s fpr=%.4f ratio=%.2f support=%.1f\n",
                            row.obstacle_count,
                            row.metrics.recall ? std::to_string(*row.metrics.recall).c_str() : "na",
                            row.metrics.fpr, row.metrics.ratio(), row.support_mean);
            }
        } else if (dynamic_cmd->parsed()) {
            const ScenarioSpec spec = load_spec(dynamic_args);
            const auto result = fastron::bench::run_dynamic_bench(spec);
            auto out = open_out(dynamic_args.out_path);
            fastron::bench::write_dynamic_csv(result.rows, out);
            for (const auto& agg : result.aggregates) {
                std::printf(
                    "n=%zu allowance=%zu recall=%s fpr=%.4f update_ms=%.3f max_queries=%zu\n",
                    agg.n, agg.allowance,
                    agg.recall_mean ? std::to_string(*agg.recall_mean).c_str() : "na",
                    agg.fpr_mean, agg.update_time_mean.count() / 1e6, agg.max_cycle_queries);
            }
        } else if (rrt_cmd->parsed()) {
            const ScenarioSpec spec = load_spec(rrt_args);
            const auto rows = fastron::bench::run_rrt_bench(spec);
            auto out = open_out(rrt_args.out_path);
            fastron::bench::write_rrt_csv(rows, out);
            if (!paths_dir.empty()) {
                std::filesystem::create_directories(paths_dir);
                for (const auto& row : rows) {
                    if (!row.last_fcd_path.empty()) {
                        auto f = open_out(paths_dir + "/scene" + std::to_string(row.scene) +
                                          "_fcd.csv");
                        fastron::write_path_csv(row.last_fcd_path, f);
                    }
                    if (!row.last_kcd_path.empty()) {
                        auto f = open_out(paths_dir + "/scene" + std::to_string(row.scene) +
                                          "_kcd.csv");
                        fastron::write_path_csv(row.last_kcd_path, f);
                    }
                }
            }
            std::chrono::nanoseconds fcd_total{0}, kcd_total{0};
            for (const auto& row : rows) {
                fcd_total += row.fcd_stage;
                kcd_total += row.kcd_stage;
            }
            std::printf("fcd_stage_ms=%.3f kcd_stage_ms=%.3f ratio=%.3f\n",
                        fcd_total.count() / 1e6, kcd_total.count() / 1e6,
                        fcd_total.count() > 0
                            ? static_cast<double>(kcd_total.count()) / fcd_total.count()
                            : 0.0);
        } else if (dump_cmd->parsed()) {
            const ScenarioSpec spec = load_spec(dump_args);
            fastron::Rng rng(fastron::derive_seed(spec.seed, 1));
            const auto scene = fastron::bench::make_scene(spec, spec.obstacle_count, rng);
            const auto w = scene.workspace();

            fastron::SamplerSpec sampler;
            sampler.kind = spec.resolved_sampler(spec.n);
            sampler.n = spec.n;
            sampler.dof = spec.dof;
            sampler.seed = fastron::derive_seed(spec.seed, 101);
            fastron::Dataset d = fastron::Dataset::build(
                sampler, fastron::JointBounds::full_range(spec.dof), spec.gamma);

            std::vector<std::size_t> idx(d.size());
            for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
            fastron::relabel(scene.arm, w, d, idx);
            fastron::dataset_save(d, dump_args.out_path);
            std::size_t in_collision = 0;
            for (std::size_t i = 0; i < d.size(); ++i)
                if (d.label(i) == fastron::Label::kCollision) ++in_collision;
            std::printf("wrote %zu points (%zu in collision) to %s\n", d.size(), in_collision,
                        dump_args.out_path.c_str());
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
