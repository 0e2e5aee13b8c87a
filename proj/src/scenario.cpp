#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fastron/bench.hpp"

namespace fastron::bench {

ArmModel ScenarioSpec::make_arm() const {
    std::vector<double> lengths = link_lengths;
    if (lengths.empty())
        lengths.assign(dof, total_reach / static_cast<double>(dof));
    double reach = 0.0;
    for (double len : lengths) reach += len;
    const double thickness = link_thickness >= 0.0 ? link_thickness : 0.05 * reach;
    return ArmModel(std::move(lengths), thickness);
}

Aabb ScenarioSpec::make_bounds() const {
    double reach = 0.0;
    if (link_lengths.empty()) {
        reach = total_reach;
    } else {
        for (double len : link_lengths) reach += len;
    }
    const double half = workspace_halfwidth > 0.0 ? workspace_halfwidth : 1.1 * reach;
    return Aabb{{-half, -half}, {half, half}};
}

JointBounds ScenarioSpec::joint_bounds() const {
    const double h = joint_halfwidth > 0.0 ? std::min(joint_halfwidth, M_PI) : M_PI;
    JointBounds b;
    b.lo.assign(dof, -h);
    b.hi.assign(dof, h);
    return b;
}

double ScenarioSpec::resolved_speed() const {
    if (obstacle_speed >= 0.0) return obstacle_speed;
    return 0.02 * make_bounds().width();
}

std::size_t ScenarioSpec::resolved_allowance(std::size_t dataset_size) const {
    if (allowance >= 0) return static_cast<std::size_t>(allowance);
    const auto a = static_cast<std::size_t>(
        std::llround(allowance_fraction * static_cast<double>(dataset_size)));
    return std::min(a, dataset_size);
}

SamplerSpec::Kind ScenarioSpec::resolved_sampler(std::size_t dataset_size) const {
    switch (sampler) {
        case SamplerKind::kGrid:
            return SamplerSpec::Kind::kGrid;
        case SamplerKind::kUniformRandom:
            return SamplerSpec::Kind::kUniformRandom;
        case SamplerKind::kAuto:
            break;
    }
    if (dof <= 2) {
        const auto side = static_cast<std::size_t>(
            std::llround(std::pow(static_cast<double>(dataset_size), 1.0 / static_cast<double>(dof))));
        std::size_t prod = 1;
        for (std::size_t k = 0; k < dof; ++k) prod *= side;
        if (prod == dataset_size) return SamplerSpec::Kind::kGrid;
    }
    return SamplerSpec::Kind::kUniformRandom;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_double(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw std::runtime_error("config: bad number for '" + key + "': " + value);
    }
    if (pos != value.size())
        throw std::runtime_error("config: trailing junk for '" + key + "': " + value);
    return v;
}

long long parse_int(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    if (v != std::floor(v))
        throw std::runtime_error("config: expected integer for '" + key + "': " + value);
    return static_cast<long long>(v);
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "on" || value == "true" || value == "1") return true;
    if (value == "off" || value == "false" || value == "0") return false;
    throw std::runtime_error("config: expected on/off for '" + key + "': " + value);
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(key, item));
    }
    if (out.empty()) throw std::runtime_error("config: empty list for '" + key + "'");
    return out;
}

// Polygons as "x,y x,y x,y ; x,y x,y x,y": vertices space-separated,
// polygons split on ';'.
std::vector<ConvexPolygon> parse_polygons(const std::string& value) {
    std::vector<ConvexPolygon> polys;
    std::stringstream polys_ss(value);
    std::string poly_text;
    while (std::getline(polys_ss, poly_text, ';')) {
        poly_text = trim(poly_text);
        if (poly_text.empty()) continue;
        std::vector<Vec2> verts;
        std::stringstream vert_ss(poly_text);
        std::string vert;
        while (vert_ss >> vert) {
            const auto comma = vert.find(',');
            if (comma == std::string::npos)
                throw std::runtime_error("config: bad vertex '" + vert + "' in obstacle_polygons");
            verts.push_back(Vec2{parse_double("obstacle_polygons", vert.substr(0, comma)),
                                 parse_double("obstacle_polygons", vert.substr(comma + 1))});
        }
        polys.emplace_back(std::move(verts));
    }
    if (polys.empty()) throw std::runtime_error("config: empty obstacle_polygons");
    return polys;
}

}  // namespace

ScenarioSpec parse_scenario_text(const std::string& text) {
    ScenarioSpec spec;
    std::stringstream lines(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(lines, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(line_no) + ": missing '='");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::runtime_error("config line " + std::to_string(line_no) + ": empty key or value");

        if (key == "dof") spec.dof = static_cast<std::size_t>(parse_int(key, value));
        else if (key == "link_lengths") spec.link_lengths = parse_double_list(key, value);
        else if (key == "total_reach") spec.total_reach = parse_double(key, value);
        else if (key == "link_thickness") spec.link_thickness = parse_double(key, value);
        else if (key == "workspace_halfwidth") spec.workspace_halfwidth = parse_double(key, value);
        else if (key == "obstacle_count") spec.obstacle_count = static_cast<std::size_t>(parse_int(key, value));
        else if (key == "obstacle_radius_min") spec.obstacle_radius_min = parse_double(key, value);
        else if (key == "obstacle_radius_max") spec.obstacle_radius_max = parse_double(key, value);
        else if (key == "obstacle_vertices_min") spec.obstacle_vertices_min = static_cast<int>(parse_int(key, value));
        else if (key == "obstacle_vertices_max") spec.obstacle_vertices_max = static_cast<int>(parse_int(key, value));
        else if (key == "obstacle_center_min") spec.obstacle_center_min = parse_double(key, value);
        else if (key == "obstacle_center_max") spec.obstacle_center_max = parse_double(key, value);
        else if (key == "base_clearance") spec.base_clearance = parse_double(key, value);
        else if (key == "min_cobs_fraction") spec.min_cobs_fraction = parse_double(key, value);
        else if (key == "obstacle_polygons") spec.fixed_obstacles = parse_polygons(value);
        else if (key == "motion") {
            if (value == "static") spec.motion = MotionKind::kStatic;
            else if (value == "linear-bounce") spec.motion = MotionKind::kLinearBounce;
            else throw std::runtime_error("config: unknown motion '" + value + "'");
        }
        else if (key == "obstacle_speed") spec.obstacle_speed = parse_double(key, value);
        else if (key == "cycles") spec.cycles = static_cast<std::size_t>(parse_int(key, value));
        else if (key == "sampler") {
            if (value == "grid") spec.sampler = SamplerKind::kGrid;
            else if (value == "uniform-random") spec.sampler = SamplerKind::kUniformRandom;
            else if (value == "auto") spec.sampler = SamplerKind::kAuto;
            else throw std::runtime_error("config: unknown sampler '" + value + "'");
        }
        else if (key == "n") spec.n = static_cast<std::size_t>(parse_int(key, value));
        else if (key == "gamma") spec.gamma = parse_double(key, value);
        else if (key == "joint_halfwidth") spec.joint_halfwidth = parse_double(key, value);
        else if (key == "collision_bias") spec.collision_bias = parse_double(key, value);
        else if (key == "max_updates") spec.max_updates = static_cast<std::size_t>(parse_int(key, value));
        else if (key == "allowance") spec.allowance = parse_int(key, value);
        else if (key == "allowance_fraction") spec.allowance_fraction = parse_double(key, value);
        else if (key == "exploit_proportion") spec.exploit_proportion = parse_double(key, value);
        else if (key == "neighbor_rounds") spec.neighbor_rounds = static_cast<std::size_t>(parse_int(key, value));
        else if (key == "eval_set_size") spec.eval_set_size = static_cast<std::size_t>(parse_int(key, value));
        else if (key == "repeats") spec.repeats = static_cast<std::size_t>(parse_int(key, value));
        else if (key == "replans") spec.replans = static_cast<std::size_t>(parse_int(key, value));
        else if (key == "timing") spec.timing = parse_bool(key, value);
        else if (key == "n_sweep") {
            spec.n_sweep.clear();
            for (double v : parse_double_list(key, value))
                spec.n_sweep.push_back(static_cast<std::size_t>(v));
        }
        else if (key == "allowance_sweep") spec.allowance_sweep = parse_double_list(key, value);
        else if (key == "min_plan_distance") spec.min_plan_distance = parse_double(key, value);
        else if (key == "rrt_step") spec.rrt_step = parse_double(key, value);
        else if (key == "rrt_goal_bias") spec.rrt_goal_bias = parse_double(key, value);
        else if (key == "rrt_edge_resolution") spec.rrt_edge_resolution = parse_double(key, value);
        else if (key == "rrt_goal_tolerance") spec.rrt_goal_tolerance = parse_double(key, value);
        else if (key == "rrt_max_iterations") spec.rrt_max_iterations = static_cast<std::size_t>(parse_int(key, value));
        else if (key == "seed") spec.seed = static_cast<std::uint64_t>(parse_int(key, value));
        else throw std::runtime_error("config: unknown key '" + key + "'");
    }
    return spec;
}

ScenarioSpec parse_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario_text(buffer.str());
}

namespace {

std::string fmt_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string fmt_recall(const std::optional<double>& recall) {
    return recall ? fmt_real(*recall) : "na";
}

long long us(std::chrono::nanoseconds ns) {
    return std::chrono::duration_cast<std::chrono::microseconds>(ns).count();
}

}  // namespace

void write_static_csv(const std::vector<StaticRow>& rows, std::ostream& out) {
    out << "obstacles,scenes,samples,recall,fpr,fcd_total_us,kcd_total_us,train_us,ratio,"
           "support_mean\n";
    for (const StaticRow& row : rows) {
        out << row.obstacle_count << ',' << row.scenes << ',' << row.metrics.samples << ','
            << fmt_recall(row.metrics.recall) << ',' << fmt_real(row.metrics.fpr) << ','
            << us(row.metrics.fcd_total) << ',' << us(row.metrics.kcd_total) << ','
            << us(row.metrics.update_total) << ',' << fmt_real(row.metrics.ratio()) << ','
            << fmt_real(row.support_mean) << '\n';
    }
}

void write_dynamic_csv(const std::vector<DynamicCycleRow>& rows, std::ostream& out) {
    out << "n,allowance,cycle,relabeled,flips,kcd_queries,converged,iterations,support,"
           "select_us,relabel_us,update_us,recall,fpr\n";
    for (const DynamicCycleRow& row : rows) {
        out << row.n << ',' << row.allowance << ',' << row.cycle << ',' << row.stats.relabeled
            << ',' << row.stats.flips << ',' << row.kcd_queries << ','
            << (row.stats.update.converged ? 1 : 0) << ',' << row.stats.update.iterations << ','
            << row.support_count << ',' << us(row.stats.select_time) << ','
            << us(row.stats.kcd_time) << ',' << us(row.stats.update_time) << ','
            << fmt_recall(row.metrics.recall) << ',' << fmt_real(row.metrics.fpr) << '\n';
    }
}

void write_rrt_csv(const std::vector<RrtSceneRow>& rows, std::ostream& out) {
    out << "scene,skipped,replans,dropped_blocked,dropped_unpaired,fcd_success,kcd_success,"
           "fcd_checks,kcd_checks,fcd_stage_us,kcd_stage_us,ratio,fcd_free_frac,kcd_free_frac\n";
    for (const RrtSceneRow& row : rows) {
        const double ratio = row.fcd_stage.count() == 0
                                 ? 0.0
                                 : static_cast<double>(row.kcd_stage.count()) /
                                       static_cast<double>(row.fcd_stage.count());
        out << row.scene << ',' << (row.skipped ? 1 : 0) << ',' << row.replans_done << ','
            << row.dropped_blocked << ',' << row.dropped_unpaired << ',' << row.fcd_success << ','
            << row.kcd_success << ',' << row.fcd_checks << ',' << row.kcd_checks << ','
            << us(row.fcd_stage) << ',' << us(row.kcd_stage) << ',' << fmt_real(ratio) << ','
            << fmt_real(row.fcd_free_fraction) << ',' << fmt_real(row.kcd_free_fraction) << '\n';
    }
}

}  // namespace fastron::bench
