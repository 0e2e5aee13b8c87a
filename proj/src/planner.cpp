#include "fastron/planner.hpp"

#include <cmath>
#include <stdexcept>

namespace fastron {

namespace {

double distance(const Configuration& a, const Configuration& b) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        d2 += diff * diff;
    }
    return std::sqrt(d2);
}

// Counts queries; the planner wraps whole edge checks in one timing block so
// the clock reads do not distort the per-query cost being measured.
class CountingChecker final : public CollisionChecker {
public:
    explicit CountingChecker(CollisionChecker& inner) : inner_(inner) {}

    Label classify(const Configuration& q) override {
        ++queries;
        return inner_.classify(q);
    }

    std::size_t queries = 0;

private:
    CollisionChecker& inner_;
};

struct TreeNode {
    Configuration q;
    std::size_t parent;  // own index for the root
};

}  // namespace

bool edge_free(CollisionChecker& checker, const Configuration& a, const Configuration& b,
               double resolution) {
    if (a.size() != b.size()) throw std::invalid_argument("edge_free: dof mismatch");
    if (!(resolution > 0.0)) throw std::invalid_argument("edge_free: resolution must be > 0");

    const double dist = distance(a, b);
    const std::size_t segments =
        dist == 0.0 ? 0 : static_cast<std::size_t>(std::ceil(dist / resolution));
    Configuration q(a.size());
    for (std::size_t s = 0; s <= segments; ++s) {
        const double t = segments == 0 ? 0.0 : static_cast<double>(s) / static_cast<double>(segments);
        for (std::size_t k = 0; k < a.size(); ++k) q[k] = a[k] + (b[k] - a[k]) * t;
        if (checker.classify(q) == Label::kCollision) return false;
    }
    return true;
}

PlanResult rrt_plan(const Configuration& start, const Configuration& goal,
                    CollisionChecker& checker, const RrtParams& params) {
    if (start.size() != goal.size()) throw std::invalid_argument("rrt_plan: dof mismatch");
    if (!(params.step_size > 0.0)) throw std::invalid_argument("rrt_plan: step_size must be > 0");
    if (params.edge_resolution > params.step_size)
        throw std::invalid_argument("rrt_plan: edge_resolution must be <= step_size");

    const std::size_t dof = start.size();
    JointBounds bounds = params.bounds;
    if (bounds.lo.empty()) bounds = JointBounds::full_range(dof);
    if (bounds.lo.size() != dof) throw std::invalid_argument("rrt_plan: bounds dof mismatch");

    CountingChecker counting(checker);
    PlanResult result;
    std::chrono::nanoseconds checking{0};

    using clock = std::chrono::steady_clock;
    auto t0 = clock::now();
    const bool endpoints_free = counting.classify(start) == Label::kFree &&
                                counting.classify(goal) == Label::kFree;
    checking += clock::now() - t0;

    if (!endpoints_free) {
        result.checker_time = checking;
        result.checker_queries = counting.queries;
        throw std::invalid_argument("rrt_plan: start or goal in collision");
    }

    if (distance(start, goal) <= params.goal_tolerance) {
        result.path = {start};
        result.checker_time = checking;
        result.checker_queries = counting.queries;
        return result;
    }

    Rng rng(params.seed);
    std::vector<TreeNode> tree;
    tree.push_back({start, 0});

    Configuration sample(dof), stepped(dof);
    for (std::size_t iter = 0; iter < params.max_iterations; ++iter) {
        ++result.iterations;

        if (iter == 0 || uniform_real(rng, 0.0, 1.0) < params.goal_bias) {
            sample = goal;
        } else {
            for (std::size_t k = 0; k < dof; ++k)
                sample[k] = uniform_real(rng, bounds.lo[k], bounds.hi[k]);
        }

        std::size_t nearest = 0;
        double nearest_dist = distance(tree[0].q, sample);
        for (std::size_t i = 1; i < tree.size(); ++i) {
            const double dist = distance(tree[i].q, sample);
            if (dist < nearest_dist) {
                nearest_dist = dist;
                nearest = i;
            }
        }

        if (nearest_dist == 0.0) continue;  // sample already in the tree
        const double scale = std::min(1.0, params.step_size / nearest_dist);
        for (std::size_t k = 0; k < dof; ++k)
            stepped[k] = tree[nearest].q[k] + (sample[k] - tree[nearest].q[k]) * scale;

        t0 = clock::now();
        const bool extension_free =
            edge_free(counting, tree[nearest].q, stepped, params.edge_resolution);
        checking += clock::now() - t0;
        if (!extension_free) continue;
        tree.push_back({stepped, nearest});

        if (distance(stepped, goal) <= params.goal_tolerance) {
            std::vector<Configuration> reversed;
            std::size_t at = tree.size() - 1;
            while (true) {
                reversed.push_back(tree[at].q);
                if (at == tree[at].parent) break;
                at = tree[at].parent;
            }
            result.path.assign(reversed.rbegin(), reversed.rend());
            break;
        }
    }

    result.checker_time = checking;
    result.checker_queries = counting.queries;
    return result;
}

void write_path_csv(const std::vector<Configuration>& path, std::ostream& out) {
    const auto old_precision = out.precision(17);  // lossless round trip
    for (const Configuration& q : path) {
        for (std::size_t k = 0; k < q.size(); ++k) {
            if (k > 0) out << ',';
            out << q[k];
        }
        out << '\n';
    }
    out.precision(old_precision);
}

}  // namespace fastron
