#include "fastron/active_learning.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fastron {

std::vector<std::size_t> select_relabel_set(const Dataset& d,
                                            std::span<const std::size_t> support,
                                            const ActiveLearningParams& params, Rng& rng) {
    const std::size_t n = d.size();
    const std::size_t allowance = params.allowance;
    if (allowance > n) throw std::invalid_argument("select_relabel_set: allowance exceeds N");
    if (!(params.exploit_proportion >= 0.0 && params.exploit_proportion <= 1.0))
        throw std::invalid_argument("select_relabel_set: exploit proportion outside [0,1]");
    if (allowance == 0) return {};

    std::vector<std::size_t> selected;
    selected.reserve(allowance);
    std::vector<bool> in_set(n, false);
    const auto add = [&](std::size_t j) {
        if (!in_set[j]) {
            in_set[j] = true;
            selected.push_back(j);
        }
    };

    if (support.size() <= allowance) {
        for (std::size_t s : support) add(s);

        // ceil(p*A) as the exploitation floor; the epsilon guards against
        // p*A landing a hair above an integer in binary.
        const std::size_t exploit_target = static_cast<std::size_t>(
            std::ceil(params.exploit_proportion * static_cast<double>(allowance) - 1e-9));

        // One Gram-row pass per support point collects all neighbor rounds at
        // once; semantics match per-round kth_nearest_nonsupport queries.
        std::vector<std::vector<std::size_t>> neighbors;
        if (!support.empty() && selected.size() < exploit_target && params.neighbor_rounds > 0) {
            std::vector<std::uint8_t> is_support(n, 0);
            for (std::size_t s : support) is_support[s] = 1;
            neighbors.resize(support.size());
            std::vector<std::pair<double, std::size_t>> best;
            for (std::size_t si = 0; si < support.size(); ++si) {
                const auto row = d.gram_row(support[si]);
                best.clear();
                // Most rows fail this threshold immediately, so keep it hot.
                double floor_value = -1.0;
                for (std::size_t j = 0; j < n; ++j) {
                    if (row[j] <= floor_value || is_support[j]) continue;
                    std::size_t pos = best.size();
                    while (pos > 0 && row[j] > best[pos - 1].first) --pos;
                    best.insert(best.begin() + static_cast<std::ptrdiff_t>(pos), {row[j], j});
                    if (best.size() > params.neighbor_rounds) best.pop_back();
                    if (best.size() == params.neighbor_rounds) floor_value = best.back().first;
                }
                neighbors[si].reserve(best.size());
                for (const auto& [value, j] : best) neighbors[si].push_back(j);
            }
        }

        for (std::size_t k = 1; k <= params.neighbor_rounds && !neighbors.empty(); ++k) {
            if (selected.size() >= exploit_target) break;
            // Whole k-th-neighbor batch, truncated only by the hard allowance.
            for (std::size_t si = 0; si < support.size(); ++si) {
                if (selected.size() == allowance) break;
                if (neighbors[si].size() >= k) add(neighbors[si][k - 1]);
            }
        }
    } else {
        for (std::size_t pick : sample_without_replacement(rng, support.size(), allowance))
            add(support[pick]);
    }

    // Exploration: spend what is left of the allowance on uniform picks from
    // the untouched remainder, hunting for new or fast-moving obstacles.
    if (selected.size() < allowance) {
        std::vector<std::size_t> pool;
        pool.reserve(n - selected.size());
        for (std::size_t j = 0; j < n; ++j)
            if (!in_set[j]) pool.push_back(j);
        for (std::size_t pick :
             sample_without_replacement(rng, pool.size(), allowance - selected.size()))
            add(pool[pick]);
    }

    std::sort(selected.begin(), selected.end());
    return selected;
}

CycleStats update_cycle(FastronModel& model, Dataset& d, const ArmModel& arm,
                        const Workspace& w, const ActiveLearningParams& params, Rng& rng,
                        KcdStats* stats) {
    if (model.size() != d.size()) throw std::invalid_argument("update_cycle: size mismatch");
    using clock = std::chrono::steady_clock;
    CycleStats cycle;

    auto t0 = clock::now();
    const std::vector<std::size_t> relabel_set =
        select_relabel_set(d, model.support(), params, rng);
    auto t1 = clock::now();
    cycle.flips = relabel(arm, w, d, relabel_set, stats);
    auto t2 = clock::now();
    cycle.update = update(model, d);
    auto t3 = clock::now();

    cycle.relabeled = relabel_set.size();
    cycle.select_time = std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0);
    cycle.kcd_time = std::chrono::duration_cast<std::chrono::nanoseconds>(t2 - t1);
    cycle.update_time = std::chrono::duration_cast<std::chrono::nanoseconds>(t3 - t2);
    return cycle;
}

}  // namespace fastron
