#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <vector>

#include "fastron/kcd.hpp"
#include "fastron/model.hpp"
#include "fastron/rng.hpp"

namespace fastron {

struct ActiveLearningParams {
    std::size_t allowance = 0;        // KCD budget per update cycle, <= N
    double exploit_proportion = 0.8;  // share of the allowance aimed at the boundary
    std::size_t neighbor_rounds = 4;  // k-th-nearest non-support rounds (k_NS)
    std::uint64_t seed = 0;
};

struct CycleStats {
    std::size_t relabeled = 0;  // |R|, <= allowance
    std::size_t flips = 0;
    UpdateReport update;
    std::chrono::nanoseconds kcd_time{0};
    std::chrono::nanoseconds select_time{0};
    std::chrono::nanoseconds update_time{0};
};

// Two-stage relabel-set selection. Exploitation: take the support set (or a
// random allowance-sized subset when it is too large) and grow it with each
// support point's k-th nearest non-support point, k = 1..neighbor_rounds,
// while the set is smaller than exploit_proportion * allowance. Exploration:
// fill the remaining allowance with uniform random picks from the rest of
// the dataset. Returns sorted indices, never more than the allowance.
std::vector<std::size_t> select_relabel_set(const Dataset& d,
                                            std::span<const std::size_t> support,
                                            const ActiveLearningParams& params, Rng& rng);

// One full model-maintenance cycle against a workspace snapshot: select a
// relabel set from the previous model's support, refresh those labels via
// KCD, then update the model. At most `allowance` KCD queries are issued.
CycleStats update_cycle(FastronModel& model, Dataset& d, const ArmModel& arm,
                        const Workspace& w, const ActiveLearningParams& params, Rng& rng,
                        KcdStats* stats = nullptr);

}  // namespace fastron
