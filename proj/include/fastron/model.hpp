#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fastron/dataset.hpp"
#include "fastron/types.hpp"

namespace fastron {

struct UpdateReport {
    bool converged = false;
    std::size_t iterations = 0;     // weight corrections applied
    std::size_t support_count = 0;  // at exit
    std::size_t removed_count = 0;  // redundant support points zeroed
};

// Kernel-perceptron C-space model. `weights` is the sparse alpha vector over
// the dataset, `scores` the maintained hypothesis values at every training
// point (scores = G * weights, kept incrementally), and the support set is
// the index list of nonzero weights.
//
// `collision_bias` (>= 1) is the one-step margin target used when correcting
// a collision-labeled point; free points are corrected to margin 1. Biasing
// collision corrections pads C-space obstacles so prediction errors skew
// toward false positives rather than missed collisions.
class FastronModel {
public:
    FastronModel(std::size_t n, double collision_bias, std::size_t max_updates = 5000);

    std::size_t size() const { return weights_.size(); }
    double collision_bias() const { return collision_bias_; }
    std::size_t max_updates() const { return max_updates_; }

    std::span<const double> weights() const { return weights_; }
    std::span<const double> scores() const { return scores_; }
    std::span<const std::size_t> support() const { return support_; }
    std::size_t support_count() const { return support_.size(); }

    // Adds delta to weights[j] and folds delta * G_row(j) into the scores.
    // Keeps the support list and the classifier view consistent.
    void apply_weight_delta(std::size_t j, double delta, const Dataset& d);

private:
    void apply_delta_raw(std::size_t j, double delta, const Dataset& d);
    std::size_t removal_pass_raw(const Dataset& d);
    // Packs support coordinates and weights contiguously for classification.
    // Called at the end of every mutating entry point: reads never mutate.
    void rebuild_classifier_view(const Dataset& d);

    std::vector<double> weights_;
    std::vector<double> scores_;
    std::vector<std::size_t> support_;  // sorted indices with nonzero weight
    double collision_bias_;
    std::size_t max_updates_;

    std::vector<double> view_coords_;   // |S| x dof
    std::vector<double> view_weights_;  // |S|

    friend UpdateReport update(FastronModel&, const Dataset&);
    friend std::size_t remove_redundant(FastronModel&, const Dataset&);
    friend double hypothesis_at(const FastronModel&, const Dataset&, std::span<const double>);
    friend FastronModel model_load(const std::string&, const Dataset&);
};

// One model update pass: repeatedly drop redundant support points, then
// correct the worst-margin training point in one step until every training
// margin is positive or the update budget runs out. Non-convergence is
// reported, not raised; the partially updated model remains usable.
UpdateReport update(FastronModel& model, const Dataset& d);

// Zeroes support points that stay correctly classified without their own
// weight, largest resultant margin first. Returns the number removed.
std::size_t remove_redundant(FastronModel& model, const Dataset& d);

// Raw kernel expansion sum(weights[i] * K(x_i, q)) over support points only.
double hypothesis_at(const FastronModel& model, const Dataset& d, const Configuration& q);
double hypothesis_at(const FastronModel& model, const Dataset& d, std::span<const double> q);

// Proxy collision check: the sign of the hypothesis, with sgn(0) resolving
// to collision.
Label classify(const FastronModel& model, const Dataset& d, const Configuration& q);
Label classify(const FastronModel& model, const Dataset& d, std::span<const double> q);

// Flat binary dump/load of (n, collision_bias, weights). Scores are
// reconstructed from the dataset's Gram matrix on load.
void model_save(const FastronModel& model, const std::string& path);
FastronModel model_load(const std::string& path, const Dataset& d);

}  // namespace fastron
