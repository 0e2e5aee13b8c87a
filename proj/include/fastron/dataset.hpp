#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fastron/rng.hpp"
#include "fastron/types.hpp"

namespace fastron {

// Gaussian kernel exp(-gamma * ||a - b||^2). Distances are plain Euclidean
// in joint space; angles do not wrap around.
double kernel(const Configuration& a, const Configuration& b, double gamma);
double kernel(std::span<const double> a, std::span<const double> b, double gamma);

// Per-joint sampling interval, [lo_i, hi_i). Defaults to [-pi, pi).
struct JointBounds {
    std::vector<double> lo;
    std::vector<double> hi;

    static JointBounds full_range(std::size_t dof);
};

struct SamplerSpec {
    enum class Kind { kGrid, kUniformRandom };

    Kind kind = Kind::kGrid;
    std::size_t n = 625;
    std::size_t dof = 2;
    std::uint64_t seed = 0;
};

// Fixed C-space sample set plus its kernel Gram matrix. Points and the Gram
// matrix never change after construction; only labels are rewritten as the
// environment moves.
class Dataset {
public:
    static Dataset build(const SamplerSpec& spec, const JointBounds& bounds, double gamma);
    static Dataset from_points(const std::vector<Configuration>& points, double gamma);

    std::size_t size() const { return n_; }
    std::size_t dof() const { return dof_; }
    double gamma() const { return gamma_; }
    const JointBounds& bounds() const { return bounds_; }

    std::span<const double> point(std::size_t i) const {
        return {coords_.data() + i * dof_, dof_};
    }
    Configuration config(std::size_t i) const {
        const auto p = point(i);
        return Configuration(p.begin(), p.end());
    }

    Label label(std::size_t i) const { return labels_[i]; }
    std::span<const Label> labels() const { return labels_; }
    // Returns true when the stored label changed.
    bool set_label(std::size_t i, Label l) {
        if (labels_[i] == l) return false;
        labels_[i] = l;
        return true;
    }

    std::span<const double> gram_row(std::size_t i) const {
        return {gram_.data() + i * n_, n_};
    }
    double gram(std::size_t i, std::size_t j) const { return gram_[i * n_ + j]; }

private:
    Dataset() = default;
    void build_gram();

    std::size_t n_ = 0;
    std::size_t dof_ = 0;
    double gamma_ = 0.0;
    JointBounds bounds_;
    std::vector<double> coords_;  // n x dof, row-major
    std::vector<Label> labels_;
    std::vector<double> gram_;  // n x n, row-major
};

// Index of the k-th nearest non-support point to support point `i`, read off
// the Gram row (the kernel is monotone-decreasing in distance, so max kernel
// value means nearest). Ties break toward the lowest index. Returns nullopt
// when fewer than k non-support points exist.
std::optional<std::size_t> kth_nearest_nonsupport(const Dataset& d,
                                                  std::span<const std::size_t> support,
                                                  std::size_t i, std::size_t k);

// Flat binary dump/load: header (dof, n, gamma), then points, then labels.
// The Gram matrix is recomputed on load.
void dataset_save(const Dataset& d, const std::string& path);
Dataset dataset_load(const std::string& path);

}  // namespace fastron
