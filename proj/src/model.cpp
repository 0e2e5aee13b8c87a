#include "fastron/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>

namespace fastron {

namespace {

// Gaussian kernel expansion over the packed support view. Classification is
// the model's hot path, so the exponential is inlined as a branch-free
// Cephes-style evaluation (range reduction by log 2, rational approximant,
// exponent reassembly via the bit pattern) that the compiler can vectorize;
// relative error stays below 3e-13. Arguments under -708 flush the kernel
// value to exactly zero, which also sidesteps the subnormal range the bit
// reassembly cannot represent.
__attribute__((target_clones("avx2", "default")))
double gaussian_kernel_sum(const double* coords, const double* weights, std::size_t count,
                           std::size_t dof, double gamma, const double* q) {
    constexpr double kMagic = 6755399441055744.0;  // 1.5 * 2^52
    constexpr std::int64_t kMagicBits = 0x4338000000000000LL;
    constexpr std::size_t kBlock = 64;

    double arg[kBlock];
    double acc = 0.0;
    for (std::size_t base = 0; base < count; base += kBlock) {
        const std::size_t m = std::min(kBlock, count - base);
        const double* p = coords + base * dof;
        if (dof == 2) {
            for (std::size_t i = 0; i < m; ++i) {
                const double dx = p[2 * i] - q[0];
                const double dy = p[2 * i + 1] - q[1];
                arg[i] = -gamma * (dx * dx + dy * dy);
            }
        } else {
            for (std::size_t i = 0; i < m; ++i, p += dof) {
                double dist2 = 0.0;
                for (std::size_t k = 0; k < dof; ++k) {
                    const double diff = p[k] - q[k];
                    dist2 += diff * diff;
                }
                arg[i] = -gamma * dist2;
            }
        }
        for (std::size_t i = 0; i < m; ++i) {
            const double live = arg[i] >= -708.0 ? 1.0 : 0.0;
            const double x = live * arg[i];
            const double shifted = x * 1.4426950408889634073599 + kMagic;
            const std::int64_t kb = std::bit_cast<std::int64_t>(shifted);
            const double k = shifted - kMagic;
            double r = x - k * 6.93145751953125e-1;
            r -= k * 1.42860682030941723212e-6;
            const double r2 = r * r;
            double pn = 1.26177193074810590878e-4;
            pn = pn * r2 + 3.02994407707441961300e-2;
            pn = pn * r2 + 9.99999999999999999910e-1;
            pn *= r;
            double qn = 3.00198505138664455042e-6;
            qn = qn * r2 + 2.52448340349684104192e-3;
            qn = qn * r2 + 2.27265548208155028766e-1;
            qn = qn * r2 + 2.0;
            const double e0 = 1.0 + 2.0 * pn / (qn - pn);
            const double e = std::bit_cast<double>(std::bit_cast<std::int64_t>(e0) +
                                                   ((kb - kMagicBits) << 52));
            acc += weights[base + i] * live * e;
        }
    }
    return acc;
}

}  // namespace

FastronModel::FastronModel(std::size_t n, double collision_bias, std::size_t max_updates)
    : weights_(n, 0.0),
      scores_(n, 0.0),
      collision_bias_(collision_bias),
      max_updates_(max_updates) {
    if (n == 0) throw std::invalid_argument("FastronModel: empty model");
    if (!(collision_bias >= 1.0))
        throw std::invalid_argument("FastronModel: collision bias must be >= 1");
    if (max_updates == 0) throw std::invalid_argument("FastronModel: max_updates must be > 0");
}

void FastronModel::apply_weight_delta(std::size_t j, double delta, const Dataset& d) {
    apply_delta_raw(j, delta, d);
    rebuild_classifier_view(d);
}

void FastronModel::apply_delta_raw(std::size_t j, double delta, const Dataset& d) {
    if (d.size() != size()) throw std::invalid_argument("FastronModel: dataset size mismatch");
    const bool was_support = weights_[j] != 0.0;
    weights_[j] += delta;
    const auto row = d.gram_row(j);
    for (std::size_t i = 0; i < scores_.size(); ++i) scores_[i] += delta * row[i];

    const bool is_support = weights_[j] != 0.0;
    if (was_support == is_support) return;
    const auto it = std::lower_bound(support_.begin(), support_.end(), j);
    if (is_support)
        support_.insert(it, j);
    else
        support_.erase(it);
}

void FastronModel::rebuild_classifier_view(const Dataset& d) {
    const std::size_t dof = d.dof();
    view_coords_.resize(support_.size() * dof);
    view_weights_.resize(support_.size());
    for (std::size_t s = 0; s < support_.size(); ++s) {
        const auto p = d.point(support_[s]);
        for (std::size_t k = 0; k < dof; ++k) view_coords_[s * dof + k] = p[k];
        view_weights_[s] = weights_[support_[s]];
    }
}

namespace {

// Largest positive resultant margin y_j * (scores_j - weights_j) among
// support points; these stay correct with their weight zeroed. Ties break
// toward the lowest index. Returns npos when none qualifies.
std::size_t most_redundant_support(const FastronModel& m, const Dataset& d) {
    std::size_t best = static_cast<std::size_t>(-1);
    double best_val = 0.0;
    for (std::size_t j : m.support()) {
        const double v = label_sign(d.label(j)) * (m.scores()[j] - m.weights()[j]);
        if (v > best_val) {
            best_val = v;
            best = j;
        }
    }
    return best;
}

// Worst margin y_i * scores_i over all training points, lowest index on
// ties. Returns npos when every margin is strictly positive.
std::size_t worst_margin_index(const FastronModel& m, const Dataset& d) {
    std::size_t worst = static_cast<std::size_t>(-1);
    double worst_val = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double v = label_sign(d.label(i)) * m.scores()[i];
        if (v <= 0.0 && (worst == static_cast<std::size_t>(-1) || v < worst_val)) {
            worst_val = v;
            worst = i;
        }
    }
    return worst;
}

}  // namespace

std::size_t FastronModel::removal_pass_raw(const Dataset& d) {
    std::size_t removed = 0;
    while (true) {
        const std::size_t j = most_redundant_support(*this, d);
        if (j == static_cast<std::size_t>(-1)) break;
        apply_delta_raw(j, -weights_[j], d);
        ++removed;
    }
    return removed;
}

UpdateReport update(FastronModel& model, const Dataset& d) {
    if (d.size() != model.size()) throw std::invalid_argument("update: dataset size mismatch");

    UpdateReport report;
    for (std::size_t iter = 0; iter < model.max_updates(); ++iter) {
        report.removed_count += model.removal_pass_raw(d);

        const std::size_t j = worst_margin_index(model, d);
        if (j == static_cast<std::size_t>(-1)) {
            report.converged = true;
            report.support_count = model.support_count();
            model.rebuild_classifier_view(d);
            return report;
        }

        // One-step correction: after the update the margin at j is exactly
        // the target (G_jj = 1), biased upward for collision labels.
        const double y = label_sign(d.label(j));
        const double target = d.label(j) == Label::kCollision ? model.collision_bias() : 1.0;
        model.apply_delta_raw(j, target * y - model.scores()[j], d);
        ++report.iterations;
    }
    report.converged = false;
    report.support_count = model.support_count();
    model.rebuild_classifier_view(d);
    return report;
}

std::size_t remove_redundant(FastronModel& model, const Dataset& d) {
    if (d.size() != model.size())
        throw std::invalid_argument("remove_redundant: dataset size mismatch");
    const std::size_t removed = model.removal_pass_raw(d);
    model.rebuild_classifier_view(d);
    return removed;
}

double hypothesis_at(const FastronModel& model, const Dataset& d, std::span<const double> q) {
    if (q.size() != d.dof()) throw std::invalid_argument("hypothesis_at: dof mismatch");
    return gaussian_kernel_sum(model.view_coords_.data(), model.view_weights_.data(),
                               model.view_weights_.size(), d.dof(), d.gamma(), q.data());
}

double hypothesis_at(const FastronModel& model, const Dataset& d, const Configuration& q) {
    return hypothesis_at(model, d, std::span<const double>(q));
}

Label classify(const FastronModel& model, const Dataset& d, std::span<const double> q) {
    return label_from_sign(hypothesis_at(model, d, q));
}

Label classify(const FastronModel& model, const Dataset& d, const Configuration& q) {
    return label_from_sign(hypothesis_at(model, d, q));
}

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

void model_save(const FastronModel& model, const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f) throw std::runtime_error("model_save: cannot open " + path);
    const std::uint64_t n = model.size();
    const double bias = model.collision_bias();
    if (std::fwrite(&n, sizeof n, 1, f.get()) != 1 ||
        std::fwrite(&bias, sizeof bias, 1, f.get()) != 1 ||
        std::fwrite(model.weights().data(), sizeof(double), n, f.get()) != n)
        throw std::runtime_error("model_save: short write");
}

FastronModel model_load(const std::string& path, const Dataset& d) {
    FilePtr f(std::fopen(path.c_str(), "rb"));
    if (!f) throw std::runtime_error("model_load: cannot open " + path);
    std::uint64_t n = 0;
    double bias = 0.0;
    if (std::fread(&n, sizeof n, 1, f.get()) != 1 || std::fread(&bias, sizeof bias, 1, f.get()) != 1)
        throw std::runtime_error("model_load: short read");
    if (n != d.size()) throw std::runtime_error("model_load: dataset size mismatch");

    FastronModel model(n, bias);
    if (std::fread(model.weights_.data(), sizeof(double), n, f.get()) != n)
        throw std::runtime_error("model_load: short read");

    // Scores are not stored; rebuild from the Gram matrix.
    for (std::size_t j = 0; j < n; ++j) {
        const double w = model.weights_[j];
        if (w == 0.0) continue;
        model.support_.push_back(j);
        const auto row = d.gram_row(j);
        for (std::size_t i = 0; i < n; ++i) model.scores_[i] += w * row[i];
    }
    model.rebuild_classifier_view(d);
    return model;
}

}  // namespace fastron
