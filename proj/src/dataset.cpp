#include "fastron/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>

namespace fastron {

double kernel(std::span<const double> a, std::span<const double> b, double gamma) {
    if (a.size() != b.size()) throw std::invalid_argument("kernel: dof mismatch");
    if (!(gamma > 0.0)) throw std::invalid_argument("kernel: gamma must be positive");
    double dist2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        dist2 += diff * diff;
    }
    return std::exp(-gamma * dist2);
}

double kernel(const Configuration& a, const Configuration& b, double gamma) {
    return kernel(std::span<const double>(a), std::span<const double>(b), gamma);
}

JointBounds JointBounds::full_range(std::size_t dof) {
    JointBounds b;
    b.lo.assign(dof, -M_PI);
    b.hi.assign(dof, M_PI);
    return b;
}

namespace {

// Integer m with m^dof == n, or 0 when n is not a perfect dof-th power.
std::size_t grid_side(std::size_t n, std::size_t dof) {
    const double guess = std::pow(static_cast<double>(n), 1.0 / static_cast<double>(dof));
    for (std::size_t m = static_cast<std::size_t>(guess) > 1 ? static_cast<std::size_t>(guess) - 1 : 1;
         m <= static_cast<std::size_t>(guess) + 1; ++m) {
        std::size_t prod = 1;
        for (std::size_t k = 0; k < dof; ++k) prod *= m;
        if (prod == n) return m;
    }
    return 0;
}

}  // namespace

Dataset Dataset::build(const SamplerSpec& spec, const JointBounds& bounds, double gamma) {
    if (spec.dof == 0 || spec.n == 0) throw std::invalid_argument("Dataset: empty spec");
    if (bounds.lo.size() != spec.dof || bounds.hi.size() != spec.dof)
        throw std::invalid_argument("Dataset: bounds dof mismatch");
    if (!(gamma > 0.0)) throw std::invalid_argument("Dataset: gamma must be positive");

    Dataset d;
    d.n_ = spec.n;
    d.dof_ = spec.dof;
    d.gamma_ = gamma;
    d.bounds_ = bounds;
    d.coords_.resize(spec.n * spec.dof);
    d.labels_.assign(spec.n, Label::kFree);  // pending the first full KCD sweep

    if (spec.kind == SamplerSpec::Kind::kGrid) {
        const std::size_t m = grid_side(spec.n, spec.dof);
        if (m == 0) throw std::invalid_argument("Dataset: grid requires n = m^dof");
        // Regular lattice over the half-open joint intervals.
        for (std::size_t i = 0; i < spec.n; ++i) {
            std::size_t rem = i;
            for (std::size_t k = 0; k < spec.dof; ++k) {
                const std::size_t cell = rem % m;
                rem /= m;
                const double step = (bounds.hi[k] - bounds.lo[k]) / static_cast<double>(m);
                d.coords_[i * spec.dof + k] = bounds.lo[k] + step * static_cast<double>(cell);
            }
        }
    } else {
        Rng rng(spec.seed);
        for (std::size_t i = 0; i < spec.n; ++i)
            for (std::size_t k = 0; k < spec.dof; ++k)
                d.coords_[i * spec.dof + k] = uniform_real(rng, bounds.lo[k], bounds.hi[k]);
    }

    d.build_gram();
    return d;
}

Dataset Dataset::from_points(const std::vector<Configuration>& points, double gamma) {
    if (points.empty()) throw std::invalid_argument("Dataset: no points");
    if (!(gamma > 0.0)) throw std::invalid_argument("Dataset: gamma must be positive");
    Dataset d;
    d.n_ = points.size();
    d.dof_ = points[0].size();
    if (d.dof_ == 0) throw std::invalid_argument("Dataset: zero-dof point");
    d.gamma_ = gamma;
    d.bounds_ = JointBounds::full_range(d.dof_);
    d.coords_.resize(d.n_ * d.dof_);
    for (std::size_t i = 0; i < d.n_; ++i) {
        if (points[i].size() != d.dof_) throw std::invalid_argument("Dataset: ragged points");
        for (std::size_t k = 0; k < d.dof_; ++k) d.coords_[i * d.dof_ + k] = points[i][k];
    }
    d.labels_.assign(d.n_, Label::kFree);
    d.build_gram();
    return d;
}

void Dataset::build_gram() {
    gram_.resize(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i) {
        gram_[i * n_ + i] = 1.0;
        for (std::size_t j = i + 1; j < n_; ++j) {
            const double v = kernel(point(i), point(j), gamma_);
            gram_[i * n_ + j] = v;
            gram_[j * n_ + i] = v;
        }
    }
}

std::optional<std::size_t> kth_nearest_nonsupport(const Dataset& d,
                                                  std::span<const std::size_t> support,
                                                  std::size_t i, std::size_t k) {
    if (support.empty()) throw std::invalid_argument("kth_nearest_nonsupport: empty support");
    if (k == 0) throw std::invalid_argument("kth_nearest_nonsupport: k must be >= 1");

    std::vector<bool> is_support(d.size(), false);
    for (std::size_t s : support) is_support[s] = true;

    // Top-k by kernel value (descending), ties toward the lower index. k is
    // tiny in practice, so an insertion scan beats sorting the whole row.
    const auto row = d.gram_row(i);
    std::vector<std::pair<double, std::size_t>> best;
    best.reserve(k + 1);
    for (std::size_t j = 0; j < d.size(); ++j) {
        if (is_support[j]) continue;
        std::size_t pos = best.size();
        while (pos > 0 && row[j] > best[pos - 1].first) --pos;
        if (pos >= k) continue;
        best.insert(best.begin() + static_cast<std::ptrdiff_t>(pos), {row[j], j});
        if (best.size() > k) best.pop_back();
    }
    if (best.size() < k) return std::nullopt;
    return best[k - 1].second;
}

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void write_all(std::FILE* f, const void* data, std::size_t bytes) {
    if (std::fwrite(data, 1, bytes, f) != bytes)
        throw std::runtime_error("dataset_save: short write");
}

void read_all(std::FILE* f, void* data, std::size_t bytes) {
    if (std::fread(data, 1, bytes, f) != bytes)
        throw std::runtime_error("dataset_load: short read");
}

}  // namespace

void dataset_save(const Dataset& d, const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f) throw std::runtime_error("dataset_save: cannot open " + path);
    const std::uint64_t dof = d.dof(), n = d.size();
    const double gamma = d.gamma();
    write_all(f.get(), &dof, sizeof dof);
    write_all(f.get(), &n, sizeof n);
    write_all(f.get(), &gamma, sizeof gamma);
    for (std::size_t i = 0; i < d.size(); ++i)
        write_all(f.get(), d.point(i).data(), d.dof() * sizeof(double));
    for (std::size_t i = 0; i < d.size(); ++i) {
        const std::int8_t y = static_cast<std::int8_t>(label_sign(d.label(i)));
        write_all(f.get(), &y, sizeof y);
    }
}

Dataset dataset_load(const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "rb"));
    if (!f) throw std::runtime_error("dataset_load: cannot open " + path);
    std::uint64_t dof = 0, n = 0;
    double gamma = 0.0;
    read_all(f.get(), &dof, sizeof dof);
    read_all(f.get(), &n, sizeof n);
    read_all(f.get(), &gamma, sizeof gamma);
    if (dof == 0 || n == 0 || !(gamma > 0.0)) throw std::runtime_error("dataset_load: bad header");

    std::vector<Configuration> points(n, Configuration(dof));
    for (auto& p : points) read_all(f.get(), p.data(), dof * sizeof(double));
    Dataset d = Dataset::from_points(points, gamma);
    for (std::size_t i = 0; i < n; ++i) {
        std::int8_t y = 0;
        read_all(f.get(), &y, sizeof y);
        if (y != 1 && y != -1) throw std::runtime_error("dataset_load: bad label");
        d.set_label(i, y > 0 ? Label::kCollision : Label::kFree);
    }
    return d;
}

}  // namespace fastron
