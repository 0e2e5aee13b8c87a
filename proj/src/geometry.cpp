#include "fastron/geometry.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <utility>

namespace fastron {

namespace {

constexpr double kDuplicateVertexTol = 1e-9;
constexpr double kHullCollinearTol = 1e-12;

double signed_area(const std::vector<Vec2>& v) {
    double area = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Vec2& p = v[i];
        const Vec2& q = v[(i + 1) % v.size()];
        area += p.cross(q);
    }
    return 0.5 * area;
}

}  // namespace

ConvexPolygon::ConvexPolygon(std::vector<Vec2> vertices) : verts_(std::move(vertices)) {
    if (verts_.size() < 3) throw std::invalid_argument("ConvexPolygon: need at least 3 vertices");
    if (signed_area(verts_) < 0.0) std::reverse(verts_.begin(), verts_.end());

    const std::size_t n = verts_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = verts_[i];
        const Vec2& b = verts_[(i + 1) % n];
        const Vec2& c = verts_[(i + 2) % n];
        if ((b - a).norm() <= kDuplicateVertexTol)
            throw std::invalid_argument("ConvexPolygon: duplicate consecutive vertices");
        if ((b - a).cross(c - b) <= 0.0)
            throw std::invalid_argument("ConvexPolygon: not strictly convex");
    }
}

ConvexPolygon ConvexPolygon::translated(Vec2 delta) const {
    std::vector<Vec2> v(verts_);
    for (Vec2& p : v) p = p + delta;
    return ConvexPolygon(std::move(v));
}

Aabb ConvexPolygon::bounding_box() const {
    Aabb box{verts_[0], verts_[0]};
    for (const Vec2& p : verts_) {
        box.lo.x = std::min(box.lo.x, p.x);
        box.lo.y = std::min(box.lo.y, p.y);
        box.hi.x = std::max(box.hi.x, p.x);
        box.hi.y = std::max(box.hi.y, p.y);
    }
    return box;
}

Vec2 ConvexPolygon::centroid() const {
    Vec2 c;
    for (const Vec2& p : verts_) c = c + p;
    return c * (1.0 / static_cast<double>(verts_.size()));
}

ArmModel::ArmModel(std::vector<double> lengths, double thickness, Vec2 base_pos)
    : link_lengths(std::move(lengths)), link_thickness(thickness), base(base_pos) {
    if (link_lengths.empty()) throw std::invalid_argument("ArmModel: need at least one link");
    double min_len = link_lengths[0];
    for (double len : link_lengths) {
        if (!(len > 0.0)) throw std::invalid_argument("ArmModel: link lengths must be positive");
        min_len = std::min(min_len, len);
    }
    if (link_thickness < 0.0 || link_thickness >= min_len)
        throw std::invalid_argument("ArmModel: thickness must be in [0, min link length)");
}

double ArmModel::total_length() const {
    double sum = 0.0;
    for (double len : link_lengths) sum += len;
    return sum;
}

std::vector<Vec2> joint_positions(const ArmModel& arm, const Configuration& q) {
    if (q.size() != arm.dof()) throw std::invalid_argument("joint_positions: dof mismatch");
    std::vector<Vec2> joints;
    joints.reserve(arm.dof() + 1);
    joints.push_back(arm.base);
    double angle = 0.0;
    for (std::size_t k = 0; k < arm.dof(); ++k) {
        angle += q[k];
        joints.push_back(joints.back() + Vec2{std::cos(angle), std::sin(angle)} * arm.link_lengths[k]);
    }
    return joints;
}

std::vector<LinkShape> forward_kinematics(const ArmModel& arm, const Configuration& q) {
    if (q.size() != arm.dof()) throw std::invalid_argument("forward_kinematics: dof mismatch");
    std::vector<LinkShape> links;
    links.reserve(arm.dof());
    for_each_link(arm, q, [&](const LinkShape& shape) { links.push_back(shape); });
    return links;
}

bool sat_intersects(const ConvexPolygon& a, const ConvexPolygon& b) {
    const auto separated_on_axes = [](const ConvexPolygon& edges_of, const ConvexPolygon& other) {
        const auto va = edges_of.vertices();
        for (std::size_t i = 0; i < va.size(); ++i) {
            const Vec2 edge = va[(i + 1) % va.size()] - va[i];
            const Vec2 axis{edge.y, -edge.x};  // outward normal of a CCW edge

            double min_a = va[0].dot(axis), max_a = min_a;
            for (const Vec2& p : va) {
                const double v = p.dot(axis);
                min_a = std::min(min_a, v);
                max_a = std::max(max_a, v);
            }
            const auto vb = other.vertices();
            double min_b = vb[0].dot(axis), max_b = min_b;
            for (const Vec2& p : vb) {
                const double v = p.dot(axis);
                min_b = std::min(min_b, v);
                max_b = std::max(max_b, v);
            }
            if (max_a < min_b || max_b < min_a) return true;
        }
        return false;
    };
    return !separated_on_axes(a, b) && !separated_on_axes(b, a);
}

std::vector<Vec2> convex_hull(std::vector<Vec2> points) {
    std::sort(points.begin(), points.end(), [](Vec2 a, Vec2 b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    points.erase(std::unique(points.begin(), points.end(),
                             [](Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }),
                 points.end());
    const std::size_t n = points.size();
    if (n < 3) return points;

    std::vector<Vec2> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {  // lower chain
        while (k >= 2 && (hull[k - 1] - hull[k - 2]).cross(points[i] - hull[k - 1]) <= kHullCollinearTol)
            --k;
        hull[k++] = points[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) {  // upper chain
        while (k >= lower && (hull[k - 1] - hull[k - 2]).cross(points[i] - hull[k - 1]) <= kHullCollinearTol)
            --k;
        hull[k++] = points[i];
    }
    hull.resize(k - 1);
    return hull;
}

ConvexPolygon random_convex_polygon(Rng& rng, Vec2 center,
                                    std::pair<double, double> radius_range,
                                    std::pair<int, int> vertex_count_range) {
    const auto [r_min, r_max] = radius_range;
    const auto [n_min, n_max] = vertex_count_range;
    if (!(0.0 < r_min && r_min <= r_max))
        throw std::invalid_argument("random_convex_polygon: bad radius range");
    if (!(3 <= n_min && n_min <= n_max))
        throw std::invalid_argument("random_convex_polygon: bad vertex count range");

    while (true) {
        const int n = static_cast<int>(uniform_index(rng, n_min, n_max));
        std::vector<double> angles(n);
        for (double& a : angles) a = uniform_real(rng, 0.0, 2.0 * M_PI);
        std::sort(angles.begin(), angles.end());

        std::vector<Vec2> star(n);
        for (int i = 0; i < n; ++i) {
            const double r = uniform_real(rng, r_min, r_max);
            star[i] = center + Vec2{std::cos(angles[i]), std::sin(angles[i])} * r;
        }
        std::vector<Vec2> hull = convex_hull(std::move(star));
        if (hull.size() >= 3) return ConvexPolygon(std::move(hull));
        // Degenerate draw (collinear star); retry with fresh randomness.
    }
}

std::vector<Vec2> clip_to_box(const ConvexPolygon& poly, const Aabb& box) {
    // Sutherland-Hodgman against the four box half-planes. inside(p) <= 0
    // keeps p; edges are intersected by linear interpolation.
    std::vector<Vec2> verts(poly.vertices().begin(), poly.vertices().end());

    const auto clip_halfplane = [&](auto&& violation) {
        std::vector<Vec2> out;
        out.reserve(verts.size() + 1);
        for (std::size_t i = 0; i < verts.size(); ++i) {
            const Vec2 cur = verts[i];
            const Vec2 nxt = verts[(i + 1) % verts.size()];
            const double vc = violation(cur);
            const double vn = violation(nxt);
            if (vc <= 0.0) out.push_back(cur);
            if ((vc < 0.0 && vn > 0.0) || (vc > 0.0 && vn < 0.0)) {
                const double t = vc / (vc - vn);
                out.push_back(cur + (nxt - cur) * t);
            }
        }
        verts = std::move(out);
    };

    clip_halfplane([&](Vec2 p) { return box.lo.x - p.x; });
    if (verts.empty()) return {};
    clip_halfplane([&](Vec2 p) { return p.x - box.hi.x; });
    if (verts.empty()) return {};
    clip_halfplane([&](Vec2 p) { return box.lo.y - p.y; });
    if (verts.empty()) return {};
    clip_halfplane([&](Vec2 p) { return p.y - box.hi.y; });

    // Clipping can leave collinear or coincident vertices; canonicalize.
    std::vector<Vec2> hull = convex_hull(std::move(verts));

    // Drop near-duplicate consecutive vertices (corner-grazing clips).
    std::vector<Vec2> cleaned;
    cleaned.reserve(hull.size());
    for (const Vec2& p : hull) {
        if (cleaned.empty() || (p - cleaned.back()).norm() > 2e-9) cleaned.push_back(p);
    }
    while (cleaned.size() >= 2 && (cleaned.back() - cleaned.front()).norm() <= 2e-9)
        cleaned.pop_back();
    if (cleaned.size() < 3) return {};
    return cleaned;
}

double distance_to_polygon(Vec2 p, const ConvexPolygon& poly) {
    const auto verts = poly.vertices();
    bool inside = true;
    double best2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < verts.size(); ++i) {
        const Vec2 a = verts[i];
        const Vec2 b = verts[(i + 1) % verts.size()];
        const Vec2 e = b - a;
        if (e.cross(p - a) < 0.0) inside = false;
        const double t = std::clamp((p - a).dot(e) / e.norm2(), 0.0, 1.0);
        best2 = std::min(best2, (p - (a + e * t)).norm2());
    }
    return inside ? 0.0 : std::sqrt(best2);
}

}  // namespace fastron
