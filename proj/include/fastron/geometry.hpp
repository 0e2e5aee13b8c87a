#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "fastron/rng.hpp"
#include "fastron/types.hpp"

namespace fastron {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(Vec2 r) const { return {x + r.x, y + r.y}; }
    constexpr Vec2 operator-(Vec2 r) const { return {x - r.x, y - r.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }

    constexpr double dot(Vec2 r) const { return x * r.x + y * r.y; }
    // z-component of the 3-D cross product; positive when r is CCW from *this.
    constexpr double cross(Vec2 r) const { return x * r.y - y * r.x; }
    constexpr double norm2() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm2()); }
};

constexpr Vec2 operator*(double s, Vec2 v) { return {v.x * s, v.y * s}; }

// Axis-aligned rectangle, used for workspace bounds.
struct Aabb {
    Vec2 lo;
    Vec2 hi;

    bool contains(Vec2 p) const {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
    }
    double width() const { return hi.x - lo.x; }
    double height() const { return hi.y - lo.y; }
};

// Strictly convex polygon with counter-clockwise vertex order. Construction
// normalizes winding and rejects degenerate input (< 3 vertices, repeated
// consecutive vertices within 1e-9, or any non-left turn).
class ConvexPolygon {
public:
    explicit ConvexPolygon(std::vector<Vec2> vertices);

    std::span<const Vec2> vertices() const { return verts_; }
    std::size_t size() const { return verts_.size(); }

    // Farthest vertex in direction d (GJK support query).
    Vec2 support(Vec2 d) const {
        const Vec2* best = &verts_[0];
        double best_dot = best->dot(d);
        for (std::size_t i = 1; i < verts_.size(); ++i) {
            const double v = verts_[i].dot(d);
            if (v > best_dot) {
                best_dot = v;
                best = &verts_[i];
            }
        }
        return *best;
    }

    ConvexPolygon translated(Vec2 delta) const;
    Aabb bounding_box() const;
    Vec2 centroid() const;

private:
    std::vector<Vec2> verts_;
};

// Planar serial chain: each link is a segment of given length, rendered in
// the workspace as an oriented rectangle of the arm's link thickness.
struct ArmModel {
    std::vector<double> link_lengths;  // meters, each > 0
    double link_thickness = 0.0;       // meters, >= 0, < min link length
    Vec2 base;

    ArmModel(std::vector<double> lengths, double thickness, Vec2 base_pos = {});

    std::size_t dof() const { return link_lengths.size(); }
    double total_length() const;
};

// Workspace embodiment of one link: an oriented rectangle (degenerating to a
// segment when the arm has zero thickness).
struct LinkShape {
    Vec2 center;
    Vec2 half_extents;  // (half length, half thickness)
    double rotation = 0.0;

    std::array<Vec2, 4> corners() const {
        const double c = std::cos(rotation), s = std::sin(rotation);
        const Vec2 u{c, s}, v{-s, c};
        const Vec2 ex = u * half_extents.x, ey = v * half_extents.y;
        return {center + ex - ey, center + ex + ey, center - ex + ey, center - ex - ey};
    }

    Vec2 support(Vec2 d) const {
        const double c = std::cos(rotation), s = std::sin(rotation);
        const Vec2 u{c, s}, v{-s, c};
        const double hx = d.dot(u) >= 0.0 ? half_extents.x : -half_extents.x;
        const double hy = d.dot(v) >= 0.0 ? half_extents.y : -half_extents.y;
        return center + u * hx + v * hy;
    }
};

template <class T>
concept SupportShape = requires(const T& shape, Vec2 d) {
    { shape.support(d) } -> std::convertible_to<Vec2>;
};

// Joint positions of the chain: dof+1 points starting at the arm base. Joint
// angles accumulate along the chain. Throws std::invalid_argument on a
// dimension mismatch.
std::vector<Vec2> joint_positions(const ArmModel& arm, const Configuration& q);

// One oriented rectangle per link, spanning consecutive joints.
std::vector<LinkShape> forward_kinematics(const ArmModel& arm, const Configuration& q);

// Visits each link shape in order without materializing the chain; the hot
// path for collision checks.
template <class Fn>
void for_each_link(const ArmModel& arm, const Configuration& q, Fn&& fn) {
    Vec2 pos = arm.base;
    double angle = 0.0;
    const double half_t = 0.5 * arm.link_thickness;
    for (std::size_t k = 0; k < arm.link_lengths.size(); ++k) {
        angle += q[k];
        const double len = arm.link_lengths[k];
        const Vec2 dir{std::cos(angle), std::sin(angle)};
        const Vec2 end = pos + dir * len;
        fn(LinkShape{(pos + end) * 0.5, Vec2{0.5 * len, half_t}, angle});
        pos = end;
    }
}

namespace detail {

constexpr int kGjkMaxIterations = 64;
constexpr double kGjkTolerance = 1e-10;

// Direction perpendicular to v, oriented so that it points toward `toward`.
inline Vec2 perp_toward(Vec2 v, Vec2 toward) {
    Vec2 p{-v.y, v.x};
    if (p.dot(toward) < 0.0) p = -p;
    return p;
}

}  // namespace detail

// GJK boolean intersection test over support functions. Touching contact
// counts as intersecting. On iteration-cap exhaustion the answer is the
// conservative `true`.
template <SupportShape A, SupportShape B>
bool gjk_intersects(const A& a, const B& b) {
    const auto cso_support = [&](Vec2 d) { return a.support(d) - b.support(-d); };

    Vec2 d{1.0, 0.0};
    Vec2 simplex[3];
    simplex[0] = cso_support(d);
    if (simplex[0].dot(d) < 0.0) return false;
    int n = 1;
    d = -simplex[0];

    for (int iter = 0; iter < detail::kGjkMaxIterations; ++iter) {
        const double dn2 = d.norm2();
        if (dn2 <= detail::kGjkTolerance * detail::kGjkTolerance) return true;  // origin on simplex

        const Vec2 p = cso_support(d);
        const double proj = p.dot(d);
        if (proj < 0.0) return false;  // supporting hyperplane separates the origin

        // Support progress: if the new point extends no further toward the
        // origin than the simplex already does, the gap is below tolerance.
        double best = simplex[0].dot(d);
        for (int i = 1; i < n; ++i) best = std::max(best, simplex[i].dot(d));
        if (proj - best <= detail::kGjkTolerance * std::sqrt(dn2)) return true;

        simplex[n++] = p;
        if (n == 2) {
            const Vec2 av = simplex[1];  // newest
            const Vec2 ab = simplex[0] - av;
            const Vec2 ao = -av;
            if (ab.dot(ao) > 0.0) {
                d = detail::perp_toward(ab, ao);
            } else {
                simplex[0] = av;
                n = 1;
                d = ao;
            }
        } else {
            const Vec2 av = simplex[2];  // newest
            const Vec2 ab = simplex[1] - av;
            const Vec2 ac = simplex[0] - av;
            const Vec2 ao = -av;
            const Vec2 ab_perp = detail::perp_toward(ab, -ac);
            const Vec2 ac_perp = detail::perp_toward(ac, -ab);
            if (ab_perp.dot(ao) > 0.0) {
                simplex[0] = simplex[1];
                simplex[1] = av;
                n = 2;
                d = ab_perp;
            } else if (ac_perp.dot(ao) > 0.0) {
                simplex[1] = av;
                n = 2;
                d = ac_perp;
            } else {
                return true;  // origin inside the triangle (boundary included)
            }
        }
    }
    return true;  // cap exhausted: prefer the false-positive answer
}

// Separating-axis test over all edge normals of both polygons. Brute-force
// oracle for differential testing against GJK; touching counts as
// intersecting (separation requires a strictly positive gap).
bool sat_intersects(const ConvexPolygon& a, const ConvexPolygon& b);

// Monotone-chain convex hull in CCW order; collinear points are dropped so
// the result is strictly convex. Returns fewer than 3 points on degenerate
// input.
std::vector<Vec2> convex_hull(std::vector<Vec2> points);

// Random strictly convex polygon: sorted random angles on a random-radius
// star around `center`, then the convex hull. Deterministic given the rng
// state.
ConvexPolygon random_convex_polygon(Rng& rng, Vec2 center,
                                    std::pair<double, double> radius_range,
                                    std::pair<int, int> vertex_count_range);

// Axis-aligned clip of a convex polygon. Returns the clipped polygon, or an
// empty vertex list when the intersection is empty or degenerate.
std::vector<Vec2> clip_to_box(const ConvexPolygon& poly, const Aabb& box);

// Euclidean distance from a point to a convex polygon; zero when the point
// is inside or on the boundary.
double distance_to_polygon(Vec2 p, const ConvexPolygon& poly);

}  // namespace fastron
