#include "fbms/intersection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fbms {

namespace {

using Tri = std::array<Vec3, 3>;
using Vec2 = Eigen::Vector2d;

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double tri_scale(const Tri& t) {
    return std::max({(t[1] - t[0]).norm(), (t[2] - t[1]).norm(), (t[0] - t[2]).norm()});
}

std::optional<Vec3> segment_triangle(const Vec3& p, const Vec3& q, const Tri& t, double eps) {
    const Vec3 n = (t[1] - t[0]).cross(t[2] - t[0]);
    const double h = tri_scale(t);
    const double tol = eps * n.norm() * std::max(h, (q - p).norm());
    const double dp = n.dot(p - t[0]);
    const double dq = n.dot(q - t[0]);
    if ((dp > tol && dq > tol) || (dp < -tol && dq < -tol)) return std::nullopt;
    if (std::abs(dp) <= tol && std::abs(dq) <= tol) return std::nullopt;
    const double s = std::clamp(dp / (dp - dq), 0.0, 1.0);
    const Vec3 x = p + s * (q - p);
    const double area_tol = -eps * n.norm() * h * h;
    for (int k = 0; k < 3; ++k) {
        const Vec3& a = t[static_cast<std::size_t>(k)];
        const Vec3& b = t[static_cast<std::size_t>((k + 1) % 3)];
        if (n.dot((b - a).cross(x - a)) < area_tol) return std::nullopt;
    }
    return x;
}

std::optional<Vec2> segment_segment_2d(const Vec2& p, const Vec2& p2, const Vec2& q, const Vec2& q2, double eps) {
    const Vec2 r = p2 - p, s = q2 - q;
    const double denom = cross2(r, s);
    const double scale = r.norm() * s.norm();
    if (std::abs(denom) <= eps * scale) {
        // Parallel: collinear overlap shows up through endpoint containment.
        if (std::abs(cross2(q - p, r)) > eps * r.norm() * std::max((q - p).norm(), r.norm())) return std::nullopt;
        const double rr = r.squaredNorm();
        for (const Vec2& c : {q, q2}) {
            const double t = (c - p).dot(r) / rr;
            if (t >= -eps && t <= 1.0 + eps) return c;
        }
        const double t = (p - q).dot(s) / s.squaredNorm();
        if (t >= -eps && t <= 1.0 + eps) return p;
        return std::nullopt;
    }
    const double t = cross2(q - p, s) / denom;
    const double u = cross2(q - p, r) / denom;
    if (t < -eps || t > 1.0 + eps || u < -eps || u > 1.0 + eps) return std::nullopt;
    return p + t * r;
}

bool point_in_triangle_2d(const Vec2& x, const std::array<Vec2, 3>& t, double eps) {
    const double area = cross2(t[1] - t[0], t[2] - t[0]);
    const double sgn = area >= 0.0 ? 1.0 : -1.0;
    const double tol = -eps * std::abs(area);
    for (int k = 0; k < 3; ++k) {
        const Vec2& a = t[static_cast<std::size_t>(k)];
        const Vec2& b = t[static_cast<std::size_t>((k + 1) % 3)];
        if (sgn * cross2(b - a, x - a) < tol) return false;
    }
    return true;
}

std::optional<Vec3> coplanar_intersection(const Tri& t, const Tri& u, const Vec3& n, double eps) {
    int drop = 0;
    n.cwiseAbs().maxCoeff(&drop);
    const int i0 = (drop + 1) % 3, i1 = (drop + 2) % 3;
    auto flat = [&](const Vec3& p) { return Vec2(p(i0), p(i1)); };
    std::array<Vec2, 3> t2{flat(t[0]), flat(t[1]), flat(t[2])};
    std::array<Vec2, 3> u2{flat(u[0]), flat(u[1]), flat(u[2])};
    // Lift a 2D point back onto the plane of t.
    auto lift = [&](const Vec2& x) {
        const double area = cross2(t2[1] - t2[0], t2[2] - t2[0]);
        const double l1 = cross2(x - t2[0], t2[2] - t2[0]) / area;
        const double l2 = cross2(t2[1] - t2[0], x - t2[0]) / area;
        return Vec3(t[0] + l1 * (t[1] - t[0]) + l2 * (t[2] - t[0]));
    };
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            const auto x = segment_segment_2d(t2[static_cast<std::size_t>(a)], t2[static_cast<std::size_t>((a + 1) % 3)],
                                              u2[static_cast<std::size_t>(b)], u2[static_cast<std::size_t>((b + 1) % 3)], eps);
            if (x) return lift(*x);
        }
    }
    if (point_in_triangle_2d(u2[0], t2, eps)) return u[0];
    if (point_in_triangle_2d(t2[0], u2, eps)) return t[0];
    return std::nullopt;
}

Vec3 closest_on_triangle(const Vec3& p, const Tri& t) {
    const Vec3 &a = t[0], &b = t[1], &c = t[2];
    const Vec3 ab = b - a, ac = c - a, ap = p - a;
    const double d1 = ab.dot(ap), d2 = ac.dot(ap);
    if (d1 <= 0.0 && d2 <= 0.0) return a;
    const Vec3 bp = p - b;
    const double d3 = ab.dot(bp), d4 = ac.dot(bp);
    if (d3 >= 0.0 && d4 <= d3) return b;
    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + (d1 / (d1 - d3)) * ab;
    const Vec3 cp = p - c;
    const double d5 = ab.dot(cp), d6 = ac.dot(cp);
    if (d6 >= 0.0 && d5 <= d6) return c;
    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + (d2 / (d2 - d6)) * ac;
    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
    const double denom = 1.0 / (va + vb + vc);
    return a + ab * (vb * denom) + ac * (vc * denom);
}

double segment_distance(const Vec3& p1, const Vec3& q1, const Vec3& p2, const Vec3& q2) {
    const Vec3 d1 = q1 - p1, d2 = q2 - p2, r = p1 - p2;
    const double a = d1.squaredNorm(), e = d2.squaredNorm(), f = d2.dot(r);
    double s = 0.0, t = 0.0;
    if (a <= 1e-300 && e <= 1e-300) return r.norm();
    if (a <= 1e-300) {
        t = std::clamp(f / e, 0.0, 1.0);
    } else {
        const double c = d1.dot(r);
        if (e <= 1e-300) {
            s = std::clamp(-c / a, 0.0, 1.0);
        } else {
            const double b = d1.dot(d2);
            const double denom = a * e - b * b;
            s = denom > 0.0 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
            t = (b * s + f) / e;
            if (t < 0.0) {
                t = 0.0;
                s = std::clamp(-c / a, 0.0, 1.0);
            } else if (t > 1.0) {
                t = 1.0;
                s = std::clamp((b - c) / a, 0.0, 1.0);
            }
        }
    }
    return ((p1 + d1 * s) - (p2 + d2 * t)).norm();
}

struct Box {
    Vec3 lo, hi;
};

Box box_of(const Tri& t, double grow) {
    Box b{t[0].cwiseMin(t[1]).cwiseMin(t[2]), t[0].cwiseMax(t[1]).cwiseMax(t[2])};
    b.lo.array() -= grow;
    b.hi.array() += grow;
    return b;
}

bool overlap(const Box& a, const Box& b) {
    return (a.lo.array() <= b.hi.array()).all() && (b.lo.array() <= a.hi.array()).all();
}

Tri triangle(const TriMesh& m, int f) {
    const Face& face = m.faces()[static_cast<std::size_t>(f)];
    return {m.vertex(face[0]), m.vertex(face[1]), m.vertex(face[2])};
}

double max_edge(const TriMesh& m) {
    double h = 0.0;
    for (const Edge& e : m.edges()) h = std::max(h, (m.vertex(e.v1) - m.vertex(e.v0)).norm());
    return h;
}

}  // namespace

std::optional<Vec3> triangle_intersection(const Tri& t, const Tri& u) {
    constexpr double eps = 1e-12;
    const Vec3 nt = (t[1] - t[0]).cross(t[2] - t[0]);
    const double tol = eps * nt.norm() * std::max(tri_scale(t), tri_scale(u));
    bool coplanar = true;
    for (const Vec3& p : u) coplanar = coplanar && std::abs(nt.dot(p - t[0])) <= tol;
    if (coplanar) return coplanar_intersection(t, u, nt, eps);
    for (int k = 0; k < 3; ++k) {
        if (auto x = segment_triangle(t[static_cast<std::size_t>(k)], t[static_cast<std::size_t>((k + 1) % 3)], u, eps)) return x;
        if (auto x = segment_triangle(u[static_cast<std::size_t>(k)], u[static_cast<std::size_t>((k + 1) % 3)], t, eps)) return x;
    }
    return std::nullopt;
}

double triangle_distance(const Tri& t, const Tri& u) {
    if (triangle_intersection(t, u)) return 0.0;
    double d = std::numeric_limits<double>::infinity();
    for (const Vec3& p : t) d = std::min(d, (p - closest_on_triangle(p, u)).norm());
    for (const Vec3& p : u) d = std::min(d, (p - closest_on_triangle(p, t)).norm());
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            d = std::min(d, segment_distance(t[static_cast<std::size_t>(i)], t[static_cast<std::size_t>((i + 1) % 3)],
                                             u[static_cast<std::size_t>(j)], u[static_cast<std::size_t>((j + 1) % 3)]));
        }
    }
    return d;
}

IntersectionResult verify_intersection(const TriMesh& a, const TriMesh& b) {
    const double margin = std::max(max_edge(a), max_edge(b));
    IntersectionResult out;
    out.distance_lower_bound = margin;

    std::vector<Box> boxes_b(b.num_faces());
    Box world{Vec3::Constant(std::numeric_limits<double>::infinity()), Vec3::Constant(-std::numeric_limits<double>::infinity())};
    for (std::size_t f = 0; f < b.num_faces(); ++f) {
        boxes_b[f] = box_of(triangle(b, static_cast<int>(f)), margin);
        world.lo = world.lo.cwiseMin(boxes_b[f].lo);
        world.hi = world.hi.cwiseMax(boxes_b[f].hi);
    }
    const Vec3 extent = world.hi - world.lo;
    const double cell = std::max(2.0 * margin, extent.maxCoeff() / 256.0);
    std::array<int, 3> dims{};
    for (int k = 0; k < 3; ++k) dims[static_cast<std::size_t>(k)] = std::max(1, static_cast<int>(std::ceil(extent(k) / cell)));
    auto cell_index = [&](const Vec3& p, int k) {
        return std::clamp(static_cast<int>(std::floor((p(k) - world.lo(k)) / cell)), 0, dims[static_cast<std::size_t>(k)] - 1);
    };
    auto linear = [&](int i, int j, int k) { return (static_cast<std::size_t>(k) * dims[1] + j) * dims[0] + i; };

    std::vector<std::vector<int>> grid(static_cast<std::size_t>(dims[0]) * dims[1] * dims[2]);
    for (std::size_t f = 0; f < boxes_b.size(); ++f) {
        for (int k = cell_index(boxes_b[f].lo, 2); k <= cell_index(boxes_b[f].hi, 2); ++k)
            for (int j = cell_index(boxes_b[f].lo, 1); j <= cell_index(boxes_b[f].hi, 1); ++j)
                for (int i = cell_index(boxes_b[f].lo, 0); i <= cell_index(boxes_b[f].hi, 0); ++i)
                    grid[linear(i, j, k)].push_back(static_cast<int>(f));
    }

    std::vector<int> stamp(b.num_faces(), -1);
    for (int fa = 0; fa < static_cast<int>(a.num_faces()); ++fa) {
        const Tri ta = triangle(a, fa);
        const Box box = box_of(ta, 0.0);
        if (!overlap(box, world)) continue;
        for (int k = cell_index(box.lo, 2); k <= cell_index(box.hi, 2); ++k)
            for (int j = cell_index(box.lo, 1); j <= cell_index(box.hi, 1); ++j)
                for (int i = cell_index(box.lo, 0); i <= cell_index(box.hi, 0); ++i)
                    for (int fb : grid[linear(i, j, k)]) {
                        if (stamp[static_cast<std::size_t>(fb)] == fa) continue;
                        stamp[static_cast<std::size_t>(fb)] = fa;
                        if (!overlap(box, boxes_b[static_cast<std::size_t>(fb)])) continue;
                        ++out.candidate_pairs;
                        const Tri tb = triangle(b, fb);
                        if (auto x = triangle_intersection(ta, tb)) {
                            out.intersects = true;
                            out.witness = *x;
                            out.distance_lower_bound = 0.0;
                            return out;
                        }
                        out.distance_lower_bound = std::min(out.distance_lower_bound, triangle_distance(ta, tb));
                    }
    }
    return out;
}

}  // namespace fbms
