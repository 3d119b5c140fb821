#include "fbms/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fbms/geometry.hpp"
#include "fbms/parallel.hpp"

namespace fbms {

void SolverConfig::validate() const {
    if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
    if (!(tol_H > 0.0) || !(tol_orth > 0.0)) throw std::invalid_argument("solver tolerances must be positive");
    if (!(step.shrink > 0.0 && step.shrink < 1.0)) throw std::invalid_argument("shrink factor must lie in (0, 1)");
    if (!(step.initial_step > 0.0) || !(step.growth >= 1.0)) throw std::invalid_argument("bad step rule");
    if (!(step.sufficient_decrease > 0.0 && step.sufficient_decrease < 1.0)) {
        throw std::invalid_argument("sufficient-decrease constant must lie in (0, 1)");
    }
    if (smoothing && smoothing_interval < 1) throw std::invalid_argument("smoothing interval must be >= 1");
    if (!(balance_weight >= 0.0)) throw std::invalid_argument("balance weight must be >= 0");
}

std::vector<Vec3> area_gradient(const TriMesh& mesh) {
    const kernels::FaceCorners corners = gather_corners(mesh);
    kernels::FaceAreaGradient g;
    g.resize(corners.size());
    const kernels::Isa isa = kernels::active_isa();
    parallel_for(corners.size(), [&](std::size_t b, std::size_t e) { kernels::face_area_gradient(corners, g, b, e, isa); });

    std::vector<Vec3> grad(mesh.num_vertices(), Vec3::Zero());
    const auto& faces = mesh.faces();
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const Vec3 ga(g.gax[f], g.gay[f], g.gaz[f]);
        const Vec3 gb(g.gbx[f], g.gby[f], g.gbz[f]);
        const Vec3 gc(g.gcx[f], g.gcy[f], g.gcz[f]);
        if (!ga.allFinite() || !gb.allFinite() || !gc.allFinite()) {
            throw SolverError("area gradient: degenerate face " + std::to_string(f));
        }
        grad[static_cast<std::size_t>(faces[f][0])] += ga;
        grad[static_cast<std::size_t>(faces[f][1])] += gb;
        grad[static_cast<std::size_t>(faces[f][2])] += gc;
    }
    return grad;
}

MeanCurvature discrete_mean_curvature(const TriMesh& mesh) {
    const kernels::FaceGeometry geom = compute_face_geometry(mesh);
    const std::vector<Vec3> grad = area_gradient(mesh);
    MeanCurvature h;
    h.vertex_area = mixed_vertex_areas(mesh, geom);
    h.normal = vertex_normals(mesh, geom);
    h.vector.assign(mesh.num_vertices(), Vec3::Zero());
    h.scalar.assign(mesh.num_vertices(), 0.0);
    for (int v : mesh.interior_vertices()) {
        const auto i = static_cast<std::size_t>(v);
        if (!(h.vertex_area[i] > 0.0)) throw SolverError("zero vertex area at vertex " + std::to_string(v));
        h.vector[i] = -grad[i] / h.vertex_area[i];
        h.scalar[i] = h.vector[i].dot(h.normal[i]);
        h.interior_sup = std::max(h.interior_sup, std::abs(h.scalar[i]));
    }
    return h;
}

namespace {

int third_vertex(const Face& f, int a, int b) {
    for (int v : f) {
        if (v != a && v != b) return v;
    }
    return -1;
}

// Outward in-face perpendicular of boundary edge (a, b), scaled by |b - a|.
Vec3 edge_conormal(const TriMesh& mesh, int a, int b) {
    for (int f : mesh.vertex_faces(a)) {
        const Face& t = mesh.faces()[static_cast<std::size_t>(f)];
        if (std::find(t.begin(), t.end(), b) == t.end()) continue;
        const Vec3 e = mesh.vertex(b) - mesh.vertex(a);
        const Vec3 n = face_normal(mesh, f);
        Vec3 perp = e.cross(n);
        if (perp.dot(mesh.vertex(third_vertex(t, a, b)) - mesh.vertex(a)) > 0.0) perp = -perp;
        return perp;  // |perp| = |e|
    }
    throw std::logic_error("boundary edge without a face");
}

double angle_between(const Vec3& a, const Vec3& b) { return std::atan2(a.cross(b).norm(), a.dot(b)); }

}  // namespace

std::vector<Vec3> boundary_conormals(const TriMesh& mesh) {
    std::vector<Vec3> out;
    out.reserve(mesh.boundary_vertices().size());
    for (int v : mesh.boundary_vertices()) {
        const auto [prev, next] = mesh.boundary_neighbors(v);
        out.push_back((edge_conormal(mesh, prev, v) + edge_conormal(mesh, v, next)).normalized());
    }
    return out;
}

double orthogonality_defect(const TriMesh& mesh, const ConvexAmbient& ambient) {
    const auto& bv = mesh.boundary_vertices();
    for (int v : bv) {
        if (!ambient.on_boundary(mesh.vertex(v), 1e-6)) {
            std::ostringstream msg;
            msg << "orthogonality defect: boundary vertex " << v << " is off the ambient boundary (offset "
                << ambient.boundary_offset(mesh.vertex(v)) << ")";
            throw SolverError(msg.str());
        }
    }
    const std::vector<Vec3> conormals = boundary_conormals(mesh);
    double worst = 0.0;
    for (std::size_t i = 0; i < bv.size(); ++i) {
        const Vec3 p = ambient.project_to_boundary(mesh.vertex(bv[i]));
        worst = std::max(worst, angle_between(conormals[i], ambient.boundary_normal(p)));
    }
    return worst;
}

Vec3 boundary_moment(const TriMesh& mesh) {
    Vec3 m = Vec3::Zero();
    for (const auto& loop : mesh.boundary_loops()) {
        for (std::size_t i = 0; i < loop.size(); ++i) {
            const Vec3& a = mesh.vertex(loop[i]);
            const Vec3& b = mesh.vertex(loop[(i + 1) % loop.size()]);
            m += 0.5 * (b - a).norm() * (a + b);
        }
    }
    return m;
}

namespace {

// Objective: area + (w/2) |boundary_moment|^2. The penalty vanishes on every
// free-boundary minimal surface in a ball centred at the origin (the
// coordinate functions are Steklov eigenfunctions, so they have zero
// boundary mean) and makes the translation-like unstable direction of the
// area uphill.
struct Objective {
    double weight = 0.0;

    double value(const TriMesh& mesh) const {
        double v = area(mesh);
        if (weight > 0.0) v += 0.5 * weight * boundary_moment(mesh).squaredNorm();
        return v;
    }

    std::vector<Vec3> gradient(const TriMesh& mesh) const {
        std::vector<Vec3> g = area_gradient(mesh);
        if (weight > 0.0) {
            const Vec3 m = boundary_moment(mesh);
            for (const auto& loop : mesh.boundary_loops()) {
                for (std::size_t i = 0; i < loop.size(); ++i) {
                    const int ia = loop[i], ib = loop[(i + 1) % loop.size()];
                    const Vec3& a = mesh.vertex(ia);
                    const Vec3& b = mesh.vertex(ib);
                    const double len = (b - a).norm();
                    const Vec3 dir = (b - a) / len;
                    const double mid_dot = 0.5 * (a + b).dot(m);
                    // d/da of (len/2)(a+b).m = (len/2) m - ((a+b).m / 2) dir
                    g[static_cast<std::size_t>(ia)] += weight * (0.5 * len * m - mid_dot * dir);
                    g[static_cast<std::size_t>(ib)] += weight * (0.5 * len * m + mid_dot * dir);
                }
            }
        }
        return g;
    }
};

// Search direction: the negative gradient restricted to normal motion.
// Interior vertices move along their vertex normal; boundary vertices move
// within the tangent plane of the ambient boundary, across the boundary
// curve. Tangential sliding is excluded: it only reparametrizes the surface,
// and along the boundary it would collapse the inscribed boundary polygon.
std::vector<Vec3> projected_descent(const TriMesh& mesh, const ConvexAmbient& ambient, const std::vector<Vec3>& grad) {
    const kernels::FaceGeometry geom = compute_face_geometry(mesh);
    const std::vector<Vec3> normals = vertex_normals(mesh, geom);
    std::vector<Vec3> d(grad.size(), Vec3::Zero());
    for (int v : mesh.interior_vertices()) {
        const auto i = static_cast<std::size_t>(v);
        d[i] = -grad[i].dot(normals[i]) * normals[i];
    }
    for (int v : mesh.boundary_vertices()) {
        const auto i = static_cast<std::size_t>(v);
        const Vec3 n = ambient.boundary_normal(ambient.project_to_boundary(mesh.vertex(v)));
        const auto [prev, next] = mesh.boundary_neighbors(v);
        Vec3 t = mesh.vertex(next) - mesh.vertex(prev);
        t = (t - t.dot(n) * n).normalized();
        d[i] = -grad[i];
        d[i] -= d[i].dot(n) * n;
        d[i] -= d[i].dot(t) * t;
    }
    return d;
}

std::vector<Vec3> displaced(const TriMesh& mesh, const ConvexAmbient& ambient, const std::vector<Vec3>& dir, double t) {
    std::vector<Vec3> x = mesh.vertices();
    for (std::size_t v = 0; v < x.size(); ++v) x[v] += t * dir[v];
    for (int v : mesh.boundary_vertices()) {
        const auto i = static_cast<std::size_t>(v);
        x[i] = ambient.project_to_boundary(x[i]);
    }
    return x;
}

// Moves interior vertices halfway towards their one-ring centroid, within
// the vertex tangent plane.
std::vector<Vec3> tangential_smoothing(const TriMesh& mesh) {
    const std::vector<Vec3> normals = vertex_normals(mesh);
    std::vector<Vec3> x = mesh.vertices();
    for (int v : mesh.interior_vertices()) {
        const auto i = static_cast<std::size_t>(v);
        Vec3 c = Vec3::Zero();
        const auto ring = mesh.vertex_neighbors(v);
        for (int w : ring) c += mesh.vertex(w);
        c /= static_cast<double>(ring.size());
        Vec3 d = c - mesh.vertex(v);
        d -= d.dot(normals[i]) * normals[i];
        x[i] += 0.5 * d;
    }
    return x;
}

}  // namespace

SolveResult minimize_area(const TriMesh& input, const ConvexAmbient& ambient, const SolverConfig& config) {
    config.validate();
    if (input.boundary_vertices().empty()) {
        throw MeshError(MeshErrorKind::closed_surface, "closed surface rejected: free-boundary solve needs a boundary");
    }
    for (int v : input.boundary_vertices()) {
        if (!ambient.on_boundary(input.vertex(v), 1e-9)) {
            throw SolverError("initial boundary vertex " + std::to_string(v) + " is not on the ambient boundary");
        }
    }

    const Objective objective{ambient.kind() == ConvexAmbient::Kind::round_ball ? config.balance_weight : 0.0};
    TriMesh mesh = input;
    ConvergenceReport rep;
    rep.initial_area = area(mesh);
    double value = objective.value(mesh);
    rep.area_history.push_back(value);
    double step = config.step.initial_step;
    std::vector<Vec3> prev_x, prev_d;

    auto converged = [&] {
        rep.final_H_sup = discrete_mean_curvature(mesh).interior_sup;
        rep.final_orth_defect = orthogonality_defect(mesh, ambient);
        return rep.final_H_sup <= config.tol_H && rep.final_orth_defect <= config.tol_orth;
    };

    while (!converged()) {
        if (rep.iterations >= config.max_iters) {
            std::ostringstream msg;
            msg << "not converged after " << rep.iterations << " iterations (sup|H| = " << rep.final_H_sup
                << ", defect = " << rep.final_orth_defect << ")";
            rep.message = msg.str();
            break;
        }
        ++rep.iterations;

        const std::vector<Vec3> grad = objective.gradient(mesh);
        const std::vector<Vec3> dir = projected_descent(mesh, ambient, grad);
        double slope = 0.0;
        for (std::size_t v = 0; v < dir.size(); ++v) slope += grad[v].dot(dir[v]);

        // Trial step: Barzilai-Borwein estimate from the last update, else the
        // last accepted step times the growth factor. Backtracking keeps the
        // objective monotone either way.
        double t = std::min(step * config.step.growth, 1e3 * config.step.initial_step);
        if (!prev_x.empty()) {
            double ss = 0.0, sy = 0.0;
            for (std::size_t v = 0; v < dir.size(); ++v) {
                const Vec3 sv = mesh.vertices()[v] - prev_x[v];
                const Vec3 yv = prev_d[v] - dir[v];
                ss += sv.squaredNorm();
                sy += sv.dot(yv);
            }
            if (sy > 0.0) t = std::min(ss / sy, 1e3 * config.step.initial_step);
        }
        prev_x = mesh.vertices();
        prev_d = dir;
        bool accepted = false;
        while (t >= config.step.min_step) {
            try {
                TriMesh trial = mesh.with_vertices(displaced(mesh, ambient, dir, t));
                const double trial_value = objective.value(trial);
                if (trial_value <= value + config.step.sufficient_decrease * t * slope) {
                    mesh = std::move(trial);
                    value = trial_value;
                    accepted = true;
                    break;
                }
            } catch (const MeshError&) {
                // face collapsed at this step length
            }
            ++rep.rejected_steps;
            t *= config.step.shrink;
        }
        if (!accepted) {
            std::ostringstream msg;
            msg << "line search step underflow at iteration " << rep.iterations << " (sup|H| = " << rep.final_H_sup
                << ", defect = " << rep.final_orth_defect << ")";
            throw SolverError(msg.str());
        }
        step = t;
        rep.area_history.push_back(value);

        if (config.smoothing && rep.iterations % config.smoothing_interval == 0) {
            try {
                TriMesh smoothed = mesh.with_vertices(tangential_smoothing(mesh));
                const double smoothed_value = objective.value(smoothed);
                if (smoothed_value <= value) {
                    mesh = std::move(smoothed);
                    value = smoothed_value;
                    rep.area_history.push_back(value);
                    ++rep.smoothing_passes;
                }
            } catch (const MeshError&) {
            }
        }
    }

    for (std::size_t i = 1; i < rep.area_history.size(); ++i) {
        if (rep.area_history[i] > rep.area_history[i - 1]) throw std::logic_error("objective history increased");
    }
    rep.converged = rep.message.empty();
    rep.final_area = area(mesh);
    rep.final_balance = boundary_moment(mesh).norm();
    rep.final_step = step;
    return {std::move(mesh), std::move(rep)};
}

}  // namespace fbms
