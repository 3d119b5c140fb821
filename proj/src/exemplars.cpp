#include "fbms/exemplars.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "fbms/geometry.hpp"

namespace fbms {

namespace {

// Quad strip between two rings of `n` vertices; diagonals alternate with
// the parity of (row + column) so the grid has no preferred direction.
void stitch_rings(std::vector<Face>& faces, int inner, int outer, int n, int row) {
    for (int j = 0; j < n; ++j) {
        const int jn = (j + 1) % n;
        const int a = inner + j, d = inner + jn;
        const int b = outer + j, c = outer + jn;
        if ((row + j) % 2 == 0) {
            faces.push_back({a, b, c});
            faces.push_back({a, c, d});
        } else {
            faces.push_back({a, b, d});
            faces.push_back({b, c, d});
        }
    }
}

TriMesh planar_disk(int n_radial, int n_angular, double radius, double height) {
    if (n_radial < 2 || n_angular < 8) throw std::invalid_argument("disk needs n_radial >= 2 and n_angular >= 8");
    std::vector<Vec3> v;
    v.reserve(1 + static_cast<std::size_t>(n_radial) * static_cast<std::size_t>(n_angular));
    v.emplace_back(0.0, 0.0, height);
    for (int i = 1; i <= n_radial; ++i) {
        const double r = radius * static_cast<double>(i) / n_radial;
        for (int j = 0; j < n_angular; ++j) {
            const double t = 2.0 * std::numbers::pi * j / n_angular;
            v.emplace_back(r * std::cos(t), r * std::sin(t), height);
        }
    }
    std::vector<Face> f;
    for (int j = 0; j < n_angular; ++j) f.push_back({0, 1 + j, 1 + (j + 1) % n_angular});
    for (int i = 1; i < n_radial; ++i) stitch_rings(f, 1 + (i - 1) * n_angular, 1 + i * n_angular, n_angular, i);
    return TriMesh::build(std::move(v), std::move(f));
}

// Uniform double in [0, 1) from the top 53 bits; std distributions are not
// portable across standard libraries.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

CatenoidParameters critical_catenoid_parameters() {
    auto f = [](double t) { return t * std::tanh(t) - 1.0; };
    double lo = 1.0, hi = 1.5;
    if (!(f(lo) < 0.0 && f(hi) > 0.0)) throw std::logic_error("catenoid root not bracketed");
    while (hi - lo > 1e-14) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    CatenoidParameters p;
    p.s0 = 0.5 * (lo + hi);
    const double ch = std::cosh(p.s0);
    p.scale = 1.0 / std::sqrt(ch * ch + p.s0 * p.s0);
    p.boundary_radius = p.scale * ch;
    p.boundary_height = p.scale * p.s0;
    p.waist_radius = p.scale;
    return p;
}

TriMesh equatorial_disk(int n_radial, int n_angular) { return planar_disk(n_radial, n_angular, 1.0, 0.0); }

TriMesh horizontal_disk(int n_radial, int n_angular, double height) {
    if (!(std::abs(height) < 1.0)) throw std::invalid_argument("disk height must lie in (-1, 1)");
    return planar_disk(n_radial, n_angular, std::sqrt(1.0 - height * height), height);
}

TriMesh critical_catenoid(int n_s, int n_theta) {
    if (n_s < 8 || n_theta < 16) throw std::invalid_argument("catenoid needs n_s >= 8 and n_theta >= 16");
    const CatenoidParameters par = critical_catenoid_parameters();
    std::vector<Vec3> v;
    v.reserve(static_cast<std::size_t>(n_s + 1) * static_cast<std::size_t>(n_theta));
    for (int i = 0; i <= n_s; ++i) {
        const double s = -par.s0 + 2.0 * par.s0 * i / n_s;
        for (int j = 0; j < n_theta; ++j) {
            const double t = 2.0 * std::numbers::pi * j / n_theta;
            Vec3 p = par.scale * Vec3(std::cosh(s) * std::cos(t), std::cosh(s) * std::sin(t), s);
            if (i == 0 || i == n_s) p.normalize();  // boundary circles on the unit sphere
            v.push_back(p);
        }
    }
    std::vector<Face> f;
    for (int i = 0; i < n_s; ++i) stitch_rings(f, i * n_theta, (i + 1) * n_theta, n_theta, i);
    return TriMesh::build(std::move(v), std::move(f));
}

TriMesh perturb(const TriMesh& mesh, const ConvexAmbient& ambient, double amplitude, std::uint64_t seed) {
    if (!(amplitude >= 0.0)) throw std::invalid_argument("perturbation amplitude must be >= 0");
    if (amplitude == 0.0) return mesh;

    // Field: a few low-frequency plane waves, rescaled to sup-norm `amplitude`
    // over the vertices.
    constexpr int kModes = 6;
    std::mt19937_64 rng(seed);
    std::array<Vec3, kModes> wave;
    std::array<double, kModes> phase{}, weight{};
    for (int k = 0; k < kModes; ++k) {
        Vec3 dir(2.0 * uniform01(rng) - 1.0, 2.0 * uniform01(rng) - 1.0, 2.0 * uniform01(rng) - 1.0);
        if (dir.norm() < 1e-3) dir = Vec3::UnitZ();
        wave[static_cast<std::size_t>(k)] = dir.normalized() * (std::numbers::pi * (0.5 + 1.5 * uniform01(rng)));
        phase[static_cast<std::size_t>(k)] = 2.0 * std::numbers::pi * uniform01(rng);
        weight[static_cast<std::size_t>(k)] = 2.0 * uniform01(rng) - 1.0;
    }
    std::vector<double> field(mesh.num_vertices(), 0.0);
    double sup = 0.0;
    for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
        double s = 0.0;
        for (std::size_t k = 0; k < kModes; ++k) s += weight[k] * std::sin(wave[k].dot(mesh.vertices()[v]) + phase[k]);
        field[v] = s;
        sup = std::max(sup, std::abs(s));
    }
    if (!(sup > 0.0)) return mesh;

    const kernels::FaceGeometry geom = compute_face_geometry(mesh);
    const std::vector<Vec3> normals = vertex_normals(mesh, geom);
    std::vector<Vec3> moved = mesh.vertices();
    for (std::size_t v = 0; v < moved.size(); ++v) {
        Vec3 d = (amplitude * field[v] / sup) * normals[v];
        if (mesh.is_boundary_vertex(static_cast<int>(v))) {
            const Vec3 n = ambient.boundary_normal(moved[v]);
            d -= d.dot(n) * n;
            moved[v] = ambient.project_to_boundary(moved[v] + d);
        } else {
            moved[v] += d;
        }
    }

    TriMesh out = [&] {
        try {
            return mesh.with_vertices(std::move(moved));
        } catch (const MeshError& e) {
            throw MeshError(MeshErrorKind::degenerate_face,
                            std::string("perturbation amplitude too large: ") + e.what());
        }
    }();
    for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
        const Vec3 before(geom.nx[f], geom.ny[f], geom.nz[f]);
        if (face_normal(out, static_cast<int>(f)).dot(before) <= 0.0) {
            std::ostringstream msg;
            msg << "perturbation amplitude too large: face " << f << " folds over";
            throw MeshError(MeshErrorKind::degenerate_face, msg.str());
        }
    }
    return out;
}

}  // namespace fbms
