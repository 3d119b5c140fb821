#include <algorithm>
#include <cmath>

#include "fbms/checks.hpp"
#include "fbms/geometry.hpp"

namespace fbms {

namespace {

std::array<Vec3, 2> tangent_basis(const Vec3& n) {
    const Vec3 a = std::abs(n.x()) < 0.6 ? Vec3::UnitX() : (std::abs(n.y()) < 0.6 ? Vec3::UnitY() : Vec3::UnitZ());
    const Vec3 t1 = (a - a.dot(n) * n).normalized();
    return {t1, n.cross(t1)};
}

std::vector<int> two_ring(const TriMesh& mesh, int v) {
    std::vector<int> out;
    for (int u : mesh.vertex_neighbors(v)) {
        out.push_back(u);
        for (int w : mesh.vertex_neighbors(u)) out.push_back(w);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    out.erase(std::remove(out.begin(), out.end(), v), out.end());
    return out;
}

struct Fit {
    bool ok = false;
    double d = 0, e = 0, a = 0, b = 0, c = 0;
};

Fit fit_quadric(const TriMesh& mesh, int v, const std::vector<int>& ring, const Vec3& n) {
    Fit fit;
    if (ring.size() < 5) return fit;
    const auto [t1, t2] = tangent_basis(n);
    const Vec3& p = mesh.vertex(v);
    double h = 0.0;
    for (int u : ring) h += (mesh.vertex(u) - p).norm();
    h /= static_cast<double>(ring.size());

    const auto rows = static_cast<Eigen::Index>(ring.size());
    Eigen::MatrixXd a(rows, 5);
    Eigen::VectorXd z(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const Vec3 q = (mesh.vertex(ring[static_cast<std::size_t>(i)]) - p) / h;
        const double x = q.dot(t1), y = q.dot(t2);
        a.row(i) << x, y, x * x, x * y, y * y;
        z(i) = q.dot(n);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    if (!(s(4) > 1e-6 * s(0))) return fit;
    const Eigen::VectorXd coef = svd.solve(z);
    fit.ok = coef.allFinite();
    fit.d = coef(0);
    fit.e = coef(1);
    fit.a = coef(2) / h;
    fit.b = coef(3) / h;
    fit.c = coef(4) / h;
    return fit;
}

}  // namespace

ShapeField second_fundamental_form(const TriMesh& mesh) {
    const auto geom = compute_face_geometry(mesh);
    const std::vector<Vec3> normals = vertex_normals(mesh, geom);
    const std::size_t nv = mesh.num_vertices();

    ShapeField out;
    out.normal.resize(nv);
    out.frame.resize(nv);
    out.shape_operator.assign(nv, Eigen::Matrix2d::Zero());
    out.k1.assign(nv, 0.0);
    out.k2.assign(nv, 0.0);
    out.h_norm2.assign(nv, 0.0);
    out.gauss.assign(nv, 0.0);
    out.flagged.assign(nv, 0);
    out.vertex_area = mixed_vertex_areas(mesh, geom);

    double total = 0.0, excluded = 0.0, boundary = 0.0;
    for (std::size_t i = 0; i < nv; ++i) {
        const int v = static_cast<int>(i);
        const std::vector<int> ring = two_ring(mesh, v);
        Vec3 n = normals[i];
        Fit fit = fit_quadric(mesh, v, ring, n);
        if (fit.ok) {
            // Refit in the frame of the fitted tangent plane.
            const auto [t1, t2] = tangent_basis(n);
            n = (n - fit.d * t1 - fit.e * t2).normalized();
            fit = fit_quadric(mesh, v, ring, n);
        }
        out.normal[i] = n;
        out.frame[i] = tangent_basis(n);
        total += out.vertex_area[i];
        if (mesh.is_boundary_vertex(v)) boundary += out.vertex_area[i];
        if (!fit.ok) {
            out.flagged[i] = 1;
            excluded += out.vertex_area[i];
            continue;
        }
        Eigen::Matrix2d first;
        first << 1.0 + fit.d * fit.d, fit.d * fit.e, fit.d * fit.e, 1.0 + fit.e * fit.e;
        Eigen::Matrix2d second;
        second << 2.0 * fit.a, fit.b, fit.b, 2.0 * fit.c;
        second /= std::sqrt(1.0 + fit.d * fit.d + fit.e * fit.e);
        const Eigen::Matrix2d l_inv = first.llt().matrixL().solve(Eigen::Matrix2d::Identity());
        Eigen::Matrix2d shape = l_inv * second * l_inv.transpose();
        shape = 0.5 * (shape + shape.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(shape);
        out.shape_operator[i] = shape;
        out.k1[i] = eig.eigenvalues()(0);
        out.k2[i] = eig.eigenvalues()(1);
        out.h_norm2[i] = out.k1[i] * out.k1[i] + out.k2[i] * out.k2[i];
        out.gauss[i] = out.k1[i] * out.k2[i];
    }
    out.excluded_area_fraction = total > 0.0 ? excluded / total : 0.0;
    out.boundary_area_fraction = total > 0.0 ? boundary / total : 0.0;
    return out;
}

}  // namespace fbms
