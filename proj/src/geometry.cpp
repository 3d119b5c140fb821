#include "fbms/geometry.hpp"

#include <cmath>

#include "fbms/parallel.hpp"

namespace fbms {

kernels::FaceCorners gather_corners(const TriMesh& mesh) {
    kernels::FaceCorners c;
    c.resize(mesh.num_faces());
    const auto& faces = mesh.faces();
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const Vec3& a = mesh.vertex(faces[f][0]);
        const Vec3& b = mesh.vertex(faces[f][1]);
        const Vec3& p = mesh.vertex(faces[f][2]);
        c.ax[f] = a.x(), c.ay[f] = a.y(), c.az[f] = a.z();
        c.bx[f] = b.x(), c.by[f] = b.y(), c.bz[f] = b.z();
        c.cx[f] = p.x(), c.cy[f] = p.y(), c.cz[f] = p.z();
    }
    return c;
}

kernels::FaceGeometry compute_face_geometry(const TriMesh& mesh) {
    const kernels::FaceCorners corners = gather_corners(mesh);
    kernels::FaceGeometry geom;
    geom.resize(corners.size());
    const kernels::Isa isa = kernels::active_isa();
    parallel_for(corners.size(), [&](std::size_t b, std::size_t e) { kernels::face_geometry(corners, geom, b, e, isa); });
    return geom;
}

std::vector<Vec3> vertex_normals(const TriMesh& mesh, const kernels::FaceGeometry& geom) {
    std::vector<Vec3> n(mesh.num_vertices(), Vec3::Zero());
    const auto& faces = mesh.faces();
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const Vec3 fn = geom.area[f] * Vec3(geom.nx[f], geom.ny[f], geom.nz[f]);
        for (int v : faces[f]) n[static_cast<std::size_t>(v)] += fn;
    }
    for (Vec3& v : n) v.normalize();
    return n;
}

std::vector<Vec3> vertex_normals(const TriMesh& mesh) { return vertex_normals(mesh, compute_face_geometry(mesh)); }

std::vector<double> mixed_vertex_areas(const TriMesh& mesh, const kernels::FaceGeometry& geom) {
    std::vector<double> va(mesh.num_vertices(), 0.0);
    const auto& faces = mesh.faces();
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const std::array<double, 3> cot{geom.cot_a[f], geom.cot_b[f], geom.cot_c[f]};
        const double a = geom.area[f];
        const int obtuse = cot[0] < 0.0 ? 0 : cot[1] < 0.0 ? 1 : cot[2] < 0.0 ? 2 : -1;
        for (int k = 0; k < 3; ++k) {
            const int v = faces[f][static_cast<std::size_t>(k)];
            double share;
            if (obtuse < 0) {
                // Voronoi: (|e_prev|^2 cot(next corner) + |e_next|^2 cot(prev corner)) / 8
                const int kn = (k + 1) % 3, kp = (k + 2) % 3;
                const Vec3& p = mesh.vertex(v);
                const double l_next = (mesh.vertex(faces[f][static_cast<std::size_t>(kn)]) - p).squaredNorm();
                const double l_prev = (mesh.vertex(faces[f][static_cast<std::size_t>(kp)]) - p).squaredNorm();
                share = (l_next * cot[static_cast<std::size_t>(kp)] + l_prev * cot[static_cast<std::size_t>(kn)]) / 8.0;
            } else {
                share = (k == obtuse) ? a / 2.0 : a / 4.0;
            }
            va[static_cast<std::size_t>(v)] += share;
        }
    }
    return va;
}

std::vector<double> vertex_angle_sums(const TriMesh& mesh, const kernels::FaceGeometry& geom) {
    std::vector<double> sums(mesh.num_vertices(), 0.0);
    const auto& faces = mesh.faces();
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const std::array<double, 3> cot{geom.cot_a[f], geom.cot_b[f], geom.cot_c[f]};
        for (int k = 0; k < 3; ++k) {
            // angle = atan2(1, cot) lies in (0, pi)
            sums[static_cast<std::size_t>(faces[f][static_cast<std::size_t>(k)])] += std::atan2(1.0, cot[static_cast<std::size_t>(k)]);
        }
    }
    return sums;
}

}  // namespace fbms
