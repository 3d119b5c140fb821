#include "support.hpp"

#include <cmath>
#include <numbers>

#include "fbms/exemplars.hpp"

namespace fbms::test {

namespace {
constexpr double kPi = std::numbers::pi;
}

TriMesh sphere_cap(double r, double theta_max, int n_rings, int n_angular) {
    std::vector<Vec3> v{Vec3(0, 0, r)};
    std::vector<Face> f;
    for (int i = 1; i <= n_rings; ++i) {
        const double th = theta_max * i / n_rings;
        for (int j = 0; j < n_angular; ++j) {
            const double ph = 2.0 * kPi * (j + 0.5 * (i % 2)) / n_angular;
            v.emplace_back(r * std::sin(th) * std::cos(ph), r * std::sin(th) * std::sin(ph), r * std::cos(th));
        }
    }
    auto id = [&](int ring, int j) { return 1 + (ring - 1) * n_angular + (j % n_angular); };
    for (int j = 0; j < n_angular; ++j) f.push_back({0, id(1, j), id(1, j + 1)});
    for (int i = 1; i < n_rings; ++i) {
        for (int j = 0; j < n_angular; ++j) {
            if (i % 2) {
                f.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
                f.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
            } else {
                f.push_back({id(i, j), id(i + 1, j), id(i, j + 1)});
                f.push_back({id(i, j + 1), id(i + 1, j), id(i + 1, j + 1)});
            }
        }
    }
    return TriMesh::build(std::move(v), std::move(f));
}

TriMesh punctured_torus(int n_u, int n_v) {
    std::vector<Vec3> v;
    for (int i = 0; i < n_u; ++i) {
        for (int j = 0; j < n_v; ++j) {
            const double u = 2.0 * kPi * i / n_u, w = 2.0 * kPi * j / n_v;
            v.emplace_back((2.0 + 0.7 * std::cos(w)) * std::cos(u), (2.0 + 0.7 * std::cos(w)) * std::sin(u), 0.7 * std::sin(w));
        }
    }
    auto id = [&](int i, int j) { return (i % n_u) * n_v + (j % n_v); };
    std::vector<Face> f;
    for (int i = 0; i < n_u; ++i) {
        for (int j = 0; j < n_v; ++j) {
            if (i == 0 && j == 0) continue;
            f.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            f.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
    return TriMesh::build(std::move(v), std::move(f));
}

TriMesh octahedron() {
    std::vector<Vec3> v{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    std::vector<Face> f{{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4}, {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
    return TriMesh::build(std::move(v), std::move(f));
}

Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
    return q.normalized().toRotationMatrix();
}

TriMesh random_surface(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> nr(2, 4), na(8, 20);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const TriMesh disk = equatorial_disk(nr(rng), na(rng));
    const double a = 0.3 * u(rng), b = 0.3 * u(rng), c = 0.3 * u(rng), jitter = 0.15 / disk.num_vertices();
    std::vector<Vec3> v = disk.vertices();
    for (Vec3& p : v) {
        p.x() += jitter * u(rng);
        p.y() += jitter * u(rng);
        p.z() = a * p.x() * p.x() + b * p.x() * p.y() + c * std::sin(2.0 * p.y());
    }
    const Eigen::Matrix3d rot = random_rotation(rng);
    const Vec3 shift(u(rng), u(rng), u(rng));
    const double scale = std::exp(u(rng));
    for (Vec3& p : v) p = scale * (rot * p) + shift;
    return disk.with_vertices(std::move(v));
}

std::vector<Vec3> finite_difference_area_gradient(const TriMesh& mesh, double h) {
    std::vector<Vec3> g(mesh.num_vertices());
    std::vector<Vec3> v = mesh.vertices();
    auto area_of = [&](const std::vector<Vec3>& pos) {
        double a = 0.0;
        for (const Face& f : mesh.faces()) {
            a += 0.5 * (pos[static_cast<std::size_t>(f[1])] - pos[static_cast<std::size_t>(f[0])])
                           .cross(pos[static_cast<std::size_t>(f[2])] - pos[static_cast<std::size_t>(f[0])])
                           .norm();
        }
        return a;
    };
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (int k = 0; k < 3; ++k) {
            const double x = v[i](k);
            v[i](k) = x + h;
            const double up = area_of(v);
            v[i](k) = x - h;
            const double down = area_of(v);
            v[i](k) = x;
            g[i](k) = (up - down) / (2.0 * h);
        }
    }
    return g;
}

}  // namespace fbms::test
