#include "fbms/steklov.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SparseCholesky>

#include "fbms/geometry.hpp"

namespace fbms {

SparseMatrix stiffness_matrix(const TriMesh& mesh) {
    const kernels::FaceGeometry geom = compute_face_geometry(mesh);
    const auto& faces = mesh.faces();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(faces.size() * 9);
    for (std::size_t f = 0; f < faces.size(); ++f) {
        if (!(geom.area[f] > 0.0) || !std::isfinite(geom.cot_a[f] + geom.cot_b[f] + geom.cot_c[f])) {
            throw SteklovError("stiffness matrix: degenerate face " + std::to_string(f));
        }
        const std::array<double, 3> cot{geom.cot_a[f], geom.cot_b[f], geom.cot_c[f]};
        for (int k = 0; k < 3; ++k) {
            // edge opposite corner k
            const int i = faces[f][static_cast<std::size_t>((k + 1) % 3)];
            const int j = faces[f][static_cast<std::size_t>((k + 2) % 3)];
            const double w = 0.5 * cot[static_cast<std::size_t>(k)];
            trip.emplace_back(i, j, -w);
            trip.emplace_back(j, i, -w);
            trip.emplace_back(i, i, w);
            trip.emplace_back(j, j, w);
        }
    }
    const auto n = static_cast<Eigen::Index>(mesh.num_vertices());
    SparseMatrix k(n, n);
    k.setFromTriplets(trip.begin(), trip.end());
    return k;
}

Eigen::VectorXd boundary_mass(const TriMesh& mesh) {
    const auto& bv = mesh.boundary_vertices();
    Eigen::VectorXd m(static_cast<Eigen::Index>(bv.size()));
    for (std::size_t i = 0; i < bv.size(); ++i) {
        const auto [prev, next] = mesh.boundary_neighbors(bv[i]);
        const Vec3& p = mesh.vertex(bv[i]);
        m(static_cast<Eigen::Index>(i)) = 0.5 * ((p - mesh.vertex(prev)).norm() + (mesh.vertex(next) - p).norm());
    }
    return m;
}

namespace {

struct Blocks {
    SparseMatrix ii, ib;
    Eigen::MatrixXd bb;
};

Blocks split_blocks(const TriMesh& mesh, const SparseMatrix& k) {
    const auto& bv = mesh.boundary_vertices();
    const auto& iv = mesh.interior_vertices();
    std::vector<int> local(mesh.num_vertices(), -1);
    for (std::size_t i = 0; i < iv.size(); ++i) local[static_cast<std::size_t>(iv[i])] = static_cast<int>(i);

    const auto ni = static_cast<Eigen::Index>(iv.size());
    const auto nb = static_cast<Eigen::Index>(bv.size());
    Blocks out{SparseMatrix(ni, ni), SparseMatrix(ni, nb), Eigen::MatrixXd::Zero(nb, nb)};
    std::vector<Eigen::Triplet<double>> tii, tib;
    for (Eigen::Index c = 0; c < k.outerSize(); ++c) {
        for (SparseMatrix::InnerIterator it(k, c); it; ++it) {
            const int r = static_cast<int>(it.row());
            const int col = static_cast<int>(it.col());
            const int rb = mesh.boundary_slot(r), cb = mesh.boundary_slot(col);
            if (rb >= 0 && cb >= 0) {
                out.bb(rb, cb) += it.value();
            } else if (rb < 0 && cb < 0) {
                tii.emplace_back(local[static_cast<std::size_t>(r)], local[static_cast<std::size_t>(col)], it.value());
            } else if (rb < 0) {
                tib.emplace_back(local[static_cast<std::size_t>(r)], cb, it.value());
            }
        }
    }
    out.ii.setFromTriplets(tii.begin(), tii.end());
    out.ib.setFromTriplets(tib.begin(), tib.end());
    return out;
}

void require_connected_with_boundary(const TriMesh& mesh) {
    if (mesh.boundary_vertices().empty()) {
        throw MeshError(MeshErrorKind::closed_surface, "closed surface rejected: Steklov problem needs a boundary");
    }
    if (mesh.num_components() != 1) throw SteklovError("Steklov problem needs a connected mesh");
}

// Makes the first entry with |u_i| > 1e-8 max|u| positive.
void fix_sign(Eigen::Ref<Eigen::VectorXd> u) {
    const double cut = 1e-8 * u.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        if (std::abs(u(i)) > cut) {
            if (u(i) < 0.0) u = -u;
            return;
        }
    }
}

// Orthonormal basis of the complement of unit vector q (Householder).
Eigen::MatrixXd complement_basis(const Eigen::VectorXd& q) {
    const Eigen::Index n = q.size();
    Eigen::VectorXd v = q;
    v(0) += (q(0) >= 0.0 ? 1.0 : -1.0);
    const double vv = v.squaredNorm();
    Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n) - (2.0 / vv) * v * v.transpose();
    return h.rightCols(n - 1);
}

// Lowest `count` eigenpairs of a symmetric positive definite matrix by
// block inverse iteration with Rayleigh-Ritz (shift 0; the constant mode
// is already deflated).
std::pair<Eigen::VectorXd, Eigen::MatrixXd> lowest_by_inverse_iteration(const Eigen::MatrixXd& a, Eigen::Index count,
                                                                        const SteklovOptions& options) {
    const Eigen::Index n = a.rows();
    const Eigen::Index block = std::min<Eigen::Index>(n, count + std::max<Eigen::Index>(4, count / 2));
    Eigen::LDLT<Eigen::MatrixXd> factor(a);
    if (factor.info() != Eigen::Success) throw SteklovError("shift-invert factorization failed");

    // Deterministic start: smooth cosine modes over the node index.
    Eigen::MatrixXd x(n, block);
    for (Eigen::Index j = 0; j < block; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            x(i, j) = std::cos(3.14159265358979323846 * static_cast<double>((j + 1) * (2 * i + 1)) / (2.0 * n)) +
                      1e-3 * std::sin(static_cast<double>(7 * i + 13 * j + 1));
        }
    }
    Eigen::VectorXd theta;
    Eigen::MatrixXd ritz;
    for (int it = 0; it < options.max_iterations; ++it) {
        x = factor.solve(x);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
        x = qr.householderQ() * Eigen::MatrixXd::Identity(n, block);
        const Eigen::MatrixXd small = x.transpose() * a * x;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (small + small.transpose()));
        theta = eig.eigenvalues();
        ritz = x * eig.eigenvectors();
        x = ritz;
        const Eigen::MatrixXd res = a * ritz.leftCols(count) - ritz.leftCols(count) * theta.head(count).asDiagonal();
        double worst = 0.0;
        for (Eigen::Index j = 0; j < count; ++j) worst = std::max(worst, res.col(j).norm() / std::max(1.0, theta(j)));
        if (worst <= std::max(options.tolerance, 1e-13 * a.norm())) {
            return {theta.head(count), ritz.leftCols(count)};
        }
    }
    throw SteklovError("shift-invert iteration did not converge");
}

}  // namespace

Eigen::MatrixXd dtn_schur(const TriMesh& mesh) {
    require_connected_with_boundary(mesh);
    const SparseMatrix k = stiffness_matrix(mesh);
    Blocks b = split_blocks(mesh, k);
    Eigen::MatrixXd s = b.bb;
    if (b.ii.rows() > 0) {
        Eigen::SimplicialLDLT<SparseMatrix> solver(b.ii);
        if (solver.info() != Eigen::Success) {
            throw SteklovError("interior stiffness factorization failed (singular K_ii)");
        }
        const Eigen::MatrixXd kib = Eigen::MatrixXd(b.ib);
        const Eigen::MatrixXd x = solver.solve(kib);
        if (solver.info() != Eigen::Success || !x.allFinite()) {
            const auto d = solver.vectorD();
            std::ostringstream msg;
            msg << "interior solve failed; LDLT pivot range [" << d.minCoeff() << ", " << d.maxCoeff() << "]";
            throw SteklovError(msg.str());
        }
        s.noalias() -= kib.transpose() * x;
    }
    return 0.5 * (s + s.transpose());
}

SteklovSpectrum generalized_spectrum(const Eigen::MatrixXd& dtn, const Eigen::VectorXd& mass, int m,
                                     const SteklovOptions& options) {
    const Eigen::Index n = dtn.rows();
    if (m < 1 || m > n) throw SteklovError("requested eigenvalue count must lie in [1, number of boundary nodes]");
    if (mass.size() != n || !(mass.minCoeff() > 0.0)) throw SteklovError("boundary mass must be positive");

    const Eigen::VectorXd inv_sqrt = mass.cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd c = inv_sqrt.asDiagonal() * dtn * inv_sqrt.asDiagonal();
    const Eigen::VectorXd q = mass.cwiseSqrt().normalized();

    SteklovSpectrum out;
    out.multiplicity_gap = options.multiplicity_gap;
    out.eigenvalues.resize(m);
    out.eigenfunctions.resize(n, m);
    out.eigenvalues(0) = 0.0;
    out.eigenfunctions.col(0) = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(mass.sum()));

    if (m > 1) {
        const Eigen::MatrixXd basis = complement_basis(q);
        Eigen::MatrixXd reduced = basis.transpose() * c * basis;
        reduced = 0.5 * (reduced + reduced.transpose());
        Eigen::VectorXd vals;
        Eigen::MatrixXd vecs;
        if (n <= options.dense_limit) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(reduced);
            if (eig.info() != Eigen::Success) throw SteklovError("dense eigensolver did not converge");
            vals = eig.eigenvalues().head(m - 1);
            vecs = eig.eigenvectors().leftCols(m - 1);
            out.method = "dense";
        } else {
            std::tie(vals, vecs) = lowest_by_inverse_iteration(reduced, m - 1, options);
            out.method = "shift-invert";
        }
        for (Eigen::Index k = 0; k + 1 < m; ++k) {
            out.eigenvalues(k + 1) = vals(k);
            Eigen::VectorXd u = inv_sqrt.asDiagonal() * (basis * vecs.col(k));
            u /= std::sqrt(u.dot(mass.cwiseProduct(u)));
            fix_sign(u);
            out.eigenfunctions.col(k + 1) = u;
        }
    } else {
        out.method = "dense";
    }

    out.multiplicity.assign(static_cast<std::size_t>(m), 1);
    for (Eigen::Index start = 0; start < m;) {
        Eigen::Index end = start + 1;
        while (end < m) {
            const double hi = std::abs(out.eigenvalues(end));
            if (hi == 0.0 || (out.eigenvalues(end) - out.eigenvalues(end - 1)) / hi > options.multiplicity_gap) break;
            ++end;
        }
        for (Eigen::Index k = start; k < end; ++k) out.multiplicity[static_cast<std::size_t>(k)] = static_cast<int>(end - start);
        start = end;
    }
    return out;
}

SteklovSpectrum steklov_spectrum(const TriMesh& mesh, int m, const SteklovOptions& options) {
    return generalized_spectrum(dtn_schur(mesh), boundary_mass(mesh), m, options);
}

double sigma1(const TriMesh& mesh) {
    if (mesh.boundary_vertices().size() < 2) throw SteklovError("sigma1 needs at least two boundary nodes");
    return steklov_spectrum(mesh, 2).eigenvalues(1);
}

double rayleigh_quotient(const Eigen::MatrixXd& dtn, const Eigen::VectorXd& mass, const Eigen::VectorXd& g) {
    return g.dot(dtn * g) / g.dot(mass.cwiseProduct(g));
}

HarmonicExtension harmonic_extension(const TriMesh& mesh, const Eigen::VectorXd& boundary_values) {
    require_connected_with_boundary(mesh);
    const auto& bv = mesh.boundary_vertices();
    const auto& iv = mesh.interior_vertices();
    if (boundary_values.size() != static_cast<Eigen::Index>(bv.size())) {
        throw SteklovError("harmonic extension needs one value per boundary vertex");
    }
    HarmonicExtension out;
    out.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_vertices()));
    for (std::size_t i = 0; i < bv.size(); ++i) out.values(bv[i]) = boundary_values(static_cast<Eigen::Index>(i));
    if (!iv.empty()) {
        const Blocks b = split_blocks(mesh, stiffness_matrix(mesh));
        Eigen::SimplicialLDLT<SparseMatrix> solver(b.ii);
        if (solver.info() != Eigen::Success) throw SteklovError("interior stiffness factorization failed");
        const Eigen::VectorXd inner = solver.solve(-(b.ib * boundary_values));
        if (solver.info() != Eigen::Success || !inner.allFinite()) throw SteklovError("harmonic extension solve failed");
        for (std::size_t i = 0; i < iv.size(); ++i) out.values(iv[i]) = inner(static_cast<Eigen::Index>(i));

        const double lo = boundary_values.minCoeff(), hi = boundary_values.maxCoeff();
        for (Eigen::Index i = 0; i < inner.size(); ++i) {
            out.max_principle_violation = std::max({out.max_principle_violation, inner(i) - hi, lo - inner(i)});
        }
        out.max_principle_holds = out.max_principle_violation <= 1e-10;
    }
    return out;
}

}  // namespace fbms
