#include "properties.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "fbms/solver.hpp"
#include "fbms/steklov.hpp"
#include "support.hpp"

namespace fbms::test {

namespace {

template <class Case>
PropertyOutcome run_cases(int cases, std::uint64_t seed, Case&& one) {
    PropertyOutcome out;
    std::mt19937_64 rng(seed);
    for (int i = 0; i < cases; ++i) {
        const TriMesh mesh = random_surface(rng);
        const auto [err, pass] = one(mesh, rng);
        ++out.cases;
        out.worst = std::max(out.worst, err);
        if (!pass) {
            ++out.failures;
            if (out.first_failure.empty()) {
                std::ostringstream s;
                s << "case " << i << ": error " << err;
                out.first_failure = s.str();
            }
        }
    }
    return out;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

PropertyOutcome area_gradient_matches_finite_differences(int cases, std::uint64_t seed) {
    return run_cases(cases, seed, [](const TriMesh& mesh, std::mt19937_64&) {
        const double h = 1e-6 * std::sqrt(area(mesh));
        const auto exact = area_gradient(mesh);
        const auto fd = finite_difference_area_gradient(mesh, h);
        double num = 0.0, den = 0.0;
        for (std::size_t v = 0; v < exact.size(); ++v) {
            num += (exact[v] - fd[v]).squaredNorm();
            den += exact[v].squaredNorm();
        }
        const double err = std::sqrt(num / den);
        return std::pair{err, err <= 1e-6};
    });
}

PropertyOutcome steklov_scaling_law(int cases, std::uint64_t seed) {
    return run_cases(cases, seed, [](const TriMesh& mesh, std::mt19937_64& rng) {
        const double rho = std::exp(std::uniform_real_distribution<double>(-1.5, 1.5)(rng));
        const int m = std::min<int>(5, static_cast<int>(mesh.boundary_vertices().size()));
        const auto a = steklov_spectrum(mesh, m).eigenvalues;
        const auto b = steklov_spectrum(mesh.scaled(rho), m).eigenvalues;
        double err = 0.0;
        for (int k = 1; k < m; ++k) err = std::max(err, rel(b(k), a(k) / rho));
        return std::pair{err, err <= 1e-10};
    });
}

PropertyOutcome sigma1_length_scale_invariance(int cases, std::uint64_t seed) {
    return run_cases(cases, seed, [](const TriMesh& mesh, std::mt19937_64& rng) {
        const double rho = std::exp(std::uniform_real_distribution<double>(-1.5, 1.5)(rng));
        const TriMesh scaled = mesh.scaled(rho);
        const double err = rel(sigma1(scaled) * boundary_length(scaled), sigma1(mesh) * boundary_length(mesh));
        return std::pair{err, err <= 1e-10};
    });
}

PropertyOutcome dtn_symmetric_with_constant_kernel(int cases, std::uint64_t seed) {
    return run_cases(cases, seed, [](const TriMesh& mesh, std::mt19937_64&) {
        const Eigen::MatrixXd s = dtn_schur(mesh);
        const double asym = (s - s.transpose()).cwiseAbs().maxCoeff();
        const double kernel = (s * Eigen::VectorXd::Ones(s.rows())).cwiseAbs().maxCoeff();
        const double err = std::max(asym, kernel);
        return std::pair{err, asym <= 1e-10 && kernel <= 1e-10};
    });
}

PropertyOutcome spectrum_nonnegative_and_ordered(int cases, std::uint64_t seed) {
    return run_cases(cases, seed, [](const TriMesh& mesh, std::mt19937_64&) {
        const int m = std::min<int>(6, static_cast<int>(mesh.boundary_vertices().size()));
        const SteklovSpectrum s = steklov_spectrum(mesh, m);
        const Eigen::VectorXd mass = boundary_mass(mesh);
        bool pass = std::abs(s.eigenvalues(0)) <= 1e-8;
        double err = std::abs(s.eigenvalues(0));
        for (int k = 0; k < m; ++k) {
            pass = pass && s.eigenvalues(k) >= -1e-8;
            if (k > 0) pass = pass && s.eigenvalues(k) >= s.eigenvalues(k - 1);
        }
        const Eigen::MatrixXd gram = s.eigenfunctions.transpose() * mass.asDiagonal() * s.eigenfunctions;
        const double ortho = (gram - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff();
        err = std::max(err, ortho);
        pass = pass && ortho <= 1e-8;
        return std::pair{err, pass};
    });
}

PropertyOutcome rayleigh_quotient_bounds_sigma1(int cases, std::uint64_t seed) {
    return run_cases(cases, seed, [](const TriMesh& mesh, std::mt19937_64& rng) {
        const Eigen::MatrixXd s = dtn_schur(mesh);
        const Eigen::VectorXd mass = boundary_mass(mesh);
        const double s1 = generalized_spectrum(s, mass, 2).eigenvalues(1);
        std::normal_distribution<double> g;
        Eigen::VectorXd f(s.rows());
        for (Eigen::Index i = 0; i < f.size(); ++i) f(i) = g(rng);
        f.array() -= f.dot(mass) / mass.sum();
        const double q = rayleigh_quotient(s, mass, f);
        const double slack = q - s1;
        return std::pair{std::max(0.0, -slack), slack >= -1e-10};
    });
}

}  // namespace fbms::test
