#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "fbms/mesh.hpp"

namespace fbms {

class SteklovError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Steklov eigenpairs of S u = sigma M_b u on the boundary nodes, ordered as
/// `TriMesh::boundary_vertices()`.
struct SteklovSpectrum {
    Eigen::VectorXd eigenvalues;
    /// Column k holds the k-th eigenfunction, normalised so that
    /// u^T M_b u = 1 and its first non-negligible entry is positive.
    Eigen::MatrixXd eigenfunctions;
    /// Size of the numerical cluster each eigenvalue belongs to.
    std::vector<int> multiplicity;
    double multiplicity_gap = 0.02;
    /// "dense" or "shift-invert".
    std::string method;
};

struct SteklovOptions {
    /// Boundary sizes above this use shift-invert subspace iteration.
    int dense_limit = 2000;
    /// Relative gap below which neighbouring eigenvalues are one cluster.
    double multiplicity_gap = 0.02;
    double tolerance = 1e-12;
    int max_iterations = 1000;
};

/// Cotangent stiffness matrix: u^T K u is the Dirichlet energy of the
/// piecewise-linear interpolant of u.
SparseMatrix stiffness_matrix(const TriMesh& mesh);

/// Lumped boundary mass: half the length of the two incident boundary edges.
Eigen::VectorXd boundary_mass(const TriMesh& mesh);

/// Discrete Dirichlet-to-Neumann operator, the Schur complement
/// K_bb - K_bi K_ii^{-1} K_ib (symmetrised).
Eigen::MatrixXd dtn_schur(const TriMesh& mesh);

/// Lowest `m` eigenpairs of S u = sigma diag(mass) u. The constant mode is
/// deflated exactly: sigma_0 = 0 with a constant eigenfunction, and the
/// remaining pairs come from S restricted to mass-mean-zero functions.
SteklovSpectrum generalized_spectrum(const Eigen::MatrixXd& dtn, const Eigen::VectorXd& mass, int m,
                                     const SteklovOptions& options = {});

SteklovSpectrum steklov_spectrum(const TriMesh& mesh, int m, const SteklovOptions& options = {});

/// First nontrivial Steklov eigenvalue.
double sigma1(const TriMesh& mesh);

/// g^T S g / g^T M_b g.
double rayleigh_quotient(const Eigen::MatrixXd& dtn, const Eigen::VectorXd& mass, const Eigen::VectorXd& g);

struct HarmonicExtension {
    Eigen::VectorXd values;  ///< per vertex
    /// Largest excursion of interior values outside [min g, max g].
    double max_principle_violation = 0.0;
    bool max_principle_holds = true;
};

/// Discrete harmonic function with the given boundary values (ordered as
/// `boundary_vertices()`).
HarmonicExtension harmonic_extension(const TriMesh& mesh, const Eigen::VectorXd& boundary_values);

}  // namespace fbms
