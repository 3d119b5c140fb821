#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "fbms/ambient.hpp"
#include "fbms/mesh.hpp"

namespace fbms {

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Backtracking (Armijo) line search parameters.
struct StepRule {
    double initial_step = 0.25;
    double shrink = 0.5;
    double sufficient_decrease = 1e-4;
    /// Factor applied to the last accepted step to seed the next search.
    double growth = 2.0;
    double min_step = 1e-16;
};

struct SolverConfig {
    int max_iters = 5000;
    StepRule step;
    double tol_H = 1e-3;     ///< sup |H| over interior vertices, 1/length
    double tol_orth = 0.017; ///< radians
    bool smoothing = true;
    int smoothing_interval = 50;
    /// Weight of the boundary-balance penalty (round ball only, see
    /// `minimize_area`). Zero disables it.
    double balance_weight = 2.0;

    void validate() const;
};

struct ConvergenceReport {
    int iterations = 0;
    bool converged = false;
    double final_H_sup = 0.0;
    double final_orth_defect = 0.0;
    /// Objective after every accepted update (index 0 = input mesh);
    /// nonincreasing. Equal to the area when the balance penalty is off.
    std::vector<double> area_history;
    double initial_area = 0.0;
    double final_area = 0.0;
    double final_balance = 0.0;
    int rejected_steps = 0;
    int smoothing_passes = 0;
    double final_step = 0.0;
    std::string message;
};

struct SolveResult {
    TriMesh mesh;
    ConvergenceReport report;
};

/// Exact gradient of the total area with respect to each vertex position
/// (cotangent formula, assembled from per-face kernels).
std::vector<Vec3> area_gradient(const TriMesh& mesh);

struct MeanCurvature {
    /// Mean-curvature vector -grad_v(A) / area_v; |H| = k1 + k2.
    std::vector<Vec3> vector;
    /// Component along the vertex normal. Zero at boundary vertices.
    std::vector<double> scalar;
    std::vector<Vec3> normal;
    std::vector<double> vertex_area;
    /// max |scalar| over interior vertices.
    double interior_sup = 0.0;
};

MeanCurvature discrete_mean_curvature(const TriMesh& mesh);

/// Outward unit conormal of the surface at each boundary vertex, ordered as
/// `mesh.boundary_vertices()`. Built from the in-face perpendiculars of the
/// two incident boundary edges, weighted by edge length.
std::vector<Vec3> boundary_conormals(const TriMesh& mesh);

/// Max angle (radians) between the surface conormal and the outward normal
/// of the ambient boundary over all boundary vertices.
double orthogonality_defect(const TriMesh& mesh, const ConvexAmbient& ambient);

/// Length-weighted first moment of the boundary, sum_b m_b x_b with lumped
/// boundary masses. Vanishes on free-boundary minimal surfaces in a ball
/// centred at the origin.
Vec3 boundary_moment(const TriMesh& mesh);

/// Projected gradient descent on the area with backtracking line search.
///
/// Interior vertices move along the normal component of the negative
/// gradient; boundary vertices along its projection onto the tangent plane
/// of the ambient boundary, minus the component along the boundary curve,
/// and are then re-projected. Trial steps come from a Barzilai-Borwein
/// estimate; the Armijo test keeps the objective monotone. In a round ball the objective carries the penalty
/// (w/2)|boundary_moment|^2, which vanishes at every free-boundary minimal
/// surface and removes the translation-like unstable direction of area.
SolveResult minimize_area(const TriMesh& mesh, const ConvexAmbient& ambient, const SolverConfig& config);

}  // namespace fbms
