#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include "json.hpp"

#include "fbms/ambient.hpp"
#include "fbms/mesh.hpp"

namespace fbms {

/// Per-vertex second fundamental form from a quadric fit
/// z = d x + e y + a x^2 + b xy + c y^2 over the 2-ring, in the vertex tangent
/// frame. Principal curvatures are signed with respect to `normal`.
struct ShapeField {
    std::vector<Vec3> normal;
    /// Orthonormal tangent basis (t1, t2) with t1 x t2 = normal.
    std::vector<std::array<Vec3, 2>> frame;
    /// Symmetric 2x2 shape operator in `frame`.
    std::vector<Eigen::Matrix2d> shape_operator;
    std::vector<double> k1, k2;   ///< k1 <= k2
    std::vector<double> h_norm2;  ///< k1^2 + k2^2
    std::vector<double> gauss;    ///< k1 k2
    std::vector<double> vertex_area;
    /// Vertices whose fit was rank deficient; their curvature is zero and
    /// they are excluded from integrals.
    std::vector<char> flagged;
    double excluded_area_fraction = 0.0;
    /// Area fraction carried by boundary vertices (excluded from sup norms).
    double boundary_area_fraction = 0.0;
};

ShapeField second_fundamental_form(const TriMesh& mesh);

struct TotalCurvature {
    double value = 0.0;
    double excluded_area_fraction = 0.0;
    bool reliable = true;  ///< excluded area fraction <= 5%
};

/// Vertex-area quadrature of |h|^2 over non-flagged vertices.
TotalCurvature total_curvature(const TriMesh& mesh);
TotalCurvature total_curvature(const ShapeField& shape);

/// Sup of |H| over interior vertices and the conormal defect.
struct MinimalityStatus {
    double H_sup = 0.0;
    double orth_defect = 0.0;
    double tol_H = 1e-3;
    double tol_orth = 0.017;
    bool minimal() const { return H_sup <= tol_H && orth_defect <= tol_orth; }
};

MinimalityStatus minimality(const TriMesh& mesh, const ConvexAmbient& ambient);

struct GaussBonnet {
    double half_total_curvature = 0.0;  ///< 1/2 int |h|^2
    double kg_intrinsic = 0.0;          ///< sum over boundary of (pi - angle sum)
    double kg_extrinsic = 0.0;          ///< int h^{dM}(u, u) along the boundary
    int euler_characteristic = 0;
    /// |1/2 int |h|^2 - (int k_g - 2 pi chi)| with the intrinsic k_g.
    double residual = 0.0;
};

/// Requires an orthogonality defect <= 0.05 rad; throws std::domain_error
/// otherwise.
GaussBonnet gauss_bonnet(const TriMesh& mesh, const ConvexAmbient& ambient);
GaussBonnet gauss_bonnet(const TriMesh& mesh, const ConvexAmbient& ambient, const ShapeField& shape);
double gauss_bonnet_residual(const TriMesh& mesh, const ConvexAmbient& ambient);

/// Second variation of area along f N in a flat ambient:
/// int |grad f|^2 - |h|^2 f^2 - int_{boundary} h^{dM}(N, N) f^2.
double stability_form(const TriMesh& mesh, const ConvexAmbient& ambient, const Eigen::VectorXd& f);
double stability_form(const TriMesh& mesh, const ConvexAmbient& ambient, const ShapeField& shape,
                      const Eigen::VectorXd& f);

enum class CheckStatus { pass, fail, skipped };
const char* to_string(CheckStatus status);
CheckStatus check_status_from_string(const std::string& s);

/// One named check. `margin` is signed slack (negative = violated) and the
/// check passes when margin >= -tolerance * scale.
struct CheckResult {
    std::string name;
    double value = 0.0;
    double margin = 0.0;
    double scale = 1.0;
    CheckStatus status = CheckStatus::skipped;
    std::string reason;

    bool operator==(const CheckResult&) const = default;
};

struct SpectrumSummary {
    std::vector<double> eigenvalues;
    std::vector<int> multiplicity;
    double multiplicity_gap = 0.02;
    double sigma1_times_length = 0.0;

    bool operator==(const SpectrumSummary&) const = default;
};

/// Shared inputs of the individual checks; computed once per mesh.
struct CheckContext {
    double area = 0.0;
    double length = 0.0;
    Topology topo;
    double k = 0.0;  ///< ambient convexity constant
    double sigma1 = 0.0;
    SpectrumSummary spectrum;
    MinimalityStatus minimality;
    ShapeField shape;
};

/// `num_eigs` >= 2 eigenvalues are kept in `spectrum`.
CheckContext make_context(const TriMesh& mesh, const ConvexAmbient& ambient, int num_eigs = 2);

CheckResult verify_instability(const TriMesh& mesh, const ConvexAmbient& ambient, const CheckContext& ctx);
CheckResult verify_sigma1_bound(const CheckContext& ctx);
CheckResult verify_length_bound(const CheckContext& ctx);
CheckResult verify_fs_upper(const CheckContext& ctx);

struct Isoperimetric {
    double ratio = 0.0;  ///< A / L
    /// |L R - 2A| / (L R) in a round ball of radius R.
    std::optional<double> ball_identity_residual;
};

Isoperimetric verify_isoperimetric(const TriMesh& mesh, const ConvexAmbient& ambient, const CheckContext& ctx);

/// 1/2 int |h|^2 <= C L - 2 pi chi with C the largest boundary principal
/// curvature of the ambient sampled at the boundary vertices.
CheckResult total_curvature_bound(const TriMesh& mesh, const ConvexAmbient& ambient, const CheckContext& ctx);

struct Concentration {
    double local_total_curvature = 0.0;
    double concentration = 0.0;
    bool empty = false;
};

/// int over B_r(Q) of |h|^2 and max over a 64-point grid of s in [0, r] of
/// s^2 sup_{B_{r-s}(Q)} |h|^2 (interior, non-flagged vertices).
Concentration curvature_concentration(const TriMesh& mesh, const Vec3& q, double r);
Concentration curvature_concentration(const TriMesh& mesh, const ShapeField& shape, const Vec3& q, double r);

struct GeometryReport {
    int schema = 1;
    double area = 0.0;
    double length = 0.0;
    Topology topo;
    std::string ambient;
    double convexity_constant = 0.0;
    double sigma1 = 0.0;
    SpectrumSummary spectrum;
    double total_curvature = 0.0;
    double excluded_area_fraction = 0.0;
    double boundary_area_fraction = 0.0;
    double kg_intrinsic = 0.0;
    double kg_extrinsic = 0.0;
    double H_sup = 0.0;
    double orth_defect = 0.0;
    bool minimal = false;
    double isoperimetric_ratio = 0.0;
    std::vector<CheckResult> checks;

    bool all_passed() const;
    bool operator==(const GeometryReport&) const = default;
};

struct ReportOptions {
    int num_eigs = 5;
};

/// Runs every check in a fixed order. Checks whose preconditions fail are
/// kept with status `skipped` and a reason.
GeometryReport full_report(const TriMesh& mesh, const ConvexAmbient& ambient, const ReportOptions& options = {});

void to_json(nlohmann::json& j, const CheckResult& c);
void from_json(const nlohmann::json& j, CheckResult& c);
void to_json(nlohmann::json& j, const GeometryReport& r);
void from_json(const nlohmann::json& j, GeometryReport& r);

/// Structural validation of a serialized GeometryReport; returns the list of
/// problems (empty when valid).
std::vector<std::string> validate_report_schema(const nlohmann::json& j);

}  // namespace fbms
