#include "fbms/checks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "fbms/geometry.hpp"
#include "fbms/solver.hpp"
#include "fbms/steklov.hpp"

namespace fbms {

namespace {

constexpr double kPi = std::numbers::pi;

// Unit direction in the tangent plane of the ambient boundary at p.
Vec3 boundary_tangent(const ConvexAmbient& ambient, const Vec3& p, const Vec3& dir) {
    const Vec3 n = ambient.boundary_normal(p);
    return (dir - dir.dot(n) * n).normalized();
}

std::string not_minimal_reason(const MinimalityStatus& m) {
    std::ostringstream s;
    s << "not free-boundary minimal: sup|H| = " << m.H_sup << " (tol " << m.tol_H << "), defect = " << m.orth_defect
      << " rad (tol " << m.tol_orth << ")";
    return s.str();
}

CheckResult graded(std::string name, double value, double margin, double scale, double tolerance) {
    CheckResult c;
    c.name = std::move(name);
    c.value = value;
    c.margin = margin;
    c.scale = scale;
    c.status = margin >= -tolerance * scale ? CheckStatus::pass : CheckStatus::fail;
    return c;
}

CheckResult skipped(std::string name, std::string reason) {
    CheckResult c;
    c.name = std::move(name);
    c.status = CheckStatus::skipped;
    c.reason = std::move(reason);
    return c;
}

}  // namespace

const char* to_string(CheckStatus status) {
    switch (status) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        case CheckStatus::skipped: return "skipped";
    }
    return "?";
}

CheckStatus check_status_from_string(const std::string& s) {
    if (s == "pass") return CheckStatus::pass;
    if (s == "fail") return CheckStatus::fail;
    if (s == "skipped") return CheckStatus::skipped;
    throw std::invalid_argument("unknown check status '" + s + "'");
}

TotalCurvature total_curvature(const ShapeField& shape) {
    TotalCurvature t;
    for (std::size_t v = 0; v < shape.h_norm2.size(); ++v) {
        if (!shape.flagged[v]) t.value += shape.vertex_area[v] * shape.h_norm2[v];
    }
    t.excluded_area_fraction = shape.excluded_area_fraction;
    t.reliable = t.excluded_area_fraction <= 0.05;
    return t;
}

TotalCurvature total_curvature(const TriMesh& mesh) { return total_curvature(second_fundamental_form(mesh)); }

MinimalityStatus minimality(const TriMesh& mesh, const ConvexAmbient& ambient) {
    MinimalityStatus m;
    m.H_sup = discrete_mean_curvature(mesh).interior_sup;
    m.orth_defect = orthogonality_defect(mesh, ambient);
    return m;
}

GaussBonnet gauss_bonnet(const TriMesh& mesh, const ConvexAmbient& ambient, const ShapeField& shape) {
    const double defect = orthogonality_defect(mesh, ambient);
    if (defect > 0.05) {
        throw std::domain_error("Gauss-Bonnet chain needs a free-boundary mesh; orthogonality defect " +
                                std::to_string(defect) + " rad exceeds 0.05");
    }
    GaussBonnet gb;
    gb.half_total_curvature = 0.5 * total_curvature(shape).value;
    gb.euler_characteristic = topology(mesh).euler_characteristic;

    const auto geom = compute_face_geometry(mesh);
    const std::vector<double> angles = vertex_angle_sums(mesh, geom);
    for (int b : mesh.boundary_vertices()) {
        gb.kg_intrinsic += kPi - angles[static_cast<std::size_t>(b)];
        const auto [prev, next] = mesh.boundary_neighbors(b);
        const Vec3& p = mesh.vertex(b);
        const double mass = 0.5 * ((p - mesh.vertex(prev)).norm() + (mesh.vertex(next) - p).norm());
        const Vec3 q = ambient.project_to_boundary(p);
        const Vec3 u = boundary_tangent(ambient, q, mesh.vertex(next) - mesh.vertex(prev));
        gb.kg_extrinsic += mass * ambient.boundary_shape_operator(q, u);
    }
    gb.residual = std::abs(gb.half_total_curvature - (gb.kg_intrinsic - 2.0 * kPi * gb.euler_characteristic));
    return gb;
}

GaussBonnet gauss_bonnet(const TriMesh& mesh, const ConvexAmbient& ambient) {
    return gauss_bonnet(mesh, ambient, second_fundamental_form(mesh));
}

double gauss_bonnet_residual(const TriMesh& mesh, const ConvexAmbient& ambient) {
    return gauss_bonnet(mesh, ambient).residual;
}

double stability_form(const TriMesh& mesh, const ConvexAmbient& ambient, const ShapeField& shape,
                      const Eigen::VectorXd& f) {
    if (f.size() != static_cast<Eigen::Index>(mesh.num_vertices())) {
        throw std::invalid_argument("stability_form needs one value per vertex");
    }
    const SparseMatrix k = stiffness_matrix(mesh);
    double q = f.dot(k * f);
    for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
        if (!shape.flagged[v]) q -= shape.vertex_area[v] * shape.h_norm2[v] * f(static_cast<Eigen::Index>(v)) * f(static_cast<Eigen::Index>(v));
    }
    for (int b : mesh.boundary_vertices()) {
        const auto [prev, next] = mesh.boundary_neighbors(b);
        const Vec3& p = mesh.vertex(b);
        const double mass = 0.5 * ((p - mesh.vertex(prev)).norm() + (mesh.vertex(next) - p).norm());
        const Vec3 x = ambient.project_to_boundary(p);
        const Vec3 n = boundary_tangent(ambient, x, shape.normal[static_cast<std::size_t>(b)]);
        const double fb = f(b);
        q -= mass * ambient.boundary_shape_operator(x, n) * fb * fb;
    }
    return q;
}

double stability_form(const TriMesh& mesh, const ConvexAmbient& ambient, const Eigen::VectorXd& f) {
    return stability_form(mesh, ambient, second_fundamental_form(mesh), f);
}

CheckContext make_context(const TriMesh& mesh, const ConvexAmbient& ambient, int num_eigs) {
    CheckContext ctx;
    ctx.area = area(mesh);
    ctx.length = boundary_length(mesh);
    ctx.topo = topology(mesh);
    ctx.k = ambient.convexity_constant().value;
    const int nb = static_cast<int>(mesh.boundary_vertices().size());
    const SteklovSpectrum spec = steklov_spectrum(mesh, std::min(std::max(num_eigs, 2), nb));
    ctx.spectrum.eigenvalues.assign(spec.eigenvalues.data(), spec.eigenvalues.data() + spec.eigenvalues.size());
    ctx.spectrum.multiplicity = spec.multiplicity;
    ctx.spectrum.multiplicity_gap = spec.multiplicity_gap;
    ctx.sigma1 = spec.eigenvalues(1);
    ctx.spectrum.sigma1_times_length = ctx.sigma1 * ctx.length;
    ctx.minimality = minimality(mesh, ambient);
    ctx.shape = second_fundamental_form(mesh);
    return ctx;
}

CheckResult verify_instability(const TriMesh& mesh, const ConvexAmbient& ambient, const CheckContext& ctx) {
    if (!ctx.minimality.minimal()) return skipped("instability", not_minimal_reason(ctx.minimality));
    const Eigen::VectorXd one = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(mesh.num_vertices()));
    const double q = stability_form(mesh, ambient, ctx.shape, one);
    const double kl = ctx.k * ctx.length;
    return graded("instability", q, -kl - q, kl, 0.02);
}

CheckResult verify_sigma1_bound(const CheckContext& ctx) {
    if (!ctx.minimality.minimal()) return skipped("sigma1_lower_bound", not_minimal_reason(ctx.minimality));
    return graded("sigma1_lower_bound", ctx.sigma1, ctx.sigma1 - 0.5 * ctx.k, ctx.k, 0.02);
}

CheckResult verify_length_bound(const CheckContext& ctx) {
    if (!ctx.minimality.minimal()) return skipped("length_upper_bound", not_minimal_reason(ctx.minimality));
    const double bound = 4.0 * kPi * (ctx.topo.genus + ctx.topo.boundary_components) / ctx.k;
    return graded("length_upper_bound", ctx.length, bound - ctx.length, bound, 0.02);
}

CheckResult verify_fs_upper(const CheckContext& ctx) {
    if (!ctx.minimality.minimal()) return skipped("sigma1_length_upper_bound", not_minimal_reason(ctx.minimality));
    const double bound = 2.0 * kPi * (ctx.topo.genus + ctx.topo.boundary_components);
    const double sl = ctx.sigma1 * ctx.length;
    return graded("sigma1_length_upper_bound", sl, bound - sl, bound, 0.02);
}

Isoperimetric verify_isoperimetric(const TriMesh&, const ConvexAmbient& ambient, const CheckContext& ctx) {
    Isoperimetric iso;
    iso.ratio = ctx.area / ctx.length;
    if (ambient.kind() == ConvexAmbient::Kind::round_ball && ctx.minimality.minimal()) {
        const double lr = ctx.length * ambient.radius();
        iso.ball_identity_residual = std::abs(lr - 2.0 * ctx.area) / lr;
    }
    return iso;
}

CheckResult total_curvature_bound(const TriMesh& mesh, const ConvexAmbient& ambient, const CheckContext& ctx) {
    if (!ctx.minimality.minimal()) return skipped("total_curvature_bound", not_minimal_reason(ctx.minimality));
    double c = 0.0;
    for (int b : mesh.boundary_vertices()) {
        c = std::max(c, ambient.principal_curvature_range(ambient.project_to_boundary(mesh.vertex(b))).second);
    }
    const double half = 0.5 * total_curvature(ctx.shape).value;
    const double bound = c * ctx.length - 2.0 * kPi * ctx.topo.euler_characteristic;
    return graded("total_curvature_bound", half, bound - half, c * ctx.length, 0.05);
}

Concentration curvature_concentration(const TriMesh& mesh, const ShapeField& shape, const Vec3& q, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("curvature_concentration needs r > 0");
    Concentration out;
    std::vector<std::pair<double, double>> samples;  // (distance, |h|^2)
    bool any = false;
    for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
        const double d = (mesh.vertex(static_cast<int>(v)) - q).norm();
        if (d >= r) continue;
        any = true;
        if (shape.flagged[v]) continue;
        out.local_total_curvature += shape.vertex_area[v] * shape.h_norm2[v];
        if (!mesh.is_boundary_vertex(static_cast<int>(v))) samples.emplace_back(d, shape.h_norm2[v]);
    }
    if (!any) {
        out.empty = true;
        return out;
    }
    constexpr int kGrid = 64;
    for (int i = 0; i < kGrid; ++i) {
        const double s = r * i / (kGrid - 1);
        double sup = 0.0;
        for (const auto& [d, h2] : samples) {
            if (d < r - s) sup = std::max(sup, h2);
        }
        out.concentration = std::max(out.concentration, s * s * sup);
    }
    return out;
}

Concentration curvature_concentration(const TriMesh& mesh, const Vec3& q, double r) {
    return curvature_concentration(mesh, second_fundamental_form(mesh), q, r);
}

bool GeometryReport::all_passed() const {
    return std::none_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.status == CheckStatus::fail; });
}

GeometryReport full_report(const TriMesh& mesh, const ConvexAmbient& ambient, const ReportOptions& options) {
    const CheckContext ctx = make_context(mesh, ambient, options.num_eigs);
    GeometryReport r;
    r.area = ctx.area;
    r.length = ctx.length;
    r.topo = ctx.topo;
    r.ambient = ambient.to_json().dump();
    r.convexity_constant = ctx.k;
    r.sigma1 = ctx.sigma1;
    r.spectrum = ctx.spectrum;
    const TotalCurvature tc = total_curvature(ctx.shape);
    r.total_curvature = tc.value;
    r.excluded_area_fraction = ctx.shape.excluded_area_fraction;
    r.boundary_area_fraction = ctx.shape.boundary_area_fraction;
    r.H_sup = ctx.minimality.H_sup;
    r.orth_defect = ctx.minimality.orth_defect;
    r.minimal = ctx.minimality.minimal();

    r.checks.push_back(graded("shape_field_coverage", tc.excluded_area_fraction, 0.05 - tc.excluded_area_fraction, 1.0, 0.0));
    r.checks.push_back(verify_instability(mesh, ambient, ctx));
    r.checks.push_back(verify_sigma1_bound(ctx));
    r.checks.push_back(verify_length_bound(ctx));
    r.checks.push_back(verify_fs_upper(ctx));

    const Isoperimetric iso = verify_isoperimetric(mesh, ambient, ctx);
    r.isoperimetric_ratio = iso.ratio;
    CheckResult ratio = graded("isoperimetric_ratio", iso.ratio, 0.0, 1.0, 0.0);
    ratio.reason = "ratio A/L reported; the isoperimetric constant is not explicit";
    r.checks.push_back(ratio);
    if (iso.ball_identity_residual) {
        const double res = *iso.ball_identity_residual;
        r.checks.push_back(graded("ball_identity", res, 0.01 - res, 1.0, 0.0));
    } else {
        r.checks.push_back(skipped("ball_identity", ambient.kind() == ConvexAmbient::Kind::round_ball
                                                        ? not_minimal_reason(ctx.minimality)
                                                        : "identity L R = 2A holds only in a round ball"));
    }

    if (ctx.minimality.minimal()) {
        const GaussBonnet gb = gauss_bonnet(mesh, ambient, ctx.shape);
        r.kg_intrinsic = gb.kg_intrinsic;
        r.kg_extrinsic = gb.kg_extrinsic;
        r.checks.push_back(graded("gauss_bonnet", gb.residual, 0.05 * ctx.length - gb.residual, ctx.length, 0.0));
        const double diff = std::abs(gb.kg_intrinsic - gb.kg_extrinsic);
        const double scale = std::max(std::abs(gb.kg_intrinsic), std::abs(gb.kg_extrinsic));
        r.checks.push_back(graded("geodesic_curvature_agreement", diff, 0.02 * scale - diff, scale, 0.0));
    } else {
        r.checks.push_back(skipped("gauss_bonnet", not_minimal_reason(ctx.minimality)));
        r.checks.push_back(skipped("geodesic_curvature_agreement", not_minimal_reason(ctx.minimality)));
    }
    r.checks.push_back(total_curvature_bound(mesh, ambient, ctx));
    return r;
}

}  // namespace fbms
