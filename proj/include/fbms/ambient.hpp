#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "json.hpp"

namespace fbms {

using Vec3 = Eigen::Vector3d;

class AmbientError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ConvexityEstimate {
    double value = 0.0;
    /// Number of boundary points sampled; 0 when the value is exact.
    std::size_t sample_size = 0;
    bool exact = false;
};

/// Container domain M in flat R^3 with strictly convex boundary.
///
/// Either a round ball of radius R centred at the origin, or a level-set
/// body {phi <= 0} from a small built-in registry (currently the
/// axis-aligned ellipsoid). The boundary second fundamental form is taken
/// with respect to the inward normal, so convexity means positive values.
class ConvexAmbient {
public:
    enum class Kind { round_ball, level_set };

    static ConvexAmbient ball(double radius = 1.0);
    static ConvexAmbient ellipsoid(const Vec3& semiaxes);

    /// `{"kind":"ball","radius":1.0}` or
    /// `{"kind":"level_set","name":"ellipsoid","semiaxes":[1,1,2]}`.
    static ConvexAmbient from_json(const nlohmann::json& config);
    nlohmann::json to_json() const;

    Kind kind() const { return kind_; }
    double radius() const { return radius_; }
    const Vec3& semiaxes() const { return semiaxes_; }
    std::string name() const;

    double level(const Vec3& p) const;
    Vec3 level_gradient(const Vec3& p) const;

    /// Signed first-order distance to the boundary (positive outside).
    double boundary_offset(const Vec3& p) const;
    bool on_boundary(const Vec3& p, double tol) const { return std::abs(boundary_offset(p)) <= tol; }

    /// Radial projection for the ball, Newton iteration along grad(phi) for
    /// level sets (at most 50 steps, |phi| <= 1e-12 on exit).
    Vec3 project_to_boundary(const Vec3& p) const;

    /// Outward unit normal at a boundary point.
    Vec3 boundary_normal(const Vec3& p) const;

    /// h^{dM}(u, u) with respect to the inward normal, u a unit tangent.
    double boundary_shape_operator(const Vec3& p, const Vec3& u) const;

    /// Smallest and largest principal curvature of the boundary at p.
    std::pair<double, double> principal_curvature_range(const Vec3& p) const;

    const ConvexityEstimate& convexity_constant() const { return convexity_; }

private:
    ConvexAmbient() = default;
    void check_on_boundary(const Vec3& p, const char* op) const;
    ConvexityEstimate estimate_convexity() const;

    Kind kind_ = Kind::round_ball;
    double radius_ = 1.0;
    Vec3 semiaxes_ = Vec3::Ones();
    ConvexityEstimate convexity_;
};

}  // namespace fbms
