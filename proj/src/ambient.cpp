#include "fbms/ambient.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

namespace fbms {

namespace {

constexpr double kOnBoundaryTol = 1e-9;
constexpr double kTangentTol = 1e-9;
constexpr int kNewtonSteps = 50;
constexpr std::size_t kConvexitySamples = 20000;

// Orthonormal basis of the plane orthogonal to unit vector n.
std::pair<Vec3, Vec3> tangent_frame(const Vec3& n) {
    const Vec3 seed = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    Vec3 t1 = (seed - seed.dot(n) * n).normalized();
    return {t1, n.cross(t1)};
}

}  // namespace

ConvexAmbient ConvexAmbient::ball(double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw AmbientError("ball radius must be positive");
    ConvexAmbient a;
    a.kind_ = Kind::round_ball;
    a.radius_ = radius;
    a.convexity_ = {1.0 / radius, 0, true};
    return a;
}

ConvexAmbient ConvexAmbient::ellipsoid(const Vec3& semiaxes) {
    if (!(semiaxes.minCoeff() > 0.0) || !semiaxes.allFinite()) throw AmbientError("ellipsoid semiaxes must be positive");
    ConvexAmbient a;
    a.kind_ = Kind::level_set;
    a.semiaxes_ = semiaxes;
    a.radius_ = semiaxes.maxCoeff();
    a.convexity_ = a.estimate_convexity();
    if (!(a.convexity_.value > 0.0)) {
        std::ostringstream msg;
        msg << "domain is not strictly convex: sampled min boundary curvature " << a.convexity_.value;
        throw AmbientError(msg.str());
    }
    return a;
}

ConvexAmbient ConvexAmbient::from_json(const nlohmann::json& config) {
    try {
        const std::string kind = config.at("kind").get<std::string>();
        if (kind == "ball") return ball(config.at("radius").get<double>());
        if (kind == "level_set") {
            const std::string name = config.at("name").get<std::string>();
            if (name != "ellipsoid") throw AmbientError("unknown level-set body '" + name + "' (registry: ellipsoid)");
            const auto axes = config.at("semiaxes").get<std::vector<double>>();
            if (axes.size() != 3) throw AmbientError("ellipsoid needs three semiaxes");
            return ellipsoid(Vec3(axes[0], axes[1], axes[2]));
        }
        throw AmbientError("unknown ambient kind '" + kind + "'");
    } catch (const nlohmann::json::exception& e) {
        throw AmbientError(std::string("malformed ambient config: ") + e.what());
    }
}

nlohmann::json ConvexAmbient::to_json() const {
    if (kind_ == Kind::round_ball) return {{"kind", "ball"}, {"radius", radius_}};
    return {{"kind", "level_set"}, {"name", "ellipsoid"}, {"semiaxes", {semiaxes_.x(), semiaxes_.y(), semiaxes_.z()}}};
}

std::string ConvexAmbient::name() const { return kind_ == Kind::round_ball ? "ball" : "ellipsoid"; }

double ConvexAmbient::level(const Vec3& p) const {
    if (kind_ == Kind::round_ball) return p.squaredNorm() / (radius_ * radius_) - 1.0;
    return p.cwiseQuotient(semiaxes_).squaredNorm() - 1.0;
}

Vec3 ConvexAmbient::level_gradient(const Vec3& p) const {
    if (kind_ == Kind::round_ball) return 2.0 * p / (radius_ * radius_);
    return 2.0 * p.cwiseQuotient(semiaxes_.cwiseProduct(semiaxes_));
}

double ConvexAmbient::boundary_offset(const Vec3& p) const {
    if (kind_ == Kind::round_ball) return p.norm() - radius_;
    const double g = level_gradient(p).norm();
    if (g == 0.0) return -std::numeric_limits<double>::infinity();
    return level(p) / g;
}

Vec3 ConvexAmbient::project_to_boundary(const Vec3& p) const {
    if (kind_ == Kind::round_ball) {
        const double n = p.norm();
        if (!(n > 0.0)) throw AmbientError("cannot project the ball centre to the boundary");
        return p * (radius_ / n);
    }
    Vec3 x = p;
    for (int step = 0; step <= kNewtonSteps; ++step) {
        const double phi = level(x);
        if (std::abs(phi) <= 1e-12) return x;
        if (step == kNewtonSteps) break;
        const Vec3 g = level_gradient(x);
        const double g2 = g.squaredNorm();
        if (!(g2 > 0.0)) throw AmbientError("projection hit a critical point of the level-set function");
        x -= (phi / g2) * g;
    }
    throw AmbientError("boundary projection did not converge in 50 Newton steps");
}

void ConvexAmbient::check_on_boundary(const Vec3& p, const char* op) const {
    if (!on_boundary(p, kOnBoundaryTol)) {
        std::ostringstream msg;
        msg << op << ": point (" << p.x() << ", " << p.y() << ", " << p.z() << ") is not on the boundary (offset "
            << boundary_offset(p) << ")";
        throw AmbientError(msg.str());
    }
}

Vec3 ConvexAmbient::boundary_normal(const Vec3& p) const {
    check_on_boundary(p, "boundary_normal");
    if (kind_ == Kind::round_ball) return p / p.norm();
    return level_gradient(p).normalized();
}

double ConvexAmbient::boundary_shape_operator(const Vec3& p, const Vec3& u) const {
    const Vec3 n = boundary_normal(p);
    if (std::abs(u.dot(n)) > kTangentTol) throw AmbientError("boundary_shape_operator: direction is not tangent to the boundary");
    if (kind_ == Kind::round_ball) return u.squaredNorm() / radius_;
    const Vec3 hess = 2.0 * semiaxes_.cwiseProduct(semiaxes_).cwiseInverse();
    return u.dot(hess.cwiseProduct(u)) / level_gradient(p).norm();
}

std::pair<double, double> ConvexAmbient::principal_curvature_range(const Vec3& p) const {
    if (kind_ == Kind::round_ball) return {1.0 / radius_, 1.0 / radius_};
    const Vec3 n = boundary_normal(p);
    const auto [t1, t2] = tangent_frame(n);
    const Vec3 hess = 2.0 * semiaxes_.cwiseProduct(semiaxes_).cwiseInverse();
    const double g = level_gradient(p).norm();
    Eigen::Matrix2d s;
    s(0, 0) = t1.dot(hess.cwiseProduct(t1)) / g;
    s(0, 1) = s(1, 0) = t1.dot(hess.cwiseProduct(t2)) / g;
    s(1, 1) = t2.dot(hess.cwiseProduct(t2)) / g;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(s, Eigen::EigenvaluesOnly);
    return {eig.eigenvalues()(0), eig.eigenvalues()(1)};
}

// Fibonacci-lattice points on the unit sphere, mapped onto the ellipsoid;
// the minimum over all tangent directions at each point is taken exactly
// from the 2x2 shape operator.
ConvexityEstimate ConvexAmbient::estimate_convexity() const {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    double kmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < kConvexitySamples; ++i) {
        const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(kConvexitySamples);
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * static_cast<double>(i);
        const Vec3 s(r * std::cos(phi), r * std::sin(phi), z);
        const Vec3 p = s.cwiseProduct(semiaxes_);
        kmin = std::min(kmin, principal_curvature_range(p).first);
    }
    return {kmin, kConvexitySamples, false};
}

}  // namespace fbms
