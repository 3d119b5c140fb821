#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fbms/ambient.hpp"
#include "support.hpp"

using namespace fbms;

namespace {

// Principal curvatures of the spheroid x^2/a^2 + y^2/a^2 + z^2/c^2 = 1 at
// latitude parameter t (point (a cos t, 0, c sin t)).
std::pair<double, double> spheroid_curvatures(double a, double c, double t) {
    const double q = a * a * std::sin(t) * std::sin(t) + c * c * std::cos(t) * std::cos(t);
    const double meridian = a * c / std::pow(q, 1.5);
    const double parallel = c / (a * std::sqrt(q));
    return {std::min(meridian, parallel), std::max(meridian, parallel)};
}

}  // namespace

TEST_SUITE("ambient") {
    TEST_CASE("ball projection, normals and shape operator") {
        const ConvexAmbient ball = ConvexAmbient::ball(1.0);
        CHECK((ball.project_to_boundary({0.5, 0, 0}) - Vec3(1, 0, 0)).norm() <= 1e-15);
        CHECK_THROWS_AS(ball.project_to_boundary({0, 0, 0}), AmbientError);
        CHECK((ball.boundary_normal({0, 0, 1}) - Vec3(0, 0, 1)).norm() == 0.0);
        CHECK(ball.convexity_constant().value == 1.0);
        CHECK(ball.convexity_constant().exact);
        CHECK(ConvexAmbient::ball(2.0).convexity_constant().value == 0.5);
        CHECK(ConvexAmbient::ball(2.0).boundary_shape_operator({0, 2, 0}, {1, 0, 0}) == doctest::Approx(0.5));

        std::mt19937_64 rng(11);
        std::normal_distribution<double> g;
        for (int i = 0; i < 200; ++i) {
            const Vec3 p = ball.project_to_boundary({g(rng), g(rng), g(rng)});
            CHECK(std::abs(p.norm() - 1.0) <= 1e-15);
            CHECK((ball.project_to_boundary(p) - p).norm() <= 1e-12);
            CHECK((ball.boundary_normal(p) - p / p.norm()).norm() == 0.0);
            Vec3 u = Vec3(g(rng), g(rng), g(rng));
            u = (u - u.dot(p) * p).normalized();
            CHECK(ball.boundary_shape_operator(p, u) == doctest::Approx(1.0).epsilon(1e-14));
        }
    }

    TEST_CASE("non-tangent direction and off-boundary point are rejected") {
        const ConvexAmbient ball = ConvexAmbient::ball(1.0);
        CHECK_THROWS_AS(ball.boundary_shape_operator({0, 0, 1}, {0, 0.6, 0.8}), AmbientError);
        CHECK_THROWS_AS(ball.boundary_normal({0, 0, 0.9}), AmbientError);
    }

    TEST_CASE("ellipsoid projection and pole normal") {
        const ConvexAmbient e = ConvexAmbient::ellipsoid({1, 1, 2});
        const Vec3 p = e.project_to_boundary({0, 0, 1});
        CHECK((p - Vec3(0, 0, 2)).norm() <= 1e-12);
        CHECK((e.boundary_normal(p) - Vec3(0, 0, 1)).norm() <= 1e-12);
        const Vec3 q = e.project_to_boundary({0.3, -0.2, 0.7});
        CHECK(std::abs(e.level(q)) <= 1e-12);
        CHECK(std::abs(e.boundary_normal(q).norm() - 1.0) <= 1e-12);
        CHECK((e.project_to_boundary(q) - q).norm() <= 1e-12);
    }

    TEST_CASE("ellipsoid shape operator matches spheroid curvatures") {
        const ConvexAmbient e = ConvexAmbient::ellipsoid({1, 1, 2});
        // At the pole every tangent direction has curvature c / a^2.
        for (double ang = 0.0; ang < 3.0; ang += 0.5) {
            CHECK(e.boundary_shape_operator({0, 0, 2}, {std::cos(ang), std::sin(ang), 0}) == doctest::Approx(2.0).epsilon(1e-12));
        }
        for (int i = -8; i <= 8; ++i) {
            const double t = 1.5 * i / 8.0;
            const Vec3 p(std::cos(t), 0.0, 2.0 * std::sin(t));
            const auto [lo, hi] = spheroid_curvatures(1.0, 2.0, t);
            const auto range = e.principal_curvature_range(p);
            CHECK(range.first == doctest::Approx(lo).epsilon(1e-10));
            CHECK(range.second == doctest::Approx(hi).epsilon(1e-10));
            const Vec3 meridian = Vec3(-std::sin(t), 0.0, 2.0 * std::cos(t)).normalized();
            const double q = std::sin(t) * std::sin(t) + 4.0 * std::cos(t) * std::cos(t);
            CHECK(e.boundary_shape_operator(p, meridian) == doctest::Approx(2.0 / std::pow(q, 1.5)).epsilon(1e-10));
        }
    }

    TEST_CASE("ellipsoid convexity constant equals the grid minimum of curvature") {
        const ConvexAmbient e = ConvexAmbient::ellipsoid({1, 1, 2});
        double grid_min = 1e300;
        for (int i = 0; i <= 2000; ++i) {
            const double t = -std::numbers::pi / 2 + std::numbers::pi * i / 2000.0;
            grid_min = std::min(grid_min, spheroid_curvatures(1.0, 2.0, t).first);
        }
        const auto k = e.convexity_constant();
        CHECK(k.sample_size >= 10000);
        CHECK_FALSE(k.exact);
        CHECK(k.value > 0.0);
        CHECK(k.value == doctest::Approx(grid_min).epsilon(1e-3));
        CHECK(grid_min == doctest::Approx(0.25).epsilon(1e-9));
    }

    TEST_CASE("sampled shape operator never falls below the convexity constant") {
        const ConvexAmbient e = ConvexAmbient::ellipsoid({1, 1, 2});
        const double k = e.convexity_constant().value;
        std::mt19937_64 rng(5);
        std::normal_distribution<double> g;
        for (int i = 0; i < 2000; ++i) {
            const Vec3 p = e.project_to_boundary({g(rng), g(rng), g(rng)});
            const Vec3 n = e.boundary_normal(p);
            Vec3 u(g(rng), g(rng), g(rng));
            u = (u - u.dot(n) * n).normalized();
            CHECK(e.boundary_shape_operator(p, u) >= k - 1e-9);
        }
    }

    TEST_CASE("config round trip and malformed configs") {
        const auto ball = ConvexAmbient::from_json(nlohmann::json::parse(R"({"kind":"ball","radius":1.0})"));
        CHECK(ball.kind() == ConvexAmbient::Kind::round_ball);
        const auto e = ConvexAmbient::from_json(nlohmann::json::parse(R"({"kind":"level_set","name":"ellipsoid","semiaxes":[1,1,2]})"));
        CHECK(e.kind() == ConvexAmbient::Kind::level_set);
        CHECK(ConvexAmbient::from_json(e.to_json()).semiaxes() == e.semiaxes());
        CHECK_THROWS_AS(ConvexAmbient::from_json(nlohmann::json::parse(R"({"kind":"cube"})")), AmbientError);
        CHECK_THROWS_AS(ConvexAmbient::from_json(nlohmann::json::parse(R"({"kind":"ball","radius":-1})")), AmbientError);
        CHECK_THROWS_AS(ConvexAmbient::from_json(nlohmann::json::parse(R"({"kind":"ball"})")), AmbientError);
    }
}
