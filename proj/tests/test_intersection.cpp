#include <cmath>

#include "doctest.h"
#include "fbms/exemplars.hpp"
#include "fbms/intersection.hpp"

using namespace fbms;

TEST_SUITE("intersection") {
    TEST_CASE("triangle pairs") {
        const std::array<Vec3, 3> t{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
        const std::array<Vec3, 3> piercing{Vec3(0.2, 0.2, -1), Vec3(0.3, 0.2, 1), Vec3(0.2, 0.3, 1)};
        const auto w = triangle_intersection(t, piercing);
        REQUIRE(w);
        CHECK(std::abs(w->z()) <= 1e-12);
        CHECK(triangle_distance(t, piercing) == 0.0);

        const std::array<Vec3, 3> above{Vec3(0, 0, 0.5), Vec3(1, 0, 0.5), Vec3(0, 1, 0.5)};
        CHECK_FALSE(triangle_intersection(t, above));
        CHECK(triangle_distance(t, above) == doctest::Approx(0.5));

        // Coplanar overlap and coplanar disjoint.
        const std::array<Vec3, 3> shifted{Vec3(0.2, 0.2, 0), Vec3(1.2, 0.2, 0), Vec3(0.2, 1.2, 0)};
        CHECK(triangle_intersection(t, shifted));
        const std::array<Vec3, 3> far{Vec3(2, 2, 0), Vec3(3, 2, 0), Vec3(2, 3, 0)};
        CHECK_FALSE(triangle_intersection(t, far));
        CHECK(triangle_distance(t, far) == doctest::Approx(std::sqrt(2.0) * 1.5));

        // Touching at a shared vertex.
        const std::array<Vec3, 3> touching{Vec3(1, 0, 0), Vec3(2, 0, 1), Vec3(2, 1, -1)};
        CHECK(triangle_intersection(t, touching));
    }

    TEST_CASE("disk meets the catenoid along its waist") {
        const auto p = critical_catenoid_parameters();
        const TriMesh d = equatorial_disk(16, 64);
        const TriMesh c = critical_catenoid(16, 64);
        const IntersectionResult r = verify_intersection(d, c);
        CHECK(r.intersects);
        REQUIRE(r.witness);
        CHECK(std::abs(r.witness->z()) <= 1e-9);
        CHECK(std::hypot(r.witness->x(), r.witness->y()) == doctest::Approx(p.scale).epsilon(0.02));
        CHECK(r.distance_lower_bound == 0.0);
        CHECK(verify_intersection(c, d).intersects);
    }

    TEST_CASE("parallel disks are disjoint") {
        const TriMesh a = horizontal_disk(6, 24, 0.5);
        const TriMesh b = horizontal_disk(6, 24, -0.5);
        const IntersectionResult r = verify_intersection(a, b);
        CHECK_FALSE(r.intersects);
        CHECK_FALSE(r.witness);
        CHECK(r.distance_lower_bound > 0.0);
        CHECK(r.distance_lower_bound <= 1.0 + 1e-12);
        CHECK(verify_intersection(b, a).distance_lower_bound == doctest::Approx(r.distance_lower_bound));
    }

    TEST_CASE("a mesh intersects itself") {
        const TriMesh d = equatorial_disk(4, 16);
        CHECK(verify_intersection(d, d).intersects);
    }

    TEST_CASE("translated copies") {
        const TriMesh d = equatorial_disk(4, 16);
        const TriMesh up = d.transformed(Eigen::Matrix3d::Identity(), Vec3(0, 0, 0.05));
        const IntersectionResult r = verify_intersection(d, up);
        CHECK_FALSE(r.intersects);
        CHECK(r.distance_lower_bound == doctest::Approx(0.05).epsilon(1e-9));
        CHECK(r.candidate_pairs > 0);
    }
}
