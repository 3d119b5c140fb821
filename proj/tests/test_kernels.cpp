#include <cstring>
#include <random>

#include "doctest.h"
#include "fbms/exemplars.hpp"
#include "fbms/geometry.hpp"
#include "fbms/kernels.hpp"
#include "fbms/parallel.hpp"
#include "fbms/solver.hpp"
#include "support.hpp"

using namespace fbms;
using namespace fbms::kernels;

namespace {

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

FaceCorners random_corners(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    FaceCorners c;
    c.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        c.ax[i] = g(rng); c.ay[i] = g(rng); c.az[i] = g(rng);
        c.bx[i] = g(rng); c.by[i] = g(rng); c.bz[i] = g(rng);
        c.cx[i] = g(rng); c.cy[i] = g(rng); c.cz[i] = g(rng);
    }
    return c;
}

}  // namespace

TEST_SUITE("kernels") {
    TEST_CASE("scalar kernel on a right triangle") {
        FaceCorners c;
        c.resize(1);
        c.ax[0] = 0; c.ay[0] = 0; c.az[0] = 0;
        c.bx[0] = 1; c.by[0] = 0; c.bz[0] = 0;
        c.cx[0] = 0; c.cy[0] = 1; c.cz[0] = 0;
        FaceGeometry g;
        g.resize(1);
        detail::face_geometry_scalar(c, g, 0, 1);
        CHECK(g.area[0] == 0.5);
        CHECK(g.nz[0] == 1.0);
        CHECK(g.cot_a[0] == doctest::Approx(0.0));
        CHECK(g.cot_b[0] == doctest::Approx(1.0));
        CHECK(g.cot_c[0] == doctest::Approx(1.0));
    }

    TEST_CASE("AVX2 kernels are bitwise identical to the scalar reference") {
        if (!isa_available(Isa::avx2)) {
            MESSAGE("AVX2 not available; equivalence not exercised");
            return;
        }
        // Odd sizes exercise the scalar tail of the vector loop.
        for (std::size_t n : {1u, 3u, 4u, 7u, 64u, 1001u}) {
            const FaceCorners c = random_corners(n, n);
            FaceGeometry s, v;
            s.resize(n);
            v.resize(n);
            detail::face_geometry_scalar(c, s, 0, n);
            detail::face_geometry_avx2(c, v, 0, n);
            CHECK(bitwise_equal(s.area, v.area));
            CHECK(bitwise_equal(s.nx, v.nx));
            CHECK(bitwise_equal(s.ny, v.ny));
            CHECK(bitwise_equal(s.nz, v.nz));
            CHECK(bitwise_equal(s.cot_a, v.cot_a));
            CHECK(bitwise_equal(s.cot_b, v.cot_b));
            CHECK(bitwise_equal(s.cot_c, v.cot_c));

            FaceAreaGradient gs, gv;
            gs.resize(n);
            gv.resize(n);
            detail::face_area_gradient_scalar(c, gs, 0, n);
            detail::face_area_gradient_avx2(c, gv, 0, n);
            CHECK(bitwise_equal(gs.gax, gv.gax));
            CHECK(bitwise_equal(gs.gby, gv.gby));
            CHECK(bitwise_equal(gs.gcz, gv.gcz));
            CHECK(bitwise_equal(gs.gcx, gv.gcx));
        }
    }

    TEST_CASE("sub-range dispatch only touches its range") {
        const FaceCorners c = random_corners(20, 3);
        FaceGeometry g;
        g.resize(20);
        std::fill(g.area.begin(), g.area.end(), -1.0);
        face_geometry(c, g, 5, 13, detect_isa());
        for (std::size_t i = 0; i < 20; ++i) CHECK((g.area[i] == -1.0) == (i < 5 || i >= 13));
    }

    TEST_CASE("ISA selection") {
        CHECK(isa_available(Isa::scalar));
        const Isa before = active_isa();
        set_active_isa(Isa::scalar);
        CHECK(active_isa() == Isa::scalar);
        set_active_isa(before);
        if (!isa_available(Isa::avx2)) CHECK_THROWS_AS(set_active_isa(Isa::avx2), std::invalid_argument);
    }

    TEST_CASE("area gradient identical across ISAs and thread counts") {
        std::mt19937_64 rng(17);
        const TriMesh m = test::random_surface(rng);
        const TriMesh big = critical_catenoid(64, 128);
        const Isa before = active_isa();
        for (const TriMesh* mesh : {&m, &big}) {
            set_active_isa(Isa::scalar);
            set_num_threads(1);
            const auto ref = area_gradient(*mesh);
            const auto ref_areas = mixed_vertex_areas(*mesh, compute_face_geometry(*mesh));
            for (Isa isa : {Isa::scalar, Isa::avx2}) {
                if (!isa_available(isa)) continue;
                set_active_isa(isa);
                for (int t : {1, 2, 4}) {
                    set_num_threads(t);
                    CHECK(area_gradient(*mesh) == ref);
                    CHECK(mixed_vertex_areas(*mesh, compute_face_geometry(*mesh)) == ref_areas);
                }
            }
        }
        set_num_threads(1);
        set_active_isa(before);
    }
}
