// One PASS/FAIL line per acceptance criterion; exit status is the number of failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

#include "fbms/checks.hpp"
#include "fbms/exemplars.hpp"
#include "fbms/intersection.hpp"
#include "fbms/parallel.hpp"
#include "fbms/solver.hpp"
#include "fbms/steklov.hpp"
#include "properties.hpp"

using namespace fbms;

namespace {

constexpr double kPi = std::numbers::pi;

bool within(double x, double target, double rel) { return std::abs(x - target) <= rel * std::abs(target); }

struct Fixture {
    ConvexAmbient ball = ConvexAmbient::ball(1.0);
    CatenoidParameters par = critical_catenoid_parameters();
    TriMesh catenoid = critical_catenoid(128, 256);
    SolveResult disk = minimize_area(perturb(equatorial_disk(10, 48), ball, 0.05, 7), ball, SolverConfig{});
    TriMesh flat = equatorial_disk(24, 96);
};

using Criterion = std::function<bool(Fixture&, std::string&)>;

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

bool disk_spectrum(Fixture&, std::string& msg) {
    set_num_threads(1);
    const auto t0 = std::chrono::steady_clock::now();
    const TriMesh d = equatorial_disk(48, 192);
    const SteklovSpectrum s = steklov_spectrum(d, 5);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double expect[] = {1, 1, 2, 2};
    bool ok = secs <= 60.0;
    for (int k = 1; k <= 4; ++k) ok = ok && within(s.eigenvalues(k), expect[k - 1], 0.02);
    msg = fmt("%zu vertices, sigma1..4 = %.5f %.5f %.5f %.5f, %.2f s", d.num_vertices(), s.eigenvalues(1),
              s.eigenvalues(2), s.eigenvalues(3), s.eigenvalues(4), secs);
    return ok;
}

bool weinstock(Fixture& f, std::string& msg) {
    const double v = sigma1(f.flat) * boundary_length(f.flat);
    msg = fmt("sigma1 L = %.5f, 2 pi = %.5f", v, 2 * kPi);
    return within(v, 2 * kPi, 0.02) && v <= 2 * kPi * (1 + 0.02);
}

bool catenoid(Fixture& f, std::string& msg) {
    const double root = std::abs(f.par.s0 * std::tanh(f.par.s0) - 1.0);
    const CheckContext ctx = make_context(f.catenoid, f.ball);
    const double l_exact = 4 * kPi * f.par.scale * std::cosh(f.par.s0);
    const CheckResult lower = verify_sigma1_bound(ctx);
    const CheckResult len = verify_length_bound(ctx);
    msg = fmt("s0 = %.8f (residual %.1e), sigma1 = %.5f, L = %.5f vs %.5f, margins sigma1 >= 1/2: %.4f, L <= 8 pi: %.4f",
              f.par.s0, root, ctx.sigma1, ctx.length, l_exact, lower.margin, len.margin);
    return root <= 1e-13 && within(ctx.sigma1, 1.0, 0.05) && within(ctx.length, l_exact, 0.01) &&
           lower.status == CheckStatus::pass && len.status == CheckStatus::pass;
}

bool ball_identity(Fixture& f, std::string& msg) {
    const double ld = boundary_length(f.disk.mesh), ad = area(f.disk.mesh);
    const double lc = boundary_length(f.catenoid), ac = area(f.catenoid);
    msg = fmt("disk L/2A = %.5f, catenoid L/2A = %.5f", ld / (2 * ad), lc / (2 * ac));
    return f.disk.report.converged && within(ld, 2 * ad, 0.01) && within(lc, 2 * ac, 0.01);
}

bool gauss_bonnet_chain(Fixture& f, std::string& msg) {
    const GaussBonnet c = gauss_bonnet(f.catenoid, f.ball);
    const double l = boundary_length(f.catenoid);
    const double vals[] = {c.half_total_curvature, c.kg_intrinsic, c.kg_extrinsic, l};
    bool ok = true;
    for (double a : vals)
        for (double b : vals) ok = ok && within(a, b, 0.05);
    const GaussBonnet d = gauss_bonnet(f.flat, f.ball);
    const double two_pi_chi = 2 * kPi * d.euler_characteristic;
    const double dh = d.half_total_curvature, di = d.kg_intrinsic - two_pi_chi, de = d.kg_extrinsic - two_pi_chi;
    ok = ok && std::abs(dh) <= 0.05 && std::abs(di) <= 0.05 && std::abs(de) <= 0.05;
    msg = fmt("catenoid (%.4f, %.4f, %.4f, L %.4f); disk (%.1e, %.1e, %.1e)", vals[0], vals[1], vals[2], l, dh, di, de);
    return ok;
}

bool instability(Fixture& f, std::string& msg) {
    const double ld = boundary_length(f.flat), lc = boundary_length(f.catenoid);
    const auto one = [](const TriMesh& m) { return Eigen::VectorXd::Ones(static_cast<Eigen::Index>(m.num_vertices())); };
    const double qd = stability_form(f.flat, f.ball, one(f.flat));
    const double qc = stability_form(f.catenoid, f.ball, one(f.catenoid));
    msg = fmt("disk %.4f (-2 pi = %.4f), catenoid %.4f (-3L = %.4f)", qd, -2 * kPi, qc, -3 * lc);
    return qd <= -ld + 0.02 * ld && qc <= -lc + 0.02 * lc && within(qd, -2 * kPi, 0.02) && within(qc, -3 * lc, 0.07);
}

bool solver(Fixture& f, std::string& msg) {
    const ConvergenceReport& r = f.disk.report;
    const double a = area(f.disk.mesh);
    msg = fmt("%d iterations, sup|H| = %.2e, defect = %.2e rad, area = %.5f", r.iterations, r.final_H_sup,
              r.final_orth_defect, a);
    return r.converged && r.final_H_sup <= 1e-3 && r.final_orth_defect <= 0.017 && within(a, kPi, 0.01) &&
           r.iterations <= 5000;
}

bool intersection(Fixture& f, std::string& msg) {
    const IntersectionResult hit = verify_intersection(f.disk.mesh, f.catenoid);
    const IntersectionResult miss = verify_intersection(horizontal_disk(8, 32, 0.5), horizontal_disk(8, 32, -0.5));
    msg = fmt("disk/catenoid intersect: %s, parallel disks disjoint: %s (distance >= %.3f)",
              hit.intersects && hit.witness ? "yes" : "no", miss.intersects ? "no" : "yes", miss.distance_lower_bound);
    return hit.intersects && hit.witness && !miss.intersects;
}

bool properties(Fixture&, std::string& msg) {
    using namespace fbms::test;
    const std::pair<const char*, PropertyOutcome> runs[] = {
        {"gradient", area_gradient_matches_finite_differences(1000, 1)},
        {"scaling", steklov_scaling_law(1000, 2)},
        {"sigma1 L", sigma1_length_scale_invariance(1000, 3)},
        {"DtN", dtn_symmetric_with_constant_kernel(1000, 4)},
        {"ordering", spectrum_nonnegative_and_ordered(1000, 5)},
        {"Rayleigh", rayleigh_quotient_bounds_sigma1(1000, 6)},
    };
    bool ok = true;
    for (const auto& [name, o] : runs) {
        msg += fmt("%s %d/%d; ", name, o.cases - o.failures, o.cases);
        ok = ok && o.ok() && o.cases == 1000;
    }
    return ok;
}

bool refinement(Fixture& f, std::string& msg) {
    bool ok = true;
    double prev_s = 1e300, prev_g = 1e300;
    for (int l = 1; l <= 3; ++l) {
        const double es = std::abs(sigma1(equatorial_disk(3 << l, 12 << l)) - 1.0);
        const double eg = gauss_bonnet_residual(critical_catenoid(8 << l, 16 << l), f.ball);
        ok = ok && es < prev_s && eg < prev_g;
        msg += fmt("level %d: |sigma1 - 1| = %.2e, GB residual = %.3f; ", l, es, eg);
        prev_s = es;
        prev_g = eg;
    }
    return ok;
}

}  // namespace

int main() {
    Fixture f;
    const std::pair<const char*, Criterion> criteria[] = {
        {"disk Steklov spectrum", disk_spectrum},
        {"Weinstock equality", weinstock},
        {"critical catenoid", catenoid},
        {"ball identity", ball_identity},
        {"Gauss-Bonnet chain", gauss_bonnet_chain},
        {"instability", instability},
        {"solver recovery", solver},
        {"intersection principle", intersection},
        {"property suites", properties},
        {"refinement monotonicity", refinement},
    };
    int failures = 0, i = 0;
    for (const auto& [name, check] : criteria) {
        std::string msg;
        bool ok = false;
        try {
            ok = check(f, msg);
        } catch (const std::exception& e) {
            msg = std::string("exception: ") + e.what();
        }
        failures += ok ? 0 : 1;
        std::printf("%s %d %s: %s\n", ok ? "PASS" : "FAIL", ++i, name, msg.c_str());
        std::fflush(stdout);
    }
    return failures;
}
