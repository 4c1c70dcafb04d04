#include <doctest.h>

#include <cmath>

#include "psfront/curves.hpp"
#include "psfront/errors.hpp"
#include "psfront/verify.hpp"
#include "support/oracles.hpp"

using namespace psfront;

namespace {

CurveOptions fine_options(int n = 2001) {
    CurveOptions o;
    o.samples = n;
    return o;
}

}  // namespace

TEST_CASE("circle R=2: arclength, curvature, torsion") {
    const auto curve = named_curve("circle", {{"R", 2.0}}, fine_options(4001));
    // s = R t over a full period: total length 4 pi, centered.
    CHECK(curve.s.front() == doctest::Approx(-2 * M_PI).epsilon(1e-8));
    CHECK(curve.s.back() == doctest::Approx(2 * M_PI).epsilon(1e-8));
    for (std::size_t k = 0; k < curve.s.size(); k += 100) {
        CHECK(curve.kappa[k] == doctest::Approx(0.5).epsilon(1e-7));
        CHECK(std::abs(curve.tau[k]) < 1e-6);
    }
    // |gamma'| = 1 under centered differences.
    const double ds = curve.s[1] - curve.s[0];
    for (std::size_t k = 1; k + 1 < curve.s.size(); k += 50) {
        const double speed = ((curve.gamma[k + 1] - curve.gamma[k - 1]) / (2 * ds)).norm();
        CHECK(std::abs(speed - 1.0) < 1e-6);
    }
}

TEST_CASE("helix closed form and Frenet relations") {
    const auto curve = named_curve("helix", {{"a", 2.0}, {"b", 1.0}}, fine_options());
    for (std::size_t k = 0; k < curve.s.size(); k += 157) {
        CHECK(curve.kappa[k] == doctest::Approx(0.4).epsilon(1e-7));
        CHECK(curve.tau[k] == doctest::Approx(0.2).epsilon(1e-6));
    }
    // Frame orthonormality and the Frenet relations at interior samples.
    const double ds = curve.s[1] - curve.s[0];
    for (std::size_t k = 1; k + 1 < curve.s.size(); k += 97) {
        CHECK(std::abs(curve.tvec[k].norm() - 1.0) < 1e-8);
        CHECK(std::abs(curve.nvec[k].norm() - 1.0) < 1e-8);
        CHECK(std::abs(curve.tvec[k].dot(curve.bvec[k])) < 1e-8);
        const Vec3 tp = (curve.tvec[k + 1] - curve.tvec[k - 1]) / (2 * ds);
        CHECK((tp - curve.kappa[k] * curve.nvec[k]).norm() < 1e-4);
        const Vec3 np = (curve.nvec[k + 1] - curve.nvec[k - 1]) / (2 * ds);
        CHECK((np + curve.kappa[k] * curve.tvec[k] - curve.tau[k] * curve.bvec[k]).norm() < 1e-4);
        const Vec3 bp = (curve.bvec[k + 1] - curve.bvec[k - 1]) / (2 * ds);
        CHECK((bp + curve.tau[k] * curve.nvec[k]).norm() < 1e-4);
    }
    // kappa^2 + tau^2 = 1 helix carries Dini Cauchy data.
    const auto dini = named_curve("helix", {{"a", 0.6}, {"b", 0.8}}, fine_options());
    CHECK(dini.kappa[500] == doctest::Approx(0.6).epsilon(1e-7));
    CHECK(dini.tau[500] == doctest::Approx(0.8).epsilon(1e-6));
}

TEST_CASE("cylinder figure: computed kappa and tau match the corrected closed forms") {
    // gamma(t) = (cos 3t, sin 3t, -sin t); the printed curvature formula needs
    // its exponent read as a division (checked numerically here).
    const auto curve = named_curve("cylinder_figure", {}, fine_options(4001));
    // Centered arclength puts t = 0 at s = 0 (symmetric speed).
    const std::size_t mid = curve.s.size() / 2;
    CHECK(curve.s[mid] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(curve.kappa[mid] == doctest::Approx(0.9).epsilon(1e-6));
    CHECK(curve.tau[mid] == doctest::Approx(-12.0 / 45.0).epsilon(1e-6));
    // |tau| < 1 and kappa > 0 along the whole curve: valid Cauchy data.
    for (std::size_t k = 0; k < curve.s.size(); k += 61) {
        CHECK(curve.kappa[k] > 0.85);
        CHECK(std::abs(curve.tau[k]) < 0.3);
    }
    // ds = sqrt(cos^2 t + 9) dt: total length over a period.
    double expect = 0.0;
    const int m = 20001;
    for (int k = 0; k < m; ++k) {
        const double t = -M_PI + 2 * M_PI * k / (m - 1);
        const double w = (k == 0 || k + 1 == m) ? 0.5 : 1.0;
        expect += w * std::sqrt(std::cos(t) * std::cos(t) + 9.0) * (2 * M_PI / (m - 1));
    }
    CHECK(curve.s.back() - curve.s.front() == doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("viviani: |tau| = 1 at four parameters per period") {
    const auto curve = named_curve("viviani", {}, fine_options(4001));
    CHECK(curve.tau_unit_params.size() == 4);
    for (std::size_t k = 0; k < curve.s.size(); k += 101) {
        CHECK(curve.kappa[k] > 0.5);  // non-vanishing curvature
    }
}

TEST_CASE("reconstruction closure: kappa/tau feed the Frenet system back to the curve") {
    const auto curve = named_curve("cylinder_figure", {}, fine_options(2001));
    const auto rebuilt = psfront::testing::frenet_reconstruct(
        curve.kappa_function(), curve.tau_function(), curve.s.front(), curve.s.back(),
        static_cast<int>(curve.s.size()));
    const auto align = kabsch_align(rebuilt, curve.gamma);
    CHECK(align.rms < 1e-4);
    CHECK(align.max < 1e-3);
}

TEST_CASE("tau is frame-consistent: reflections negate it, reversal keeps it") {
    const auto fwd = curve_from_expressions(parse_scalar("2*cos(t)"), parse_scalar("2*sin(t)"),
                                            parse_scalar("t"), -2.0, 2.0, fine_options());
    // A mirror image flips the sign of the torsion and keeps the curvature.
    const auto mir = curve_from_expressions(parse_scalar("2*cos(t)"), parse_scalar("2*sin(t)"),
                                            parse_scalar("-t"), -2.0, 2.0, fine_options());
    // Reversing the traversal is a rigid invariant: both kappa and tau stay.
    const auto rev = curve_from_expressions(parse_scalar("2*cos(-t)"), parse_scalar("2*sin(-t)"),
                                            parse_scalar("-t"), -2.0, 2.0, fine_options());
    const std::size_t mid = fwd.s.size() / 2;
    CHECK(fwd.kappa[mid] == doctest::Approx(mir.kappa[mid]).epsilon(1e-8));
    CHECK(fwd.tau[mid] == doctest::Approx(-mir.tau[mid]).epsilon(1e-6));
    CHECK(fwd.kappa[mid] == doctest::Approx(rev.kappa[mid]).epsilon(1e-8));
    CHECK(fwd.tau[mid] == doctest::Approx(rev.tau[mid]).epsilon(1e-6));
}

TEST_CASE("degenerate inputs are rejected with the documented errors") {
    CHECK_THROWS_AS(named_curve("lemniscate"), UnknownCurve);
    // Cusp: speed hits zero.
    CHECK_THROWS_AS(curve_from_expressions(parse_scalar("0.1*t^3"), parse_scalar("0.1*t^4"),
                                           parse_scalar("0"), -1.0, 1.0, fine_options(501)),
                    DegenerateCurve);
    // Straight line: kappa = 0 on a long run needs an explicit tau.
    CHECK_THROWS_AS(curve_from_expressions(parse_scalar("t"), parse_scalar("0"),
                                           parse_scalar("0"), -1.0, 1.0, fine_options(501)),
                    DegenerateCurve);
    CurveOptions with_tau = fine_options(501);
    with_tau.have_explicit_tau = true;
    with_tau.explicit_tau = ScalarFunction::constant(0.25);
    const auto line = curve_from_expressions(parse_scalar("t"), parse_scalar("0"),
                                             parse_scalar("0"), -1.0, 1.0, with_tau);
    CHECK(line.tau[100] == 0.25);
}

TEST_CASE("sampled-curve input matches the expression route") {
    const int m = 401;
    std::vector<double> ts;
    std::vector<Vec3> pts;
    for (int k = 0; k < m; ++k) {
        const double t = -1.0 + 2.0 * k / (m - 1);
        ts.push_back(t);
        pts.emplace_back(2 * std::cos(t), 2 * std::sin(t), 0.5 * t);
    }
    const auto sampled = curve_from_samples(ts, pts, fine_options(401));
    const std::size_t mid = sampled.s.size() / 2;
    // a=2, b=0.5: kappa = 2/4.25, tau = 0.5/4.25
    CHECK(sampled.kappa[mid] == doctest::Approx(2.0 / 4.25).epsilon(1e-3));
    CHECK(sampled.tau[mid] == doctest::Approx(0.5 / 4.25).epsilon(2e-2));
}

TEST_CASE("singular geometric Cauchy data checks") {
    const auto circle = named_curve("circle", {{"R", 1.0}}, fine_options(801));
    const std::size_t n = circle.s.size();

    // Constant vertical Z: admissible, |Z'| = 0 != 1.
    std::vector<Vec3> zconst(n, Vec3(0, 0, 1));
    const auto rep = singular_geometric_cauchy_check(circle, zconst);
    CHECK(rep.all_admissible);
    for (std::size_t k = 0; k < n; k += 97) {
        CHECK(rep.z_orthogonal[k]);
        CHECK(rep.zprime_orthogonal[k]);
        CHECK(rep.weakly_regular[k]);
        CHECK(rep.z_is_binormal[k]);
    }

    // Z = n (the principal normal): <Z', gamma'> = kappa != 0 fails.
    const auto repn = singular_geometric_cauchy_check(circle, circle.nvec, 1e-4);
    bool any_fail = false;
    for (std::size_t k = 5; k + 5 < n; ++k) {
        if (!repn.zprime_orthogonal[k]) any_fail = true;
    }
    CHECK(any_fail);
    CHECK_FALSE(repn.all_admissible);

    // Helix with Z = b: weak regularity holds iff |tau| != 1 (|b'| = |tau|).
    const auto helix = named_curve("helix", {{"a", 2.0}, {"b", 1.0}}, fine_options(801));
    const auto reph = singular_geometric_cauchy_check(helix, helix.bvec, 1e-3);
    CHECK(reph.weakly_regular[400]);  // tau = 0.2
    const auto unit = named_curve("helix", {{"a", 0.3}, {"b", 0.9}}, fine_options(801));
    const auto repu = singular_geometric_cauchy_check(unit, unit.bvec, 1e-3);
    CHECK_FALSE(repu.weakly_regular[400]);  // tau = 1 exactly
}
