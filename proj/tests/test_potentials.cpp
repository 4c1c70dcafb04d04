#include <doctest.h>

#include <cmath>

#include "psfront/errors.hpp"
#include "psfront/potentials.hpp"

using namespace psfront;

namespace {

ScalarFunction expr(const std::string& src) { return parse_scalar(src); }

}  // namespace

TEST_CASE("boundary potential: the cuspidal-edge fixture A=B=1, beta=2, eps=+1") {
    const auto pair = noncharacteristic_potential(expr("1"), expr("1"), expr("2"), +1,
                                                  Interval{-1.0, 1.0});
    // chi = (-e1 lambda^{-1} - e3 + e1 lambda) dt
    CHECK(pair.chi.coeff_vec(-1, 0.3) == Vec3(-1, 0, 0));
    CHECK(pair.chi.coeff_vec(0, 0.3) == Vec3(0, 0, -1));
    CHECK(pair.chi.coeff_vec(1, 0.3) == Vec3(1, 0, 0));
    // eps = +1: the psi leg is the same form.
    CHECK(pair.psi.coeff_vec(-1, 0.3) == Vec3(-1, 0, 0));
    CHECK(pair.epsilon == 1);
    CHECK(pair.expected == SingularSetKind::Diagonal);
    CHECK(pair.degenerate_params.empty());
    CHECK(pair.regular);
    CHECK(pair.chi.max_power() == 1);
    CHECK(pair.psi.min_power() == -1);
}

TEST_CASE("boundary potential: swallowtail and cone data use eps = -1 pullbacks") {
    // (A, eps B) = (1+t, -1+t): B = 1-t with eps = -1.
    const auto sw = noncharacteristic_potential(expr("1+t"), expr("1-t"), expr("2"), -1,
                                                Interval{-0.5, 0.5});
    CHECK(sw.chi.coeff_vec(1, 0.2)[0] == doctest::Approx(1.2));
    CHECK(sw.chi.coeff_vec(-1, 0.2)[0] == doctest::Approx(0.8));  // -eps B = +B
    // psi_j(y) = eps * chi_j(eps y) = -chi_j(-y); chi_{-1}(t) = B(t) = 1 - t.
    CHECK(sw.psi.coeff_vec(-1, 0.2)[0] == doctest::Approx(-(1.0 + 0.2)));
    CHECK(sw.psi.coeff_vec(0, 0.2)[2] == doctest::Approx(1.0));

    const auto cone = noncharacteristic_potential(expr("1"), expr("1"), expr("2"), -1,
                                                  Interval{-0.5, 0.5});
    // A(t) + eps B(t) = 0 identically: the cone condition on the data.
    for (double t : {-0.4, 0.0, 0.3}) {
        const double A = cone.chi.coeff_vec(1, t)[0];
        const double B = 1.0;
        CHECK(A + (-1) * B == doctest::Approx(0.0));
    }
}

TEST_CASE("degenerate boundary data flags the beta zeros") {
    const auto pair = noncharacteristic_potential(expr("1"), expr("1"), expr("t"), +1,
                                                  Interval{-1.0, 1.0});
    REQUIRE(pair.degenerate_params.size() == 1);
    CHECK(pair.degenerate_params[0] == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("cuspidal edge potential: pseudosphere and Dini data") {
    CauchyData data;
    data.kappa = expr("1");
    data.tau = expr("0");
    data.J = Interval{-1.0, 1.0};
    const auto pair = cuspidal_edge_potential(data);
    CHECK(pair.epsilon == 1);  // sign(1 - tau)
    CHECK(pair.chi.coeff_vec(-1, 0.1) == Vec3(-0.5, 0, 0));
    CHECK(pair.chi.coeff_vec(0, 0.1) == Vec3(0, 0, 1));
    CHECK(pair.chi.coeff_vec(1, 0.1) == Vec3(0.5, 0, 0));
    CHECK(pair.regular);
    CHECK(pair.degenerate_params.empty());

    CauchyData dini;
    dini.kappa = expr("0.6");
    dini.tau = expr("0.8");
    dini.J = Interval{-1.0, 1.0};
    const auto dpair = cuspidal_edge_potential(dini);
    CHECK(dpair.epsilon == 1);
    CHECK(dpair.chi.coeff_vec(1, 0.0)[0] == doctest::Approx(0.9));
    CHECK(dpair.chi.coeff_vec(-1, 0.0)[0] == doctest::Approx(-0.1));

    // tau > 1 selects the eps = -1 branch, keeping B > 0.
    CauchyData outer;
    outer.kappa = expr("1");
    outer.tau = expr("2");
    outer.J = Interval{-1.0, 1.0};
    const auto opair = cuspidal_edge_potential(outer);
    CHECK(opair.epsilon == -1);
    const double epsB = -opair.chi.coeff_vec(-1, 0.0)[0];  // eps B = (1 - tau)/2
    CHECK(epsB == doctest::Approx(-0.5));
    CHECK(epsB / opair.epsilon > 0);  // B itself positive
}

TEST_CASE("kappa = 0 input degenerates to constant e1 coefficients") {
    CauchyData data;
    data.kappa = expr("0");
    data.tau = expr("0");
    data.J = Interval{-1.0, 1.0};
    const auto pair = cuspidal_edge_potential(data);
    for (double t : {-0.7, 0.0, 0.4}) {
        CHECK(pair.chi.coeff_vec(1, t) == Vec3(0.5, 0, 0));
        CHECK(pair.chi.coeff_vec(-1, t) == Vec3(-0.5, 0, 0));
        CHECK(pair.chi.coeff_vec(0, t) == Vec3(0, 0, 0));
    }
    CHECK(pair.regular);  // leading coefficients never vanish
}

TEST_CASE("leading-coefficient zeros land exactly at |tau| = 1 parameters") {
    CauchyData data;
    data.kappa = expr("1");
    data.tau = expr("t");  // tau = -1 at t=-1, +1 at t=+1
    data.J = Interval{-1.5, 1.5};
    const auto pair = cuspidal_edge_potential(data);
    REQUIRE(pair.chi_top_zero_params.size() == 1);
    CHECK(pair.chi_top_zero_params[0] == doctest::Approx(-1.0).epsilon(1e-8));
    REQUIRE(pair.psi_bottom_zero_params.size() == 1);
    CHECK(pair.psi_bottom_zero_params[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(pair.semi_regular);
    CHECK_FALSE(pair.regular);

    // eps branch positivity: A > 0 where tau > -1, eps B > 0 where tau < 1.
    for (double t : {-0.9, 0.0, 0.9}) {
        CHECK(pair.chi.coeff_vec(1, t)[0] > 0);
        CHECK(-pair.chi.coeff_vec(-1, t)[0] > 0);
    }
}

TEST_CASE("translation invariance of constant Cauchy data") {
    CauchyData data;
    data.kappa = expr("2");
    data.tau = expr("0.5");
    data.J = Interval{-2.0, 2.0};
    const auto pair = cuspidal_edge_potential(data);
    const Vec3 a = pair.chi.coeff_vec(1, -1.3);
    const Vec3 b = pair.chi.coeff_vec(1, 0.9);
    CHECK((a - b).norm() == 0.0);
}

TEST_CASE("characteristic potential validates its data") {
    const Interval ix{-1.0, 1.0}, iy{-1.0, 1.0};
    const auto ok = characteristic_potential(expr("0"), expr("1"), expr("t"), ix, iy);
    CHECK(ok.expected == SingularSetKind::RowY0);
    CHECK(ok.chi.coeff_vec(1, 0.5) == Vec3(1, 0, 0));
    CHECK(ok.psi.coeff_vec(-1, 0.25) == Vec3(1, 0.25, 0));

    CHECK_THROWS_AS(characteristic_potential(expr("0"), expr("1"), expr("1+t"), ix, iy),
                    InvalidCharacteristicData);  // beta(0) != 0
    CHECK_THROWS_AS(characteristic_potential(expr("0"), expr("1"), expr("t^2"), ix, iy),
                    InvalidCharacteristicData);  // beta'(0) = 0
    CHECK_THROWS_AS(characteristic_potential(expr("1"), expr("1"), expr("t"), ix, iy),
                    InvalidCharacteristicData);  // alpha(0) != 0 with kappa != 0
    CHECK_NOTHROW(characteristic_potential(expr("1"), expr("t^2"), expr("t"), ix, iy));
}

TEST_CASE("boundary potential from connection components reproduces the constructions") {
    const Interval J{-1.0, 1.0};

    // Cauchy-type data: U_k = kappa e3, U_p = (tau+1)/2 e1, V_k = 0,
    // V_p = -B e1 with eps B = (1-tau)/2.
    const auto kappa = expr("1+0.2*t");
    const auto tau = expr("0.3*t");
    ConnectionComponentFunctions c;
    c.Uk = {{}, {}, kappa};
    c.Up = {tau.plus(ScalarFunction::constant(1.0)).scaled(0.5), {}, {}};
    c.Vk = {{}, {}, {}};
    c.Vp = {tau.plus(ScalarFunction::constant(-1.0)).scaled(0.5), {}, {}};
    const auto viaframe = boundary_potential_from_frame(c, +1, J);

    CauchyData data;
    data.kappa = kappa;
    data.tau = tau;
    data.J = J;
    const auto direct = cuspidal_edge_potential(data);

    for (double t : {-0.9, -0.25, 0.0, 0.5, 1.0}) {
        for (int p : {-1, 0, 1}) {
            CHECK((viaframe.chi.coeff_vec(p, t) - direct.chi.coeff_vec(p, t)).norm() < 1e-15);
            CHECK((viaframe.psi.coeff_vec(p, t) - direct.psi.coeff_vec(p, t)).norm() < 1e-15);
        }
    }

    // Generic boundary data through the component route.
    const auto A = expr("1+t");
    const auto B = expr("1-t");
    const auto beta = expr("2");
    ConnectionComponentFunctions c2;
    c2.Uk = {{}, {}, beta.scaled(-0.5)};
    c2.Up = {A, {}, {}};
    c2.Vk = {{}, {}, {}};
    c2.Vp = {B.scaled(-1.0), {}, {}};
    const auto viaframe2 = boundary_potential_from_frame(c2, -1, J);
    const auto direct2 = noncharacteristic_potential(A, B, beta, -1, J);
    for (double t : {-0.8, 0.0, 0.6}) {
        for (int p : {-1, 0, 1}) {
            CHECK((viaframe2.chi.coeff_vec(p, t) - direct2.chi.coeff_vec(p, t)).norm() < 1e-15);
            CHECK((viaframe2.psi.coeff_vec(p, t) - direct2.psi.coeff_vec(p, t)).norm() < 1e-15);
        }
    }

    // All-zero components give the zero pair.
    ConnectionComponentFunctions zero;
    const auto zpair = boundary_potential_from_frame(zero, +1, J);
    for (double t : {-1.0, 0.0, 1.0}) {
        for (int p : {-1, 0, 1}) {
            CHECK(zpair.chi.coeff_vec(p, t).norm() == 0.0);
        }
    }
}

TEST_CASE("raw pairs enforce the band shape and twisting") {
    PotentialLeg chi, psi;
    chi.add_term(1, {ScalarFunction::constant(1.0), {}, {}});
    psi.add_term(-1, {ScalarFunction::constant(1.0), {}, {}});
    CHECK_NOTHROW(raw_potential_pair(chi, psi, +1));

    PotentialLeg bad;
    bad.add_term(3, {ScalarFunction::constant(1.0), {}, {}});
    CHECK_THROWS_AS(raw_potential_pair(bad, psi, +1), ConfigError);

    PotentialLeg badpsi;
    badpsi.add_term(-3, {ScalarFunction::constant(1.0), {}, {}});
    CHECK_THROWS_AS(raw_potential_pair(chi, badpsi, +1), ConfigError);

    PotentialLeg twist;
    CHECK_THROWS_AS(twist.add_term(1, {{}, {}, ScalarFunction::constant(1.0)}), ConfigError);
    CHECK_THROWS_AS(twist.add_term(0, {ScalarFunction::constant(1.0), {}, {}}), ConfigError);
}
