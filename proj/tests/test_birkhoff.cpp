#include <doctest.h>

#include <random>

#include "psfront/birkhoff.hpp"
#include "psfront/errors.hpp"
#include "support/oracles.hpp"

using namespace psfront;
using psfront::testing::random_group_loop;
using psfront::testing::random_minus_loop;
using psfront::testing::random_plus_loop;

namespace {

double loop_distance(const TwistedLoop& a, const TwistedLoop& b) {
    return loop_sub(a, b).max_coeff_norm();
}

}  // namespace

TEST_CASE("identity factors trivially") {
    const auto res = birkhoff_factor(TwistedLoop::identity(8));
    CHECK(loop_distance(res.h_minus, TwistedLoop::identity(8)) == 0.0);
    CHECK(loop_distance(res.h_plus, TwistedLoop::identity(8)) == 0.0);
    CHECK(res.residual == 0.0);
}

TEST_CASE("loops already in G+ get H_- = I") {
    Matrix2C diag = Matrix2C::Zero();
    diag(0, 0) = std::polar(1.0, 0.55);
    diag(1, 1) = std::polar(1.0, -0.55);
    const TwistedLoop g = TwistedLoop::constant(10, diag, LoopKind::Group);
    const auto res = birkhoff_factor(g);
    CHECK(loop_distance(res.h_minus, TwistedLoop::identity(10)) < 1e-14);
    CHECK(loop_distance(res.h_plus, g) < 1e-14);

    std::mt19937 rng(5);
    const TwistedLoop gp = random_plus_loop(rng, 10, 3, 0.4);
    const auto res2 = birkhoff_factor(gp);
    CHECK(loop_distance(res2.h_minus, TwistedLoop::identity(10)) < 1e-12);
    CHECK(loop_distance(res2.h_plus, gp) < 1e-12);
}

TEST_CASE("construct-multiply-factor recovers the normalized factors") {
    std::mt19937 rng(41);
    for (int rep = 0; rep < 50; ++rep) {
        const TwistedLoop lm = random_minus_loop(rng, 12, 2, 0.4);
        const TwistedLoop lp = random_plus_loop(rng, 12, 2, 0.4);
        const TwistedLoop g = loop_mul(lm, lp);
        const auto res = birkhoff_factor(g);
        CHECK(res.residual <= 1e-9);
        CHECK(loop_distance(res.h_minus, lm) < 1e-8);
        CHECK(loop_distance(res.h_plus, lp) < 1e-8);
        CHECK(res.h_minus.coeff(0) == Matrix2C::Identity());
        for (int j = 1; j <= 12; ++j) CHECK(res.h_minus.coeff(j).norm() == 0.0);
        for (int j = -12; j < 0; ++j) CHECK(res.h_plus.coeff(j).norm() == 0.0);
    }
}

TEST_CASE("factorization is unique: refactoring the product agrees") {
    std::mt19937 rng(43);
    const TwistedLoop g = random_group_loop(rng, 12, 1, 0.5);
    const auto res1 = birkhoff_factor(g);
    const TwistedLoop g2 = loop_mul(res1.h_minus, res1.h_plus);
    const auto res2 = birkhoff_factor(g2);
    CHECK(loop_distance(res1.h_minus, res2.h_minus) < 1e-8);
    CHECK(loop_distance(res1.h_plus, res2.h_plus) < 1e-8);
}

TEST_CASE("round trip holds on unitary frame-like loops") {
    std::mt19937 rng(47);
    for (int rep = 0; rep < 30; ++rep) {
        const TwistedLoop g = random_group_loop(rng, 12, 1, 0.5);
        const auto res = birkhoff_factor(g);
        CHECK(res.residual <= 1e-9);
        CHECK(loop_distance(loop_mul(res.h_minus, res.h_plus), g) <= 1e-9);
    }
}

TEST_CASE("twisting passes through the factorization") {
    std::mt19937 rng(53);
    const TwistedLoop g = random_group_loop(rng, 10, 1, 0.4);
    const auto res = birkhoff_factor(g);
    CHECK(res.h_minus.twisting_defect() == 0.0);
    CHECK(res.h_plus.twisting_defect() == 0.0);
}

TEST_CASE("the off-cell element raises IllConditioned after the retry") {
    // G = [[0, lambda], [-lambda^{-1}, 0]]: det 1 and twisted, but outside the
    // unitary real form; the Toeplitz system has a structurally zero row.
    TwistedLoop g(2, LoopKind::Group);
    g.coeff_ref(1)(0, 1) = 1.0;
    g.coeff_ref(-1)(1, 0) = -1.0;
    CHECK_THROWS_AS(birkhoff_factor(g), IllConditioned);
}

TEST_CASE("plus-normalized factorization mirrors the minus-normalized one") {
    std::mt19937 rng(59);
    const TwistedLoop g = random_group_loop(rng, 10, 1, 0.4);
    const auto res = birkhoff_factor_plus_normalized(g);
    CHECK(res.residual <= 1e-9);
    // P_+ has constant term I and no negative powers.
    CHECK((res.p_plus.coeff(0) - Matrix2C::Identity()).norm() < 1e-14);
    for (int j = -10; j < 0; ++j) CHECK(res.p_plus.coeff(j).norm() == 0.0);
    for (int j = 1; j <= 10; ++j) CHECK(res.q_minus.coeff(j).norm() == 0.0);
    CHECK(loop_distance(loop_mul(res.p_plus, res.q_minus), g) <= 1e-9);
}
