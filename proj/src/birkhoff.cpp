#include "psfront/birkhoff.hpp"

#include <Eigen/Dense>

#include "psfront/errors.hpp"

namespace psfront {

namespace {

// Unknown block j uses basis E1, E2: off-diagonal units for odd j, diagonal
// units for even j. Equation block m reads the two parity-active entries.
void basis_for(int j, Matrix2C& b1, Matrix2C& b2) {
    b1.setZero();
    b2.setZero();
    if (j % 2 != 0) {
        b1(0, 1) = 1.0;
        b2(1, 0) = 1.0;
    } else {
        b1(0, 0) = 1.0;
        b2(1, 1) = 1.0;
    }
}

void active_entries(int m, const Matrix2C& p, Complex& r1, Complex& r2) {
    if (m % 2 != 0) {
        r1 = p(0, 1);
        r2 = p(1, 0);
    } else {
        r1 = p(0, 0);
        r2 = p(1, 1);
    }
}

struct SolveOutcome {
    TwistedLoop w;
    double rcond;
};

SolveOutcome solve_toeplitz(const TwistedLoop& g) {
    const int n = g.order();
    const int dim = 2 * n;
    Eigen::MatrixXcd a(dim, dim);
    Eigen::VectorXcd rhs(dim);
    Matrix2C b1, b2;
    for (int mi = 0; mi < n; ++mi) {
        const int m = -1 - mi;  // equations for lambda^m, m = -1..-N
        Complex r1, r2;
        active_entries(m, g.coeff(m), r1, r2);
        rhs(2 * mi) = -r1;
        rhs(2 * mi + 1) = -r2;
        for (int j = 1; j <= n; ++j) {
            basis_for(j, b1, b2);
            const Matrix2C gq = g.coeff(m + j);
            const Matrix2C p1 = b1 * gq;
            const Matrix2C p2 = b2 * gq;
            Complex c1, c2;
            active_entries(m, p1, c1, c2);
            a(2 * mi, 2 * (j - 1)) = c1;
            a(2 * mi + 1, 2 * (j - 1)) = c2;
            active_entries(m, p2, c1, c2);
            a(2 * mi, 2 * (j - 1) + 1) = c1;
            a(2 * mi + 1, 2 * (j - 1) + 1) = c2;
        }
    }

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
    SolveOutcome out{TwistedLoop::identity(n), lu.rcond()};
    if (!(out.rcond > 0.0) || !std::isfinite(out.rcond)) {
        out.rcond = 0.0;
        return out;
    }
    const Eigen::VectorXcd x = lu.solve(rhs);
    if (!x.allFinite()) {
        out.rcond = 0.0;
        return out;
    }
    for (int j = 1; j <= n; ++j) {
        basis_for(j, b1, b2);
        out.w.coeff_ref(-j) = x(2 * (j - 1)) * b1 + x(2 * (j - 1) + 1) * b2;
    }
    return out;
}

BirkhoffResult factor_at_order(const TwistedLoop& g, double& rcond) {
    if (g.order() == 0) {
        rcond = 1.0;
        BirkhoffResult res;
        res.h_minus = TwistedLoop::identity(0);
        res.h_plus = g;
        res.h_plus.set_kind(LoopKind::Group);
        res.rcond = 1.0;
        res.order_used = 0;
        return res;
    }
    const SolveOutcome sol = solve_toeplitz(g);
    rcond = sol.rcond;
    BirkhoffResult res;
    res.rcond = sol.rcond;
    res.order_used = g.order();
    if (sol.rcond <= 0.0) return res;
    const TwistedLoop wg = loop_mul(sol.w, g);
    res.h_plus = project_plus(wg);
    res.h_minus = loop_adjugate(sol.w);
    res.h_minus.set_kind(LoopKind::Group);
    res.h_plus.set_kind(LoopKind::Group);
    res.residual = loop_sub(loop_mul(res.h_minus, res.h_plus), g).max_coeff_norm();
    return res;
}

}  // namespace

BirkhoffResult birkhoff_factor(const TwistedLoop& g, const BirkhoffOptions& opts) {
    double rcond = 0.0;
    BirkhoffResult res = factor_at_order(g, rcond);
    if (rcond >= opts.rcond_min) return res;
    if (opts.retry_double_order) {
        const TwistedLoop wide = loop_resize(g, 2 * g.order());
        double rcond2 = 0.0;
        BirkhoffResult res2 = factor_at_order(wide, rcond2);
        if (rcond2 >= opts.rcond_min) return res2;
        rcond = std::max(rcond, rcond2);
    }
    throw IllConditioned(rcond, g.order(), opts.fx, opts.fy, opts.has_node);
}

PlusNormalizedResult birkhoff_factor_plus_normalized(const TwistedLoop& g,
                                                     const BirkhoffOptions& opts) {
    const TwistedLoop rev = loop_reverse(g);
    const BirkhoffResult r = birkhoff_factor(rev, opts);
    PlusNormalizedResult out;
    out.p_plus = loop_reverse(r.h_minus);
    out.q_minus = loop_reverse(r.h_plus);
    out.residual = r.residual;
    return out;
}

}  // namespace psfront
