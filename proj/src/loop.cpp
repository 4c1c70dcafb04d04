#include "psfront/loop.hpp"

#include <algorithm>
#include <cmath>

#include "psfront/errors.hpp"

namespace psfront {

TwistedLoop TwistedLoop::identity(int order) {
    TwistedLoop g(order, LoopKind::Group);
    g.coeff_ref(0) = Matrix2C::Identity();
    return g;
}

TwistedLoop TwistedLoop::constant(int order, const Matrix2C& m, LoopKind kind) {
    TwistedLoop g(order, kind);
    g.coeff_ref(0) = m;
    return g;
}

TwistedLoop TwistedLoop::twisted_frame_constant(int order, const Matrix2C& g0) {
    TwistedLoop g(order, LoopKind::Group);
    g.coeff_ref(0)(0, 0) = g0(0, 0);
    g.coeff_ref(0)(1, 1) = g0(1, 1);
    if (order >= 1) {
        g.coeff_ref(1)(0, 1) = g0(0, 1);
        g.coeff_ref(-1)(1, 0) = g0(1, 0);
    }
    return g;
}

double TwistedLoop::max_coeff_norm() const {
    double m = 0.0;
    for (const auto& c : coeff_) m = std::max(m, c.norm());
    return m;
}

double TwistedLoop::twisting_defect() const {
    double d = 0.0;
    for (int j = -order_; j <= order_; ++j) {
        const Matrix2C& c = coeff(j);
        const bool odd = (j % 2 != 0);
        if (odd) {
            d = std::max({d, std::abs(c(0, 0)), std::abs(c(1, 1))});
        } else {
            d = std::max({d, std::abs(c(0, 1)), std::abs(c(1, 0))});
        }
    }
    return d;
}

TwistedLoop loop_mul(const TwistedLoop& a, const TwistedLoop& b) {
    const int n = a.order();
    if (b.order() != n) throw NumericalError("loop_mul: truncation orders differ");
    const LoopKind kind =
        (a.kind() == LoopKind::Group && b.kind() == LoopKind::Group) ? LoopKind::Group
                                                                     : LoopKind::Algebra;
    TwistedLoop out(n, kind);
    double dropped = 0.0;
    for (int m = -2 * n; m <= 2 * n; ++m) {
        Matrix2C acc = Matrix2C::Zero();
        const int jlo = std::max(-n, m - n);
        const int jhi = std::min(n, m + n);
        bool any = false;
        for (int j = jlo; j <= jhi; ++j) {
            acc.noalias() += a.coeff(j) * b.coeff(m - j);
            any = true;
        }
        if (!any) continue;
        if (m >= -n && m <= n) {
            out.coeff_ref(m) = acc;
        } else {
            dropped += acc.norm();
        }
    }
    out.add_tail(a.tail() + b.tail() + dropped);
    return out;
}

TwistedLoop loop_add(const TwistedLoop& a, const TwistedLoop& b) {
    const int n = a.order();
    if (b.order() != n) throw NumericalError("loop_add: truncation orders differ");
    TwistedLoop out(n, a.kind());
    for (int j = -n; j <= n; ++j) out.coeff_ref(j) = a.coeff(j) + b.coeff(j);
    out.add_tail(a.tail() + b.tail());
    return out;
}

TwistedLoop loop_sub(const TwistedLoop& a, const TwistedLoop& b) {
    const int n = a.order();
    if (b.order() != n) throw NumericalError("loop_sub: truncation orders differ");
    TwistedLoop out(n, a.kind());
    for (int j = -n; j <= n; ++j) out.coeff_ref(j) = a.coeff(j) - b.coeff(j);
    out.add_tail(a.tail() + b.tail());
    return out;
}

TwistedLoop loop_scale(const Complex& s, const TwistedLoop& a) {
    TwistedLoop out(a.order(), a.kind());
    for (int j = -a.order(); j <= a.order(); ++j) out.coeff_ref(j) = s * a.coeff(j);
    out.add_tail(std::abs(s) * a.tail());
    return out;
}

TwistedLoop loop_adjugate(const TwistedLoop& g) {
    TwistedLoop out(g.order(), g.kind());
    for (int j = -g.order(); j <= g.order(); ++j) {
        const Matrix2C& c = g.coeff(j);
        Matrix2C& a = out.coeff_ref(j);
        a(0, 0) = c(1, 1);
        a(1, 1) = c(0, 0);
        a(0, 1) = -c(0, 1);
        a(1, 0) = -c(1, 0);
    }
    out.add_tail(g.tail());
    return out;
}

TwistedLoop loop_inverse(const TwistedLoop& g, double tol_det) {
    const double drift = loop_det1_defect(g, 1.0);
    if (!(drift <= tol_det)) throw DetDrift(drift);
    return loop_adjugate(g);
}

Matrix2C evaluate(const TwistedLoop& g, const Complex& lambda) {
    // Horner from the band edges toward the center, in lambda and 1/lambda.
    const int n = g.order();
    if (n == 0) return g.coeff(0);
    Matrix2C pos = g.coeff(n);
    for (int j = n - 1; j >= 1; --j) pos = pos * lambda + g.coeff(j);
    const Complex linv = 1.0 / lambda;
    Matrix2C neg = g.coeff(-n);
    for (int j = -n + 1; j <= -1; ++j) neg = neg * linv + g.coeff(j);
    return g.coeff(0) + pos * lambda + neg * linv;
}

Matrix2C evaluate_lambda_scaled_derivative(const TwistedLoop& g, const Complex& lambda) {
    const int n = g.order();
    Matrix2C acc = Matrix2C::Zero();
    Complex lp = lambda;
    const Complex linv = 1.0 / lambda;
    Complex ln = linv;
    for (int j = 1; j <= n; ++j) {
        acc += static_cast<double>(j) * (g.coeff(j) * lp - g.coeff(-j) * ln);
        lp *= lambda;
        ln *= linv;
    }
    return acc;
}

TwistedLoop lambda_derivative(const TwistedLoop& g) {
    const int n = g.order();
    TwistedLoop out(n, LoopKind::Algebra);
    for (int j = -n; j <= n - 1; ++j) {
        out.coeff_ref(j) = static_cast<double>(j + 1) * g.coeff(j + 1);
    }
    // The -N-1 coefficient N*c_{-N} falls outside the band.
    out.add_tail(g.tail() + static_cast<double>(n) * g.coeff(-n).norm());
    return out;
}

TwistedLoop project_minus(const TwistedLoop& g) {
    TwistedLoop out(g.order(), g.kind());
    for (int j = -g.order(); j <= -1; ++j) out.coeff_ref(j) = g.coeff(j);
    out.add_tail(g.tail());
    return out;
}

TwistedLoop project_plus(const TwistedLoop& g) {
    TwistedLoop out(g.order(), g.kind());
    for (int j = 0; j <= g.order(); ++j) out.coeff_ref(j) = g.coeff(j);
    out.add_tail(g.tail());
    return out;
}

TwistedLoop loop_resize(const TwistedLoop& g, int order) {
    TwistedLoop out(order, g.kind());
    double dropped = 0.0;
    for (int j = -g.order(); j <= g.order(); ++j) {
        if (j >= -order && j <= order) {
            out.coeff_ref(j) = g.coeff(j);
        } else {
            dropped += g.coeff(j).norm();
        }
    }
    out.add_tail(g.tail() + dropped);
    return out;
}

TwistedLoop loop_reverse(const TwistedLoop& g) {
    TwistedLoop out(g.order(), g.kind());
    for (int j = -g.order(); j <= g.order(); ++j) out.coeff_ref(j) = g.coeff(-j);
    out.add_tail(g.tail());
    return out;
}

double loop_unitarity_defect(const TwistedLoop& g, double lambda) {
    return unitarity_defect(evaluate(g, Complex(lambda, 0.0)));
}

double loop_det1_defect(const TwistedLoop& g, double lambda) {
    return det1_defect(evaluate(g, Complex(lambda, 0.0)));
}

}  // namespace psfront
