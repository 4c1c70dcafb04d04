#pragma once

#include <vector>

#include "psfront/su2.hpp"

namespace psfront {

enum class LoopKind { Algebra, Group };

// Truncated matrix Laurent series sum_{j=-N..N} c_j lambda^j with the twisted
// structure: diagonal entries live on even powers, off-diagonal entries on odd
// powers. Group-kind loops are det-1 (and unitary at real lambda when they are
// frames). Values are immutable once built; `tail` accumulates the norm of
// coefficients dropped by truncation along the way, as a diagnostic.
class TwistedLoop {
public:
    TwistedLoop() : order_(0), kind_(LoopKind::Algebra), coeff_(1, Matrix2C::Zero()) {}
    TwistedLoop(int order, LoopKind kind)
        : order_(order), kind_(kind), coeff_(2 * order + 1, Matrix2C::Zero()) {}

    static TwistedLoop zero(int order, LoopKind kind = LoopKind::Algebra) {
        return TwistedLoop(order, kind);
    }
    static TwistedLoop identity(int order);
    // Constant diagonal-parity coefficient at lambda^0.
    static TwistedLoop constant(int order, const Matrix2C& m, LoopKind kind);
    // Twisted constant frame value: diagonal of g at lambda^0, off-diagonal
    // entries of g split onto lambda^{+1} (upper right) and lambda^{-1} (lower left).
    static TwistedLoop twisted_frame_constant(int order, const Matrix2C& g);

    int order() const { return order_; }
    LoopKind kind() const { return kind_; }
    double tail() const { return tail_; }
    void add_tail(double t) { tail_ += t; }
    void set_kind(LoopKind k) { kind_ = k; }

    const Matrix2C& coeff(int j) const { return coeff_[static_cast<std::size_t>(j + order_)]; }
    Matrix2C& coeff_ref(int j) { return coeff_[static_cast<std::size_t>(j + order_)]; }

    // Largest |coefficient| in Frobenius norm.
    double max_coeff_norm() const;
    // Largest wrong-parity entry magnitude (0 for a structurally twisted loop).
    double twisting_defect() const;

private:
    int order_;
    LoopKind kind_;
    std::vector<Matrix2C> coeff_;
    double tail_ = 0.0;
};

// Cauchy product truncated back to the common band; dropped coefficient mass
// goes into the result's tail.
TwistedLoop loop_mul(const TwistedLoop& a, const TwistedLoop& b);

TwistedLoop loop_add(const TwistedLoop& a, const TwistedLoop& b);
TwistedLoop loop_sub(const TwistedLoop& a, const TwistedLoop& b);
TwistedLoop loop_scale(const Complex& s, const TwistedLoop& a);

// Coefficientwise 2x2 adjugate (swap diagonal, negate off-diagonal). For a
// det-1 loop this is the inverse.
TwistedLoop loop_adjugate(const TwistedLoop& g);

// Inverse of a group-kind loop via the adjugate; throws DetDrift when
// |det g(1) - 1| exceeds tol_det.
TwistedLoop loop_inverse(const TwistedLoop& g, double tol_det = 1e-10);

Matrix2C evaluate(const TwistedLoop& g, const Complex& lambda);

// sum_j j c_j lambda^j  =  lambda * dg/dlambda evaluated at lambda.
Matrix2C evaluate_lambda_scaled_derivative(const TwistedLoop& g, const Complex& lambda);

// d/dlambda as a loop: coefficient j of the result is (j+1) c_{j+1}.
TwistedLoop lambda_derivative(const TwistedLoop& g);

// Split convention: the constant term belongs to the plus part.
TwistedLoop project_minus(const TwistedLoop& g);
TwistedLoop project_plus(const TwistedLoop& g);

// Pad or truncate to a new order (truncation feeds the tail diagnostic).
TwistedLoop loop_resize(const TwistedLoop& g, int order);

// lambda -> lambda^{-1} (coefficients reversed); swaps the G^+/G^- roles.
TwistedLoop loop_reverse(const TwistedLoop& g);

double loop_unitarity_defect(const TwistedLoop& g, double lambda);
double loop_det1_defect(const TwistedLoop& g, double lambda);

}  // namespace psfront
