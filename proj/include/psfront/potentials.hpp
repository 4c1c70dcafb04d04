#pragma once

#include <optional>
#include <string>
#include <vector>

#include "psfront/loop.hpp"
#include "psfront/scalar_function.hpp"

namespace psfront {

// su(2)-valued coefficient function c1(t) e1 + c2(t) e2 + c3(t) e3.
struct Su2Coefficient {
    ScalarFunction c1, c2, c3;
    Vec3 eval(double t) const { return Vec3(c1(t), c2(t), c3(t)); }
};

// One leg of a potential pair: a loop-algebra-valued 1-form sum_j chi_j(t) lambda^j dt.
// Twisting restricts odd powers to the e1/e2 components and even powers to e3.
class PotentialLeg {
public:
    PotentialLeg() = default;

    void add_term(int power, Su2Coefficient coeff);
    bool has_term(int power) const;
    const Su2Coefficient* term(int power) const;

    int min_power() const;
    int max_power() const;

    // Coefficient vector (c1,c2,c3) of lambda^power at parameter t (zero if absent).
    Vec3 coeff_vec(int power, double t) const;

    // The full algebra-loop value at t, padded to truncation order n.
    TwistedLoop eval(double t, int n) const;

    const std::vector<std::pair<int, Su2Coefficient>>& terms() const { return terms_; }

private:
    std::vector<std::pair<int, Su2Coefficient>> terms_;
};

enum class SingularSetKind { None, Diagonal, RowY0 };

struct PotentialPair {
    PotentialLeg chi;  // on I_x
    PotentialLeg psi;  // on I_y
    int epsilon = +1;

    // Expected singular set recorded by the constructions: the diagonal
    // {y = eps x} for boundary pairs, the row {y = 0} for characteristic pairs.
    SingularSetKind expected = SingularSetKind::None;

    // Parameter values (in the chi leg's variable) flagged by the construction:
    // degenerate singular points (beta = 0, i.e. kappa = 0), and loss of weak
    // regularity (vanishing leading coefficients chi_1 / psi_{-1}).
    std::vector<double> degenerate_params;
    std::vector<double> chi_top_zero_params;
    std::vector<double> psi_bottom_zero_params;

    bool semi_regular = true;  // at least one leading coefficient nonzero everywhere (sampled)
    bool regular = true;       // both nonzero everywhere (sampled)
};

struct Interval {
    double lo = 0.0, hi = 0.0;
    double length() const { return hi - lo; }
};

// Thm-style boundary potential for a prescribed non-characteristic singular
// curve: eta = (-eps B(t) e1 lambda^{-1} - beta(t)/2 e3 + A(t) e1 lambda) dt,
// pair (eta, eta) on J x eps J (the y leg is the pullback under t = eps y).
PotentialPair noncharacteristic_potential(const ScalarFunction& A, const ScalarFunction& B,
                                          const ScalarFunction& beta, int epsilon,
                                          const Interval& J);

struct CauchyData {
    ScalarFunction kappa, tau;
    Interval J;
    std::optional<int> epsilon_override;
};

// Singular geometric Cauchy potential:
// eta = ((tau-1)/2 e1 lambda^{-1} + kappa e3 + (tau+1)/2 e1 lambda) ds.
// eps = sign(1 - tau) (the branch with B > 0), overridable; degenerate inputs
// (kappa zeros, |tau| = 1 crossings) are accepted and flagged.
PotentialPair cuspidal_edge_potential(const CauchyData& data);

// Characteristic singular curve: chi = (kappa(x) e3 + lambda e1) dx,
// psi = (alpha(y) e1 + beta(y) e2) lambda^{-1} dy, requiring beta(0) = 0,
// beta'(0) != 0, and alpha(0) = 0 when kappa is not identically zero.
PotentialPair characteristic_potential(const ScalarFunction& kappa, const ScalarFunction& alpha,
                                       const ScalarFunction& beta, const Interval& Ix,
                                       const Interval& Iy);

// Boundary potential from admissible-connection components along a curve:
// chi = psi = (eps V_p lambda^{-1} + U_k + eps V_k + U_p lambda) du.
struct ConnectionComponentFunctions {
    Su2Coefficient Uk, Up, Vk, Vp;
};
PotentialPair boundary_potential_from_frame(const ConnectionComponentFunctions& c, int epsilon,
                                            const Interval& J);

// Raw pair from explicit terms (used by the JSON potential input); validates
// the twisted band shape: chi top power <= 1, psi bottom power >= -1.
PotentialPair raw_potential_pair(PotentialLeg chi, PotentialLeg psi, int epsilon);

// Scan [J.lo, J.hi] for zeros of the leading coefficients and of the e3 part
// of chi_0 (the degeneracy flags); refreshes the flag/regularity fields.
void scan_potential_flags(PotentialPair& pair, const Interval& J, int samples = 2001);

}  // namespace psfront
