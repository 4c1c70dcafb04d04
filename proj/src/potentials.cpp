#include "psfront/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "psfront/errors.hpp"

namespace psfront {

namespace {

bool component_clean(const ScalarFunction& f) { return f.is_zero(); }

// Bisection on a signed scalar with a sign change in [a, b].
double bisect_zero(const std::function<double(double)>& f, double a, double b) {
    double fa = f(a);
    for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fa < 0) != (fm < 0)) {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    return 0.5 * (a + b);
}

// Golden-section minimization of a nonnegative scalar.
double golden_min(const std::function<double(double)>& f, double a, double b) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 120; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

void push_unique(std::vector<double>& v, double t, double tol) {
    for (double u : v) {
        if (std::abs(u - t) <= tol) return;
    }
    v.push_back(t);
}

// Zeros of a signed scalar: sign changes, plus local minima of |f| touching zero.
std::vector<double> find_signed_zeros(const std::function<double(double)>& f, double lo, double hi,
                                      int n, double zero_tol) {
    std::vector<double> zeros;
    if (!(hi > lo)) return zeros;
    const double dt = (hi - lo) / (n - 1);
    const double dedupe = 1e-6 * (hi - lo);
    std::vector<double> vals(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) vals[k] = f(lo + k * dt);
    for (int k = 0; k + 1 < n; ++k) {
        const double va = vals[k], vb = vals[k + 1];
        if (va == 0.0) {
            push_unique(zeros, lo + k * dt, dedupe);
        } else if ((va < 0) != (vb < 0)) {
            push_unique(zeros, bisect_zero(f, lo + k * dt, lo + (k + 1) * dt), dedupe);
        }
    }
    if (vals[n - 1] == 0.0) push_unique(zeros, hi, dedupe);
    // Tangential zeros: refine interior minima of |f|.
    auto af = [&](double t) { return std::abs(f(t)); };
    for (int k = 1; k + 1 < n; ++k) {
        const double a0 = std::abs(vals[k - 1]), a1 = std::abs(vals[k]),
                     a2 = std::abs(vals[k + 1]);
        if (a1 <= a0 && a1 <= a2 && a1 < 0.2) {
            const double t = golden_min(af, lo + (k - 1) * dt, lo + (k + 1) * dt);
            if (af(t) <= zero_tol) push_unique(zeros, t, dedupe);
        }
    }
    std::sort(zeros.begin(), zeros.end());
    return zeros;
}

std::vector<double> find_norm_zeros(const std::function<double(double)>& nf, double lo, double hi,
                                    int n, double zero_tol) {
    std::vector<double> zeros;
    if (!(hi > lo)) return zeros;
    const double dt = (hi - lo) / (n - 1);
    const double dedupe = 1e-6 * (hi - lo);
    std::vector<double> vals(static_cast<std::size_t>(n));
    double scale = 0.0;
    for (int k = 0; k < n; ++k) {
        vals[k] = nf(lo + k * dt);
        scale = std::max(scale, vals[k]);
    }
    const double dip = std::max(0.2 * scale, zero_tol * 10.0);
    for (int k = 0; k < n; ++k) {
        const bool lmin = (k == 0 || vals[k] <= vals[k - 1]) && (k + 1 == n || vals[k] <= vals[k + 1]);
        if (!lmin || vals[k] >= dip) continue;
        const double a = (k == 0) ? lo : lo + (k - 1) * dt;
        const double b = (k + 1 == n) ? hi : lo + (k + 1) * dt;
        const double t = golden_min(nf, a, b);
        if (nf(t) <= zero_tol) push_unique(zeros, t, dedupe);
    }
    std::sort(zeros.begin(), zeros.end());
    return zeros;
}

Su2Coefficient pullback(const Su2Coefficient& c, int eps) {
    // eta(t) dt under t = eps*y: coefficient(y) = eps * c(eps*y).
    const double e = static_cast<double>(eps);
    return {c.c1.pre_affine(e, 0.0).scaled(e), c.c2.pre_affine(e, 0.0).scaled(e),
            c.c3.pre_affine(e, 0.0).scaled(e)};
}

PotentialLeg pullback_leg(const PotentialLeg& leg, int eps) {
    PotentialLeg out;
    for (const auto& [power, coeff] : leg.terms()) out.add_term(power, pullback(coeff, eps));
    return out;
}

}  // namespace

void PotentialLeg::add_term(int power, Su2Coefficient coeff) {
    const bool odd = (power % 2 != 0);
    if (odd && !component_clean(coeff.c3)) {
        throw ConfigError("twisting violated: e3 component on odd power " + std::to_string(power));
    }
    if (!odd && (!component_clean(coeff.c1) || !component_clean(coeff.c2))) {
        throw ConfigError("twisting violated: e1/e2 component on even power " +
                          std::to_string(power));
    }
    for (auto& [p, c] : terms_) {
        if (p == power) {
            c = {c.c1.plus(coeff.c1), c.c2.plus(coeff.c2), c.c3.plus(coeff.c3)};
            return;
        }
    }
    terms_.emplace_back(power, std::move(coeff));
    std::sort(terms_.begin(), terms_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
}

bool PotentialLeg::has_term(int power) const { return term(power) != nullptr; }

const Su2Coefficient* PotentialLeg::term(int power) const {
    for (const auto& [p, c] : terms_) {
        if (p == power) return &c;
    }
    return nullptr;
}

int PotentialLeg::min_power() const {
    return terms_.empty() ? 0 : terms_.front().first;
}

int PotentialLeg::max_power() const {
    return terms_.empty() ? 0 : terms_.back().first;
}

Vec3 PotentialLeg::coeff_vec(int power, double t) const {
    const Su2Coefficient* c = term(power);
    return c ? c->eval(t) : Vec3::Zero();
}

TwistedLoop PotentialLeg::eval(double t, int n) const {
    TwistedLoop out(n, LoopKind::Algebra);
    for (const auto& [power, coeff] : terms_) {
        if (std::abs(power) > n) {
            throw NumericalError("potential band exceeds truncation order");
        }
        out.coeff_ref(power) = vec_to_su2(coeff.eval(t));
    }
    return out;
}

PotentialPair noncharacteristic_potential(const ScalarFunction& A, const ScalarFunction& B,
                                          const ScalarFunction& beta, int epsilon,
                                          const Interval& J) {
    if (epsilon != 1 && epsilon != -1) throw ConfigError("epsilon must be +1 or -1");
    PotentialPair pair;
    pair.epsilon = epsilon;
    pair.expected = SingularSetKind::Diagonal;
    pair.chi.add_term(-1, {B.scaled(-static_cast<double>(epsilon)), {}, {}});
    pair.chi.add_term(0, {{}, {}, beta.scaled(-0.5)});
    pair.chi.add_term(1, {A, {}, {}});
    pair.psi = pullback_leg(pair.chi, epsilon);
    scan_potential_flags(pair, J);
    return pair;
}

PotentialPair cuspidal_edge_potential(const CauchyData& data) {
    int eps;
    if (data.epsilon_override) {
        eps = *data.epsilon_override;
        if (eps != 1 && eps != -1) throw ConfigError("epsilon must be +1 or -1");
    } else {
        // eps = sign(1 - tau); when tau - 1 changes sign the pair (eta, eta)
        // on J x J is used, matching the degenerate examples.
        eps = +1;
        bool above = false, below = false;
        const int m = 501;
        for (int k = 0; k < m; ++k) {
            const double t = data.J.lo + data.J.length() * k / (m - 1);
            const double tau = data.tau(t);
            (tau > 1.0 ? above : below) = true;
        }
        if (above && !below) eps = -1;
    }

    PotentialPair pair;
    pair.epsilon = eps;
    pair.expected = SingularSetKind::Diagonal;
    const ScalarFunction half_tau_minus = data.tau.plus(ScalarFunction::constant(-1.0)).scaled(0.5);
    const ScalarFunction half_tau_plus = data.tau.plus(ScalarFunction::constant(1.0)).scaled(0.5);
    pair.chi.add_term(-1, {half_tau_minus, {}, {}});
    pair.chi.add_term(0, {{}, {}, data.kappa});
    pair.chi.add_term(1, {half_tau_plus, {}, {}});
    pair.psi = pullback_leg(pair.chi, eps);
    scan_potential_flags(pair, data.J);
    return pair;
}

PotentialPair characteristic_potential(const ScalarFunction& kappa, const ScalarFunction& alpha,
                                       const ScalarFunction& beta, const Interval& Ix,
                                       const Interval& Iy) {
    if (!(Ix.lo <= 0.0 && 0.0 <= Ix.hi) || !(Iy.lo <= 0.0 && 0.0 <= Iy.hi)) {
        throw InvalidCharacteristicData("0 must lie in both intervals");
    }
    if (std::abs(beta(0.0)) > 1e-10) throw InvalidCharacteristicData("beta(0) = 0");
    const double h = 1e-6;
    const double dbeta = (beta(h) - beta(-h)) / (2 * h);
    if (std::abs(dbeta) <= 1e-10) throw InvalidCharacteristicData("beta'(0) != 0");
    double kappa_max = 0.0;
    const int m = 501;
    for (int k = 0; k < m; ++k) {
        const double x = Ix.lo + Ix.length() * k / (m - 1);
        kappa_max = std::max(kappa_max, std::abs(kappa(x)));
    }
    if (kappa_max > 1e-10 && std::abs(alpha(0.0)) > 1e-10) {
        throw InvalidCharacteristicData("alpha(0) = 0 when kappa is not identically zero");
    }

    PotentialPair pair;
    pair.epsilon = +1;
    pair.expected = SingularSetKind::RowY0;
    pair.chi.add_term(0, {{}, {}, kappa});
    pair.chi.add_term(1, {ScalarFunction::constant(1.0), {}, {}});
    pair.psi.add_term(-1, {alpha, beta, {}});
    pair.semi_regular = true;
    pair.regular = false;  // psi_{-1}(0) = (alpha(0), beta(0)) may vanish; chi_1 never does
    return pair;
}

PotentialPair boundary_potential_from_frame(const ConnectionComponentFunctions& c, int epsilon,
                                            const Interval& J) {
    if (epsilon != 1 && epsilon != -1) throw ConfigError("epsilon must be +1 or -1");
    const double e = static_cast<double>(epsilon);
    PotentialPair pair;
    pair.epsilon = epsilon;
    pair.expected = SingularSetKind::Diagonal;
    pair.chi.add_term(-1, {c.Vp.c1.scaled(e), c.Vp.c2.scaled(e), {}});
    pair.chi.add_term(0, {{}, {}, c.Uk.c3.plus(c.Vk.c3.scaled(e))});
    pair.chi.add_term(1, {c.Up.c1, c.Up.c2, {}});
    pair.psi = pullback_leg(pair.chi, epsilon);
    scan_potential_flags(pair, J);
    return pair;
}

PotentialPair raw_potential_pair(PotentialLeg chi, PotentialLeg psi, int epsilon) {
    if (chi.max_power() > 1) throw ConfigError("chi band must satisfy top power <= 1");
    if (psi.min_power() < -1) throw ConfigError("psi band must satisfy bottom power >= -1");
    PotentialPair pair;
    pair.chi = std::move(chi);
    pair.psi = std::move(psi);
    pair.epsilon = epsilon;
    return pair;
}

void scan_potential_flags(PotentialPair& pair, const Interval& J, int samples) {
    const double zero_tol = 1e-8;
    const double eps = static_cast<double>(pair.epsilon);
    auto chi_top = [&](double t) { return pair.chi.coeff_vec(1, t).norm(); };
    auto psi_bot = [&](double t) { return pair.psi.coeff_vec(-1, eps * t).norm(); };
    auto beta_like = [&](double t) { return pair.chi.coeff_vec(0, t)[2]; };

    pair.chi_top_zero_params = find_norm_zeros(chi_top, J.lo, J.hi, samples, zero_tol);
    pair.psi_bottom_zero_params = find_norm_zeros(psi_bot, J.lo, J.hi, samples, zero_tol);
    pair.degenerate_params = find_signed_zeros(beta_like, J.lo, J.hi, samples, zero_tol);

    // Regularity follows the refined zero sets: regular iff neither leading
    // coefficient vanishes anywhere, semi-regular iff they never vanish at a
    // common parameter.
    pair.regular = pair.chi_top_zero_params.empty() && pair.psi_bottom_zero_params.empty();
    pair.semi_regular = true;
    const double coincide = 1e-6 * std::max(1.0, std::abs(J.length()));
    for (double a : pair.chi_top_zero_params) {
        for (double b : pair.psi_bottom_zero_params) {
            if (std::abs(a - b) <= coincide) pair.semi_regular = false;
        }
    }
}

}  // namespace psfront
