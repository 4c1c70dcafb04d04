#include "psfront/curves.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "psfront/errors.hpp"

namespace psfront {

namespace {

struct ParamCurve {
    std::function<Vec3(double)> eval;
    double t0, t1;
};

Vec3 d1(const ParamCurve& c, double t, double h) {
    return (c.eval(t + h) - c.eval(t - h)) / (2 * h);
}

Vec3 d2(const ParamCurve& c, double t, double h) {
    return (c.eval(t + h) - 2.0 * c.eval(t) + c.eval(t - h)) / (h * h);
}

// Third derivatives cancel most of the significand; use a wider step with one
// Richardson pass to keep both truncation and roundoff in check.
Vec3 d3_raw(const ParamCurve& c, double t, double h) {
    return (c.eval(t + 2 * h) - 2.0 * c.eval(t + h) + 2.0 * c.eval(t - h) - c.eval(t - 2 * h)) /
           (2 * h * h * h);
}

Vec3 d3(const ParamCurve& c, double t, double h) {
    const double h3 = 10.0 * h;
    return (4.0 * d3_raw(c, t, h3) - d3_raw(c, t, 2 * h3)) / 3.0;
}

// Fritsch-Carlson monotone cubic interpolant; data must be strictly increasing in x.
class MonotoneCubic {
public:
    MonotoneCubic(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        slopes_.resize(n);
        std::vector<double> d(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
        slopes_[0] = d[0];
        slopes_[n - 1] = d[n - 2];
        for (std::size_t i = 1; i + 1 < n; ++i) slopes_[i] = 0.5 * (d[i - 1] + d[i]);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (d[i] == 0.0) {
                slopes_[i] = slopes_[i + 1] = 0.0;
            } else {
                const double a = slopes_[i] / d[i];
                const double b = slopes_[i + 1] / d[i];
                const double s = a * a + b * b;
                if (s > 9.0) {
                    const double tau = 3.0 / std::sqrt(s);
                    slopes_[i] = tau * a * d[i];
                    slopes_[i + 1] = tau * b * d[i];
                }
            }
        }
    }

    double operator()(double x) const {
        const std::size_t n = x_.size();
        std::size_t i = std::upper_bound(x_.begin(), x_.end(), x) - x_.begin();
        if (i == 0) i = 1;
        if (i >= n) i = n - 1;
        --i;
        const double hseg = x_[i + 1] - x_[i];
        const double u = (x - x_[i]) / hseg;
        const double u2 = u * u, u3 = u2 * u;
        return (2 * u3 - 3 * u2 + 1) * y_[i] + (u3 - 2 * u2 + u) * hseg * slopes_[i] +
               (-2 * u3 + 3 * u2) * y_[i + 1] + (u3 - u2) * hseg * slopes_[i + 1];
    }

private:
    std::vector<double> x_, y_, slopes_;
};

CurveData build_curve(const ParamCurve& c, const CurveOptions& opts) {
    const int n = opts.samples;
    if (n < 5) throw ConfigError("curve needs at least 5 samples");
    const double h = opts.fd_step;

    // Arclength by composite Simpson on a refined parameter grid.
    const int fine = 2 * (2 * n) + 1;
    const double dt = (c.t1 - c.t0) / (fine - 1);
    std::vector<double> speed(static_cast<std::size_t>(fine));
    for (int k = 0; k < fine; ++k) {
        const double sp = d1(c, c.t0 + k * dt, h).norm();
        if (sp < 1e-8) {
            std::ostringstream os;
            os << "curve speed " << sp << " below 1e-8 at t = " << c.t0 + k * dt;
            throw DegenerateCurve(os.str());
        }
        speed[static_cast<std::size_t>(k)] = sp;
    }
    // Simpson pairs land on even nodes; the interpolant uses those only.
    std::vector<double> svals, tgrid;
    svals.push_back(0.0);
    tgrid.push_back(c.t0);
    double acc = 0.0;
    for (int k = 2; k < fine; k += 2) {
        acc += dt / 3.0 * (speed[k - 2] + 4.0 * speed[k - 1] + speed[k]);
        svals.push_back(acc);
        tgrid.push_back(c.t0 + k * dt);
    }
    const double total = acc;
    MonotoneCubic t_of_s(svals, tgrid);

    CurveData out;
    out.s.resize(static_cast<std::size_t>(n));
    out.gamma.resize(static_cast<std::size_t>(n));
    out.kappa.resize(static_cast<std::size_t>(n));
    out.tau.resize(static_cast<std::size_t>(n));
    out.tvec.resize(static_cast<std::size_t>(n));
    out.nvec.resize(static_cast<std::size_t>(n));
    out.bvec.resize(static_cast<std::size_t>(n));
    out.kappa_undefined.assign(static_cast<std::size_t>(n), false);

    const double shift = opts.center_arclength ? 0.5 * total : 0.0;
    const double ds = total / (n - 1);
    for (int k = 0; k < n; ++k) {
        const double s_abs = k * ds;
        const double t = t_of_s(s_abs);
        out.s[static_cast<std::size_t>(k)] = s_abs - shift;
        out.gamma[static_cast<std::size_t>(k)] = c.eval(t);
        const Vec3 g1 = d1(c, t, h);
        const Vec3 g2 = d2(c, t, h);
        const Vec3 g3 = d3(c, t, h);
        const double sp = g1.norm();
        const Vec3 cr = g1.cross(g2);
        const double crn = cr.norm();
        out.kappa[static_cast<std::size_t>(k)] = crn / (sp * sp * sp);
        out.tvec[static_cast<std::size_t>(k)] = g1 / sp;
        if (crn > opts.kappa_tol * sp * sp * sp) {
            out.bvec[static_cast<std::size_t>(k)] = cr / crn;
            out.nvec[static_cast<std::size_t>(k)] =
                out.bvec[static_cast<std::size_t>(k)].cross(out.tvec[static_cast<std::size_t>(k)]);
            out.tau[static_cast<std::size_t>(k)] = cr.dot(g3) / (crn * crn);
        } else {
            out.kappa_undefined[static_cast<std::size_t>(k)] = true;
            out.tau[static_cast<std::size_t>(k)] = 0.0;
            out.bvec[static_cast<std::size_t>(k)] = Vec3(0, 0, 1);
            out.nvec[static_cast<std::size_t>(k)] = Vec3(0, 1, 0);
        }
    }

    // tau through isolated kappa zeros: interpolate; long runs need explicit tau.
    int run = 0;
    for (int k = 0; k <= n; ++k) {
        const bool undef = (k < n) && out.kappa_undefined[static_cast<std::size_t>(k)];
        if (undef) {
            ++run;
            continue;
        }
        if (run > 0) {
            if (run > opts.max_undefined_run && !opts.have_explicit_tau) {
                throw DegenerateCurve(
                    "kappa vanishes on a parameter run longer than " +
                    std::to_string(opts.max_undefined_run) +
                    " samples; torsion is undefined there (pass an explicit tau)");
            }
            const int lo = k - run - 1, hi = k;
            for (int j = k - run; j < k; ++j) {
                double tv;
                if (opts.have_explicit_tau) {
                    tv = opts.explicit_tau(out.s[static_cast<std::size_t>(j)]);
                } else if (lo >= 0 && hi < n) {
                    const double w = static_cast<double>(j - lo) / (hi - lo);
                    tv = (1 - w) * out.tau[static_cast<std::size_t>(lo)] +
                         w * out.tau[static_cast<std::size_t>(hi)];
                } else if (lo >= 0) {
                    tv = out.tau[static_cast<std::size_t>(lo)];
                } else if (hi < n) {
                    tv = out.tau[static_cast<std::size_t>(hi)];
                } else {
                    tv = 0.0;
                }
                out.tau[static_cast<std::size_t>(j)] = tv;
            }
            run = 0;
        }
    }

    // Refine the flagged parameter sets from the sampled data.
    auto refine_zeros = [&](const std::vector<double>& vals, std::vector<double>& params) {
        auto push = [&](double sv) {
            if (params.empty() || std::abs(params.back() - sv) > ds) params.push_back(sv);
        };
        for (int k = 0; k + 1 < n; ++k) {
            const double a = vals[static_cast<std::size_t>(k)];
            const double b = vals[static_cast<std::size_t>(k + 1)];
            if (a == 0.0 || (a < 0) != (b < 0)) {
                const double w = (a == b) ? 0.0 : a / (a - b);
                push(out.s[static_cast<std::size_t>(k)] + w * ds);
            }
        }
        if (!vals.empty() && vals.back() == 0.0) push(out.s.back());
    };
    std::vector<double> kmin(out.kappa);  // kappa >= 0: flag dips to ~0 via threshold crossings
    for (auto& v : kmin) v -= 10 * opts.kappa_tol;
    refine_zeros(kmin, out.kappa_zero_params);
    std::vector<double> tau_m1(static_cast<std::size_t>(n)), tau_p1(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        tau_m1[static_cast<std::size_t>(k)] = out.tau[static_cast<std::size_t>(k)] - 1.0;
        tau_p1[static_cast<std::size_t>(k)] = out.tau[static_cast<std::size_t>(k)] + 1.0;
    }
    refine_zeros(tau_m1, out.tau_unit_params);
    refine_zeros(tau_p1, out.tau_unit_params);
    std::sort(out.tau_unit_params.begin(), out.tau_unit_params.end());
    return out;
}

}  // namespace

ScalarFunction CurveData::kappa_function() const {
    return ScalarFunction::table(s.front(), s[1] - s[0], kappa);
}

ScalarFunction CurveData::tau_function() const {
    return ScalarFunction::table(s.front(), s[1] - s[0], tau);
}

CurveData curve_from_expressions(const ScalarFunction& x, const ScalarFunction& y,
                                 const ScalarFunction& z, double t0, double t1,
                                 const CurveOptions& opts) {
    if (!(t1 > t0)) throw ConfigError("curve parameter interval must have t1 > t0");
    ParamCurve c{[&x, &y, &z](double t) { return Vec3(x(t), y(t), z(t)); }, t0, t1};
    return build_curve(c, opts);
}

CurveData curve_from_samples(const std::vector<double>& t, const std::vector<Vec3>& points,
                             const CurveOptions& opts) {
    if (t.size() != points.size() || t.size() < 4) {
        throw ConfigError("curve samples need matching t/point counts, at least 4 rows");
    }
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        if (!(t[i + 1] > t[i])) throw ConfigError("curve sample parameters must increase");
    }
    // Uniform tables require uniform t; resample non-uniform input first.
    const double h0 = t[1] - t[0];
    bool uniform = true;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        if (std::abs((t[i + 1] - t[i]) - h0) > 1e-9 * std::max(1.0, std::abs(h0))) {
            uniform = false;
            break;
        }
    }
    std::vector<double> xs, ys, zs;
    for (const Vec3& p : points) {
        xs.push_back(p[0]);
        ys.push_back(p[1]);
        zs.push_back(p[2]);
    }
    // Piecewise-cubic interpolants have jumpy high derivatives at the knots;
    // differentiate at the knot spacing so the stencils average across them.
    CurveOptions sopts = opts;
    sopts.fd_step = std::max(opts.fd_step, h0);
    ScalarFunction fx, fy, fz;
    if (uniform) {
        fx = ScalarFunction::table(t.front(), h0, xs);
        fy = ScalarFunction::table(t.front(), h0, ys);
        fz = ScalarFunction::table(t.front(), h0, zs);
    } else {
        MonotoneCubic mx(t, xs), my(t, ys), mz(t, zs);
        const int m = static_cast<int>(t.size()) * 4;
        const double hh = (t.back() - t.front()) / (m - 1);
        std::vector<double> rx, ry, rz;
        for (int k = 0; k < m; ++k) {
            const double tk = t.front() + k * hh;
            rx.push_back(mx(tk));
            ry.push_back(my(tk));
            rz.push_back(mz(tk));
        }
        fx = ScalarFunction::table(t.front(), hh, rx);
        fy = ScalarFunction::table(t.front(), hh, ry);
        fz = ScalarFunction::table(t.front(), hh, rz);
    }
    return curve_from_expressions(fx, fy, fz, t.front(), t.back(), sopts);
}

CurveData named_curve(const std::string& name, const std::map<std::string, double>& params,
                      const CurveOptions& opts) {
    auto get = [&](const std::string& key, double dflt) {
        const auto it = params.find(key);
        return it == params.end() ? dflt : it->second;
    };
    if (name == "circle") {
        const double R = get("R", 1.0);
        auto fx = parse_scalar("R*cos(t)", "t", {{"R", R}});
        auto fy = parse_scalar("R*sin(t)", "t", {{"R", R}});
        auto fz = ScalarFunction::constant(0.0);
        return curve_from_expressions(fx, fy, fz, -M_PI, M_PI, opts);
    }
    if (name == "helix") {
        const double a = get("a", 0.5), b = get("b", 0.5);
        auto fx = parse_scalar("a*cos(t)", "t", {{"a", a}});
        auto fy = parse_scalar("a*sin(t)", "t", {{"a", a}});
        auto fz = parse_scalar("b*t", "t", {{"b", b}});
        return curve_from_expressions(fx, fy, fz, -M_PI, M_PI, opts);
    }
    if (name == "cylinder_figure") {
        auto fx = parse_scalar("cos(3*t)");
        auto fy = parse_scalar("sin(3*t)");
        auto fz = parse_scalar("-sin(t)");
        const double t0 = get("t0", -M_PI), t1 = get("t1", M_PI);
        return curve_from_expressions(fx, fy, fz, t0, t1, opts);
    }
    if (name == "viviani") {
        auto fx = parse_scalar("0.3*(1+cos(t))");
        auto fy = parse_scalar("0.3*sin(t)");
        auto fz = parse_scalar("0.6*sin(t/2)");
        const double t0 = get("t0", -2 * M_PI), t1 = get("t1", 2 * M_PI);
        return curve_from_expressions(fx, fy, fz, t0, t1, opts);
    }
    throw UnknownCurve(name);
}

GeometricCauchyCheck singular_geometric_cauchy_check(const CurveData& curve,
                                                     const std::vector<Vec3>& Z, double tol) {
    const std::size_t n = curve.s.size();
    if (Z.size() != n) throw ConfigError("Z field must be sampled at the curve's parameters");
    GeometricCauchyCheck rep;
    rep.z_orthogonal.resize(n);
    rep.zprime_orthogonal.resize(n);
    rep.weakly_regular.resize(n);
    rep.z_is_binormal.resize(n);
    const double ds = curve.s[1] - curve.s[0];
    for (std::size_t k = 0; k < n; ++k) {
        Vec3 zp;
        if (k == 0) {
            zp = (Z[1] - Z[0]) / ds;
        } else if (k + 1 == n) {
            zp = (Z[n - 1] - Z[n - 2]) / ds;
        } else {
            zp = (Z[k + 1] - Z[k - 1]) / (2 * ds);
        }
        const Vec3& t = curve.tvec[k];
        rep.z_orthogonal[k] = std::abs(Z[k].dot(t)) <= tol;
        rep.zprime_orthogonal[k] = std::abs(zp.dot(t)) <= tol;
        rep.weakly_regular[k] = std::abs(zp.norm() - 1.0) > tol;
        if (!curve.kappa_undefined[k]) {
            const double dplus = (Z[k] - curve.bvec[k]).norm();
            const double dminus = (Z[k] + curve.bvec[k]).norm();
            rep.z_is_binormal[k] = std::min(dplus, dminus) <= 100 * tol;
        } else {
            rep.z_is_binormal[k] = true;
        }
        if (!rep.z_orthogonal[k] || !rep.zprime_orthogonal[k] || !rep.weakly_regular[k]) {
            rep.all_admissible = false;
        }
    }
    return rep;
}

}  // namespace psfront
