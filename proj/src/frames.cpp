#include "psfront/frames.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "psfront/errors.hpp"
#include "psfront/parallel.hpp"

namespace psfront {

namespace {

constexpr double kAngleNormFloor = 1e-12;

TwistedLoop rk4_step(const TwistedLoop& x, const PotentialLeg& leg, double t, double dt, int n) {
    const TwistedLoop k1 = loop_mul(x, leg.eval(t, n));
    const TwistedLoop x2 = loop_add(x, loop_scale(dt / 2, k1));
    const TwistedLoop chi_mid = leg.eval(t + dt / 2, n);
    const TwistedLoop k2 = loop_mul(x2, chi_mid);
    const TwistedLoop x3 = loop_add(x, loop_scale(dt / 2, k2));
    const TwistedLoop k3 = loop_mul(x3, chi_mid);
    const TwistedLoop x4 = loop_add(x, loop_scale(dt, k3));
    const TwistedLoop k4 = loop_mul(x4, leg.eval(t + dt, n));
    TwistedLoop incr = loop_add(k1, k4);
    incr = loop_add(incr, loop_scale(2.0, loop_add(k2, k3)));
    TwistedLoop out = loop_add(x, loop_scale(dt / 6, incr));
    out.set_kind(LoopKind::Group);
    return out;
}

void renormalize_det(TwistedLoop& x) {
    const Complex det = evaluate(x, Complex(1.0, 0.0)).determinant();
    const Complex s = 1.0 / std::sqrt(det);
    x = loop_scale(s, x);
    x.set_kind(LoopKind::Group);
}

Matrix2C inverse2(const Matrix2C& m) {
    Matrix2C adj;
    adj << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
    return adj / m.determinant();
}

Vec3 p_part(const Vec3& v) { return Vec3(v[0], v[1], 0.0); }

// 4th-order centered / 2nd-order one-sided derivative of a sampled field.
template <typename Getter>
Matrix2C fd_derivative(const Getter& g, int i, int count, double h) {
    if (i >= 2 && i + 2 < count) {
        return (-g(i + 2) + 8.0 * g(i + 1) - 8.0 * g(i - 1) + g(i - 2)) / (12.0 * h);
    }
    if (i >= 1 && i + 1 < count) {
        return (g(i + 1) - g(i - 1)) / (2.0 * h);
    }
    if (i == 0) {
        return (-3.0 * g(0) + 4.0 * g(1) - g(2)) / (2.0 * h);
    }
    return (3.0 * g(count - 1) - 4.0 * g(count - 2) + g(count - 3)) / (2.0 * h);
}

}  // namespace

AxisGrid AxisGrid::from_interval(double lo, double hi, int count) {
    if (count < 2 || !(hi > lo)) throw ConfigError("axis needs at least 2 nodes and hi > lo");
    AxisGrid ax;
    ax.count = count;
    ax.h = (hi - lo) / (count - 1);
    double snapped = std::round(-lo / ax.h);
    snapped = std::max(0.0, std::min(static_cast<double>(count - 1), snapped));
    ax.basepoint = static_cast<int>(snapped);
    const double at_base = lo + ax.basepoint * ax.h;
    ax.origin = (std::abs(at_base) <= 1e-9 * std::max(1.0, std::abs(lo))) ? 0.0 : at_base;
    return ax;
}

std::vector<TwistedLoop> integrate_axis(const PotentialLeg& leg, const AxisGrid& axis,
                                        const TwistedLoop& initial,
                                        const IntegrationOptions& opts) {
    const int n = initial.order();
    std::vector<TwistedLoop> out(static_cast<std::size_t>(axis.count),
                                 TwistedLoop::zero(n, LoopKind::Group));
    out[static_cast<std::size_t>(axis.basepoint)] = initial;
    auto check_tail = [&](const TwistedLoop& x, int j) {
        if (x.tail() > opts.tail_budget) {
            std::ostringstream os;
            os << "axis node " << j << " (t = " << axis.value(j) << ")";
            throw TailOverflow(x.tail(), opts.tail_budget, os.str());
        }
    };
    for (int j = axis.basepoint + 1; j < axis.count; ++j) {
        TwistedLoop x = rk4_step(out[j - 1], leg, axis.value(j - 1), axis.h, n);
        if (opts.renormalize) renormalize_det(x);
        check_tail(x, j);
        out[static_cast<std::size_t>(j)] = std::move(x);
    }
    for (int j = axis.basepoint - 1; j >= 0; --j) {
        TwistedLoop x = rk4_step(out[j + 1], leg, axis.value(j + 1), -axis.h, n);
        if (opts.renormalize) renormalize_det(x);
        check_tail(x, j);
        out[static_cast<std::size_t>(j)] = std::move(x);
    }
    return out;
}

int FrameGrid::lambda_index(double l) const {
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (std::abs(lambdas[i] - l) <= 1e-12 * std::max(1.0, std::abs(l))) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

FrameGrid build_frame_grid(std::shared_ptr<const PotentialPair> pair, const AxisGrid& x,
                           const AxisGrid& y, const FrameGridOptions& opts) {
    if (!pair) throw ConfigError("null potential pair");
    FrameGrid fg;
    fg.xaxis = x;
    fg.yaxis = y;
    fg.truncation = opts.truncation;
    if (opts.truncation < 2) throw ConfigError("truncation order must be at least 2");
    fg.lambdas = opts.lambdas;
    for (double l : fg.lambdas) {
        if (!(l > 0.0)) throw ConfigError("frame evaluation lambdas must be positive");
    }
    if (fg.lambda_index(1.0) < 0) fg.lambdas.push_back(1.0);
    std::sort(fg.lambdas.begin(), fg.lambdas.end());
    fg.pair = pair;

    const TwistedLoop initial = opts.initial_frame
                                    ? loop_resize(*opts.initial_frame, opts.truncation)
                                    : TwistedLoop::identity(opts.truncation);
    fg.X = integrate_axis(pair->chi, x, initial, opts.integration);
    fg.Y = integrate_axis(pair->psi, y, initial, opts.integration);

    std::vector<TwistedLoop> xinv(fg.X.size());
    for (std::size_t i = 0; i < fg.X.size(); ++i) xinv[i] = loop_adjugate(fg.X[i]);

    const std::size_t total = static_cast<std::size_t>(x.count) * static_cast<std::size_t>(y.count);
    fg.nodes.resize(total);
    if (opts.keep_loops) {
        fg.loops.assign(total, TwistedLoop::zero(opts.truncation, LoopKind::Group));
    }

    const std::size_t nl = fg.lambdas.size();
    parallel_for(total, [&](std::size_t k) {
        const int ix = static_cast<int>(k % static_cast<std::size_t>(x.count));
        const int iy = static_cast<int>(k / static_cast<std::size_t>(x.count));
        BirkhoffOptions bopts;
        bopts.rcond_min = opts.rcond_min;
        bopts.has_node = true;
        bopts.fx = x.value(ix);
        bopts.fy = y.value(iy);
        const TwistedLoop g = loop_mul(xinv[static_cast<std::size_t>(ix)],
                                       fg.Y[static_cast<std::size_t>(iy)]);
        const BirkhoffResult res = birkhoff_factor(g, bopts);
        TwistedLoop f =
            (res.h_minus.order() == opts.truncation)
                ? loop_mul(fg.X[static_cast<std::size_t>(ix)], res.h_minus)
                : loop_mul(loop_resize(fg.X[static_cast<std::size_t>(ix)], res.h_minus.order()),
                           res.h_minus);
        FrameNode& node = fg.nodes[k];
        node.d0 = res.h_plus.coeff(0);
        node.hm1 = res.h_minus.order() >= 1 ? res.h_minus.coeff(-1) : Matrix2C::Zero();
        node.residual = res.residual;
        node.rcond = res.rcond;
        node.tail = f.tail();
        node.Fpos.resize(nl);
        node.Fneg.resize(nl);
        node.Fsym.resize(nl);
        node.FsymNeg.resize(nl);
        for (std::size_t li = 0; li < nl; ++li) {
            const Complex l(fg.lambdas[li], 0.0);
            node.Fpos[li] = evaluate(f, l);
            node.Fneg[li] = evaluate(f, -l);
            node.Fsym[li] = evaluate_lambda_scaled_derivative(f, l);
            node.FsymNeg[li] = evaluate_lambda_scaled_derivative(f, -l);
        }
        if (opts.keep_loops) fg.loops[k] = loop_resize(f, opts.truncation);
    });

    const int l1 = fg.lambda_index(1.0);
    for (std::size_t k = 0; k < total; ++k) {
        const FrameNode& node = fg.nodes[k];
        fg.max_residual = std::max(fg.max_residual, node.residual);
        fg.min_rcond = std::min(fg.min_rcond, node.rcond);
        fg.max_tail = std::max(fg.max_tail, node.tail);
        for (std::size_t li = 0; li < nl; ++li) {
            fg.max_unitarity_defect =
                std::max(fg.max_unitarity_defect, unitarity_defect(node.Fpos[li]));
        }
        fg.max_det_defect =
            std::max(fg.max_det_defect, det1_defect(node.Fpos[static_cast<std::size_t>(l1)]));
    }
    if (fg.max_tail > opts.integration.tail_budget) {
        throw TailOverflow(fg.max_tail, opts.integration.tail_budget, "frame grid assembly");
    }
    return fg;
}

namespace {

// Shared by sym_surface and PointEvaluator: angle data from exact U_p, V_p.
void fill_angle(double lambda0, const Vec3& up, const Vec3& vp, double& A, double& B, double& phi,
                double& mu, bool& valid) {
    const double al = std::abs(lambda0);
    A = al * up.norm();
    B = vp.norm() / al;
    mu = -(up[0] * vp[1] - up[1] * vp[0]);
    const double mdot = -(up[0] * vp[0] + up[1] * vp[1]);
    valid = up.norm() > kAngleNormFloor && vp.norm() > kAngleNormFloor;
    phi = valid ? std::atan2(mu, mdot) : 0.0;
}

double mean_curvature(double phi, bool valid) {
    if (!valid) return std::numeric_limits<double>::infinity();
    const double s = std::sin(phi), c = std::cos(phi);
    if (std::abs(s) <= 1e-6) {
        return std::copysign(std::numeric_limits<double>::infinity(), -c * (s == 0.0 ? 1.0 : s));
    }
    return -c / s;
}

Vec3 ad_vec(const Matrix2C& g, const Vec3& v) {
    return su2_to_vec(g * vec_to_su2(v) * inverse2(g));
}

}  // namespace

SurfaceGrid sym_surface(const FrameGrid& fg, double lambda0) {
    if (lambda0 == 0.0 || !std::isfinite(lambda0)) throw ConfigError("lambda0 must be real nonzero");
    const int li = fg.lambda_index(std::abs(lambda0));
    if (li < 0) throw ConfigError("lambda0 not in the frame grid's evaluation set");
    const bool neg = lambda0 < 0.0;

    SurfaceGrid s;
    s.xaxis = fg.xaxis;
    s.yaxis = fg.yaxis;
    s.lambda0 = lambda0;
    s.epsilon = fg.pair ? fg.pair->epsilon : +1;
    s.nodes.resize(fg.nodes.size());

    const int nx = fg.nx(), ny = fg.ny();
    parallel_for(fg.nodes.size(), [&](std::size_t k) {
        const int ix = static_cast<int>(k % static_cast<std::size_t>(nx));
        const int iy = static_cast<int>(k / static_cast<std::size_t>(nx));
        const FrameNode& node = fg.nodes[k];
        const Matrix2C& F = neg ? node.Fneg[static_cast<std::size_t>(li)]
                                : node.Fpos[static_cast<std::size_t>(li)];
        const Matrix2C& fsym = neg ? node.FsymNeg[static_cast<std::size_t>(li)]
                                   : node.Fsym[static_cast<std::size_t>(li)];
        const Matrix2C finv = inverse2(F);
        const Matrix2C fmat = fsym * finv;
        SurfaceNode& out = s.nodes[k];
        out.f = su2_to_vec(fmat);
        Vec3 nvec = su2_to_vec(F * vec_to_su2(Vec3(0, 0, 1)) * finv);
        const double nn = nvec.norm();
        out.normal_defect = std::abs(1.0 - nn);
        out.nrm = (nn > 0) ? Vec3(nvec / nn) : Vec3(0, 0, 1);

        const double xv = fg.xaxis.value(ix);
        const double yv = fg.yaxis.value(iy);
        out.Up = p_part(fg.pair->chi.coeff_vec(1, xv));
        const Vec3 psim = p_part(fg.pair->psi.coeff_vec(-1, yv));
        out.Vp = ad_vec(node.d0, psim);
        // U_k = chi_0 + [chi_1, (H_-)_{-1}], exact from the factorization.
        const Matrix2C uk_mat =
            vec_to_su2(fg.pair->chi.coeff_vec(0, xv)) + commutator(vec_to_su2(out.Up), node.hm1);
        out.Uk = su2_to_vec(uk_mat);
        fill_angle(lambda0, out.Up, out.Vp, out.A, out.B, out.phi, out.mu, out.angle_valid);
        out.H = mean_curvature(out.phi, out.angle_valid);
    });

    // V_k by finite differences of the frame field (diagnostic only).
    parallel_for(fg.nodes.size(), [&](std::size_t k) {
        const int ix = static_cast<int>(k % static_cast<std::size_t>(nx));
        const int iy = static_cast<int>(k / static_cast<std::size_t>(nx));
        const int l1 = fg.lambda_index(1.0);
        auto fp = [&](int j) -> Matrix2C {
            return fg.nodes[fg.idx(ix, j)].Fpos[static_cast<std::size_t>(l1)];
        };
        auto fn = [&](int j) -> Matrix2C {
            return fg.nodes[fg.idx(ix, j)].Fneg[static_cast<std::size_t>(l1)];
        };
        const Matrix2C dp = fd_derivative(fp, iy, ny, fg.yaxis.h);
        const Matrix2C dn = fd_derivative(fn, iy, ny, fg.yaxis.h);
        const Matrix2C vpos = inverse2(fp(iy)) * dp;
        const Matrix2C vneg = inverse2(fn(iy)) * dn;
        s.nodes[k].Vk = su2_to_vec(0.5 * (vpos + vneg));
    });
    return s;
}

ConnectionField connection_components(const FrameGrid& fg) {
    const int nx = fg.nx(), ny = fg.ny();
    const int l1 = fg.lambda_index(1.0);
    ConnectionField cf;
    cf.Uk.resize(fg.nodes.size());
    cf.Up.resize(fg.nodes.size());
    cf.Vk.resize(fg.nodes.size());
    cf.Vp.resize(fg.nodes.size());
    parallel_for(fg.nodes.size(), [&](std::size_t k) {
        const int ix = static_cast<int>(k % static_cast<std::size_t>(nx));
        const int iy = static_cast<int>(k / static_cast<std::size_t>(nx));
        auto fpx = [&](int i) -> Matrix2C {
            return fg.nodes[fg.idx(i, iy)].Fpos[static_cast<std::size_t>(l1)];
        };
        auto fnx = [&](int i) -> Matrix2C {
            return fg.nodes[fg.idx(i, iy)].Fneg[static_cast<std::size_t>(l1)];
        };
        auto fpy = [&](int j) -> Matrix2C {
            return fg.nodes[fg.idx(ix, j)].Fpos[static_cast<std::size_t>(l1)];
        };
        auto fny = [&](int j) -> Matrix2C {
            return fg.nodes[fg.idx(ix, j)].Fneg[static_cast<std::size_t>(l1)];
        };
        const Matrix2C upos = inverse2(fpx(ix)) * fd_derivative(fpx, ix, nx, fg.xaxis.h);
        const Matrix2C uneg = inverse2(fnx(ix)) * fd_derivative(fnx, ix, nx, fg.xaxis.h);
        const Matrix2C vpos = inverse2(fpy(iy)) * fd_derivative(fpy, iy, ny, fg.yaxis.h);
        const Matrix2C vneg = inverse2(fny(iy)) * fd_derivative(fny, iy, ny, fg.yaxis.h);
        cf.Uk[k] = su2_to_vec(0.5 * (upos + uneg));
        cf.Up[k] = su2_to_vec(0.5 * (upos - uneg));
        cf.Vk[k] = su2_to_vec(0.5 * (vpos + vneg));
        cf.Vp[k] = su2_to_vec(0.5 * (vpos - vneg));
    });
    return cf;
}

namespace {

Complex extract_offdiag_coeff(const Matrix2C& c) {
    // zeta = v1 + i v2 for c = v1 e1 + v2 e2 (+ drift).
    const Vec3 v = su2_to_vec(c);
    return Complex(v[0], v[1]);
}

}  // namespace

NormalizedPotentials normalized_potentials(const FrameGrid& fg, int basepoint_ix,
                                           int basepoint_iy) {
    const int bx = basepoint_ix >= 0 ? basepoint_ix : fg.xaxis.basepoint;
    const int by = basepoint_iy >= 0 ? basepoint_iy : fg.yaxis.basepoint;
    if (bx < 0 || bx >= fg.nx() || by < 0 || by >= fg.ny()) {
        throw ConfigError("normalized_potentials: basepoint off the grid");
    }

    NormalizedPotentials np;
    const int n = fg.truncation;

    // Re-gauge so the axis frames are the identity at the requested basepoint.
    std::vector<TwistedLoop> xplus(fg.X.size(), TwistedLoop::identity(n));
    std::vector<TwistedLoop> yminus(fg.Y.size(), TwistedLoop::identity(n));
    const TwistedLoop gx = loop_adjugate(fg.X[static_cast<std::size_t>(bx)]);
    const TwistedLoop gy = loop_adjugate(fg.Y[static_cast<std::size_t>(by)]);
    parallel_for(fg.X.size(), [&](std::size_t i) {
        xplus[i] = birkhoff_factor_plus_normalized(loop_mul(gx, fg.X[i])).p_plus;
    });
    parallel_for(fg.Y.size(), [&](std::size_t j) {
        yminus[j] = birkhoff_factor(loop_mul(gy, fg.Y[j])).h_minus;
    });

    np.zeta.resize(fg.X.size());
    np.xi.resize(fg.Y.size());
    double violation = 0.0;

    auto q_form = [&](const std::vector<TwistedLoop>& arr, int i, int count,
                      double h) -> TwistedLoop {
        auto get = [&](int j) -> const TwistedLoop& { return arr[static_cast<std::size_t>(j)]; };
        TwistedLoop d(n, LoopKind::Algebra);
        if (i >= 2 && i + 2 < count) {
            d = loop_scale(1.0 / (12.0 * h),
                           loop_add(loop_sub(get(i - 2), get(i + 2)),
                                    loop_scale(8.0, loop_sub(get(i + 1), get(i - 1)))));
        } else if (i >= 1 && i + 1 < count) {
            d = loop_scale(1.0 / (2.0 * h), loop_sub(get(i + 1), get(i - 1)));
        } else if (i == 0) {
            d = loop_scale(1.0 / (2.0 * h),
                           loop_add(loop_scale(-3.0, get(0)),
                                    loop_sub(loop_scale(4.0, get(1)), get(2))));
        } else {
            d = loop_scale(1.0 / (2.0 * h),
                           loop_add(loop_scale(3.0, get(count - 1)),
                                    loop_sub(get(count - 3), loop_scale(4.0, get(count - 2)))));
        }
        return loop_mul(loop_adjugate(get(i)), d);
    };

    for (int i = 0; i < fg.nx(); ++i) {
        const TwistedLoop q = q_form(xplus, i, fg.nx(), fg.xaxis.h);
        np.zeta[static_cast<std::size_t>(i)] = extract_offdiag_coeff(q.coeff(1));
        if (i >= 2 && i + 2 < fg.nx()) {
            for (int j = -n; j <= n; ++j) {
                if (j == 1) continue;
                violation = std::max(violation, q.coeff(j).norm());
            }
        }
    }
    for (int j = 0; j < fg.ny(); ++j) {
        const TwistedLoop q = q_form(yminus, j, fg.ny(), fg.yaxis.h);
        np.xi[static_cast<std::size_t>(j)] = extract_offdiag_coeff(q.coeff(-1));
        if (j >= 2 && j + 2 < fg.ny()) {
            for (int m = -n; m <= n; ++m) {
                if (m == -1) continue;
                violation = std::max(violation, q.coeff(m).norm());
            }
        }
    }
    np.shape_violation = violation;
    return np;
}

PointEvaluator::PointEvaluator(const FrameGrid& fg, double lambda0) : fg_(fg), lambda0_(lambda0) {
    if (lambda0 == 0.0) throw ConfigError("lambda0 must be nonzero");
    if (!fg.pair) throw ConfigError("frame grid has no potential pair attached");
}

TwistedLoop PointEvaluator::axis_loop_at(const std::vector<TwistedLoop>& arr, const AxisGrid& axis,
                                         const PotentialLeg& leg, double t) const {
    double fj = (t - axis.origin) / axis.h + axis.basepoint;
    int j = static_cast<int>(std::lround(fj));
    j = std::max(0, std::min(axis.count - 1, j));
    const double tj = axis.value(j);
    const double dt = t - tj;
    if (std::abs(dt) <= 1e-14 * std::max(1.0, std::abs(t))) {
        return arr[static_cast<std::size_t>(j)];
    }
    TwistedLoop x = rk4_step(arr[static_cast<std::size_t>(j)], leg, tj, dt / 2, fg_.truncation);
    return rk4_step(x, leg, tj + dt / 2, dt / 2, fg_.truncation);
}

SurfacePointSample PointEvaluator::at(double x, double y) const {
    const TwistedLoop xl = axis_loop_at(fg_.X, fg_.xaxis, fg_.pair->chi, x);
    const TwistedLoop yl = axis_loop_at(fg_.Y, fg_.yaxis, fg_.pair->psi, y);
    const TwistedLoop g = loop_mul(loop_adjugate(xl), yl);
    BirkhoffOptions bopts;
    bopts.has_node = true;
    bopts.fx = x;
    bopts.fy = y;
    const BirkhoffResult res = birkhoff_factor(g, bopts);
    const TwistedLoop f = (res.h_minus.order() == xl.order())
                              ? loop_mul(xl, res.h_minus)
                              : loop_mul(loop_resize(xl, res.h_minus.order()), res.h_minus);

    SurfacePointSample out;
    out.x = x;
    out.y = y;
    const Complex l0(lambda0_, 0.0);
    const Matrix2C F = evaluate(f, l0);
    const Matrix2C finv = inverse2(F);
    out.f = su2_to_vec(evaluate_lambda_scaled_derivative(f, l0) * finv);
    Vec3 nvec = su2_to_vec(F * vec_to_su2(Vec3(0, 0, 1)) * finv);
    const double nn = nvec.norm();
    out.nrm = (nn > 0) ? Vec3(nvec / nn) : Vec3(0, 0, 1);
    out.Up = p_part(fg_.pair->chi.coeff_vec(1, x));
    out.Vp = ad_vec(res.h_plus.coeff(0), p_part(fg_.pair->psi.coeff_vec(-1, y)));
    fill_angle(lambda0_, out.Up, out.Vp, out.A, out.B, out.phi, out.mu, out.angle_valid);
    return out;
}

}  // namespace psfront
