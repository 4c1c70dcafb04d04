#include "psfront/verify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "psfront/errors.hpp"

namespace psfront {

namespace {

double gudermannian(double w) { return std::asin(std::tanh(w)); }

struct Accumulator {
    double max = 0.0;
    double sumsq = 0.0;
    long count = 0;
    void add(double v) {
        const double a = std::abs(v);
        max = std::max(max, a);
        sumsq += a * a;
        ++count;
    }
    CheckMetric metric(double threshold) const {
        CheckMetric m;
        m.max = max;
        m.rms = count ? std::sqrt(sumsq / count) : 0.0;
        m.threshold = threshold;
        m.pass = max <= threshold;
        m.count = count;
        m.skipped = count == 0;
        return m;
    }
};

}  // namespace

DiniReference dini_reference(double a, double b, const std::vector<double>& zetas,
                             const std::vector<double>& xis, double mask_band) {
    if (std::abs(a * a + b * b - 1.0) > 1e-12) {
        throw PreconditionError("Dini parameters need a^2 + b^2 = 1");
    }
    DiniReference out;
    out.points.reserve(zetas.size() * xis.size());
    out.singular_mask.reserve(zetas.size() * xis.size());
    for (double xi : xis) {
        if (!(xi > 1e-12 && xi < M_PI - 1e-12)) {
            throw DomainError("Dini parametrization requires xi in (0, pi)");
        }
    }
    for (std::size_t j = 0; j < xis.size(); ++j) {
        const double xi = xis[j];
        const double sx = std::sin(xi), cx = std::cos(xi);
        const double zterm = a * (cx + std::log(std::tan(0.5 * xi)));
        for (std::size_t i = 0; i < zetas.size(); ++i) {
            const double z = zetas[i];
            // Twist term b*zeta: the xi = pi/2 section is then the helix
            // (a cos t, a sin t, b t), and K = -1 holds (checked in tests).
            out.points.emplace_back(a * std::cos(z) * sx, a * std::sin(z) * sx, zterm + b * z);
            out.singular_mask.push_back(std::abs(cx) < mask_band);
        }
    }
    return out;
}

Vec3 tractrix_point(double u, double v) {
    const double se = 1.0 / std::cosh(v);
    return Vec3(se * std::cos(u), se * std::sin(u), v - std::tanh(v));
}

Vec3 dini_point_uv(double a, double b, double u, double v) {
    if (std::abs(a * a + b * b - 1.0) > 1e-12) {
        throw PreconditionError("Dini parameters need a^2 + b^2 = 1");
    }
    const double zeta = u + b * v;
    const double xi = 0.5 * M_PI + gudermannian(a * v);
    const double sx = std::sin(xi), cx = std::cos(xi);
    return Vec3(a * std::cos(zeta) * sx, a * std::sin(zeta) * sx,
                a * (cx + std::log(std::tan(0.5 * xi))) + b * zeta);
}

AlignmentResult kabsch_align(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
    if (a.size() != b.size()) throw PreconditionError("point sets differ in size");
    if (a.size() < 3) throw DegenerateConfiguration("need at least 3 points to align");
    const double n = static_cast<double>(a.size());
    Vec3 ca = Vec3::Zero(), cb = Vec3::Zero();
    for (std::size_t i = 0; i < a.size(); ++i) {
        ca += a[i];
        cb += b[i];
    }
    ca /= n;
    cb /= n;
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (std::size_t i = 0; i < a.size(); ++i) {
        cov += (a[i] - ca) * (b[i] - cb).transpose();
    }
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::Vector3d sv = svd.singularValues();
    if (sv(1) <= 1e-12 * std::max(1.0, sv(0))) {
        throw DegenerateConfiguration("point set is (near) collinear; rotation underdetermined");
    }
    Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
    if ((svd.matrixV() * svd.matrixU().transpose()).determinant() < 0) d(2, 2) = -1.0;
    AlignmentResult res;
    res.rotation = svd.matrixV() * d * svd.matrixU().transpose();
    res.translation = cb - res.rotation * ca;
    double sumsq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double dist = (res.rotation * a[i] + res.translation - b[i]).norm();
        res.max = std::max(res.max, dist);
        sumsq += dist * dist;
    }
    res.rms = std::sqrt(sumsq / n);
    return res;
}

bool CheckReport::all_pass() const {
    for (const auto& [name, m] : metrics) {
        (void)name;
        if (!m.skipped && !m.pass) return false;
    }
    return true;
}

CheckReport check_suite(const SurfaceGrid& s, const CheckThresholds& th) {
    const int nx = s.nx(), ny = s.ny();
    const double hx = s.xaxis.h, hy = s.yaxis.h;

    auto fval = [&](int ix, int iy) -> const Vec3& { return s.nodes[s.idx(ix, iy)].f; };
    auto nval = [&](int ix, int iy) -> const Vec3& { return s.nodes[s.idx(ix, iy)].nrm; };

    auto dx4 = [&](auto&& g, int ix, int iy) {
        return (-g(ix + 2, iy) + 8.0 * g(ix + 1, iy) - 8.0 * g(ix - 1, iy) + g(ix - 2, iy)) /
               (12.0 * hx);
    };
    auto dy4 = [&](auto&& g, int ix, int iy) {
        return (-g(ix, iy + 2) + 8.0 * g(ix, iy + 1) - 8.0 * g(ix, iy - 1) + g(ix, iy - 2)) /
               (12.0 * hy);
    };
    auto dx2 = [&](auto&& g, int ix, int iy) {
        return (g(ix + 1, iy) - g(ix - 1, iy)) / (2.0 * hx);
    };
    auto dy2 = [&](auto&& g, int ix, int iy) {
        return (g(ix, iy + 1) - g(ix, iy - 1)) / (2.0 * hy);
    };
    auto dxx = [&](auto&& g, int ix, int iy) {
        return (g(ix + 1, iy) - 2.0 * g(ix, iy) + g(ix - 1, iy)) / (hx * hx);
    };
    auto dyy = [&](auto&& g, int ix, int iy) {
        return (g(ix, iy + 1) - 2.0 * g(ix, iy) + g(ix, iy - 1)) / (hy * hy);
    };
    auto dxy = [&](auto&& g, int ix, int iy) {
        return (g(ix + 1, iy + 1) - g(ix + 1, iy - 1) - g(ix - 1, iy + 1) + g(ix - 1, iy - 1)) /
               (4.0 * hx * hy);
    };

    Accumulator orth_x, orth_y, assoc_x, assoc_y, harmonic, gauss, sgordon, second_diag;

    // Constant-speed detection for the sine-Gordon residual.
    double amin = 1e300, amax = -1e300, bmin = 1e300, bmax = -1e300;
    bool all_regular = true;
    for (const auto& node : s.nodes) {
        amin = std::min(amin, node.A);
        amax = std::max(amax, node.A);
        bmin = std::min(bmin, node.B);
        bmax = std::max(bmax, node.B);
        if (!node.angle_valid) all_regular = false;
    }
    const bool constant_speed = (amax - amin) <= 1e-9 * std::max(1.0, amax) &&
                                (bmax - bmin) <= 1e-9 * std::max(1.0, bmax);
    const bool do_sine_gordon = constant_speed && all_regular && amin > 0 && bmin > 0;

    CheckReport report;

    for (int iy = 2; iy + 2 < ny; ++iy) {
        for (int ix = 2; ix + 2 < nx; ++ix) {
            const SurfaceNode& node = s.nodes[s.idx(ix, iy)];
            const Vec3& nrm = node.nrm;
            const Vec3 fx4 = dx4(fval, ix, iy);
            const Vec3 fy4 = dy4(fval, ix, iy);
            orth_x.add(fx4.dot(nrm));
            orth_y.add(fy4.dot(nrm));

            const Vec3 fx2 = dx2(fval, ix, iy);
            const Vec3 fy2 = dy2(fval, ix, iy);
            const Vec3 nx2 = dx2(nval, ix, iy);
            const Vec3 ny2 = dy2(nval, ix, iy);
            assoc_x.add((fx2 - nrm.cross(nx2)).norm());
            assoc_y.add((fy2 + nrm.cross(ny2)).norm());
            harmonic.add(nrm.cross(dxy(nval, ix, iy)).norm());

            const Vec3 fxx = dxx(fval, ix, iy);
            const Vec3 fyy = dyy(fval, ix, iy);
            const Vec3 fxy = dxy(fval, ix, iy);
            const double L = fxx.dot(nrm);
            const double M = fxy.dot(nrm);
            const double N2 = fyy.dot(nrm);
            second_diag.add(L);
            second_diag.add(N2);
            if (node.angle_valid && std::abs(std::sin(node.phi)) > th.sin_phi_min) {
                const double E = fx4.dot(fx4);
                const double F = fx4.dot(fy4);
                const double G = fy4.dot(fy4);
                const double den = E * G - F * F;
                if (den > 0) gauss.add((L * N2 - M * M) / den + 1.0);
            }

            if (do_sine_gordon) {
                auto sphi = [&](int jx, int jy) { return std::sin(s.nodes[s.idx(jx, jy)].phi); };
                auto cphi = [&](int jx, int jy) { return std::cos(s.nodes[s.idx(jx, jy)].phi); };
                const double si = sphi(ix, iy), co = cphi(ix, iy);
                const double phi_xy = dxy(sphi, ix, iy) * co + dx2(sphi, ix, iy) * dy2(cphi, ix, iy) -
                                      dxy(cphi, ix, iy) * si - dx2(cphi, ix, iy) * dy2(sphi, ix, iy);
                sgordon.add(phi_xy / (node.A * node.B) - si);
            }
        }
    }

    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const SurfaceNode& node = s.nodes[s.idx(ix, iy)];
            if (std::min(node.Up.norm(), node.Vp.norm()) <= 1e-6) {
                report.weak_regularity_failures.emplace_back(s.xaxis.value(ix), s.yaxis.value(iy));
            }
        }
    }

    report.metrics["orthogonality_x"] = orth_x.metric(th.orthogonality);
    report.metrics["orthogonality_y"] = orth_y.metric(th.orthogonality);
    report.metrics["assoc_system_x"] = assoc_x.metric(th.assoc_system);
    report.metrics["assoc_system_y"] = assoc_y.metric(th.assoc_system);
    report.metrics["harmonicity"] = harmonic.metric(th.harmonicity);
    report.metrics["gauss_curvature"] = gauss.metric(th.gauss);
    CheckMetric sg = sgordon.metric(th.sine_gordon);
    sg.skipped = !do_sine_gordon;
    report.metrics["sine_gordon"] = sg;
    report.metrics["second_form_diagonal"] = second_diag.metric(th.second_form_diag);
    return report;
}

}  // namespace psfront
