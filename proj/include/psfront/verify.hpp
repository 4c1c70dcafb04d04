#pragma once

#include <map>
#include <string>
#include <vector>

#include "psfront/frames.hpp"

namespace psfront {

// f(zeta,xi) = (a cos(zeta) sin(xi), a sin(zeta) sin(xi),
//               a(cos(xi) + ln tan(xi/2)) + b xi), a^2 + b^2 = 1.
// Requires xi in (0, pi); nodes near the singular circle cos(xi) = 0 are
// flagged in `singular_mask`.
struct DiniReference {
    std::vector<Vec3> points;       // row-major over (zeta, xi)
    std::vector<bool> singular_mask;
};
DiniReference dini_reference(double a, double b, const std::vector<double>& zetas,
                             const std::vector<double>& xis, double mask_band = 0.05);

// Tractrix revolution (sech v cos u, sech v sin u, v - tanh v).
Vec3 tractrix_point(double u, double v);

// Dini surface evaluated through the null-coordinate correspondence
// zeta = u + b v, xi = pi/2 + gd(a v) of the constant (kappa, tau) = (a, b)
// geometric Cauchy solution; reduces to the tractrix revolution at b = 0.
Vec3 dini_point_uv(double a, double b, double u, double v);

struct AlignmentResult {
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Vec3 translation = Vec3::Zero();
    double rms = 0.0;
    double max = 0.0;
};

// Proper rigid motion minimizing rms of R a_i + t - b_i (Kabsch). Throws
// DegenerateConfiguration for fewer than 3 points or a collinear set.
AlignmentResult kabsch_align(const std::vector<Vec3>& a, const std::vector<Vec3>& b);

struct CheckMetric {
    double max = 0.0;
    double rms = 0.0;
    double threshold = 0.0;
    bool pass = true;
    bool skipped = false;
    long count = 0;
};

struct CheckThresholds {
    double orthogonality = 1e-6;
    double assoc_system = 1e-3;
    double harmonicity = 1e-3;
    double gauss = 1e-2;
    double sine_gordon = 1e-3;
    double second_form_diag = 1e-3;
    double sin_phi_min = 0.1;  // Gauss check restricted to |sin phi| above this
};

struct CheckReport {
    std::map<std::string, CheckMetric> metrics;
    std::vector<std::pair<double, double>> weak_regularity_failures;  // (x, y)
    bool all_pass() const;
};

// Quantitative residual suite over a surface grid: frontal orthogonality
// (4th-order differences), the associated-frontal system and harmonicity
// (2nd order), Gauss curvature from finite-difference fundamental forms,
// sine-Gordon at constant-speed regular pairs, and the off-diagonality of the
// second fundamental form.
CheckReport check_suite(const SurfaceGrid& surface, const CheckThresholds& thresholds = {});

}  // namespace psfront
