#pragma once

#include <map>
#include <string>
#include <vector>

#include "psfront/scalar_function.hpp"
#include "psfront/su2.hpp"

namespace psfront {

// Arclength-parametrized space curve with Frenet data. Samples are uniform in
// s; kappa >= 0 and tau carries the frame sign. Parameters where kappa
// vanishes or |tau| = 1 are refined and recorded (they drive the degeneracy
// flags downstream).
struct CurveData {
    std::vector<double> s;
    std::vector<Vec3> gamma;
    std::vector<double> kappa, tau;
    std::vector<Vec3> tvec, nvec, bvec;
    std::vector<bool> kappa_undefined;  // kappa below tolerance at this sample

    std::vector<double> kappa_zero_params;  // s values with kappa = 0
    std::vector<double> tau_unit_params;    // s values with |tau| = 1

    double s0() const { return s.front(); }
    double s1() const { return s.back(); }

    ScalarFunction kappa_function() const;
    ScalarFunction tau_function() const;
};

struct CurveOptions {
    int samples = 1001;
    double fd_step = 1e-4;       // central-difference step in the source parameter
    double kappa_tol = 1e-8;     // below this kappa counts as zero
    int max_undefined_run = 3;   // longer kappa-zero runs need an explicit tau
    bool have_explicit_tau = false;
    ScalarFunction explicit_tau;
    bool center_arclength = true;  // shift s so the midpoint is s = 0
};

// Build from three coordinate expressions of one parameter; arclength by
// cumulative Simpson quadrature, resampled uniformly via monotone cubic
// interpolation of s(t).
CurveData curve_from_expressions(const ScalarFunction& x, const ScalarFunction& y,
                                 const ScalarFunction& z, double t0, double t1,
                                 const CurveOptions& opts = {});

// Rows of (t, x, y, z); fitted with cubic sample tables, then treated as above.
CurveData curve_from_samples(const std::vector<double>& t, const std::vector<Vec3>& points,
                             const CurveOptions& opts = {});

// circle (R), helix (a, b), cylinder_figure, viviani.
CurveData named_curve(const std::string& name, const std::map<std::string, double>& params = {},
                      const CurveOptions& opts = {});

struct GeometricCauchyCheck {
    std::vector<bool> z_orthogonal;        // <Z, gamma'> = 0
    std::vector<bool> zprime_orthogonal;   // <Z', gamma'> = 0
    std::vector<bool> weakly_regular;      // |gamma'| != |Z'|
    std::vector<bool> z_is_binormal;       // Z = +-b, checked where kappa > tol
    bool all_admissible = true;            // first three conditions everywhere
};

// The data list for the singular geometric Cauchy problem, checked samplewise.
GeometricCauchyCheck singular_geometric_cauchy_check(const CurveData& curve,
                                                     const std::vector<Vec3>& Z,
                                                     double tol = 1e-6);

}  // namespace psfront
