#pragma once

#include <optional>
#include <string>
#include <vector>

#include "psfront/frames.hpp"

namespace psfront {

enum class SingularType {
    CuspidalEdge,
    Swallowtail,
    ConeArc,
    HigherOrderCuspidalEdge,
    Degenerate,
    Unclassified,
};

std::string to_string(SingularType t);

struct SingularPoint {
    double x = 0.0, y = 0.0;   // domain coordinates (refined)
    double arc = 0.0;          // arclength along the domain polyline
    Vec3 f = Vec3::Zero();     // image point
    Eigen::Vector2d eta = Eigen::Vector2d::Zero();  // null direction (domain)
    SingularType type = SingularType::Unclassified;
    bool weakly_regular = false;
    double detD = 0.0;         // det(sigma', eta); zero crossings mark swallowtails
    double grad_phi = 0.0;
    double grad_mu = 0.0;
    double A = 0.0, B = 0.0;
};

struct SingularCurve {
    std::vector<SingularPoint> points;
    bool characteristic = false;
    bool closed = false;
};

struct SingularOptions {
    double node_zero_tol = 1e-10;    // |mu| below this counts as exactly singular
    double refine_tol = 1e-8;        // bisection window on mu along an edge
    double weak_tol = 1e-6;          // |U_p|, |V_p| threshold for weak regularity
    double degeneracy_tol = 1e-4;    // on |grad phi| (weakly regular points)
    double mu_degeneracy_tol = 1e-4; // on |grad mu| (non weakly regular points)
    double zero_tol_scale = 1e-6;    // cone test: |detD| <= scale * arc length
    double flag_radius = -1.0;       // Degenerate within this distance of flagged
                                     // parameters; default 2h
    double characteristic_angle = 0.05;  // max |tangent cross axis| for characteristic
    double degenerate_region_fraction = 0.25;
};

struct SingularReport {
    std::vector<SingularCurve> curves;
    bool degenerate_region = false;  // rank <= 1 on a large fraction of nodes
    double zero_fraction = 0.0;
};

// Zero crossings of mu on grid edges (bisection-refined through the frame
// evaluator when available), chained into polylines by cell adjacency, then
// classified arc by arc.
SingularReport detect_singular_set(const SurfaceGrid& surface, const FrameGrid& frames,
                                   const SingularOptions& opts = {});

// Classification of one detected point given its curve context; the public
// single-point entry checks the point lies on the detected singular set.
SingularType classify(const SingularReport& report, double x, double y,
                      const SurfaceGrid& surface, double locate_tol = -1.0);

struct CharacteristicDiagnostics {
    double max_kappa = 0.0;
    double mean_kappa = 0.0;
    double mean_abs_tau = 0.0;
    bool straight_line = false;   // kappa < 1e-4 throughout
    bool unit_torsion = false;    // |tau| = 1 +- 1e-3 with kappa > 0
};

// Image-curve curvature/torsion check for a characteristic singular curve.
// Throws NotOnSingularSet if the curve's points do not lie on the singular set
// of the surface.
CharacteristicDiagnostics characteristic_diagnostics(const SurfaceGrid& surface,
                                                     const SingularCurve& curve,
                                                     double mu_tol = 1e-6);

}  // namespace psfront
