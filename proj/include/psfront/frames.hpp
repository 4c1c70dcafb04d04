#pragma once

#include <memory>
#include <vector>

#include "psfront/birkhoff.hpp"
#include "psfront/loop.hpp"
#include "psfront/potentials.hpp"

namespace psfront {

// Uniform axis; node j sits at origin + (j - basepoint)*h. Generating nodes as
// integer multiples of h from the basepoint keeps symmetric boxes exactly
// mirror-symmetric and puts the ODE initial condition on a node.
struct AxisGrid {
    double h = 0.0;
    int count = 0;
    int basepoint = 0;
    double origin = 0.0;

    double value(int j) const { return origin + (j - basepoint) * h; }
    double lo() const { return value(0); }
    double hi() const { return value(count - 1); }

    // Basepoint at the node nearest 0 when 0 lies inside [lo, hi] (snapped to
    // exactly 0 when the interval is h-aligned), else at the nearer endpoint.
    static AxisGrid from_interval(double lo, double hi, int count);
};

struct IntegrationOptions {
    double tail_budget = 1e-6;
    bool renormalize = false;  // scalar det correction at lambda=1 after each step
};

// Classical RK4 on dX = X chi(t) dt in truncated-loop space, marching outward
// from the basepoint node where X = initial.
std::vector<TwistedLoop> integrate_axis(const PotentialLeg& leg, const AxisGrid& axis,
                                        const TwistedLoop& initial,
                                        const IntegrationOptions& opts = {});

struct FrameNode {
    Matrix2C d0;   // constant term of H_+
    Matrix2C hm1;  // lambda^{-1} coefficient of H_-
    double residual = 0.0;
    double rcond = 1.0;
    double tail = 0.0;
    // Indexed like FrameGrid::lambdas: F(+l), F(-l), sum_j j c_j l^j at +l and -l.
    std::vector<Matrix2C> Fpos, Fneg, Fsym, FsymNeg;
};

struct FrameGridOptions {
    int truncation = 12;
    std::vector<double> lambdas = {0.5, 1.0, 2.0};
    IntegrationOptions integration;
    double rcond_min = 1e-12;
    bool keep_loops = false;
    std::shared_ptr<const TwistedLoop> initial_frame;  // default: identity
};

struct FrameGrid {
    AxisGrid xaxis, yaxis;
    int truncation = 0;
    std::vector<double> lambdas;
    std::vector<TwistedLoop> X, Y;  // axis frames
    std::vector<FrameNode> nodes;   // idx = iy*nx + ix
    std::vector<TwistedLoop> loops;  // full F loops when keep_loops was set
    std::shared_ptr<const PotentialPair> pair;

    double max_unitarity_defect = 0.0;  // over nodes and the lambda set
    double max_det_defect = 0.0;        // at lambda = 1
    double max_residual = 0.0;
    double min_rcond = 1.0;
    double max_tail = 0.0;

    int nx() const { return xaxis.count; }
    int ny() const { return yaxis.count; }
    std::size_t idx(int ix, int iy) const {
        return static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx()) +
               static_cast<std::size_t>(ix);
    }
    int lambda_index(double l) const;
};

FrameGrid build_frame_grid(std::shared_ptr<const PotentialPair> pair, const AxisGrid& x,
                           const AxisGrid& y, const FrameGridOptions& opts = {});

struct SurfaceNode {
    Vec3 f = Vec3::Zero();
    Vec3 nrm = Vec3::Zero();
    double A = 0.0, B = 0.0;
    double phi = 0.0;     // oriented angle from f_x to f_y; valid when angle_valid
    double mu = 0.0;      // A B sin(phi), computed as -det2(U_p, V_p)
    double H = 0.0;       // -cot(phi); +-inf where |sin phi| <= 1e-6
    bool angle_valid = false;
    Vec3 Uk = Vec3::Zero(), Up = Vec3::Zero(), Vk = Vec3::Zero(), Vp = Vec3::Zero();
    double normal_defect = 0.0;  // |1 - |N|| before normalization
};

struct SurfaceGrid {
    AxisGrid xaxis, yaxis;
    double lambda0 = 1.0;
    int epsilon = +1;
    std::vector<SurfaceNode> nodes;

    int nx() const { return xaxis.count; }
    int ny() const { return yaxis.count; }
    std::size_t idx(int ix, int iy) const {
        return static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx()) +
               static_cast<std::size_t>(ix);
    }
};

// Sym formula at real lambda0: f = lambda dF/dlambda F^{-1}, N = Ad_F e3,
// plus the fundamental-form data A, B, phi, mu, H and the connection
// components (U_p, V_p, U_k exact from the factorization; V_k by finite
// differences of the frame field).
SurfaceGrid sym_surface(const FrameGrid& fg, double lambda0);

struct ConnectionField {
    std::vector<Vec3> Uk, Up, Vk, Vp;  // idx as FrameGrid
};

// Finite-difference extraction of the admissible connection from the frame
// field: F^{-1}F_x = U_k + U_p lambda, F^{-1}F_y = V_k + V_p lambda^{-1},
// separated by evaluating at lambda = +-1. 4th-order centered differences in
// the interior, one-sided 2nd-order at the edges.
ConnectionField connection_components(const FrameGrid& fg);

struct NormalizedPotentials {
    // zeta = v1 + i v2 where X_+^{-1} dX_+ = (v1 e1 + v2 e2) lambda dx; same
    // convention for xi with the lambda^{-1} leg.
    std::vector<Complex> zeta;  // per x node
    std::vector<Complex> xi;    // per y node
    double shape_violation = 0.0;  // max off-shape coefficient norm (interior nodes)
};

NormalizedPotentials normalized_potentials(const FrameGrid& fg, int basepoint_ix = -1,
                                           int basepoint_iy = -1);

struct SurfacePointSample {
    double x = 0.0, y = 0.0;
    Vec3 f = Vec3::Zero(), nrm = Vec3::Zero();
    double A = 0.0, B = 0.0, phi = 0.0, mu = 0.0;
    bool angle_valid = false;
    Vec3 Up = Vec3::Zero(), Vp = Vec3::Zero();
};

// Pointwise evaluation off the grid nodes (RK4 substeps along the axes plus a
// fresh factorization); used by the singular-set bisection refinement.
class PointEvaluator {
public:
    PointEvaluator(const FrameGrid& fg, double lambda0);
    SurfacePointSample at(double x, double y) const;

private:
    TwistedLoop axis_loop_at(const std::vector<TwistedLoop>& arr, const AxisGrid& axis,
                             const PotentialLeg& leg, double t) const;
    const FrameGrid& fg_;
    double lambda0_;
};

}  // namespace psfront
