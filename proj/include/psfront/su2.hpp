#pragma once

#include <Eigen/Dense>
#include <complex>

namespace psfront {

using Complex = std::complex<double>;
using Matrix2C = Eigen::Matrix2cd;
using Vec3 = Eigen::Vector3d;

// Orthonormal basis of su(2) under <X,Y> = -2 tr(XY):
//   e1 = (1/2)[[0,i],[i,0]],  e2 = (1/2)[[0,-1],[1,0]],  e3 = (1/2)[[i,0],[0,-i]]
// with [e1,e2]=e3, [e2,e3]=e1, [e3,e1]=e2, so the commutator realizes the
// cross product under the identification R^3 = su(2).
const Matrix2C& su2_e1();
const Matrix2C& su2_e2();
const Matrix2C& su2_e3();

struct Su2Basis {
    Matrix2C e1, e2, e3;
};
Su2Basis su2_basis();

inline Matrix2C commutator(const Matrix2C& a, const Matrix2C& b) { return a * b - b * a; }

// <X,Y> = -2 tr(XY); real part (exactly real on su(2)).
inline double su2_inner(const Matrix2C& x, const Matrix2C& y) {
    return -2.0 * (x * y).trace().real();
}

Matrix2C vec_to_su2(const Vec3& v);

// Components of the anti-Hermitian part of m in the (e1,e2,e3) basis.
Vec3 su2_to_vec(const Matrix2C& m);

// Frobenius distance of m from its anti-Hermitian traceless projection.
double su2_defect(const Matrix2C& m);

inline double unitarity_defect(const Matrix2C& g) {
    return (g * g.adjoint() - Matrix2C::Identity()).norm();
}

inline double det1_defect(const Matrix2C& g) { return std::abs(g.determinant() - Complex(1.0, 0.0)); }

}  // namespace psfront
