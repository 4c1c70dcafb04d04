#include "psfront/su2.hpp"

namespace psfront {

namespace {
const Complex kI(0.0, 1.0);

Matrix2C make_e1() {
    Matrix2C m;
    m << Complex(0, 0), 0.5 * kI, 0.5 * kI, Complex(0, 0);
    return m;
}

Matrix2C make_e2() {
    Matrix2C m;
    m << Complex(0, 0), Complex(-0.5, 0), Complex(0.5, 0), Complex(0, 0);
    return m;
}

Matrix2C make_e3() {
    Matrix2C m;
    m << 0.5 * kI, Complex(0, 0), Complex(0, 0), -0.5 * kI;
    return m;
}
}  // namespace

const Matrix2C& su2_e1() {
    static const Matrix2C e = make_e1();
    return e;
}

const Matrix2C& su2_e2() {
    static const Matrix2C e = make_e2();
    return e;
}

const Matrix2C& su2_e3() {
    static const Matrix2C e = make_e3();
    return e;
}

Su2Basis su2_basis() { return {su2_e1(), su2_e2(), su2_e3()}; }

Matrix2C vec_to_su2(const Vec3& v) {
    Matrix2C m;
    const Complex a(0.0, 0.5 * v[2]);
    const Complex b(-0.5 * v[1], 0.5 * v[0]);
    const Complex c(0.5 * v[1], 0.5 * v[0]);
    m << a, b, c, -a;
    return m;
}

Vec3 su2_to_vec(const Matrix2C& m) {
    // Inverse of vec_to_su2 on the anti-Hermitian traceless part.
    const Matrix2C a = 0.5 * (m - m.adjoint());
    Vec3 v;
    v[0] = a(0, 1).imag() + a(1, 0).imag();
    v[1] = a(1, 0).real() - a(0, 1).real();
    v[2] = a(0, 0).imag() - a(1, 1).imag();
    return v;
}

double su2_defect(const Matrix2C& m) {
    Matrix2C p = 0.5 * (m - m.adjoint());
    const Complex tr = 0.5 * p.trace();
    p(0, 0) -= tr;
    p(1, 1) -= tr;
    return (m - p).norm();
}

}  // namespace psfront
