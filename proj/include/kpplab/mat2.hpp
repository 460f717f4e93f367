#pragma once

#include <cmath>

namespace kpplab {

struct Vec2 {
    double x = 0.0, y = 0.0;

    double norm() const { return std::hypot(x, y); }
};

// Row-major 2x2 real matrix. Transfer matrices live here; determinant is 1
// by construction for Schrodinger cocycles.
struct Mat2 {
    double a11 = 1.0, a12 = 0.0, a21 = 0.0, a22 = 1.0;

    static Mat2 identity() { return {}; }

    static Mat2 rotation(double angle) {
        const double c = std::cos(angle), s = std::sin(angle);
        return {c, -s, s, c};
    }

    double det() const { return a11 * a22 - a12 * a21; }
    double trace() const { return a11 + a22; }

    double frob_norm() const {
        return std::sqrt(a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22);
    }

    // Largest singular value, closed form for 2x2.
    double op_norm() const {
        const double f2 = a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22;
        const double d = det();
        const double disc = std::sqrt(std::fmax(f2 * f2 - 4.0 * d * d, 0.0));
        return std::sqrt(0.5 * (f2 + disc));
    }

    Mat2 transpose() const { return {a11, a21, a12, a22}; }

    // adj(M) = det(M) M^{-1}; the exact inverse for SL(2,R) members, stable
    // even when the stored determinant has cancelled to noise.
    Mat2 adjugate() const { return {a22, -a12, -a21, a11}; }

    // Valid for det != 0; cocycle callers have det == 1.
    Mat2 inverse() const {
        const double d = det();
        return {a22 / d, -a12 / d, -a21 / d, a11 / d};
    }

    friend Mat2 operator*(const Mat2& l, const Mat2& r) {
        return {l.a11 * r.a11 + l.a12 * r.a21, l.a11 * r.a12 + l.a12 * r.a22,
                l.a21 * r.a11 + l.a22 * r.a21, l.a21 * r.a12 + l.a22 * r.a22};
    }

    friend Vec2 operator*(const Mat2& m, const Vec2& v) {
        return {m.a11 * v.x + m.a12 * v.y, m.a21 * v.x + m.a22 * v.y};
    }

    friend Mat2 operator*(double s, const Mat2& m) {
        return {s * m.a11, s * m.a12, s * m.a21, s * m.a22};
    }

    friend Mat2 operator+(const Mat2& l, const Mat2& r) {
        return {l.a11 + r.a11, l.a12 + r.a12, l.a21 + r.a21, l.a22 + r.a22};
    }

    friend Mat2 operator-(const Mat2& l, const Mat2& r) {
        return {l.a11 - r.a11, l.a12 - r.a12, l.a21 - r.a21, l.a22 - r.a22};
    }
};

inline double frob_dist(const Mat2& a, const Mat2& b) { return (a - b).frob_norm(); }

}  // namespace kpplab
