#pragma once

#include <array>
#include <complex>
#include <cstddef>

namespace hetnet {

using Vec3 = std::array<double, 3>;

/// Dense row-major 3x3 matrix.
struct Mat3 {
    std::array<double, 9> a{};

    constexpr double& operator()(std::size_t i, std::size_t j) { return a[3 * i + j]; }
    constexpr double operator()(std::size_t i, std::size_t j) const { return a[3 * i + j]; }

    static constexpr Mat3 identity() {
        Mat3 m;
        m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
        return m;
    }
    static constexpr Mat3 from_rows(const Vec3& r0, const Vec3& r1, const Vec3& r2) {
        Mat3 m;
        for (std::size_t j = 0; j < 3; ++j) {
            m(0, j) = r0[j];
            m(1, j) = r1[j];
            m(2, j) = r2[j];
        }
        return m;
    }

    friend bool operator==(const Mat3&, const Mat3&) = default;
};

Mat3 operator*(const Mat3& x, const Mat3& y);
Vec3 operator*(const Mat3& m, const Vec3& v);

double trace(const Mat3& m);
double determinant(const Mat3& m);
/// Sum of the three principal 2x2 minors (the linear coefficient of the
/// characteristic polynomial).
double principal_minor_sum(const Mat3& m);
double frobenius_norm(const Mat3& m);
double norm(const Vec3& v);

/// Roots of the monic cubic z^3 + a2 z^2 + a1 z + a0 by the closed form
/// (trigonometric or Cardano branch), each polished by Newton steps on the
/// polynomial. Real roots are returned with an exactly zero imaginary part;
/// a complex pair is returned conjugate-adjacent.
std::array<std::complex<double>, 3> cubic_roots(double a2, double a1, double a0);

/// Solve m x = rhs by Gaussian elimination with partial pivoting.
/// Throws NumericalError when a pivot vanishes.
Vec3 solve(const Mat3& m, const Vec3& rhs);

/// Unit vector spanning (approximately) the null space of a rank-2 matrix:
/// the largest cross product of two of its rows. For rank <= 1 returns a
/// vector orthogonal to the dominant row.
Vec3 null_vector(const Mat3& m);

}  // namespace hetnet
