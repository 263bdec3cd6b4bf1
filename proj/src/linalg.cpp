#include "hetnet/linalg.hpp"

#include "hetnet/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace hetnet {

Mat3 operator*(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < 3; ++k) acc += x(i, k) * y(k, j);
            r(i, j) = acc;
        }
    return r;
}

Vec3 operator*(const Mat3& m, const Vec3& v) {
    Vec3 r{};
    for (std::size_t i = 0; i < 3; ++i) r[i] = m(i, 0) * v[0] + m(i, 1) * v[1] + m(i, 2) * v[2];
    return r;
}

double trace(const Mat3& m) { return m(0, 0) + m(1, 1) + m(2, 2); }

double determinant(const Mat3& m) {
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

double principal_minor_sum(const Mat3& m) {
    return (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) + (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) +
           (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1));
}

double frobenius_norm(const Mat3& m) {
    double acc = 0.0;
    for (double v : m.a) acc += v * v;
    return std::sqrt(acc);
}

double norm(const Vec3& v) { return std::hypot(v[0], v[1], v[2]); }

namespace {

using cplx = std::complex<double>;

template <typename T>
T horner(double a2, double a1, double a0, T z) {
    return ((z + a2) * z + a1) * z + a0;
}

template <typename T>
T horner_derivative(double a2, double a1, T z) {
    return (3.0 * z + 2.0 * a2) * z + a1;
}

// Newton steps that are only kept while they reduce the residual.
template <typename T>
T polish(double a2, double a1, double a0, T z) {
    for (int iter = 0; iter < 3; ++iter) {
        const T p = horner(a2, a1, a0, z);
        const T dp = horner_derivative(a2, a1, z);
        if (std::abs(dp) == 0.0) break;
        const T next = z - p / dp;
        if (!(std::abs(horner(a2, a1, a0, next)) < std::abs(p))) break;
        z = next;
    }
    return z;
}

}  // namespace

std::array<std::complex<double>, 3> cubic_roots(double a2, double a1, double a0) {
    // Depressed form z = t - a2/3: t^3 + p t + q = 0.
    const double shift = a2 / 3.0;
    const double p = a1 - a2 * a2 / 3.0;
    const double q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
    const double disc = 0.25 * q * q + p * p * p / 27.0;

    std::array<cplx, 3> roots;
    if (p == 0.0 && q == 0.0) {
        roots = {cplx(-shift), cplx(-shift), cplx(-shift)};
    } else if (disc > 0.0) {
        // One real root and a complex pair.
        const double sq = std::sqrt(disc);
        const double u = std::cbrt(-0.5 * q - std::copysign(sq, q));
        const double v = (u != 0.0) ? -p / (3.0 * u) : 0.0;
        const double real = u + v;
        const double re = -0.5 * real;
        const double im = 0.5 * std::sqrt(3.0) * std::abs(u - v);
        roots = {cplx(real - shift), cplx(re - shift, im), cplx(re - shift, -im)};
    } else {
        // Three real roots.
        const double r = 2.0 * std::sqrt(-p / 3.0);
        double arg = (3.0 * q / (p * r));
        arg = std::clamp(arg, -1.0, 1.0);
        const double theta = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k)
            roots[k] = cplx(r * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0) - shift);
    }

    for (auto& z : roots) {
        if (z.imag() == 0.0) {
            z = cplx(polish(a2, a1, a0, z.real()));
        } else {
            z = polish(a2, a1, a0, z);
        }
    }
    // Keep the pair exactly conjugate after polishing.
    if (roots[1].imag() != 0.0) {
        const cplx mean = 0.5 * (roots[1] + std::conj(roots[2]));
        roots[1] = cplx(mean.real(), std::abs(mean.imag()));
        roots[2] = std::conj(roots[1]);
    }
    return roots;
}

Vec3 solve(const Mat3& m, const Vec3& rhs) {
    std::array<std::array<double, 4>, 3> aug{};
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) aug[i][j] = m(i, j);
        aug[i][3] = rhs[i];
    }
    const double scale = std::max(1.0, frobenius_norm(m));
    for (std::size_t col = 0; col < 3; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < 3; ++r)
            if (std::abs(aug[r][col]) > std::abs(aug[piv][col])) piv = r;
        if (std::abs(aug[piv][col]) <= 1e-14 * scale) throw NumericalError("singular 3x3 system");
        std::swap(aug[col], aug[piv]);
        for (std::size_t r = col + 1; r < 3; ++r) {
            const double f = aug[r][col] / aug[col][col];
            for (std::size_t c = col; c < 4; ++c) aug[r][c] -= f * aug[col][c];
        }
    }
    Vec3 x{};
    for (std::size_t ii = 3; ii-- > 0;) {
        double acc = aug[ii][3];
        for (std::size_t c = ii + 1; c < 3; ++c) acc -= aug[ii][c] * x[c];
        x[ii] = acc / aug[ii][ii];
    }
    return x;
}

namespace {

Vec3 cross(const Vec3& u, const Vec3& v) {
    return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

Vec3 normalized(Vec3 v) {
    const double n = norm(v);
    for (double& c : v) c /= n;
    return v;
}

}  // namespace

Vec3 null_vector(const Mat3& m) {
    const Vec3 r0{m(0, 0), m(0, 1), m(0, 2)};
    const Vec3 r1{m(1, 0), m(1, 1), m(1, 2)};
    const Vec3 r2{m(2, 0), m(2, 1), m(2, 2)};
    const std::array<Vec3, 3> candidates{cross(r0, r1), cross(r0, r2), cross(r1, r2)};
    std::size_t best = 0;
    for (std::size_t k = 1; k < 3; ++k)
        if (norm(candidates[k]) > norm(candidates[best])) best = k;

    const double row_scale = std::max({norm(r0), norm(r1), norm(r2)});
    if (norm(candidates[best]) > 1e-13 * row_scale * row_scale && row_scale > 0.0)
        return normalized(candidates[best]);

    // Rank <= 1: anything orthogonal to the dominant row.
    Vec3 dominant = r0;
    if (norm(r1) > norm(dominant)) dominant = r1;
    if (norm(r2) > norm(dominant)) dominant = r2;
    if (norm(dominant) == 0.0) return {1.0, 0.0, 0.0};
    std::size_t smallest = 0;
    for (std::size_t k = 1; k < 3; ++k)
        if (std::abs(dominant[k]) < std::abs(dominant[smallest])) smallest = k;
    Vec3 axis{};
    axis[smallest] = 1.0;
    return normalized(cross(dominant, axis));
}

}  // namespace hetnet
