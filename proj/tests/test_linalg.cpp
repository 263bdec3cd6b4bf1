#include "support.hpp"

#include "hetnet/error.hpp"
#include "hetnet/format.hpp"
#include "hetnet/linalg.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>

using namespace hetnet;

TEST_SUITE("linalg") {

TEST_CASE("cubic roots agree with companion-matrix eigenvalues") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int trial = 0; trial < 500; ++trial) {
        const double a2 = u(rng), a1 = u(rng), a0 = u(rng);
        Eigen::Matrix3d c;
        c << 0, 0, -a0, 1, 0, -a1, 0, 1, -a2;
        const auto r = cubic_roots(a2, a1, a0);
        const double d = testing::multiset_distance({r.begin(), r.end()}, testing::eigenvalues(c));
        CHECK(d < 1e-9);
        for (const auto& z : r) {
            const auto p = z * z * z + a2 * z * z + a1 * z + a0;
            CHECK(std::abs(p) < 1e-9 * (1 + std::pow(std::abs(z), 3)));
        }
    }
}

TEST_CASE("cubic roots: exact real roots and conjugate pairs") {
    // (z-1)(z-2)(z-3)
    auto r = cubic_roots(-6, 11, -6);
    std::vector<double> re;
    for (auto z : r) {
        CHECK(z.imag() == 0.0);
        re.push_back(z.real());
    }
    std::sort(re.begin(), re.end());
    CHECK(re[0] == doctest::Approx(1).epsilon(1e-14));
    CHECK(re[1] == doctest::Approx(2).epsilon(1e-14));
    CHECK(re[2] == doctest::Approx(3).epsilon(1e-14));

    // (z-2)(z^2+1)
    r = cubic_roots(-2, 1, -2);
    int real = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        if (r[i].imag() == 0.0) {
            ++real;
            CHECK(r[i].real() == doctest::Approx(2));
        } else if (r[i].imag() > 0) {
            REQUIRE(i + 1 < 3);
            CHECK(r[i + 1] == std::conj(r[i]));
        }
    }
    CHECK(real == 1);

    // triple root
    r = cubic_roots(-3, 3, -1);
    for (auto z : r) CHECK(std::abs(z - 1.0) < 1e-5);
}

TEST_CASE("matrix helpers") {
    const Mat3 a = Mat3::from_rows({1, 2, 3}, {0, 1, 4}, {5, 6, 0});
    CHECK(determinant(a) == doctest::Approx(1.0));
    CHECK(trace(a) == 2.0);
    const Mat3 id = Mat3::identity();
    CHECK(a * id == a);
    CHECK(id * a == a);
    CHECK(principal_minor_sum(a) == doctest::Approx((1 - 0) + (0 - 15) + (0 - 24)));
    const Vec3 v = a * Vec3{1, 1, 1};
    CHECK(v == Vec3{6, 5, 11});
}

TEST_CASE("solve with partial pivoting") {
    const Mat3 a = Mat3::from_rows({0, 2, 1}, {1, 0, 0}, {3, 1, 1});
    const Vec3 x{1, -2, 3};
    const Vec3 b = a * x;
    const Vec3 y = solve(a, b);
    for (std::size_t i = 0; i < 3; ++i) CHECK(y[i] == doctest::Approx(x[i]).epsilon(1e-14));
    const Mat3 s = Mat3::from_rows({1, 2, 3}, {2, 4, 6}, {0, 0, 1});
    CHECK_THROWS_AS(solve(s, {1, 2, 3}), NumericalError);
}

TEST_CASE("null vector of a rank-2 matrix") {
    const Mat3 a = Mat3::from_rows({1, 2, 3}, {4, 5, 6}, {7, 8, 9});
    const Vec3 n = null_vector(a);
    CHECK(norm(n) == doctest::Approx(1.0));
    CHECK(norm(a * n) < 1e-12);
}

TEST_CASE("locale independent formatting and parsing") {
    CHECK(fmt(0.1) == "0.1");
    CHECK(fmt(1.0 / 3.0, 4) == "0.3333");
    CHECK(parse_double("1.25") == 1.25);
    CHECK(parse_double("-2e-3") == -2e-3);
    CHECK_THROWS_AS(parse_double("1,5"), std::invalid_argument);
    CHECK_THROWS_AS(parse_double(""), std::invalid_argument);
}

}
