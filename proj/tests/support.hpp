#pragma once

#include "hetnet/linalg.hpp"
#include "hetnet/model.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <random>
#include <vector>

namespace testing {

inline Eigen::MatrixXd to_eigen(const hetnet::Matrix5& m) {
    Eigen::MatrixXd e(5, 5);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) e(i, j) = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return e;
}

inline Eigen::Matrix3d to_eigen(const hetnet::Mat3& m) {
    Eigen::Matrix3d e;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) e(i, j) = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    return e;
}

template <typename Matrix>
std::vector<std::complex<double>> eigenvalues(const Matrix& m) {
    Eigen::EigenSolver<Matrix> es(m, false);
    std::vector<std::complex<double>> v;
    for (int i = 0; i < es.eigenvalues().size(); ++i) v.push_back(es.eigenvalues()(i));
    return v;
}

/// Largest distance from an element of `a` to its nearest unused partner in `b`.
inline double multiset_distance(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b) {
    double worst = 0.0;
    for (const auto& z : a) {
        auto it = std::min_element(b.begin(), b.end(),
                                   [&](auto x, auto y) { return std::abs(x - z) < std::abs(y - z); });
        worst = std::max(worst, std::abs(*it - z));
        b.erase(it);
    }
    return worst;
}

inline hetnet::Params random_params(std::mt19937_64& rng, double lo = 0.1, double hi = 3.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    return {u(rng), u(rng), u(rng), u(rng)};
}

}  // namespace testing
