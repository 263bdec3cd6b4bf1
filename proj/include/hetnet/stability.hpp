#pragma once

#include "hetnet/linalg.hpp"
#include "hetnet/model.hpp"
#include "hetnet/word.hpp"

#include <array>
#include <complex>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hetnet {

struct TransitionMatrix {
    Mat3 m;
    std::string label;
};

/// Exponent matrix of the return-map step with previous transition `prev`
/// and current transition `cur`.
TransitionMatrix basic_matrix(Letter prev, Letter cur, const Params& p);
TransitionMatrix basic_matrix(char prev, char cur, const Params& p);

struct Collection {
    RootSequence sequence;
    /// matrices[j-1] = T_{j-1} ... T_1 T_m ... T_{j+1} T_j, where
    /// T_k is the matrix for the step Z_{k-1} -> Z_k and Z_0 = Z_m.
    std::vector<TransitionMatrix> matrices;
};
Collection collection(const RootSequence& seq, const Params& p);

struct EigenData {
    /// Sorted by decreasing modulus; a complex pair is stored positive
    /// imaginary part first.
    std::array<std::complex<double>, 3> values{};
    /// Unit eigenvectors with first nonzero component positive, present for
    /// real eigenvalues.
    std::array<std::optional<Vec3>, 3> vectors{};
    /// ||M v - lambda v|| / max(1, ||M||_F) for each real pair.
    std::array<double, 3> residuals{};
    /// Some real pair has relative residual above 1e-8 or a near-repeated eigenvalue.
    bool defective = false;

    std::complex<double> lambda_max() const { return values[0]; }
    /// Second in modulus, skipping the conjugate partner of a complex lambda_max.
    std::size_t second_index() const;
};
EigenData eigen3(const Mat3& m);

/// lambda is real and greater than one, up to the documented tolerances.
bool on_half_line(std::complex<double> lambda);
/// All components nonzero and of one sign.
bool same_sign(const Vec3& v);

double s_d(std::complex<double> lambda, const std::optional<Vec3>& v);
double s_lambda(const EigenData& e);
double s_w(std::complex<double> lambda, const std::optional<Vec3>& v);

struct MatrixStability {
    double s = 0.0;
    double s_lambda = 0.0;
    double s_w = 0.0;
    std::complex<double> lambda_max;
    /// lambda_max = 1: the test does not apply and s is reported as 0.
    bool excluded = false;
    bool defective = false;
    /// 0-based component that spoils the sign of the leading eigenvector.
    std::optional<std::size_t> failing_component;
};
MatrixStability s_value(const Mat3& m);
MatrixStability s_value(const EigenData& e);

enum class Verdict { fas, not_fas, boundary };
std::string to_string(Verdict v);

inline constexpr double kVerdictTolerance = 1e-9;

struct StabilityReport {
    RootSequence sequence;
    Params params;
    std::vector<MatrixStability> per_matrix;
    double s = 0.0;
    Verdict verdict = Verdict::boundary;
    /// 0-based index into the collection attaining the minimum (not fas only).
    std::optional<std::size_t> failing_matrix;
    std::optional<std::size_t> failing_component;
    std::complex<double> lambda_max;
    bool reliable = true;
};
StabilityReport sequence_stability(const RootSequence& seq, const Params& p,
                                   double tol = kVerdictTolerance);

struct Condition {
    std::string name;
    /// Positive when the inequality holds.
    double margin = 0.0;
    bool satisfied = false;
};

struct ClosedFormResult {
    Verdict verdict = Verdict::boundary;
    std::vector<Condition> conditions;
};
/// Inequality tests for the roots A, B and AAB. The first condition of each
/// list marks lambda_max = 1; equality there gives a boundary verdict.
/// Throws std::invalid_argument for any other sequence.
ClosedFormResult closed_form(const RootSequence& seq, const Params& p, double tol = 1e-12);

/// Header seq,cA,cB,eA,eB,s,verdict,fail_matrix,fail_component,lambda_max_re,lambda_max_im
void write_csv_header(std::ostream& os);
/// Indices are written 1-based; empty when absent.
void write_csv_row(std::ostream& os, const StabilityReport& r);

}  // namespace hetnet
