#include "hetnet/stability.hpp"

#include "hetnet/format.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace hetnet {

TransitionMatrix basic_matrix(Letter prev, Letter cur, const Params& p) {
    return basic_matrix(static_cast<char>(prev), static_cast<char>(cur), p);
}

TransitionMatrix basic_matrix(char prev, char cur, const Params& p) {
    const double ca = p.c_a, cb = p.c_b, ea = p.e_a, eb = p.e_b;
    TransitionMatrix t;
    t.label = std::string("M_") + prev + cur;
    if (prev == 'A' && cur == 'A') {
        t.m = Mat3::from_rows({cb / ea, 0, 1}, {ca / ea, 0, 0}, {-eb / ea, 1, 0});
    } else if (prev == 'A' && cur == 'B') {
        t.m = Mat3::from_rows({0, ca / eb, 0}, {1, -ea / eb, 0}, {0, cb / eb, 1});
    } else if (prev == 'B' && cur == 'B') {
        t.m = Mat3::from_rows({0, ca / eb, 1}, {1, -ea / eb, 0}, {0, cb / eb, 0});
    } else if (prev == 'B' && cur == 'A') {
        t.m = Mat3::from_rows({cb / ea, 0, 0}, {ca / ea, 0, 1}, {-eb / ea, 1, 0});
    } else {
        throw std::invalid_argument("transition letters must be A or B");
    }
    return t;
}

Collection collection(const RootSequence& seq, const Params& p) {
    const std::size_t m = seq.size();
    if (m == 0) throw std::invalid_argument("empty root sequence");
    // steps[k] is the matrix for Z_{k} -> Z_{k+1} in 1-based terms, i.e. the
    // step arriving at letter k (0-based) from the letter before it.
    std::vector<TransitionMatrix> steps;
    steps.reserve(m);
    for (std::size_t k = 0; k < m; ++k) steps.push_back(basic_matrix(seq[(k + m - 1) % m], seq[k], p));

    Collection c;
    c.sequence = seq;
    for (std::size_t j = 0; j < m; ++j) {
        TransitionMatrix prod{Mat3::identity(), ""};
        std::string label;
        for (std::size_t r = 0; r < m; ++r) {
            const TransitionMatrix& t = steps[(j + r) % m];
            prod.m = t.m * prod.m;
            label = r == 0 ? t.label : t.label + " " + label;
        }
        prod.label = label;
        c.matrices.push_back(std::move(prod));
    }
    return c;
}

std::size_t EigenData::second_index() const { return values[0].imag() != 0.0 ? 2 : 1; }

namespace {

Vec3 unit_positive(Vec3 v) {
    const double n = norm(v);
    for (double& c : v) c /= n;
    for (double c : v) {
        if (c == 0.0) continue;
        if (c < 0.0)
            for (double& x : v) x = -x;
        break;
    }
    return v;
}

}  // namespace

EigenData eigen3(const Mat3& m) {
    EigenData e;
    const auto raw = cubic_roots(-trace(m), principal_minor_sum(m), -determinant(m));
    // Sort real roots and conjugate pairs as units so a pair stays adjacent.
    struct Unit {
        std::complex<double> z;
        bool pair;
    };
    std::vector<Unit> units;
    for (const auto& z : raw) {
        if (z.imag() == 0.0) units.push_back({z, false});
        else if (z.imag() > 0.0) units.push_back({z, true});
    }
    std::stable_sort(units.begin(), units.end(),
                     [](const Unit& a, const Unit& b) { return std::abs(a.z) > std::abs(b.z); });
    std::array<std::complex<double>, 3> roots{};
    std::size_t n = 0;
    for (const auto& u : units) {
        roots[n++] = u.z;
        if (u.pair) roots[n++] = std::conj(u.z);
    }
    e.values = roots;

    const double scale = std::max(1.0, frobenius_norm(m));
    for (std::size_t i = 0; i < 3; ++i) {
        if (roots[i].imag() != 0.0) continue;
        const double lam = roots[i].real();
        Mat3 shifted = m;
        for (std::size_t d = 0; d < 3; ++d) shifted(d, d) -= lam;
        const Vec3 v = unit_positive(null_vector(shifted));
        e.vectors[i] = v;
        const Vec3 mv = m * v;
        const Vec3 r{mv[0] - lam * v[0], mv[1] - lam * v[1], mv[2] - lam * v[2]};
        e.residuals[i] = norm(r) / scale;
        if (e.residuals[i] > 1e-8) e.defective = true;
        for (std::size_t k = 0; k < 3; ++k)
            if (k != i && std::abs(roots[k] - roots[i]) <= 1e-7 * std::max(1.0, std::abs(roots[i])))
                e.defective = true;
    }
    return e;
}

bool on_half_line(std::complex<double> lambda) {
    return std::abs(lambda.imag()) <= 1e-11 * (1.0 + std::abs(lambda)) && lambda.real() > 1.0 + 1e-11;
}

bool same_sign(const Vec3& v) {
    return (v[0] > 0 && v[1] > 0 && v[2] > 0) || (v[0] < 0 && v[1] < 0 && v[2] < 0);
}

double s_d(std::complex<double> lambda, const std::optional<Vec3>& v) {
    if (on_half_line(lambda)) return (v && same_sign(*v)) ? 0.0 : 1.0;
    if (lambda.real() < 1.0) return std::abs(lambda - 1.0);
    return std::abs(lambda.imag());
}

double s_lambda(const EigenData& e) {
    const std::size_t i2 = e.second_index();
    const double sd_max = s_d(e.values[0], e.vectors[0]);
    const double gap = std::abs(e.values[0]) - std::abs(e.values[i2]);
    if (sd_max == 0.0) return gap;
    const double sd_2 = s_d(e.values[i2], e.vectors[i2]);
    if (sd_2 == 0.0) return -std::min(sd_max, gap);
    return -sd_max;
}

double s_w(std::complex<double> lambda, const std::optional<Vec3>& v) {
    if (!on_half_line(lambda) || !v) return -1.0;
    double best = (*v)[0] * (*v)[0];
    for (std::size_t q = 0; q < 3; ++q)
        for (std::size_t l = 0; l < 3; ++l) best = std::min(best, (*v)[q] * (*v)[l]);
    return best;
}

MatrixStability s_value(const EigenData& e) {
    MatrixStability r;
    r.lambda_max = e.values[0];
    r.defective = e.defective;
    if (std::abs(e.values[0] - 1.0) <= 1e-10) {
        r.excluded = true;
        r.s = 0.0;
        return r;
    }
    r.s_lambda = s_lambda(e);
    r.s_w = s_w(e.values[0], e.vectors[0]);
    const double prod = r.s_lambda * r.s_w;
    r.s = (r.s_lambda > 0.0 && r.s_w > 0.0) ? prod : -std::abs(prod);

    if (on_half_line(e.values[0]) && e.vectors[0] && r.s_w <= kVerdictTolerance) {
        const Vec3& w = *e.vectors[0];
        const double sigma = (w[0] + w[1] + w[2]) >= 0.0 ? 1.0 : -1.0;
        std::size_t idx = 0;
        for (std::size_t i = 1; i < 3; ++i)
            if (sigma * w[i] < sigma * w[idx]) idx = i;
        r.failing_component = idx;
    }
    return r;
}

MatrixStability s_value(const Mat3& m) { return s_value(eigen3(m)); }

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::fas: return "fas";
        case Verdict::not_fas: return "not_fas";
        case Verdict::boundary: return "boundary";
    }
    return "?";
}

StabilityReport sequence_stability(const RootSequence& seq, const Params& p, double tol) {
    p.validate();
    const Collection c = collection(seq, p);
    StabilityReport r;
    r.sequence = seq;
    r.params = p;
    std::size_t arg = 0;
    for (std::size_t j = 0; j < c.matrices.size(); ++j) {
        r.per_matrix.push_back(s_value(c.matrices[j].m));
        if (r.per_matrix[j].defective) r.reliable = false;
        if (r.per_matrix[j].s < r.per_matrix[arg].s) arg = j;
    }
    r.s = r.per_matrix[arg].s;
    r.lambda_max = r.per_matrix[arg].lambda_max;
    const bool excluded = r.per_matrix[arg].excluded;
    if (excluded || std::abs(r.s) <= tol) {
        r.verdict = Verdict::boundary;
    } else {
        r.verdict = r.s > tol ? Verdict::fas : Verdict::not_fas;
    }
    if (r.verdict != Verdict::fas) {
        r.failing_matrix = arg;
        r.failing_component = r.per_matrix[arg].failing_component;
    }
    return r;
}

ClosedFormResult closed_form(const RootSequence& seq, const Params& p, double tol) {
    p.validate();
    const double ca = p.c_a, cb = p.c_b, ea = p.e_a, eb = p.e_b;
    ClosedFormResult r;
    const std::string& w = seq.letters();
    if (w == "A") {
        r.conditions = {{"cA+cB>eA+eB", ca + cb - ea - eb},
                        {"cA*eA>cB*eB", ca * ea - cb * eb},
                        {"cA*cB^3>eA*eB^3", ca * cb * cb * cb - ea * eb * eb * eb}};
    } else if (w == "B") {
        r.conditions = {{"cA+cB>eA+eB", ca + cb - ea - eb},
                        {"cB*eB>cA*eA", cb * eb - ca * ea},
                        {"cA^3*eB>cB*eA^3", ca * ca * ca * eb - cb * ea * ea * ea}};
    } else if (w == "AAB") {
        const DerivedQuantities d = derived_quantities(p);
        r.conditions = {{"delta_T>1", d.delta_t - 1.0}, {"nu_4<0", -d.nu_4}, {"nu_5<0", -d.nu_5}};
    } else {
        throw std::invalid_argument("closed forms exist only for the roots A, B and AAB");
    }
    bool any_fail = false, any_edge = false;
    for (auto& c : r.conditions) {
        c.satisfied = c.margin > tol;
        if (c.margin < -tol) any_fail = true;
        if (std::abs(c.margin) <= tol) any_edge = true;
    }
    if (std::abs(r.conditions[0].margin) <= tol) {
        r.verdict = Verdict::boundary;
    } else if (any_fail) {
        r.verdict = Verdict::not_fas;
    } else if (any_edge) {
        r.verdict = Verdict::boundary;
    } else {
        r.verdict = Verdict::fas;
    }
    return r;
}

void write_csv_header(std::ostream& os) {
    os << "seq,cA,cB,eA,eB,s,verdict,fail_matrix,fail_component,lambda_max_re,lambda_max_im\n";
}

void write_csv_row(std::ostream& os, const StabilityReport& r) {
    os << r.sequence.letters() << ',' << fmt(r.params.c_a) << ',' << fmt(r.params.c_b) << ','
       << fmt(r.params.e_a) << ',' << fmt(r.params.e_b) << ',' << fmt(r.s) << ',' << to_string(r.verdict) << ',';
    if (r.failing_matrix) os << *r.failing_matrix + 1;
    os << ',';
    if (r.failing_component) os << *r.failing_component + 1;
    os << ',' << fmt(r.lambda_max.real()) << ',' << fmt(r.lambda_max.imag()) << '\n';
}

}  // namespace hetnet
