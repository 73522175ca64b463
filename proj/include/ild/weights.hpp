#pragma once

// Weight structures (monoidal weights, Lawvere weights) and the audit
// harness for the metric/weight axioms used throughout the library.

#include <cassert>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace ild {

/// Extended nonnegative real: a finite value >= 0 or +infinity.
/// Addition saturates at +infinity; max/min behave as expected.
class WeightValue {
public:
    WeightValue() : v_(0.0) {}
    WeightValue(double v) : v_(v) { assert(v >= 0.0 || std::isnan(v) == false); }

    static WeightValue infinity() { return WeightValue(std::numeric_limits<double>::infinity()); }

    bool is_infinite() const { return std::isinf(v_); }
    bool is_finite() const { return !std::isinf(v_); }

    /// Underlying value; +infinity reads back as the IEEE infinity.
    double value() const { return v_; }

    friend WeightValue operator+(WeightValue a, WeightValue b) {
        if (a.is_infinite() || b.is_infinite()) return infinity();
        return WeightValue(a.v_ + b.v_);
    }
    friend bool operator==(WeightValue a, WeightValue b) { return a.v_ == b.v_; }
    friend bool operator!=(WeightValue a, WeightValue b) { return a.v_ != b.v_; }
    friend bool operator<(WeightValue a, WeightValue b) { return a.v_ < b.v_; }
    friend bool operator<=(WeightValue a, WeightValue b) { return a.v_ <= b.v_; }
    friend bool operator>(WeightValue a, WeightValue b) { return a.v_ > b.v_; }
    friend bool operator>=(WeightValue a, WeightValue b) { return a.v_ >= b.v_; }

    friend WeightValue max(WeightValue a, WeightValue b) { return a < b ? b : a; }
    friend WeightValue min(WeightValue a, WeightValue b) { return a < b ? a : b; }

    std::string str() const {
        if (is_infinite()) return "inf";
        std::ostringstream os;
        os << v_;
        return os.str();
    }

private:
    double v_;
};

/// One violated axiom instance: which axiom, on which witness, and the two
/// sides of the failed (in)equality.
struct AuditViolation {
    std::string axiom;
    std::string witness;
    double lhs = 0.0;
    double rhs = 0.0;
};

/// Violations are data, not errors: an empty report means every sampled
/// axiom held.
struct AuditReport {
    std::vector<AuditViolation> violations;

    bool ok() const { return violations.empty(); }

    void add(std::string axiom, std::string witness, double lhs, double rhs) {
        violations.push_back({std::move(axiom), std::move(witness), lhs, rhs});
    }

    void merge(const AuditReport& other) {
        violations.insert(violations.end(), other.violations.begin(), other.violations.end());
    }

    /// Line-oriented serialization: AXIOM<TAB>witness<TAB>lhs<TAB>rhs.
    std::string to_text() const {
        std::ostringstream os;
        for (const auto& v : violations)
            os << v.axiom << '\t' << v.witness << '\t' << v.lhs << '\t' << v.rhs << '\n';
        return os.str();
    }
};

/// Sampling policy shared by the audit functions. Pair/triple sets are
/// enumerated exhaustively up to `exhaustive_limit` base points, and sampled
/// pseudo-randomly (seeded, reproducible) beyond that.
struct AuditOptions {
    double eps = 1e-9;
    std::size_t exhaustive_limit = 30;
    std::size_t samples = 10000;
    std::uint64_t seed = 0x5eed;
};

namespace detail {

template <typename T>
std::string default_label(const T& x) {
    if constexpr (std::is_arithmetic_v<T>) {
        std::ostringstream os;
        os << x;
        return os.str();
    } else {
        return "<elem>";
    }
}

inline bool weights_close(WeightValue a, WeightValue b, double eps) {
    if (a.is_infinite() || b.is_infinite()) return a.is_infinite() && b.is_infinite();
    return std::abs(a.value() - b.value()) <= eps;
}

// lhs <= rhs up to eps, with +inf on the right absorbing everything.
inline bool weight_le(WeightValue lhs, WeightValue rhs, double eps) {
    if (rhs.is_infinite()) return true;
    if (lhs.is_infinite()) return false;
    return lhs.value() <= rhs.value() + eps;
}

inline double report_value(WeightValue w) {
    return w.value();  // IEEE inf serializes as "inf" via the default stream
}

}  // namespace detail

/// Checks the monoidal-weight axioms on a sampled element set:
///   W(identity) = 0 and W(mul(g,f)) <= W(g) + W(f).
/// `mul` must be total on the sampled set; the identity must be present.
template <typename E, typename Mul, typename W, typename Label>
AuditReport audit_monoidal_weight(const std::vector<E>& elements, const E& identity, Mul mul, W weight,
                                  Label label, const AuditOptions& opts = {}) {
    AuditReport report;
    WeightValue we = weight(identity);
    if (!detail::weights_close(we, WeightValue(0.0), opts.eps))
        report.add("WEIGHT_IDENTITY", label(identity), detail::report_value(we), 0.0);

    auto check_pair = [&](const E& g, const E& f) {
        WeightValue lhs = weight(mul(g, f));
        WeightValue rhs = weight(g) + weight(f);
        if (!detail::weight_le(lhs, rhs, opts.eps))
            report.add("WEIGHT_SUBADDITIVE", label(g) + "*" + label(f), detail::report_value(lhs),
                       detail::report_value(rhs));
    };

    const std::size_t n = elements.size();
    if (n <= opts.exhaustive_limit) {
        for (const E& g : elements)
            for (const E& f : elements) check_pair(g, f);
    } else {
        std::mt19937_64 rng(opts.seed);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        for (std::size_t i = 0; i < opts.samples; ++i) check_pair(elements[pick(rng)], elements[pick(rng)]);
    }
    return report;
}

template <typename E, typename Mul, typename W>
AuditReport audit_monoidal_weight(const std::vector<E>& elements, const E& identity, Mul mul, W weight,
                                  const AuditOptions& opts = {}) {
    return audit_monoidal_weight(elements, identity, mul, weight, [](const E& x) { return detail::default_label(x); },
                                 opts);
}

/// Checks that `d` behaves as an extended pseudometric on the sample:
/// d(x,x)=0, symmetry, and the triangle inequality. Triples are exhaustive
/// for small samples, seeded pseudo-random otherwise.
template <typename P, typename D, typename Label>
AuditReport audit_pseudometric(D d, const std::vector<P>& points, Label label, const AuditOptions& opts = {}) {
    AuditReport report;
    const std::size_t n = points.size();

    for (std::size_t i = 0; i < n; ++i) {
        WeightValue dii = d(points[i], points[i]);
        if (!detail::weights_close(dii, WeightValue(0.0), opts.eps))
            report.add("METRIC_IDENTITY", label(points[i]), detail::report_value(dii), 0.0);
    }

    auto check_sym = [&](std::size_t i, std::size_t j) {
        WeightValue dij = d(points[i], points[j]);
        WeightValue dji = d(points[j], points[i]);
        if (!detail::weights_close(dij, dji, opts.eps))
            report.add("METRIC_SYMMETRY", label(points[i]) + "," + label(points[j]), detail::report_value(dij),
                       detail::report_value(dji));
    };
    auto check_tri = [&](std::size_t i, std::size_t j, std::size_t k) {
        WeightValue lhs = d(points[i], points[k]);
        WeightValue rhs = d(points[i], points[j]) + d(points[j], points[k]);
        if (!detail::weight_le(lhs, rhs, opts.eps))
            report.add("METRIC_TRIANGLE", label(points[i]) + "," + label(points[j]) + "," + label(points[k]),
                       detail::report_value(lhs), detail::report_value(rhs));
    };

    if (n <= opts.exhaustive_limit) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) check_sym(i, j);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) check_tri(i, j, k);
    } else {
        std::mt19937_64 rng(opts.seed);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        for (std::size_t s = 0; s < opts.samples; ++s) {
            std::size_t i = pick(rng), j = pick(rng), k = pick(rng);
            check_sym(i, j);
            check_tri(i, j, k);
        }
    }
    return report;
}

template <typename P, typename D>
AuditReport audit_pseudometric(D d, const std::vector<P>& points, const AuditOptions& opts = {}) {
    return audit_pseudometric(d, points, [](const P& x) { return detail::default_label(x); }, opts);
}

}  // namespace ild
