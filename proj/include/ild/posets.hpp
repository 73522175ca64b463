#pragma once

// Finite posets/prosets, monotone self-maps, monoid actions on them, and the
// tagged parametric map families (shifts, scalings, vector shifts, piecewise
// linear) whose 2-morphism tests are decided in closed form.

#include <algorithm>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ild/weights.hpp"

namespace ild {

/// Finite explicit preorder: reflexivity and transitivity are enforced by
/// closure at construction. Antisymmetry is not required (prosets allowed).
class FinitePoset {
public:
    FinitePoset() = default;

    explicit FinitePoset(std::size_t n) : n_(n), leq_(n * n, 0) {
        for (std::size_t i = 0; i < n; ++i) set(i, i);
    }

    /// Builds from a relation list; the reflexive-transitive closure is
    /// computed here.
    FinitePoset(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& relations) : FinitePoset(n) {
        for (auto [i, j] : relations) {
            check_index(i);
            check_index(j);
            set(i, j);
        }
        close();
    }

    std::size_t size() const { return n_; }

    bool leq(std::size_t i, std::size_t j) const { return leq_[i * n_ + j] != 0; }

    std::vector<std::pair<std::size_t, std::size_t>> comparable_pairs() const {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                if (leq(i, j)) out.emplace_back(i, j);
        return out;
    }

    /// Total order 0 < 1 < ... < n-1.
    static FinitePoset chain(std::size_t n) {
        FinitePoset p(n);
        for (std::size_t i = 0; i + 1 < n; ++i) p.set(i, i + 1);
        p.close();
        return p;
    }

    /// Product order on the grid with the given axis sizes; point ids are
    /// row-major over the coordinates.
    static FinitePoset grid(const std::vector<std::size_t>& axis_sizes) {
        std::size_t n = 1;
        for (auto s : axis_sizes) n *= s;
        FinitePoset p(n);
        for (std::size_t i = 0; i < n; ++i) {
            auto ci = unrank(i, axis_sizes);
            for (std::size_t j = 0; j < n; ++j) {
                auto cj = unrank(j, axis_sizes);
                bool le = true;
                for (std::size_t d = 0; d < axis_sizes.size(); ++d)
                    if (ci[d] > cj[d]) {
                        le = false;
                        break;
                    }
                if (le) p.set(i, j);
            }
        }
        return p;
    }

    static std::vector<std::size_t> unrank(std::size_t id, const std::vector<std::size_t>& axis_sizes) {
        std::vector<std::size_t> c(axis_sizes.size());
        for (std::size_t d = axis_sizes.size(); d-- > 0;) {
            c[d] = id % axis_sizes[d];
            id /= axis_sizes[d];
        }
        return c;
    }

    static std::size_t rank(const std::vector<std::size_t>& c, const std::vector<std::size_t>& axis_sizes) {
        std::size_t id = 0;
        for (std::size_t d = 0; d < axis_sizes.size(); ++d) id = id * axis_sizes[d] + c[d];
        return id;
    }

    /// Text format: header "POSET n", then one "i <= j" relation per line.
    /// Closure is computed on load.
    static FinitePoset load(std::istream& in) {
        std::string tag;
        std::size_t n = 0;
        if (!(in >> tag >> n) || tag != "POSET") throw std::runtime_error("poset: expected 'POSET n' header");
        std::vector<std::pair<std::size_t, std::size_t>> rel;
        std::size_t i, j;
        std::string op;
        while (in >> i >> op >> j) {
            if (op != "<=") throw std::runtime_error("poset: expected 'i <= j' relation");
            if (i >= n || j >= n) throw std::runtime_error("poset: index out of range");
            rel.emplace_back(i, j);
        }
        return FinitePoset(n, rel);
    }

    void save(std::ostream& out) const {
        out << "POSET " << n_ << "\n";
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                if (i != j && leq(i, j)) out << i << " <= " << j << "\n";
    }

private:
    void check_index(std::size_t i) const {
        if (i >= n_) throw std::runtime_error("poset: index out of range");
    }
    void set(std::size_t i, std::size_t j) { leq_[i * n_ + j] = 1; }

    void close() {  // Floyd-Warshall style transitive closure
        for (std::size_t k = 0; k < n_; ++k)
            for (std::size_t i = 0; i < n_; ++i) {
                if (!leq(i, k)) continue;
                for (std::size_t j = 0; j < n_; ++j)
                    if (leq(k, j)) set(i, j);
            }
    }

    std::size_t n_ = 0;
    std::vector<unsigned char> leq_;
};

/// Monotone self-map of a finite poset, stored as a table.
struct FiniteMap {
    std::vector<std::size_t> image;  // image[p] = g(p)

    std::size_t operator()(std::size_t p) const { return image[p]; }
    std::size_t size() const { return image.size(); }

    static FiniteMap identity(std::size_t n) {
        FiniteMap m;
        m.image.resize(n);
        for (std::size_t i = 0; i < n; ++i) m.image[i] = i;
        return m;
    }

    friend FiniteMap compose(const FiniteMap& outer, const FiniteMap& inner) {
        FiniteMap m;
        m.image.resize(inner.size());
        for (std::size_t i = 0; i < inner.size(); ++i) m.image[i] = outer(inner(i));
        return m;
    }

    friend bool operator==(const FiniteMap& a, const FiniteMap& b) { return a.image == b.image; }
};

/// Lists monotonicity violations of `m` over the given comparable pairs.
inline AuditReport verify_monotone(const FinitePoset& poset, const FiniteMap& m,
                                   const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    AuditReport report;
    for (auto [p, q] : pairs) {
        if (p >= poset.size() || q >= poset.size()) throw std::runtime_error("verify_monotone: point outside poset");
        if (!poset.leq(p, q)) continue;
        if (!poset.leq(m(p), m(q)))
            report.add("MONOTONE", std::to_string(p) + "<=" + std::to_string(q), static_cast<double>(m(p)),
                       static_cast<double>(m(q)));
    }
    return report;
}

inline AuditReport verify_monotone(const FinitePoset& poset, const FiniteMap& m) {
    return verify_monotone(poset, m, poset.comparable_pairs());
}

/// Is p <= g(p) for every point (the translation property)?
inline bool is_translation(const FinitePoset& poset, const FiniteMap& m) {
    for (std::size_t p = 0; p < poset.size(); ++p)
        if (!poset.leq(p, m(p))) return false;
    return true;
}

/// Enumerates the translation monoid Trans_P of a finite poset: all monotone
/// self-maps g with p <= g(p). Exponential in |P|; intended for small posets.
inline std::vector<FiniteMap> all_translations(const FinitePoset& poset) {
    const std::size_t n = poset.size();
    std::vector<FiniteMap> out;
    FiniteMap cur;
    cur.image.assign(n, 0);

    std::function<void(std::size_t)> rec = [&](std::size_t p) {
        if (p == n) {
            out.push_back(cur);
            return;
        }
        for (std::size_t q = 0; q < n; ++q) {
            if (!poset.leq(p, q)) continue;  // p <= g(p)
            bool monotone = true;
            for (std::size_t r = 0; r < p; ++r) {
                if (poset.leq(r, p) && !poset.leq(cur.image[r], q)) monotone = false;
                if (poset.leq(p, r) && !poset.leq(q, cur.image[r])) monotone = false;
                if (!monotone) break;
            }
            if (!monotone) continue;
            cur.image[p] = q;
            rec(p + 1);
        }
    };
    rec(0);
    return out;
}

/// Finite monoid acting on a finite poset by monotone maps, with a weight
/// per element. All tables explicit.
struct FiniteMonoidAction {
    FinitePoset poset;
    std::size_t identity = 0;
    std::vector<std::string> labels;                  // one per monoid element
    std::vector<std::vector<std::size_t>> mul;        // mul[g][h] = g*h
    std::vector<FiniteMap> act;                       // act[g] : poset -> poset
    std::vector<WeightValue> weight;

    std::size_t count() const { return act.size(); }
};

/// Checks the action laws on the sampled grid: act(e) = id and
/// act(h)(act(g)(p)) = act(h*g)(p), plus monotonicity of each sampled map.
inline AuditReport verify_action(const FiniteMonoidAction& a, const std::vector<std::size_t>& element_sample,
                                 const std::vector<std::size_t>& point_sample) {
    AuditReport report;
    for (std::size_t p : point_sample)
        if (a.act[a.identity](p) != p)
            report.add("ACTION_IDENTITY", "e@" + std::to_string(p), static_cast<double>(a.act[a.identity](p)),
                       static_cast<double>(p));
    for (std::size_t g : element_sample) {
        auto mono = verify_monotone(a.poset, a.act[g]);
        for (auto& v : mono.violations) {
            v.witness = a.labels[g] + ":" + v.witness;
            report.violations.push_back(v);
        }
        for (std::size_t h : element_sample) {
            std::size_t hg = a.mul[h][g];
            for (std::size_t p : point_sample) {
                std::size_t lhs = a.act[h](a.act[g](p));
                std::size_t rhs = a.act[hg](p);
                if (lhs != rhs)
                    report.add("ACTION_COMPAT", a.labels[h] + "*" + a.labels[g] + "@" + std::to_string(p),
                               static_cast<double>(lhs), static_cast<double>(rhs));
            }
        }
    }
    return report;
}

inline AuditReport verify_action(const FiniteMonoidAction& a) {
    std::vector<std::size_t> elems(a.count()), points(a.poset.size());
    for (std::size_t i = 0; i < elems.size(); ++i) elems[i] = i;
    for (std::size_t i = 0; i < points.size(); ++i) points[i] = i;
    return verify_action(a, elems, points);
}

/// g(p) <= h(p) for all sampled points of the finite poset.
inline bool two_morphism_exists(const FiniteMonoidAction& a, std::size_t g, std::size_t h,
                                const std::vector<std::size_t>& points) {
    for (std::size_t p : points)
        if (!a.poset.leq(a.act[g](p), a.act[h](p))) return false;
    return true;
}

inline bool two_morphism_exists(const FiniteMonoidAction& a, std::size_t g, std::size_t h) {
    std::vector<std::size_t> points(a.poset.size());
    for (std::size_t i = 0; i < points.size(); ++i) points[i] = i;
    return two_morphism_exists(a, g, h, points);
}

// ---------------------------------------------------------------------------
// Parametric map families on the real posets. Tagged closed forms keep the
// 2-morphism test exact rather than sampled.
// ---------------------------------------------------------------------------

enum class ParamPosetKind { RealLine, RealLineNonneg, ProductRn };

struct ParamPoset {
    ParamPosetKind kind = ParamPosetKind::RealLine;
    std::size_t dim = 1;  // used by ProductRn

    static ParamPoset real_line() { return {ParamPosetKind::RealLine, 1}; }
    static ParamPoset real_line_nonneg() { return {ParamPosetKind::RealLineNonneg, 1}; }
    static ParamPoset product_rn(std::size_t n) { return {ParamPosetKind::ProductRn, n}; }

    bool leq(const std::vector<double>& a, const std::vector<double>& b) const {
        for (std::size_t d = 0; d < dim; ++d)
            if (a[d] > b[d]) return false;
        return true;
    }
};

/// A monotone map on a parametric poset, in closed form.
struct ParamMonotoneMap {
    enum class Kind { AffineShift, ScalarMultiply, VectorShift, PiecewiseLinear } kind;

    double shift = 0.0;                   // AffineShift: p -> p + shift
    double factor = 1.0;                  // ScalarMultiply: p -> factor * p (factor > 0)
    std::vector<double> vec;              // VectorShift: r -> r + vec
    std::vector<std::pair<double, double>> breakpoints;  // PiecewiseLinear: (x, f(x)) knots, monotone

    static ParamMonotoneMap affine_shift(double t) {
        ParamMonotoneMap m{Kind::AffineShift};
        m.shift = t;
        return m;
    }
    static ParamMonotoneMap scalar_multiply(double c) {
        ParamMonotoneMap m{Kind::ScalarMultiply};
        m.factor = c;
        return m;
    }
    static ParamMonotoneMap vector_shift(std::vector<double> v) {
        ParamMonotoneMap m{Kind::VectorShift};
        m.vec = std::move(v);
        return m;
    }
    /// Piecewise-linear monotone map through the given knots, extended with
    /// slope 1 beyond the first/last knot. Knots must be nondecreasing in
    /// both coordinates.
    static ParamMonotoneMap piecewise_linear(std::vector<std::pair<double, double>> knots) {
        ParamMonotoneMap m{Kind::PiecewiseLinear};
        m.breakpoints = std::move(knots);
        for (std::size_t i = 0; i + 1 < m.breakpoints.size(); ++i) {
            if (m.breakpoints[i].first > m.breakpoints[i + 1].first ||
                m.breakpoints[i].second > m.breakpoints[i + 1].second)
                throw std::runtime_error("piecewise_linear: knots must be monotone");
        }
        return m;
    }

    double apply(double p) const {
        switch (kind) {
            case Kind::AffineShift: return p + shift;
            case Kind::ScalarMultiply: return factor * p;
            case Kind::PiecewiseLinear: {
                if (breakpoints.empty()) return p;
                if (p <= breakpoints.front().first) return breakpoints.front().second + (p - breakpoints.front().first);
                if (p >= breakpoints.back().first) return breakpoints.back().second + (p - breakpoints.back().first);
                for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
                    auto [x0, y0] = breakpoints[i];
                    auto [x1, y1] = breakpoints[i + 1];
                    if (p >= x0 && p <= x1) {
                        if (x1 == x0) return y1;
                        double t = (p - x0) / (x1 - x0);
                        return y0 + t * (y1 - y0);
                    }
                }
                return p;  // unreachable
            }
            case Kind::VectorShift: throw std::runtime_error("apply(double) on a vector map");
        }
        return p;
    }

    std::vector<double> apply(const std::vector<double>& r) const {
        if (kind != Kind::VectorShift) {
            std::vector<double> out(r.size());
            for (std::size_t i = 0; i < r.size(); ++i) out[i] = apply(r[i]);
            return out;
        }
        std::vector<double> out(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) out[i] = r[i] + vec[i];
        return out;
    }
};

/// Decides g(p) <= h(p) for all p of the parametric poset, in closed form.
/// Throws if the pair of map kinds has no closed-form comparison.
inline bool two_morphism_exists(const ParamPoset& poset, const ParamMonotoneMap& g, const ParamMonotoneMap& h) {
    using K = ParamMonotoneMap::Kind;
    if (g.kind == K::AffineShift && h.kind == K::AffineShift) return g.shift <= h.shift;
    if (g.kind == K::VectorShift && h.kind == K::VectorShift) {
        for (std::size_t i = 0; i < g.vec.size(); ++i)
            if (g.vec[i] > h.vec[i]) return false;
        return true;
    }
    if (g.kind == K::ScalarMultiply && h.kind == K::ScalarMultiply) {
        if (poset.kind == ParamPosetKind::RealLineNonneg) return g.factor <= h.factor;
        throw std::runtime_error("two_morphism_exists: scalar maps compare in closed form only on R>=0");
    }
    auto pl_or_shift = [](K k) { return k == K::PiecewiseLinear || k == K::AffineShift; };
    if (pl_or_shift(g.kind) && pl_or_shift(h.kind)) {
        // Both maps are piecewise linear with slope 1 outside their knots, so
        // h - g is piecewise linear and constant beyond the outermost knots:
        // checking all knot abscissas plus one point past each end is exact.
        std::vector<double> xs;
        for (auto& bp : g.breakpoints) xs.push_back(bp.first);
        for (auto& bp : h.breakpoints) xs.push_back(bp.first);
        if (xs.empty()) xs.push_back(0.0);
        std::sort(xs.begin(), xs.end());
        xs.push_back(xs.back() + 1.0);
        xs.insert(xs.begin(), xs.front() - 1.0);
        for (double x : xs)
            if (g.apply(x) > h.apply(x)) return false;
        return true;
    }
    throw std::runtime_error("two_morphism_exists: no closed form for this map pair; supply a certificate set");
}

}  // namespace ild
