#pragma once

// Generalized persistence modules: finite-poset modules over F2 with explicit
// structure maps, symbolic interval modules over R, rectangle modules over
// R^n, barcodes, and pullback along monotone maps.

#include <array>
#include <cmath>
#include <cstddef>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ild/f2.hpp"
#include "ild/posets.hpp"
#include "ild/weights.hpp"

namespace ild {

/// Functor from a finite poset to F2 vector spaces: a dimension per point and
/// a structure map per comparable pair, shape dim(q) x dim(p) for p <= q.
class FiniteModule {
public:
    FiniteModule() = default;

    FiniteModule(FinitePoset poset, std::vector<std::size_t> dims) : poset_(std::move(poset)), dim_(std::move(dims)) {
        if (dim_.size() != poset_.size()) throw std::runtime_error("module: dims size mismatch");
    }

    const FinitePoset& poset() const { return poset_; }
    std::size_t dim(std::size_t p) const { return dim_[p]; }

    void set_map(std::size_t p, std::size_t q, F2Matrix m) {
        if (!poset_.leq(p, q)) throw std::runtime_error("module: set_map on incomparable pair");
        if (m.rows() != dim_[q] || m.cols() != dim_[p]) throw std::runtime_error("module: map shape mismatch");
        maps_[key(p, q)] = std::move(m);
    }

    /// Structure map for p <= q. Forced maps (identity on (p,p), zero when
    /// either stalk is zero-dimensional) materialize lazily.
    const F2Matrix& map(std::size_t p, std::size_t q) const {
        if (!poset_.leq(p, q)) throw std::runtime_error("module: map on incomparable pair");
        auto it = maps_.find(key(p, q));
        if (it != maps_.end()) return it->second;
        if (p == q) {
            auto [it2, inserted] = maps_.emplace(key(p, p), F2Matrix::identity(dim_[p]));
            return it2->second;
        }
        if (dim_[p] == 0 || dim_[q] == 0) {
            auto [it2, inserted] = maps_.emplace(key(p, q), F2Matrix(dim_[q], dim_[p]));
            return it2->second;
        }
        throw std::runtime_error("module: missing structure map");
    }

    /// Functoriality check: identity on (p,p), composition on all chains.
    AuditReport validate() const {
        AuditReport report;
        const std::size_t n = poset_.size();
        for (std::size_t p = 0; p < n; ++p)
            if (!map(p, p).is_identity())
                report.add("MODULE_IDENTITY", std::to_string(p), 0, 0);
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q) {
                if (!poset_.leq(p, q)) continue;
                for (std::size_t r = 0; r < n; ++r) {
                    if (!poset_.leq(q, r)) continue;
                    if (!(map(q, r) * map(p, q) == map(p, r)))
                        report.add("MODULE_COMPOSE",
                                   std::to_string(p) + "<=" + std::to_string(q) + "<=" + std::to_string(r), 0, 0);
                }
            }
        return report;
    }

    /// Zero module everywhere.
    static FiniteModule zero(const FinitePoset& poset) {
        return FiniteModule(poset, std::vector<std::size_t>(poset.size(), 0));
    }

    /// Dimension-one module supported on the order-convex set `support`
    /// (given as point flags), identity maps inside the support.
    static FiniteModule indicator(const FinitePoset& poset, const std::vector<bool>& support) {
        std::vector<std::size_t> dims(poset.size(), 0);
        for (std::size_t p = 0; p < poset.size(); ++p) dims[p] = support[p] ? 1 : 0;
        FiniteModule m(poset, dims);
        for (std::size_t p = 0; p < poset.size(); ++p)
            for (std::size_t q = 0; q < poset.size(); ++q) {
                if (!poset.leq(p, q)) continue;
                F2Matrix f(m.dim(q), m.dim(p));
                if (support[p] && support[q]) f.set(0, 0, true);
                m.set_map(p, q, f);
            }
        return m;
    }

    /// Interval module on a chain poset: support is [birth, death) by index.
    static FiniteModule interval_on_chain(const FinitePoset& chain, std::size_t birth, std::size_t death) {
        std::vector<bool> support(chain.size(), false);
        for (std::size_t p = birth; p < death && p < chain.size(); ++p) support[p] = true;
        return indicator(chain, support);
    }

    /// Text format: "PMOD n", "DIMS d0 ... dn-1", then per stored map a
    /// block "MAP p q" followed by dim(q) rows of 0/1 digits. Maps for all
    /// comparable pairs are composed from the given covering maps if absent.
    static FiniteModule load(std::istream& in, const FinitePoset& poset) {
        std::string tag;
        std::size_t n;
        if (!(in >> tag >> n) || tag != "PMOD" || n != poset.size())
            throw std::runtime_error("module: bad PMOD header");
        if (!(in >> tag) || tag != "DIMS") throw std::runtime_error("module: expected DIMS");
        std::vector<std::size_t> dims(n);
        for (auto& d : dims) in >> d;
        FiniteModule m(poset, dims);
        while (in >> tag) {
            if (tag != "MAP") throw std::runtime_error("module: expected MAP");
            std::size_t p, q;
            in >> p >> q;
            F2Matrix f(m.dim(q), m.dim(p));
            for (std::size_t r = 0; r < m.dim(q); ++r) {
                std::string row;
                in >> row;
                if (row.size() != m.dim(p)) throw std::runtime_error("module: bad map row");
                for (std::size_t c = 0; c < m.dim(p); ++c) f.set(r, c, row[c] == '1');
            }
            m.set_map(p, q, f);
        }
        m.fill_by_composition();
        return m;
    }

    /// Completes missing maps from stored ones by composing along any chain.
    void fill_by_composition() {
        const std::size_t n = poset_.size();
        bool progress = true;
        while (progress) {
            progress = false;
            for (std::size_t p = 0; p < n; ++p)
                for (std::size_t r = 0; r < n; ++r) {
                    if (!poset_.leq(p, r) || maps_.count(key(p, r)) || p == r) continue;
                    for (std::size_t q = 0; q < n; ++q) {
                        if (q == p || q == r || !poset_.leq(p, q) || !poset_.leq(q, r)) continue;
                        if ((maps_.count(key(p, q)) || p == q) && (maps_.count(key(q, r)) || q == r)) {
                            set_map(p, r, map(q, r) * map(p, q));
                            progress = true;
                            break;
                        }
                    }
                }
        }
    }

    friend bool operator==(const FiniteModule& a, const FiniteModule& b) {
        if (a.dim_ != b.dim_ || a.poset_.size() != b.poset_.size()) return false;
        for (std::size_t p = 0; p < a.poset_.size(); ++p)
            for (std::size_t q = 0; q < a.poset_.size(); ++q) {
                if (a.poset_.leq(p, q) != b.poset_.leq(p, q)) return false;
                if (a.poset_.leq(p, q) && !(a.map(p, q) == b.map(p, q))) return false;
            }
        return true;
    }

private:
    static std::uint64_t key(std::size_t p, std::size_t q) { return (std::uint64_t(p) << 32) | q; }

    FinitePoset poset_;
    std::vector<std::size_t> dim_;
    mutable std::map<std::uint64_t, F2Matrix> maps_;
};

/// Pullback along a monotone self-map: (gM)(p) = M(g(p)).
inline FiniteModule pullback(const FiniteModule& m, const FiniteMap& g) {
    const auto& poset = m.poset();
    std::vector<std::size_t> dims(poset.size());
    for (std::size_t p = 0; p < poset.size(); ++p) dims[p] = m.dim(g(p));
    FiniteModule out(poset, dims);
    for (std::size_t p = 0; p < poset.size(); ++p)
        for (std::size_t q = 0; q < poset.size(); ++q)
            if (poset.leq(p, q)) out.set_map(p, q, m.map(g(p), g(q)));
    return out;
}

/// Natural transformation between two modules on the same poset.
struct ModuleMorphism {
    std::vector<F2Matrix> component;  // component[p] : M(p) -> N(p)

    bool is_zero() const {
        for (const auto& c : component)
            if (!c.is_zero()) return false;
        return true;
    }
};

/// Do all naturality squares commute? component_q * M(p<=q) == N(p<=q) * component_p.
inline bool is_morphism(const FiniteModule& m, const FiniteModule& n, const ModuleMorphism& phi) {
    const auto& poset = m.poset();
    if (phi.component.size() != poset.size()) throw std::runtime_error("morphism: component count mismatch");
    for (std::size_t p = 0; p < poset.size(); ++p)
        if (phi.component[p].rows() != n.dim(p) || phi.component[p].cols() != m.dim(p))
            throw std::runtime_error("morphism: component shape mismatch");
    for (std::size_t p = 0; p < poset.size(); ++p)
        for (std::size_t q = 0; q < poset.size(); ++q) {
            if (!poset.leq(p, q)) continue;
            if (!(phi.component[q] * m.map(p, q) == n.map(p, q) * phi.component[p])) return false;
        }
    return true;
}

inline ModuleMorphism identity_morphism(const FiniteModule& m) {
    ModuleMorphism phi;
    for (std::size_t p = 0; p < m.poset().size(); ++p) phi.component.push_back(F2Matrix::identity(m.dim(p)));
    return phi;
}

inline ModuleMorphism zero_morphism(const FiniteModule& m, const FiniteModule& n) {
    ModuleMorphism phi;
    for (std::size_t p = 0; p < m.poset().size(); ++p) phi.component.emplace_back(n.dim(p), m.dim(p));
    return phi;
}

/// The natural transformation M => gM with component M(p <= g(p)); requires
/// g to be a translation (p <= g(p) everywhere).
inline ModuleMorphism shift_morphism(const FiniteModule& m, const FiniteMap& g) {
    const auto& poset = m.poset();
    if (!is_translation(poset, g)) throw std::runtime_error("shift_morphism: map is not a translation");
    ModuleMorphism phi;
    for (std::size_t p = 0; p < poset.size(); ++p) phi.component.push_back(m.map(p, g(p)));
    return phi;
}

namespace detail {

struct MorphismVars {
    std::vector<std::size_t> offset;  // unknown index of component[p](0,0)
    std::size_t total = 0;

    MorphismVars(const FiniteModule& m, const FiniteModule& n) {
        offset.resize(m.poset().size());
        for (std::size_t p = 0; p < m.poset().size(); ++p) {
            offset[p] = total;
            total += n.dim(p) * m.dim(p);
        }
    }
    std::size_t index(const FiniteModule& m, const FiniteModule& n, std::size_t p, std::size_t i,
                      std::size_t j) const {
        (void)n;
        return offset[p] + i * m.dim(p) + j;
    }
};

inline ModuleMorphism morphism_from_bits(const FiniteModule& m, const FiniteModule& n, const MorphismVars& vars,
                                         const std::vector<bool>& x) {
    ModuleMorphism phi = zero_morphism(m, n);
    for (std::size_t p = 0; p < m.poset().size(); ++p)
        for (std::size_t i = 0; i < n.dim(p); ++i)
            for (std::size_t j = 0; j < m.dim(p); ++j)
                phi.component[p].set(i, j, x[vars.index(m, n, p, i, j)]);
    return phi;
}

}  // namespace detail

/// Basis of the F2 vector space of natural transformations M => N, by
/// Gaussian elimination on the stacked naturality constraints.
inline std::vector<ModuleMorphism> morphism_space_basis(const FiniteModule& m, const FiniteModule& n) {
    if (m.poset().size() != n.poset().size()) throw std::runtime_error("morphism_space_basis: poset mismatch");
    const auto& poset = m.poset();
    detail::MorphismVars vars(m, n);

    std::vector<std::array<std::size_t, 2>> pairs;
    std::size_t rows = 0;
    for (std::size_t p = 0; p < poset.size(); ++p)
        for (std::size_t q = 0; q < poset.size(); ++q) {
            if (p == q || !poset.leq(p, q)) continue;
            pairs.push_back({p, q});
            rows += n.dim(q) * m.dim(p);
        }

    F2Matrix a(rows, vars.total);
    std::size_t row = 0;
    for (auto [p, q] : pairs) {
        const F2Matrix& mm = m.map(p, q);
        const F2Matrix& nm = n.map(p, q);
        for (std::size_t i = 0; i < n.dim(q); ++i)
            for (std::size_t j = 0; j < m.dim(p); ++j) {
                // sum_k comp_q[i,k] mm[k,j] + sum_k nm[i,k] comp_p[k,j] = 0
                for (std::size_t k = 0; k < m.dim(q); ++k)
                    if (mm.get(k, j)) {
                        std::size_t idx = vars.index(m, n, q, i, k);
                        a.set(row, idx, !a.get(row, idx));
                    }
                for (std::size_t k = 0; k < n.dim(p); ++k)
                    if (nm.get(i, k)) {
                        std::size_t idx = vars.index(m, n, p, k, j);
                        a.set(row, idx, !a.get(row, idx));
                    }
                ++row;
            }
    }

    std::vector<ModuleMorphism> basis;
    for (const auto& x : f2_nullspace(a)) basis.push_back(detail::morphism_from_bits(m, n, vars, x));
    return basis;
}

// ---------------------------------------------------------------------------
// Symbolic modules over the real posets.
// ---------------------------------------------------------------------------

/// Half-open interval module M_[a,b) over R; empty when a == b.
struct IntervalModule {
    double a = 0.0;
    double b = 0.0;

    IntervalModule() = default;
    IntervalModule(double a_, double b_) : a(a_), b(b_) {
        if (!(a <= b)) throw std::runtime_error("interval module: need a <= b");
    }

    static IntervalModule empty() { return IntervalModule(0.0, 0.0); }
    bool is_empty() const { return a == b; }
    double length() const { return b - a; }
    bool contains(double p) const { return a <= p && p < b; }
};

/// Box module M_[a,b) over R^n with the product order; empty when the box is.
struct RectangleModule {
    std::vector<double> a;
    std::vector<double> b;

    RectangleModule() = default;
    RectangleModule(std::vector<double> a_, std::vector<double> b_) : a(std::move(a_)), b(std::move(b_)) {
        if (a.size() != b.size()) throw std::runtime_error("rectangle module: dimension mismatch");
        for (std::size_t i = 0; i < a.size(); ++i)
            if (!(a[i] <= b[i])) throw std::runtime_error("rectangle module: need a <= b componentwise");
    }

    std::size_t dim() const { return a.size(); }
    bool is_empty() const {
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] == b[i]) return true;
        return a.empty();
    }
    bool contains(const std::vector<double>& r) const {
        for (std::size_t i = 0; i < a.size(); ++i)
            if (!(a[i] <= r[i] && r[i] < b[i])) return false;
        return true;
    }
};

/// Pullback of an interval module along a parametric monotone map: support
/// becomes the preimage of [a,b).
inline IntervalModule pullback(const IntervalModule& m, const ParamMonotoneMap& g) {
    using K = ParamMonotoneMap::Kind;
    if (m.is_empty()) return IntervalModule::empty();
    switch (g.kind) {
        case K::AffineShift: return IntervalModule(m.a - g.shift, m.b - g.shift);
        case K::ScalarMultiply:
            if (g.factor <= 0) throw std::runtime_error("pullback: factor must be positive");
            return IntervalModule(m.a / g.factor, m.b / g.factor);
        default: throw std::runtime_error("pullback: unsupported map kind for interval modules");
    }
}

inline RectangleModule pullback(const RectangleModule& m, const std::vector<double>& shift) {
    if (shift.size() != m.dim()) throw std::runtime_error("pullback: shift dimension mismatch");
    RectangleModule out = m;
    for (std::size_t i = 0; i < m.dim(); ++i) {
        out.a[i] = m.a[i] - shift[i];
        out.b[i] = m.b[i] - shift[i];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Barcodes.
// ---------------------------------------------------------------------------

constexpr double kInfDeath = std::numeric_limits<double>::infinity();

struct Bar {
    double birth = 0.0;
    double death = 0.0;  // may be +infinity

    Bar() = default;
    Bar(double b, double d) : birth(b), death(d) {
        if (d < b) throw std::runtime_error("bar: death before birth");
    }
    bool essential() const { return std::isinf(death); }
};

struct Barcode {
    std::vector<Bar> bars;

    Barcode() = default;
    explicit Barcode(std::vector<Bar> b) : bars(std::move(b)) {}

    std::size_t size() const { return bars.size(); }

    /// CSV: one "birth,death" line per bar, "inf" for essential deaths.
    void save_csv(std::ostream& out) const {
        for (const auto& bar : bars) {
            out << bar.birth << ",";
            if (bar.essential())
                out << "inf";
            else
                out << bar.death;
            out << "\n";
        }
    }

    static Barcode load_csv(std::istream& in) {
        Barcode bc;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            auto comma = line.find(',');
            if (comma == std::string::npos) throw std::runtime_error("barcode: expected 'birth,death'");
            double birth = std::stod(line.substr(0, comma));
            std::string death_s = line.substr(comma + 1);
            double death = (death_s == "inf") ? kInfDeath : std::stod(death_s);
            bc.bars.emplace_back(birth, death);
        }
        return bc;
    }
};

}  // namespace ild
