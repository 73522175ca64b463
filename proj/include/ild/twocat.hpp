#pragma once

// Finite 2-weighted 2-categories with explicit composition tables, the
// generic interleaving-distance enumerator, Lawvere-metric extraction, the
// action-groupoid and locally-persistent-category constructions, and the
// Lipschitz 2-functor stability checks.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "ild/errors.hpp"
#include "ild/weights.hpp"

namespace ild {

namespace detail {
inline std::uint64_t pair_key(std::size_t a, std::size_t b) { return (std::uint64_t(a) << 32) | b; }
}  // namespace detail

/// A finite 2-category as explicit tables. Horizontal composition may be
/// stored partially: several constructions in this library (action-groupoid
/// and Gromov-Hausdorff fragments) only populate the 2-cells their
/// interleaving distances consume, and those hom-sets are not closed under
/// whiskering by non-identity 1-morphisms.
struct Finite2Category {
    struct Mor1 {
        std::size_t src, dst;
        std::string name;
    };
    struct Mor2 {
        std::size_t src, dst;  // parallel 1-morphisms
        std::string name;
    };

    std::vector<std::string> objects;
    std::vector<Mor1> mor1;
    std::vector<std::size_t> id1;  // per object
    std::unordered_map<std::uint64_t, std::size_t> comp1;  // (f,g) -> f o g  (g first)
    std::vector<Mor2> mor2;
    std::vector<std::size_t> id2;  // per 1-morphism
    std::unordered_map<std::uint64_t, std::size_t> vcomp;  // (beta,alpha) -> beta o alpha
    std::unordered_map<std::uint64_t, std::size_t> hcomp;  // (beta,alpha) -> beta * alpha

    std::size_t add_object(std::string name) {
        objects.push_back(std::move(name));
        return objects.size() - 1;
    }
    std::size_t add_mor1(std::size_t src, std::size_t dst, std::string name) {
        mor1.push_back({src, dst, std::move(name)});
        return mor1.size() - 1;
    }
    std::size_t add_mor2(std::size_t src, std::size_t dst, std::string name) {
        mor2.push_back({src, dst, std::move(name)});
        return mor2.size() - 1;
    }

    bool composable1(std::size_t f, std::size_t g) const { return mor1[g].dst == mor1[f].src; }

    std::size_t compose1(std::size_t f, std::size_t g) const {
        auto it = comp1.find(detail::pair_key(f, g));
        if (it == comp1.end()) throw MalformedCategory("missing 1-composition " + mor1[f].name + " o " + mor1[g].name);
        return it->second;
    }
    std::size_t compose_v(std::size_t beta, std::size_t alpha) const {
        auto it = vcomp.find(detail::pair_key(beta, alpha));
        if (it == vcomp.end())
            throw MalformedCategory("missing vertical composition " + mor2[beta].name + " o " + mor2[alpha].name);
        return it->second;
    }
    bool has_hcomp(std::size_t beta, std::size_t alpha) const { return hcomp.count(detail::pair_key(beta, alpha)); }
    std::size_t compose_h(std::size_t beta, std::size_t alpha) const {
        auto it = hcomp.find(detail::pair_key(beta, alpha));
        if (it == hcomp.end())
            throw MalformedCategory("missing horizontal composition " + mor2[beta].name + " * " + mor2[alpha].name);
        return it->second;
    }

    /// All 2-morphisms f => g.
    std::vector<std::size_t> two_cells(std::size_t f, std::size_t g) const {
        std::vector<std::size_t> out;
        for (std::size_t a = 0; a < mor2.size(); ++a)
            if (mor2[a].src == f && mor2[a].dst == g) out.push_back(a);
        return out;
    }

    /// Text format, one section per table:
    ///   OBJECTS / MOR1 (src dst w name) / COMPOSE1 / MOR2 (src dst w name) /
    ///   VCOMP / HCOMP, with ids referring to declaration order.
    void save(std::ostream& out, const struct Lawvere2Weight& w) const;
    static std::pair<Finite2Category, struct Lawvere2Weight> load(std::istream& in);
};

/// Weight pair on a finite 2-category.
struct Lawvere2Weight {
    std::vector<WeightValue> w1;  // per 1-morphism
    std::vector<WeightValue> w2;  // per 2-morphism
};

inline void Finite2Category::save(std::ostream& out, const Lawvere2Weight& w) const {
    out << "OBJECTS " << objects.size() << "\n";
    for (const auto& o : objects) out << o << "\n";
    out << "MOR1 " << mor1.size() << "\n";
    for (std::size_t f = 0; f < mor1.size(); ++f)
        out << mor1[f].src << " " << mor1[f].dst << " " << w.w1[f].str() << " " << mor1[f].name << "\n";
    out << "ID1\n";
    for (auto f : id1) out << f << "\n";
    out << "COMPOSE1 " << comp1.size() << "\n";
    for (const auto& [k, v] : comp1) out << (k >> 32) << " " << (k & 0xffffffffu) << " " << v << "\n";
    out << "MOR2 " << mor2.size() << "\n";
    for (std::size_t a = 0; a < mor2.size(); ++a)
        out << mor2[a].src << " " << mor2[a].dst << " " << w.w2[a].str() << " " << mor2[a].name << "\n";
    out << "ID2\n";
    for (auto a : id2) out << a << "\n";
    out << "VCOMP " << vcomp.size() << "\n";
    for (const auto& [k, v] : vcomp) out << (k >> 32) << " " << (k & 0xffffffffu) << " " << v << "\n";
    out << "HCOMP " << hcomp.size() << "\n";
    for (const auto& [k, v] : hcomp) out << (k >> 32) << " " << (k & 0xffffffffu) << " " << v << "\n";
}

inline std::pair<Finite2Category, Lawvere2Weight> Finite2Category::load(std::istream& in) {
    Finite2Category c;
    Lawvere2Weight w;
    std::string tag;
    std::size_t n;
    auto expect = [&](const char* want) {
        if (!(in >> tag >> n) || tag != want) throw ParseError(std::string("2-category: expected section ") + want);
    };
    auto read_weight = [&]() {
        std::string s;
        in >> s;
        return s == "inf" ? WeightValue::infinity() : WeightValue(std::stod(s));
    };
    expect("OBJECTS");
    for (std::size_t i = 0; i < n; ++i) {
        std::string name;
        in >> name;
        c.add_object(name);
    }
    expect("MOR1");
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t s, d;
        in >> s >> d;
        w.w1.push_back(read_weight());
        std::string name;
        in >> name;
        c.add_mor1(s, d, name);
    }
    if (!(in >> tag) || tag != "ID1") throw ParseError("2-category: expected ID1");
    c.id1.resize(c.objects.size());
    for (auto& f : c.id1) in >> f;
    expect("COMPOSE1");
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t f, g, v;
        in >> f >> g >> v;
        c.comp1[detail::pair_key(f, g)] = v;
    }
    expect("MOR2");
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t s, d;
        in >> s >> d;
        w.w2.push_back(read_weight());
        std::string name;
        in >> name;
        c.add_mor2(s, d, name);
    }
    if (!(in >> tag) || tag != "ID2") throw ParseError("2-category: expected ID2");
    c.id2.resize(c.mor1.size());
    for (auto& a : c.id2) in >> a;
    expect("VCOMP");
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t a, b, v;
        in >> a >> b >> v;
        c.vcomp[detail::pair_key(a, b)] = v;
    }
    expect("HCOMP");
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t a, b, v;
        in >> a >> b >> v;
        c.hcomp[detail::pair_key(a, b)] = v;
    }
    return {std::move(c), std::move(w)};
}

struct ValidateOptions {
    bool require_total_hcomp = true;
};

/// Exhaustive axiom check over the finite tables: category laws for 1- and
/// 2-composition, horizontal units, and the interchange law on all
/// composable quadruples.
inline AuditReport validate_2category(const Finite2Category& c, const ValidateOptions& opts = {}) {
    AuditReport report;
    const std::size_t n1 = c.mor1.size(), n2 = c.mor2.size();

    for (std::size_t a = 0; a < c.objects.size(); ++a) {
        std::size_t e = c.id1[a];
        if (c.mor1[e].src != a || c.mor1[e].dst != a) report.add("ID1_ENDPOINTS", c.objects[a], e, a);
    }
    // totality + endpoints + units + associativity of 1-composition
    for (std::size_t f = 0; f < n1; ++f)
        for (std::size_t g = 0; g < n1; ++g) {
            if (!c.composable1(f, g)) continue;
            auto it = c.comp1.find(detail::pair_key(f, g));
            if (it == c.comp1.end()) {
                report.add("COMP1_TOTAL", c.mor1[f].name + "o" + c.mor1[g].name, f, g);
                continue;
            }
            std::size_t fg = it->second;
            if (c.mor1[fg].src != c.mor1[g].src || c.mor1[fg].dst != c.mor1[f].dst)
                report.add("COMP1_ENDPOINTS", c.mor1[f].name + "o" + c.mor1[g].name, fg, 0);
        }
    for (std::size_t f = 0; f < n1; ++f) {
        if (c.comp1.count(detail::pair_key(f, c.id1[c.mor1[f].src])) &&
            c.compose1(f, c.id1[c.mor1[f].src]) != f)
            report.add("COMP1_UNIT_R", c.mor1[f].name, f, c.compose1(f, c.id1[c.mor1[f].src]));
        if (c.comp1.count(detail::pair_key(c.id1[c.mor1[f].dst], f)) &&
            c.compose1(c.id1[c.mor1[f].dst], f) != f)
            report.add("COMP1_UNIT_L", c.mor1[f].name, f, c.compose1(c.id1[c.mor1[f].dst], f));
    }
    for (std::size_t f = 0; f < n1; ++f)
        for (std::size_t g = 0; g < n1; ++g) {
            if (!c.composable1(f, g)) continue;
            for (std::size_t h = 0; h < n1; ++h) {
                if (!c.composable1(g, h)) continue;
                if (c.compose1(c.compose1(f, g), h) != c.compose1(f, c.compose1(g, h)))
                    report.add("COMP1_ASSOC", c.mor1[f].name + "," + c.mor1[g].name + "," + c.mor1[h].name, 0, 0);
            }
        }

    // 2-morphism endpoints parallel
    for (std::size_t a = 0; a < n2; ++a) {
        const auto& m = c.mor2[a];
        if (c.mor1[m.src].src != c.mor1[m.dst].src || c.mor1[m.src].dst != c.mor1[m.dst].dst)
            report.add("MOR2_PARALLEL", c.mor2[a].name, m.src, m.dst);
    }
    for (std::size_t f = 0; f < n1; ++f) {
        std::size_t e = c.id2[f];
        if (c.mor2[e].src != f || c.mor2[e].dst != f) report.add("ID2_ENDPOINTS", c.mor1[f].name, e, f);
    }
    // vertical category laws
    for (std::size_t a = 0; a < n2; ++a)
        for (std::size_t b = 0; b < n2; ++b) {
            if (c.mor2[a].dst != c.mor2[b].src) continue;
            auto it = c.vcomp.find(detail::pair_key(b, a));
            if (it == c.vcomp.end()) {
                report.add("VCOMP_TOTAL", c.mor2[b].name + "o" + c.mor2[a].name, b, a);
                continue;
            }
            std::size_t ba = it->second;
            if (c.mor2[ba].src != c.mor2[a].src || c.mor2[ba].dst != c.mor2[b].dst)
                report.add("VCOMP_ENDPOINTS", c.mor2[b].name + "o" + c.mor2[a].name, ba, 0);
        }
    for (std::size_t a = 0; a < n2; ++a) {
        if (c.vcomp.count(detail::pair_key(a, c.id2[c.mor2[a].src])) &&
            c.compose_v(a, c.id2[c.mor2[a].src]) != a)
            report.add("VCOMP_UNIT_R", c.mor2[a].name, a, 0);
        if (c.vcomp.count(detail::pair_key(c.id2[c.mor2[a].dst], a)) &&
            c.compose_v(c.id2[c.mor2[a].dst], a) != a)
            report.add("VCOMP_UNIT_L", c.mor2[a].name, a, 0);
    }
    for (std::size_t a = 0; a < n2; ++a)
        for (std::size_t b = 0; b < n2; ++b) {
            if (c.mor2[a].dst != c.mor2[b].src) continue;
            for (std::size_t d = 0; d < n2; ++d) {
                if (c.mor2[b].dst != c.mor2[d].src) continue;
                if (c.compose_v(d, c.compose_v(b, a)) != c.compose_v(c.compose_v(d, b), a))
                    report.add("VCOMP_ASSOC", c.mor2[d].name + "," + c.mor2[b].name + "," + c.mor2[a].name, 0, 0);
            }
        }

    // horizontal composition: totality (optional), endpoints, units on
    // identity cells of identity 1-morphisms, preservation of id2
    auto h_composable = [&](std::size_t beta, std::size_t alpha) {
        return c.mor1[c.mor2[alpha].src].dst == c.mor1[c.mor2[beta].src].src;
    };
    for (std::size_t alpha = 0; alpha < n2; ++alpha)
        for (std::size_t beta = 0; beta < n2; ++beta) {
            if (!h_composable(beta, alpha)) continue;
            auto it = c.hcomp.find(detail::pair_key(beta, alpha));
            if (it == c.hcomp.end()) {
                if (opts.require_total_hcomp)
                    report.add("HCOMP_TOTAL", c.mor2[beta].name + "*" + c.mor2[alpha].name, beta, alpha);
                continue;
            }
            std::size_t ba = it->second;
            if (c.mor2[ba].src != c.compose1(c.mor2[beta].src, c.mor2[alpha].src) ||
                c.mor2[ba].dst != c.compose1(c.mor2[beta].dst, c.mor2[alpha].dst))
                report.add("HCOMP_ENDPOINTS", c.mor2[beta].name + "*" + c.mor2[alpha].name, ba, 0);
        }
    for (std::size_t alpha = 0; alpha < n2; ++alpha) {
        std::size_t a_src = c.mor1[c.mor2[alpha].src].src;
        std::size_t a_dst = c.mor1[c.mor2[alpha].src].dst;
        std::size_t unit_l = c.id2[c.id1[a_dst]];
        std::size_t unit_r = c.id2[c.id1[a_src]];
        if (c.has_hcomp(unit_l, alpha) && c.compose_h(unit_l, alpha) != alpha)
            report.add("HCOMP_UNIT_L", c.mor2[alpha].name, 0, 0);
        if (c.has_hcomp(alpha, unit_r) && c.compose_h(alpha, unit_r) != alpha)
            report.add("HCOMP_UNIT_R", c.mor2[alpha].name, 0, 0);
    }
    // identity preservation: 1_g * 1_f = 1_{g o f}
    for (std::size_t f = 0; f < n1; ++f)
        for (std::size_t g = 0; g < n1; ++g) {
            if (!c.composable1(g, f)) continue;
            if (c.has_hcomp(c.id2[g], c.id2[f]) && c.compose_h(c.id2[g], c.id2[f]) != c.id2[c.compose1(g, f)])
                report.add("HCOMP_ID", c.mor1[g].name + "*" + c.mor1[f].name, 0, 0);
        }
    // hcomp associativity on defined triples
    for (std::size_t a = 0; a < n2; ++a)
        for (std::size_t b = 0; b < n2; ++b) {
            if (!h_composable(b, a) || !c.has_hcomp(b, a)) continue;
            for (std::size_t d = 0; d < n2; ++d) {
                if (!h_composable(d, b) || !c.has_hcomp(d, b)) continue;
                if (!c.has_hcomp(d, c.compose_h(b, a)) || !c.has_hcomp(c.compose_h(d, b), a)) continue;
                if (c.compose_h(d, c.compose_h(b, a)) != c.compose_h(c.compose_h(d, b), a))
                    report.add("HCOMP_ASSOC", c.mor2[d].name + "," + c.mor2[b].name + "," + c.mor2[a].name, 0, 0);
            }
        }
    // interchange: (alpha * beta) o (gamma * delta) = (alpha o gamma) * (beta o delta)
    for (std::size_t delta = 0; delta < n2; ++delta)
        for (std::size_t beta = 0; beta < n2; ++beta) {
            if (c.mor2[delta].dst != c.mor2[beta].src) continue;  // vertical pair over A->B
            for (std::size_t gamma = 0; gamma < n2; ++gamma) {
                if (!h_composable(gamma, delta)) continue;
                for (std::size_t alpha = 0; alpha < n2; ++alpha) {
                    if (c.mor2[gamma].dst != c.mor2[alpha].src) continue;  // vertical pair over B->C
                    if (!c.has_hcomp(gamma, delta) || !c.has_hcomp(alpha, beta)) continue;
                    std::size_t lhs = c.compose_v(c.compose_h(alpha, beta), c.compose_h(gamma, delta));
                    std::size_t rhs_v = c.compose_v(alpha, gamma);
                    std::size_t rhs_w = c.compose_v(beta, delta);
                    if (!c.has_hcomp(rhs_v, rhs_w)) {
                        report.add("INTERCHANGE_CLOSED", c.mor2[alpha].name + "," + c.mor2[beta].name, 0, 0);
                        continue;
                    }
                    if (lhs != c.compose_h(rhs_v, rhs_w))
                        report.add("INTERCHANGE", c.mor2[alpha].name + "," + c.mor2[beta].name + "," +
                                                       c.mor2[gamma].name + "," + c.mor2[delta].name,
                                   lhs, c.compose_h(rhs_v, rhs_w));
                }
            }
        }
    return report;
}

/// Axiom audit for a Lawvere 2-weight over the category's finite tables.
inline AuditReport audit_lawvere_2_weight(const Lawvere2Weight& w, const Finite2Category& c, double eps = 1e-9) {
    AuditReport report;
    if (w.w1.size() != c.mor1.size() || w.w2.size() != c.mor2.size())
        throw ShapeMismatch("audit_lawvere_2_weight: weight vector sizes");
    for (std::size_t a = 0; a < c.objects.size(); ++a) {
        WeightValue v = w.w1[c.id1[a]];
        if (v.is_infinite() || v.value() > eps) report.add("W1_IDENTITY", c.objects[a], v.value(), 0.0);
    }
    for (std::size_t f = 0; f < c.mor1.size(); ++f) {
        WeightValue v = w.w2[c.id2[f]];
        if (v.is_infinite() || v.value() > eps) report.add("W2_IDENTITY", c.mor1[f].name, v.value(), 0.0);
    }
    auto le = [&](WeightValue lhs, WeightValue rhs) {
        if (rhs.is_infinite()) return true;
        if (lhs.is_infinite()) return false;
        return lhs.value() <= rhs.value() + eps;
    };
    for (std::size_t f = 0; f < c.mor1.size(); ++f)
        for (std::size_t g = 0; g < c.mor1.size(); ++g) {
            if (!c.composable1(f, g)) continue;
            WeightValue lhs = w.w1[c.compose1(f, g)];
            WeightValue rhs = w.w1[f] + w.w1[g];
            if (!le(lhs, rhs))
                report.add("W1_TRIANGLE", c.mor1[f].name + "o" + c.mor1[g].name, lhs.value(), rhs.value());
        }
    for (std::size_t a = 0; a < c.mor2.size(); ++a)
        for (std::size_t b = 0; b < c.mor2.size(); ++b) {
            if (c.mor2[a].dst == c.mor2[b].src) {
                WeightValue lhs = w.w2[c.compose_v(b, a)];
                WeightValue rhs = w.w2[b] + w.w2[a];
                if (!le(lhs, rhs))
                    report.add("W2_VTRIANGLE", c.mor2[b].name + "o" + c.mor2[a].name, lhs.value(), rhs.value());
            }
            if (c.mor1[c.mor2[a].src].dst == c.mor1[c.mor2[b].src].src && c.has_hcomp(b, a)) {
                WeightValue lhs = w.w2[c.compose_h(b, a)];
                WeightValue rhs = w.w2[b] + w.w2[a];
                if (!le(lhs, rhs))
                    report.add("W2_HTRIANGLE", c.mor2[b].name + "*" + c.mor2[a].name, lhs.value(), rhs.value());
            }
        }
    return report;
}

/// Interleaving certificate in a 2-weighted 2-category.
struct TwoCatCertificate {
    std::size_t g, h;        // 1-morphisms A -> B and B -> A
    std::size_t alpha, beta; // 2-morphisms 1_A => hg and 1_B => gh
    WeightValue weight;
};

struct TwoCatDistance {
    WeightValue value;
    std::optional<TwoCatCertificate> certificate;
};

/// Exhaustive enumeration of (g,h,alpha,beta)-interleavings between two
/// objects; the distance is the minimal max-weight over certificates, or
/// +infinity when none exist.
inline TwoCatDistance two_cat_interleaving(const Finite2Category& c, const Lawvere2Weight& w, std::size_t a,
                                           std::size_t b) {
    TwoCatDistance best;
    best.value = WeightValue::infinity();
    for (std::size_t g = 0; g < c.mor1.size(); ++g) {
        if (c.mor1[g].src != a || c.mor1[g].dst != b) continue;
        for (std::size_t h = 0; h < c.mor1.size(); ++h) {
            if (c.mor1[h].src != b || c.mor1[h].dst != a) continue;
            std::size_t hg = c.compose1(h, g);  // A -> A
            std::size_t gh = c.compose1(g, h);  // B -> B
            for (std::size_t alpha : c.two_cells(c.id1[a], hg)) {
                for (std::size_t beta : c.two_cells(c.id1[b], gh)) {
                    WeightValue cost = max(max(w.w1[g], w.w1[h]), max(w.w2[alpha], w.w2[beta]));
                    if (cost < best.value) {
                        best.value = cost;
                        best.certificate = TwoCatCertificate{g, h, alpha, beta, cost};
                    }
                }
            }
        }
    }
    return best;
}

/// Lawvere metric of the underlying weighted 1-category, symmetrized by max:
/// d(A,B) = max over directions of the min 1-morphism weight.
inline std::vector<std::vector<WeightValue>> lawvere_symmetrized(const Finite2Category& c,
                                                                 const std::vector<WeightValue>& w1) {
    const std::size_t n = c.objects.size();
    std::vector<std::vector<WeightValue>> oneway(n, std::vector<WeightValue>(n, WeightValue::infinity()));
    for (std::size_t i = 0; i < n; ++i) oneway[i][i] = WeightValue(0.0);
    for (std::size_t f = 0; f < c.mor1.size(); ++f)
        oneway[c.mor1[f].src][c.mor1[f].dst] = min(oneway[c.mor1[f].src][c.mor1[f].dst], w1[f]);
    std::vector<std::vector<WeightValue>> out(n, std::vector<WeightValue>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out[i][j] = max(oneway[i][j], oneway[j][i]);
    return out;
}

/// The composite 2-cell gamma = (g * beta * h) o alpha used by the triangle
/// inequality: whisker beta between g and h, then compose vertically with
/// alpha. Throws ShapeMismatch if the boundary data does not match the
/// interleavability diagram, MalformedCategory if a table entry is absent.
inline std::size_t whisker_compose(const Finite2Category& c, std::size_t g, std::size_t beta, std::size_t h,
                                   std::size_t alpha) {
    // alpha: 1_A => g o h', beta: 1_B => m with h: A -> B, g: B -> A
    if (c.mor1[g].dst != c.mor1[h].src || c.mor1[h].dst != c.mor1[g].src)
        throw ShapeMismatch("whisker_compose: g and h are not antiparallel");
    std::size_t a_obj = c.mor1[h].src;
    std::size_t b_obj = c.mor1[h].dst;
    if (c.mor2[alpha].src != c.id1[a_obj]) throw ShapeMismatch("whisker_compose: alpha must start at 1_A");
    if (c.mor2[alpha].dst != c.compose1(g, h)) throw ShapeMismatch("whisker_compose: alpha must end at g o h");
    if (c.mor2[beta].src != c.id1[b_obj]) throw ShapeMismatch("whisker_compose: beta must start at 1_B");
    std::size_t beta_h = c.compose_h(beta, c.id2[h]);      // h => m o h
    std::size_t g_beta_h = c.compose_h(c.id2[g], beta_h);  // g o h => g o m o h
    return c.compose_v(g_beta_h, alpha);
}

// ---------------------------------------------------------------------------
// Builders: deloopings, indiscrete 2-categories.
// ---------------------------------------------------------------------------

/// Weighted finite monoid given by tables; `leq` (optional) is a preorder on
/// elements inducing the 2-cells of the delooping.
struct FiniteWeightedMonoid {
    std::vector<std::string> labels;
    std::vector<std::vector<std::size_t>> mul;  // mul[g][h] = g*h
    std::size_t identity = 0;
    std::vector<WeightValue> weight;

    std::size_t count() const { return labels.size(); }
};

/// Delooping: one object, 1-morphisms the monoid elements, a unique 2-cell
/// g => h whenever leq(g,h). Composition of 1-morphisms is the monoid law
/// (left argument applied second); horizontal composition of cells is the
/// tensor alpha_{f,g} * alpha_{h,k} = alpha_{f h, g k}.
inline std::pair<Finite2Category, Lawvere2Weight> delooping(const FiniteWeightedMonoid& m,
                                                            const std::function<bool(std::size_t, std::size_t)>& leq) {
    Finite2Category c;
    Lawvere2Weight w;
    c.add_object("*");
    for (std::size_t g = 0; g < m.count(); ++g) {
        c.add_mor1(0, 0, m.labels[g]);
        w.w1.push_back(m.weight[g]);
    }
    c.id1 = {m.identity};
    for (std::size_t f = 0; f < m.count(); ++f)
        for (std::size_t g = 0; g < m.count(); ++g) c.comp1[detail::pair_key(f, g)] = m.mul[f][g];

    // cells alpha_{g,h} for g <= h
    std::unordered_map<std::uint64_t, std::size_t> cell;
    for (std::size_t g = 0; g < m.count(); ++g)
        for (std::size_t h = 0; h < m.count(); ++h)
            if (leq(g, h)) {
                std::size_t a = c.add_mor2(g, h, "a(" + m.labels[g] + "<=" + m.labels[h] + ")");
                w.w2.push_back(WeightValue(0.0));
                cell[detail::pair_key(g, h)] = a;
            }
    c.id2.resize(m.count());
    for (std::size_t g = 0; g < m.count(); ++g) {
        auto it = cell.find(detail::pair_key(g, g));
        if (it == cell.end()) throw MalformedCategory("delooping: leq must be reflexive");
        c.id2[g] = it->second;
    }
    for (const auto& [k1, a] : cell)
        for (const auto& [k2, b] : cell) {
            std::size_t g1 = k1 >> 32, h1 = k1 & 0xffffffffu;
            std::size_t g2 = k2 >> 32, h2 = k2 & 0xffffffffu;
            if (h2 == g1) c.vcomp[detail::pair_key(a, b)] = cell.at(detail::pair_key(g2, h1));
            // horizontal: b: g2 => h2 after a-ish; (a over * -> *) always composable
            std::size_t gf = m.mul[g1][g2], hk = m.mul[h1][h2];
            auto it = cell.find(detail::pair_key(gf, hk));
            if (it != cell.end()) c.hcomp[detail::pair_key(a, b)] = it->second;
        }
    return {std::move(c), std::move(w)};
}

inline std::pair<Finite2Category, Lawvere2Weight> delooping_trivial_cells(const FiniteWeightedMonoid& m) {
    return delooping(m, [](std::size_t g, std::size_t h) { return g == h; });
}

/// Finite weighted 1-category given by tables (used to seed the indiscrete
/// 2-category and the locally persistent constructions).
struct Weighted1Category {
    std::vector<std::string> objects;
    struct Mor {
        std::size_t src, dst;
        std::string name;
    };
    std::vector<Mor> mors;
    std::vector<std::size_t> id;  // per object
    std::unordered_map<std::uint64_t, std::size_t> comp;  // (f,g) -> f o g
    std::vector<WeightValue> weight;

    std::size_t compose(std::size_t f, std::size_t g) const {
        auto it = comp.find(detail::pair_key(f, g));
        if (it == comp.end()) throw MalformedCategory("weighted 1-category: missing composition");
        return it->second;
    }
};

/// Indiscrete 2-category: the base 1-category with a unique 2-cell between
/// every parallel pair of 1-morphisms. All cell weights zero.
inline std::pair<Finite2Category, Lawvere2Weight> indiscrete_2category(const Weighted1Category& base) {
    Finite2Category c;
    Lawvere2Weight w;
    for (const auto& o : base.objects) c.add_object(o);
    for (std::size_t f = 0; f < base.mors.size(); ++f) {
        c.add_mor1(base.mors[f].src, base.mors[f].dst, base.mors[f].name);
        w.w1.push_back(base.weight[f]);
    }
    c.id1 = base.id;
    c.comp1 = base.comp;

    std::unordered_map<std::uint64_t, std::size_t> cell;
    for (std::size_t f = 0; f < base.mors.size(); ++f)
        for (std::size_t g = 0; g < base.mors.size(); ++g)
            if (base.mors[f].src == base.mors[g].src && base.mors[f].dst == base.mors[g].dst) {
                std::size_t a = c.add_mor2(f, g, "u(" + base.mors[f].name + "," + base.mors[g].name + ")");
                w.w2.push_back(WeightValue(0.0));
                cell[detail::pair_key(f, g)] = a;
            }
    c.id2.resize(base.mors.size());
    for (std::size_t f = 0; f < base.mors.size(); ++f) c.id2[f] = cell.at(detail::pair_key(f, f));
    for (const auto& [k1, a] : cell)
        for (const auto& [k2, b] : cell) {
            std::size_t f1 = k1 >> 32, g1 = k1 & 0xffffffffu;
            std::size_t f2 = k2 >> 32, g2 = k2 & 0xffffffffu;
            if (g2 == f1) c.vcomp[detail::pair_key(a, b)] = cell.at(detail::pair_key(f2, g1));
            if (base.mors[f2].dst == base.mors[f1].src)
                c.hcomp[detail::pair_key(a, b)] =
                    cell.at(detail::pair_key(base.compose(f1, f2), base.compose(g1, g2)));
        }
    return {std::move(c), std::move(w)};
}

// ---------------------------------------------------------------------------
// Weighted group actions and the action-groupoid 2-category.
// ---------------------------------------------------------------------------

struct WeightedGroupAction {
    std::vector<std::string> labels;
    std::vector<std::vector<std::size_t>> mul;  // mul[g][h] = g*h
    std::vector<std::size_t> inverse;
    std::size_t identity = 0;
    std::vector<WeightValue> weight;
    std::size_t set_size = 0;
    std::vector<std::vector<std::size_t>> act;  // act[g][x]

    std::size_t group_size() const { return labels.size(); }

    /// Group axioms, action laws, weight symmetry W(g) = W(g^{-1}).
    AuditReport validate(double eps = 1e-9) const {
        AuditReport report;
        const std::size_t n = group_size();
        for (std::size_t g = 0; g < n; ++g) {
            if (mul[identity][g] != g || mul[g][identity] != g) report.add("GROUP_IDENTITY", labels[g], g, 0);
            if (mul[g][inverse[g]] != identity || mul[inverse[g]][g] != identity)
                report.add("GROUP_INVERSE", labels[g], g, inverse[g]);
            bool winv_ok;
            if (weight[g].is_infinite() || weight[inverse[g]].is_infinite())
                winv_ok = weight[g].is_infinite() && weight[inverse[g]].is_infinite();
            else
                winv_ok = std::abs(weight[g].value() - weight[inverse[g]].value()) <= eps;
            if (!winv_ok) report.add("WEIGHT_INVERSE", labels[g], weight[g].value(), weight[inverse[g]].value());
        }
        for (std::size_t g = 0; g < n; ++g)
            for (std::size_t h = 0; h < n; ++h)
                for (std::size_t k = 0; k < n; ++k)
                    if (mul[mul[g][h]][k] != mul[g][mul[h][k]])
                        report.add("GROUP_ASSOC", labels[g] + labels[h] + labels[k], 0, 0);
        for (std::size_t x = 0; x < set_size; ++x) {
            if (act[identity][x] != x) report.add("ACTION_IDENTITY", std::to_string(x), act[identity][x], x);
            for (std::size_t g = 0; g < n; ++g)
                for (std::size_t h = 0; h < n; ++h)
                    if (act[h][act[g][x]] != act[mul[h][g]][x])
                        report.add("ACTION_COMPAT", labels[h] + labels[g] + "@" + std::to_string(x), 0, 0);
        }
        auto rep = audit_monoidal_weight(
            [&] {
                std::vector<std::size_t> idx(n);
                for (std::size_t i = 0; i < n; ++i) idx[i] = i;
                return idx;
            }(),
            identity, [&](std::size_t g, std::size_t h) { return mul[g][h]; },
            [&](std::size_t g) { return weight[g]; }, [&](std::size_t g) { return labels[g]; });
        report.merge(rep);
        return report;
    }
};

/// Word-metric weights from symmetric generator weights: shortest weighted
/// generator word per element (Dijkstra over the Cayley graph).
inline std::vector<WeightValue> word_metric_weights(const std::vector<std::vector<std::size_t>>& mul,
                                                    std::size_t identity,
                                                    const std::vector<std::pair<std::size_t, double>>& generators) {
    const std::size_t n = mul.size();
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    dist[identity] = 0.0;
    using Node = std::pair<double, std::size_t>;
    std::priority_queue<Node, std::vector<Node>, std::greater<>> queue;
    queue.push({0.0, identity});
    while (!queue.empty()) {
        auto [d, g] = queue.top();
        queue.pop();
        if (d > dist[g]) continue;
        for (auto [s, ws] : generators) {
            std::size_t next = mul[s][g];  // append generator on the left
            if (dist[g] + ws < dist[next]) {
                dist[next] = dist[g] + ws;
                queue.push({dist[next], next});
            }
        }
    }
    std::vector<WeightValue> out;
    for (double d : dist) out.push_back(std::isinf(d) ? WeightValue::infinity() : WeightValue(d));
    return out;
}

/// Z/n acting on itself by addition, with unit-weight generators +-1 extended
/// as the word metric.
inline WeightedGroupAction cyclic_group_action(std::size_t n) {
    WeightedGroupAction g;
    g.identity = 0;
    g.set_size = n;
    g.mul.assign(n, std::vector<std::size_t>(n));
    g.inverse.resize(n);
    g.act.assign(n, std::vector<std::size_t>(n));
    for (std::size_t a = 0; a < n; ++a) {
        g.labels.push_back("g" + std::to_string(a));
        g.inverse[a] = (n - a) % n;
        for (std::size_t b = 0; b < n; ++b) {
            g.mul[a][b] = (a + b) % n;
            g.act[a][b] = (a + b) % n;
        }
    }
    std::vector<std::pair<std::size_t, double>> gens{{1 % n, 1.0}, {(n - 1) % n, 1.0}};
    g.weight = word_metric_weights(g.mul, 0, gens);
    return g;
}

/// The group-action distance: min weight over elements carrying x to y.
inline WeightValue action_groupoid_interleaving(const WeightedGroupAction& g, std::size_t x, std::size_t y) {
    WeightValue best = WeightValue::infinity();
    for (std::size_t e = 0; e < g.group_size(); ++e)
        if (g.act[e][x] == y) best = min(best, g.weight[e]);
    return best;
}

/// Explicit 2-category whose interleaving distance realizes the group-action
/// distance: objects are set elements; a 1-morphism x -> y is a pair (g,k)
/// with k.x = g.y; 2-cells from identities encode the comparison morphisms.
/// Horizontal composition is populated where the hom-sets support it (the
/// construction is not closed under whiskering by non-identity morphisms).
inline std::pair<Finite2Category, Lawvere2Weight> build_action_groupoid_2cat(const WeightedGroupAction& ga,
                                                                             std::size_t cap_mor1 = 10000) {
    Finite2Category c;
    Lawvere2Weight w;
    const std::size_t n = ga.group_size();
    for (std::size_t x = 0; x < ga.set_size; ++x) c.add_object("x" + std::to_string(x));

    // 1-morphisms (g,k): x -> y with k.x = g.y
    std::unordered_map<std::uint64_t, std::size_t> mor_index;  // (x, y, g, k) packed
    auto pack = [&](std::size_t x, std::size_t y, std::size_t g, std::size_t k) {
        return ((std::uint64_t(x) * ga.set_size + y) * n + g) * n + k;
    };
    struct MorData {
        std::size_t x, y, g, k;
    };
    std::vector<MorData> data;
    for (std::size_t x = 0; x < ga.set_size; ++x)
        for (std::size_t y = 0; y < ga.set_size; ++y)
            for (std::size_t g = 0; g < n; ++g)
                for (std::size_t k = 0; k < n; ++k) {
                    if (ga.act[k][x] != ga.act[g][y]) continue;
                    if (data.size() >= cap_mor1) throw SizeCap("build_action_groupoid_2cat: 1-morphism cap");
                    std::size_t id = c.add_mor1(x, y, "(" + ga.labels[g] + "," + ga.labels[k] + ")");
                    w.w1.push_back(ga.weight[g]);
                    mor_index[pack(x, y, g, k)] = id;
                    data.push_back({x, y, g, k});
                }
    c.id1.resize(ga.set_size);
    for (std::size_t x = 0; x < ga.set_size; ++x) c.id1[x] = mor_index.at(pack(x, x, ga.identity, ga.identity));

    // composition: (h,m): y -> z after (g,k): x -> y gives (g h, g m g^{-1} k)
    for (std::size_t f = 0; f < data.size(); ++f)
        for (std::size_t e = 0; e < data.size(); ++e) {
            const MorData& second = data[f];  // y -> z
            const MorData& first = data[e];   // x -> y
            if (first.y != second.x) continue;
            std::size_t g = first.g, k = first.k, h = second.g, m = second.k;
            std::size_t label = ga.mul[g][h];
            std::size_t track = ga.mul[ga.mul[ga.mul[g][m]][ga.inverse[g]]][k];
            c.comp1[detail::pair_key(f, e)] = mor_index.at(pack(first.x, second.y, label, track));
        }

    // 2-cells: identities plus hats 1_x => (h,h): x -> x
    c.id2.resize(c.mor1.size());
    for (std::size_t f = 0; f < c.mor1.size(); ++f) {
        c.id2[f] = c.add_mor2(f, f, "1[" + c.mor1[f].name + "]");
        w.w2.push_back(WeightValue(0.0));
    }
    std::unordered_map<std::uint64_t, std::size_t> hat;  // (x, h) -> cell
    for (std::size_t x = 0; x < ga.set_size; ++x)
        for (std::size_t h = 0; h < n; ++h) {
            if (h == ga.identity) {
                hat[detail::pair_key(x, h)] = c.id2[c.id1[x]];
                continue;
            }
            auto it = mor_index.find(pack(x, x, h, h));
            if (it == mor_index.end()) continue;
            std::size_t cell = c.add_mor2(c.id1[x], it->second, "hat(" + ga.labels[h] + "@" + std::to_string(x) + ")");
            w.w2.push_back(WeightValue(0.0));
            hat[detail::pair_key(x, h)] = cell;
        }

    // vertical composition: identities act as units; hats only ever compose
    // with identities since their sources are identity 1-morphisms
    for (std::size_t a = 0; a < c.mor2.size(); ++a) {
        c.vcomp[detail::pair_key(a, c.id2[c.mor2[a].src])] = a;
        c.vcomp[detail::pair_key(c.id2[c.mor2[a].dst], a)] = a;
    }
    // horizontal composition between hats at the same point: hat(h1) * hat(h2)
    // lands on hat(h1 h2); with identity cells where the hom-set permits.
    for (std::size_t x = 0; x < ga.set_size; ++x)
        for (std::size_t h1 = 0; h1 < n; ++h1)
            for (std::size_t h2 = 0; h2 < n; ++h2) {
                auto a = hat.find(detail::pair_key(x, h1));
                auto b = hat.find(detail::pair_key(x, h2));
                auto t = hat.find(detail::pair_key(x, ga.mul[h1][h2]));
                if (a == hat.end() || b == hat.end() || t == hat.end()) continue;
                c.hcomp[detail::pair_key(a->second, b->second)] = t->second;
            }
    for (std::size_t f = 0; f < data.size(); ++f)
        for (std::size_t e = 0; e < data.size(); ++e)
            if (data[e].y == data[f].x)
                c.hcomp[detail::pair_key(c.id2[f], c.id2[e])] = c.id2[c.comp1.at(detail::pair_key(f, e))];

    return {std::move(c), std::move(w)};
}

// ---------------------------------------------------------------------------
// Locally persistent categories (finite, integer grade grid with saturating
// composition at the top grade).
// ---------------------------------------------------------------------------

struct FiniteLPC {
    struct Elem {
        std::size_t src, dst, grade;
        std::string name;
    };

    std::vector<std::string> objects;
    std::size_t max_grade = 3;
    std::vector<Elem> elems;
    std::vector<std::size_t> identity;                     // per object, at grade 0
    std::vector<std::optional<std::size_t>> shift_up;      // S_{s,s+1} per element
    std::unordered_map<std::uint64_t, std::size_t> comp;   // (h,g) -> h o g (g first)

    std::size_t grade_sum(std::size_t s, std::size_t t) const { return std::min(s + t, max_grade); }

    std::size_t shift_to(std::size_t e, std::size_t target_grade) const {
        std::size_t cur = e;
        while (elems[cur].grade < target_grade) {
            if (!shift_up[cur]) throw MalformedLPC("missing shift map above " + elems[cur].name);
            cur = *shift_up[cur];
        }
        if (elems[cur].grade != target_grade) throw MalformedLPC("shift overshoots requested grade");
        return cur;
    }

    std::size_t compose(std::size_t h, std::size_t g) const {
        auto it = comp.find(detail::pair_key(h, g));
        if (it == comp.end()) throw MalformedLPC("missing composition " + elems[h].name + " o " + elems[g].name);
        return it->second;
    }

    /// Grading, identity, shift and composition-compatibility laws.
    AuditReport validate() const {
        AuditReport report;
        for (std::size_t a = 0; a < objects.size(); ++a) {
            const Elem& e = elems[identity[a]];
            if (e.src != a || e.dst != a || e.grade != 0) report.add("LPC_IDENTITY", objects[a], identity[a], 0);
        }
        for (std::size_t e = 0; e < elems.size(); ++e) {
            if (shift_up[e]) {
                const Elem& from = elems[e];
                const Elem& to = elems[*shift_up[e]];
                if (to.src != from.src || to.dst != from.dst || to.grade != from.grade + 1)
                    report.add("LPC_SHIFT_SHAPE", from.name, e, *shift_up[e]);
            } else if (elems[e].grade < max_grade) {
                report.add("LPC_SHIFT_TOTAL", elems[e].name, e, 0);
            }
        }
        for (std::size_t g = 0; g < elems.size(); ++g)
            for (std::size_t h = 0; h < elems.size(); ++h) {
                if (elems[g].dst != elems[h].src) continue;
                auto it = comp.find(detail::pair_key(h, g));
                if (it == comp.end()) {
                    report.add("LPC_COMP_TOTAL", elems[h].name + "o" + elems[g].name, h, g);
                    continue;
                }
                const Elem& hg = elems[it->second];
                if (hg.src != elems[g].src || hg.dst != elems[h].dst ||
                    hg.grade != grade_sum(elems[g].grade, elems[h].grade))
                    report.add("LPC_COMP_GRADE", elems[h].name + "o" + elems[g].name, hg.grade,
                               grade_sum(elems[g].grade, elems[h].grade));
            }
        for (std::size_t g = 0; g < elems.size(); ++g) {
            if (comp.count(detail::pair_key(g, identity[elems[g].src])) && compose(g, identity[elems[g].src]) != g)
                report.add("LPC_UNIT_R", elems[g].name, g, compose(g, identity[elems[g].src]));
            if (comp.count(detail::pair_key(identity[elems[g].dst], g)) && compose(identity[elems[g].dst], g) != g)
                report.add("LPC_UNIT_L", elems[g].name, g, compose(identity[elems[g].dst], g));
        }
        // associativity
        for (std::size_t g = 0; g < elems.size(); ++g)
            for (std::size_t h = 0; h < elems.size(); ++h) {
                if (elems[g].dst != elems[h].src) continue;
                for (std::size_t k = 0; k < elems.size(); ++k) {
                    if (elems[h].dst != elems[k].src) continue;
                    if (compose(k, compose(h, g)) != compose(compose(k, h), g))
                        report.add("LPC_ASSOC", elems[k].name + "," + elems[h].name + "," + elems[g].name, 0, 0);
                }
            }
        // composition commutes with shifts (on both sides)
        for (std::size_t g = 0; g < elems.size(); ++g)
            for (std::size_t h = 0; h < elems.size(); ++h) {
                if (elems[g].dst != elems[h].src) continue;
                std::size_t base = compose(h, g);
                if (shift_up[g]) {
                    std::size_t lhs = compose(h, *shift_up[g]);
                    std::size_t rhs = shift_to(base, grade_sum(elems[g].grade + 1, elems[h].grade));
                    if (lhs != rhs) report.add("LPC_SHIFT_COMPAT_R", elems[h].name + "o" + elems[g].name, lhs, rhs);
                }
                if (shift_up[h]) {
                    std::size_t lhs = compose(*shift_up[h], g);
                    std::size_t rhs = shift_to(base, grade_sum(elems[g].grade, elems[h].grade + 1));
                    if (lhs != rhs) report.add("LPC_SHIFT_COMPAT_L", elems[h].name + "o" + elems[g].name, lhs, rhs);
                }
            }
        return report;
    }
};

/// Builds an LPC by grading a weighted 1-category: hom(A,B)_s holds the
/// morphisms of weight at most s, shifts are the inclusions. Weights are
/// clamped to the grade grid so composition stays total.
inline FiniteLPC lpc_from_weighted_category(const Weighted1Category& base, std::size_t max_grade) {
    FiniteLPC d;
    d.objects = base.objects;
    d.max_grade = max_grade;

    auto clamped = [&](std::size_t f) {
        double wv = base.weight[f].is_infinite() ? static_cast<double>(max_grade) : base.weight[f].value();
        std::size_t g = static_cast<std::size_t>(std::ceil(wv - 1e-12));
        return std::min(g, max_grade);
    };

    // element (f, s) for every grade s >= clamp(w(f))
    std::unordered_map<std::uint64_t, std::size_t> at;  // (f, s) -> elem id
    for (std::size_t f = 0; f < base.mors.size(); ++f)
        for (std::size_t s = clamped(f); s <= max_grade; ++s) {
            std::size_t id = d.elems.size();
            d.elems.push_back({base.mors[f].src, base.mors[f].dst, s,
                               base.mors[f].name + "@" + std::to_string(s)});
            at[detail::pair_key(f, s)] = id;
        }
    d.shift_up.assign(d.elems.size(), std::nullopt);
    for (const auto& [k, id] : at) {
        std::size_t f = k >> 32, s = k & 0xffffffffu;
        if (s + 1 <= max_grade) d.shift_up[id] = at.at(detail::pair_key(f, s + 1));
    }
    d.identity.resize(base.objects.size());
    for (std::size_t a = 0; a < base.objects.size(); ++a) {
        std::size_t f = base.id[a];
        if (clamped(f) != 0) throw MalformedLPC("identity must have weight zero");
        d.identity[a] = at.at(detail::pair_key(f, std::size_t(0)));
    }
    for (const auto& [k1, g_id] : at)
        for (const auto& [k2, h_id] : at) {
            std::size_t f1 = k1 >> 32, s1 = k1 & 0xffffffffu;
            std::size_t f2 = k2 >> 32, s2 = k2 & 0xffffffffu;
            if (base.mors[f1].dst != base.mors[f2].src) continue;
            std::size_t comp_f = base.compose(f2, f1);
            d.comp[detail::pair_key(h_id, g_id)] = at.at(detail::pair_key(comp_f, d.grade_sum(s1, s2)));
        }
    return d;
}

/// The 2-category associated to an LPC: 1-morphisms are graded elements, a
/// unique 2-cell (g,s) => (h,t) iff s <= t and the shift carries g to h.
/// Weight: w1((g,s)) = s, w2 = 0. Horizontal composition is total here.
inline std::pair<Finite2Category, Lawvere2Weight> lpc_to_2cat(const FiniteLPC& d) {
    auto bad = d.validate();
    if (!bad.ok()) throw MalformedLPC("lpc_to_2cat: invalid input\n" + bad.to_text());

    Finite2Category c;
    Lawvere2Weight w;
    for (const auto& o : d.objects) c.add_object(o);
    for (std::size_t e = 0; e < d.elems.size(); ++e) {
        c.add_mor1(d.elems[e].src, d.elems[e].dst, d.elems[e].name);
        w.w1.push_back(WeightValue(static_cast<double>(d.elems[e].grade)));
    }
    c.id1 = d.identity;
    for (std::size_t g = 0; g < d.elems.size(); ++g)
        for (std::size_t h = 0; h < d.elems.size(); ++h)
            if (d.elems[g].dst == d.elems[h].src) c.comp1[detail::pair_key(h, g)] = d.compose(h, g);

    std::unordered_map<std::uint64_t, std::size_t> cell;  // (g,h) with g shifting to h
    for (std::size_t g = 0; g < d.elems.size(); ++g) {
        std::size_t cur = g;
        while (true) {
            std::size_t a = c.add_mor2(g, cur, "s(" + d.elems[g].name + "->" + d.elems[cur].name + ")");
            w.w2.push_back(WeightValue(0.0));
            cell[detail::pair_key(g, cur)] = a;
            if (!d.shift_up[cur]) break;
            cur = *d.shift_up[cur];
        }
    }
    c.id2.resize(c.mor1.size());
    for (std::size_t g = 0; g < d.elems.size(); ++g) c.id2[g] = cell.at(detail::pair_key(g, g));
    for (const auto& [k1, a] : cell)
        for (const auto& [k2, b] : cell) {
            std::size_t g1 = k1 >> 32, h1 = k1 & 0xffffffffu;
            std::size_t g2 = k2 >> 32, h2 = k2 & 0xffffffffu;
            if (h2 == g1) c.vcomp[detail::pair_key(a, b)] = cell.at(detail::pair_key(g2, h1));
            if (d.elems[g2].dst == d.elems[g1].src)
                c.hcomp[detail::pair_key(a, b)] = cell.at(detail::pair_key(d.compose(g1, g2), d.compose(h1, h2)));
        }
    return {std::move(c), std::move(w)};
}

/// LPC interleaving distance: minimal max-grade over pairs whose two
/// composites are the shifted identities.
inline WeightValue lpc_interleaving(const FiniteLPC& d, std::size_t a, std::size_t b) {
    WeightValue best = WeightValue::infinity();
    for (std::size_t f = 0; f < d.elems.size(); ++f) {
        if (d.elems[f].src != a || d.elems[f].dst != b) continue;
        for (std::size_t g = 0; g < d.elems.size(); ++g) {
            if (d.elems[g].src != b || d.elems[g].dst != a) continue;
            std::size_t s = d.elems[f].grade, t = d.elems[g].grade;
            WeightValue cost(static_cast<double>(std::max(s, t)));
            if (!(cost < best)) continue;
            std::size_t u = d.grade_sum(s, t);
            if (d.compose(g, f) == d.shift_to(d.identity[a], u) && d.compose(f, g) == d.shift_to(d.identity[b], u))
                best = cost;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Lipschitz 2-functors and stability.
// ---------------------------------------------------------------------------

struct TwoFunctor {
    const Finite2Category* src = nullptr;
    const Finite2Category* dst = nullptr;
    std::vector<std::size_t> obj_map;
    std::vector<std::size_t> mor1_map;
    std::vector<std::size_t> mor2_map;
};

/// Functoriality audit; a non-empty report means the data is not a 2-functor.
inline AuditReport verify_2functor(const TwoFunctor& t) {
    AuditReport report;
    const auto& c = *t.src;
    const auto& d = *t.dst;
    for (std::size_t f = 0; f < c.mor1.size(); ++f) {
        std::size_t tf = t.mor1_map[f];
        if (d.mor1[tf].src != t.obj_map[c.mor1[f].src] || d.mor1[tf].dst != t.obj_map[c.mor1[f].dst])
            report.add("FUNCTOR_MOR1_ENDPOINTS", c.mor1[f].name, f, tf);
    }
    for (std::size_t a = 0; a < c.objects.size(); ++a)
        if (t.mor1_map[c.id1[a]] != d.id1[t.obj_map[a]]) report.add("FUNCTOR_ID1", c.objects[a], a, 0);
    for (std::size_t f = 0; f < c.mor1.size(); ++f)
        for (std::size_t g = 0; g < c.mor1.size(); ++g) {
            if (!c.composable1(f, g)) continue;
            if (t.mor1_map[c.compose1(f, g)] != d.compose1(t.mor1_map[f], t.mor1_map[g]))
                report.add("FUNCTOR_COMP1", c.mor1[f].name + "o" + c.mor1[g].name, 0, 0);
        }
    for (std::size_t a = 0; a < c.mor2.size(); ++a) {
        std::size_t ta = t.mor2_map[a];
        if (d.mor2[ta].src != t.mor1_map[c.mor2[a].src] || d.mor2[ta].dst != t.mor1_map[c.mor2[a].dst])
            report.add("FUNCTOR_MOR2_ENDPOINTS", c.mor2[a].name, a, ta);
    }
    for (std::size_t f = 0; f < c.mor1.size(); ++f)
        if (t.mor2_map[c.id2[f]] != d.id2[t.mor1_map[f]]) report.add("FUNCTOR_ID2", c.mor1[f].name, f, 0);
    for (std::size_t a = 0; a < c.mor2.size(); ++a)
        for (std::size_t b = 0; b < c.mor2.size(); ++b) {
            if (c.mor2[a].dst == c.mor2[b].src) {
                if (t.mor2_map[c.compose_v(b, a)] != d.compose_v(t.mor2_map[b], t.mor2_map[a]))
                    report.add("FUNCTOR_VCOMP", c.mor2[b].name + "o" + c.mor2[a].name, 0, 0);
            }
            if (c.mor1[c.mor2[a].src].dst == c.mor1[c.mor2[b].src].src && c.has_hcomp(b, a)) {
                if (!d.has_hcomp(t.mor2_map[b], t.mor2_map[a]) ||
                    t.mor2_map[c.compose_h(b, a)] != d.compose_h(t.mor2_map[b], t.mor2_map[a]))
                    report.add("FUNCTOR_HCOMP", c.mor2[b].name + "*" + c.mor2[a].name, 0, 0);
            }
        }
    return report;
}

/// Weight non-increase on every 1- and 2-morphism. Functoriality is checked
/// first; NotAFunctor is thrown on structural failure.
inline AuditReport check_lipschitz_2functor(const TwoFunctor& t, const Lawvere2Weight& ws, const Lawvere2Weight& wd) {
    auto structural = verify_2functor(t);
    if (!structural.ok()) throw NotAFunctor("check_lipschitz_2functor:\n" + structural.to_text());
    AuditReport report;
    auto le = [](WeightValue lhs, WeightValue rhs) {
        if (rhs.is_infinite()) return true;
        if (lhs.is_infinite()) return false;
        return lhs.value() <= rhs.value();
    };
    for (std::size_t f = 0; f < t.src->mor1.size(); ++f)
        if (!le(wd.w1[t.mor1_map[f]], ws.w1[f]))
            report.add("LIPSCHITZ_W1", t.src->mor1[f].name, wd.w1[t.mor1_map[f]].value(), ws.w1[f].value());
    for (std::size_t a = 0; a < t.src->mor2.size(); ++a)
        if (!le(wd.w2[t.mor2_map[a]], ws.w2[a]))
            report.add("LIPSCHITZ_W2", t.src->mor2[a].name, wd.w2[t.mor2_map[a]].value(), ws.w2[a].value());
    return report;
}

/// Distance inequality d'(T(A),T(B)) <= d(A,B) over every object pair.
inline AuditReport stability_test(const TwoFunctor& t, const Lawvere2Weight& ws, const Lawvere2Weight& wd,
                                  double eps = 0.0) {
    AuditReport report;
    for (std::size_t a = 0; a < t.src->objects.size(); ++a)
        for (std::size_t b = 0; b < t.src->objects.size(); ++b) {
            WeightValue upstream = two_cat_interleaving(*t.src, ws, a, b).value;
            WeightValue downstream = two_cat_interleaving(*t.dst, wd, t.obj_map[a], t.obj_map[b]).value;
            bool ok;
            if (upstream.is_infinite())
                ok = true;
            else if (downstream.is_infinite())
                ok = false;
            else
                ok = downstream.value() <= upstream.value() + eps;
            if (!ok)
                report.add("STABILITY", t.src->objects[a] + "," + t.src->objects[b], downstream.value(),
                           upstream.value());
        }
    return report;
}

}  // namespace ild
