#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>
#include <sstream>

#include "ild/pmod.hpp"

using namespace ild;

namespace {

// Test-only oracle: enumerate every component tuple and keep the ones whose
// naturality squares all commute. Exponential; only for tiny modules.
std::set<std::vector<bool>> brute_force_morphism_set(const FiniteModule& m, const FiniteModule& n) {
    std::size_t total = 0;
    std::vector<std::pair<std::size_t, std::size_t>> shapes;
    for (std::size_t p = 0; p < m.poset().size(); ++p) {
        shapes.emplace_back(n.dim(p), m.dim(p));
        total += n.dim(p) * m.dim(p);
    }
    REQUIRE(total <= 16);
    std::set<std::vector<bool>> good;
    for (std::size_t mask = 0; mask < (std::size_t(1) << total); ++mask) {
        std::vector<bool> bits(total);
        for (std::size_t i = 0; i < total; ++i) bits[i] = (mask >> i) & 1;
        ModuleMorphism phi;
        std::size_t off = 0;
        for (auto [r, c] : shapes) {
            F2Matrix comp(r, c);
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < c; ++j) comp.set(i, j, bits[off + i * c + j]);
            off += r * c;
            phi.component.push_back(std::move(comp));
        }
        if (is_morphism(m, n, phi)) good.insert(bits);
    }
    return good;
}

std::vector<bool> morphism_bits(const ModuleMorphism& phi) {
    std::vector<bool> bits;
    for (const auto& c : phi.component)
        for (std::size_t i = 0; i < c.rows(); ++i)
            for (std::size_t j = 0; j < c.cols(); ++j) bits.push_back(c.get(i, j));
    return bits;
}

std::set<std::vector<bool>> span_of_basis(const FiniteModule& m, const FiniteModule& n,
                                          const std::vector<ModuleMorphism>& basis) {
    std::set<std::vector<bool>> span;
    REQUIRE(basis.size() <= 16);
    for (std::size_t mask = 0; mask < (std::size_t(1) << basis.size()); ++mask) {
        ModuleMorphism acc = zero_morphism(m, n);
        for (std::size_t i = 0; i < basis.size(); ++i)
            if ((mask >> i) & 1)
                for (std::size_t p = 0; p < acc.component.size(); ++p)
                    acc.component[p] = acc.component[p] + basis[i].component[p];
        span.insert(morphism_bits(acc));
    }
    return span;
}

FiniteModule random_module(const FinitePoset& poset, std::mt19937_64& rng, std::size_t max_dim = 2) {
    std::uniform_int_distribution<std::size_t> dd(0, max_dim);
    std::vector<std::size_t> dims(poset.size());
    for (auto& d : dims) d = dd(rng);
    FiniteModule m(poset, dims);

    // Fill covering maps randomly, then complete by composition; retry until
    // the result is functorial (diamonds may clash on non-chain posets).
    std::uniform_int_distribution<int> bit(0, 1);
    for (int attempt = 0; attempt < 200; ++attempt) {
        FiniteModule cand(poset, dims);
        // covering pairs: p < q with nothing strictly between
        for (std::size_t p = 0; p < poset.size(); ++p)
            for (std::size_t q = 0; q < poset.size(); ++q) {
                if (p == q || !poset.leq(p, q)) continue;
                bool covering = true;
                for (std::size_t r = 0; r < poset.size() && covering; ++r)
                    if (r != p && r != q && poset.leq(p, r) && poset.leq(r, q)) covering = false;
                if (!covering) continue;
                F2Matrix f(cand.dim(q), cand.dim(p));
                for (std::size_t i = 0; i < f.rows(); ++i)
                    for (std::size_t j = 0; j < f.cols(); ++j) f.set(i, j, bit(rng) == 1);
                cand.set_map(p, q, f);
            }
        cand.fill_by_composition();
        bool total = true;
        try {
            if (cand.validate().ok()) return cand;
        } catch (const std::exception&) {
            total = false;
        }
        (void)total;
    }
    // fall back to the zero module, which is always functorial
    return FiniteModule::zero(poset);
}

}  // namespace

TEST_CASE("interval module on a chain is functorial") {
    FinitePoset chain = FinitePoset::chain(4);
    FiniteModule m = FiniteModule::interval_on_chain(chain, 1, 3);
    CHECK(m.validate().ok());
    CHECK(m.dim(0) == 0);
    CHECK(m.dim(1) == 1);
    CHECK(m.dim(2) == 1);
    CHECK(m.dim(3) == 0);
    CHECK(m.map(1, 2).is_identity());
    CHECK(m.map(1, 3).is_zero());
}

TEST_CASE("pullback along a map reindexes stalks") {
    FinitePoset chain = FinitePoset::chain(4);
    FiniteModule m = FiniteModule::interval_on_chain(chain, 1, 3);
    FiniteMap shift{{1, 2, 3, 3}};
    FiniteModule gm = pullback(m, shift);
    CHECK(gm.dim(0) == 1);
    CHECK(gm.dim(1) == 1);
    CHECK(gm.dim(2) == 0);
    CHECK(gm.validate().ok());

    // pullback along identity is the module itself
    CHECK(pullback(m, FiniteMap::identity(4)) == m);
}

TEST_CASE("iterated pullback composes contravariantly") {
    // (T^Y_g H = H o T_g): pulling back by g then h equals pulling back by g o h
    FinitePoset chain = FinitePoset::chain(5);
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        FiniteModule m = random_module(chain, rng);
        FiniteMap g{{1, 2, 3, 4, 4}};
        FiniteMap h{{2, 2, 3, 4, 4}};
        FiniteModule lhs = pullback(pullback(m, g), h);
        FiniteModule rhs = pullback(m, compose(g, h));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("interval pullback closed forms") {
    IntervalModule m(1.0, 3.0);
    auto shifted = pullback(m, ParamMonotoneMap::affine_shift(1.0));
    CHECK(shifted.a == Catch::Approx(0.0));
    CHECK(shifted.b == Catch::Approx(2.0));

    IntervalModule m2(1.0, 4.0);
    auto scaled = pullback(m2, ParamMonotoneMap::scalar_multiply(2.0));
    CHECK(scaled.a == Catch::Approx(0.5));
    CHECK(scaled.b == Catch::Approx(2.0));

    // support is the preimage: g M (p) = M(g(p)) != 0 iff 2p in [1,4)
    CHECK(scaled.contains(0.5));
    CHECK_FALSE(scaled.contains(2.0));
}

TEST_CASE("shift morphism components are the internal maps") {
    FinitePoset chain = FinitePoset::chain(4);
    // stalk indices 0..3 standing for values 0..3; module on [0,2)
    FiniteModule m = FiniteModule::interval_on_chain(chain, 0, 2);
    FiniteMap shift1{{1, 2, 3, 3}};
    ModuleMorphism eta = shift_morphism(m, shift1);
    CHECK(eta.component[0].rows() == 1);  // M(0) -> M(1), both alive: identity
    CHECK(eta.component[0].is_identity());
    CHECK(eta.component[1].rows() == 0);  // M(2) = 0
    CHECK(is_morphism(m, pullback(m, shift1), eta));

    ModuleMorphism id_eta = shift_morphism(m, FiniteMap::identity(4));
    for (std::size_t p = 0; p < 4; ++p) CHECK(id_eta.component[p].is_identity());

    FiniteMap not_translation{{0, 0, 2, 3}};
    CHECK_THROWS(shift_morphism(m, not_translation));
}

TEST_CASE("is_morphism accepts identity and zero, rejects a broken square") {
    FinitePoset chain = FinitePoset::chain(3);
    FiniteModule m = FiniteModule::interval_on_chain(chain, 0, 3);
    CHECK(is_morphism(m, m, identity_morphism(m)));
    CHECK(is_morphism(m, m, zero_morphism(m, m)));

    // component 1 flipped on a module with identity internal maps
    ModuleMorphism bad = identity_morphism(m);
    bad.component[1] = F2Matrix(1, 1);
    CHECK_FALSE(is_morphism(m, m, bad));
}

TEST_CASE("morphism space basis matches brute force on random small modules") {
    std::mt19937_64 rng(5);
    std::vector<FinitePoset> posets;
    posets.push_back(FinitePoset::chain(3));
    posets.push_back(FinitePoset(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}));  // diamond
    posets.push_back(FinitePoset(3, {{0, 1}, {0, 2}}));                  // vee

    int tested = 0;
    while (tested < 12) {
        const FinitePoset& poset = posets[tested % posets.size()];
        FiniteModule m = random_module(poset, rng, 1);
        FiniteModule n = random_module(poset, rng, 1);
        std::size_t total = 0;
        for (std::size_t p = 0; p < poset.size(); ++p) total += m.dim(p) * n.dim(p);
        if (total > 12) continue;
        ++tested;

        auto basis = morphism_space_basis(m, n);
        for (const auto& phi : basis) CHECK(is_morphism(m, n, phi));
        CHECK(span_of_basis(m, n, basis) == brute_force_morphism_set(m, n));
    }
}

TEST_CASE("morphism space examples from disjoint and full supports") {
    FinitePoset chain = FinitePoset::chain(3);

    FiniteModule point(FinitePoset::chain(1), {1});
    auto b0 = morphism_space_basis(point, point);
    CHECK(b0.size() == 1);

    FiniteModule m0 = FiniteModule::interval_on_chain(chain, 0, 1);
    FiniteModule m2 = FiniteModule::interval_on_chain(chain, 2, 3);
    CHECK(morphism_space_basis(m0, m2).empty());

    FiniteModule full = FiniteModule::interval_on_chain(chain, 0, 3);
    CHECK(morphism_space_basis(full, full).size() == 1);
}

TEST_CASE("finite module text round trip") {
    FinitePoset chain = FinitePoset::chain(3);
    std::stringstream ss;
    ss << "PMOD 3\nDIMS 1 2 1\nMAP 0 1\n1\n0\nMAP 1 2\n01\n";
    FiniteModule m = FiniteModule::load(ss, chain);
    CHECK(m.validate().ok());
    CHECK(m.map(0, 2).get(0, 0) == false);
    CHECK(m.dim(1) == 2);
}

TEST_CASE("barcode csv round trip with infinite deaths") {
    Barcode bc({{0.0, 2.5}, {1.0, kInfDeath}});
    std::stringstream ss;
    bc.save_csv(ss);
    Barcode back = Barcode::load_csv(ss);
    REQUIRE(back.size() == 2);
    CHECK(back.bars[0].death == Catch::Approx(2.5));
    CHECK(back.bars[1].essential());
    CHECK_THROWS(Bar(2.0, 1.0));
}

TEST_CASE("rectangle modules validate their boxes") {
    RectangleModule r({0.0, 0.0}, {2.0, 2.0});
    CHECK_FALSE(r.is_empty());
    CHECK(r.contains({1.0, 1.9}));
    CHECK_FALSE(r.contains({2.0, 1.0}));
    CHECK(RectangleModule({1.0, 1.0}, {1.0, 2.0}).is_empty());
    CHECK_THROWS(RectangleModule({1.0}, {0.0}));

    auto shifted = pullback(r, {1.0, 0.5});
    CHECK(shifted.a[0] == Catch::Approx(-1.0));
    CHECK(shifted.b[1] == Catch::Approx(1.5));
}
