#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "ild/posets.hpp"

using namespace ild;

TEST_CASE("transitive closure is computed on construction") {
    FinitePoset p(3, {{0, 1}, {1, 2}});
    CHECK(p.leq(0, 2));
    CHECK(p.leq(0, 0));
    CHECK_FALSE(p.leq(2, 0));
}

TEST_CASE("poset text round trip") {
    FinitePoset p(4, {{0, 1}, {1, 2}, {0, 3}});
    std::stringstream ss;
    p.save(ss);
    FinitePoset q = FinitePoset::load(ss);
    REQUIRE(q.size() == 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(p.leq(i, j) == q.leq(i, j));
}

TEST_CASE("grid poset has the product order") {
    FinitePoset g = FinitePoset::grid({2, 3});
    auto id = [](std::size_t r, std::size_t c) { return FinitePoset::rank({r, c}, {2, 3}); };
    CHECK(g.leq(id(0, 0), id(1, 2)));
    CHECK_FALSE(g.leq(id(1, 0), id(0, 2)));
    CHECK_FALSE(g.leq(id(0, 2), id(1, 0)));
}

TEST_CASE("monotonicity audit flags a swap of comparable points") {
    FinitePoset chain = FinitePoset::chain(3);
    FiniteMap swap01{{1, 0, 2}};
    auto report = verify_monotone(chain, swap01);
    REQUIRE_FALSE(report.ok());
    CHECK(report.violations.front().axiom == "MONOTONE");

    FiniteMap shift{{1, 2, 2}};
    CHECK(verify_monotone(chain, shift).ok());
}

TEST_CASE("verify_monotone rejects out-of-domain samples") {
    FinitePoset chain = FinitePoset::chain(2);
    FiniteMap id = FiniteMap::identity(2);
    CHECK_THROWS(verify_monotone(chain, id, {{0, 7}}));
}

TEST_CASE("translations of a chain are the order-preserving up-maps") {
    FinitePoset chain = FinitePoset::chain(3);
    auto trans = all_translations(chain);
    // g(0) in {0,1,2}, g(1) in {1,2} with g(1) >= g(0), g(2) = 2
    CHECK(trans.size() == 5);
    for (const auto& g : trans) {
        CHECK(is_translation(chain, g));
        CHECK(verify_monotone(chain, g).ok());
    }
}

namespace {

FiniteMonoidAction shift_action_on_chain(std::size_t n, std::size_t max_shift) {
    FiniteMonoidAction a;
    a.poset = FinitePoset::chain(n);
    a.identity = 0;
    for (std::size_t k = 0; k <= max_shift; ++k) {
        a.labels.push_back("s" + std::to_string(k));
        FiniteMap m;
        for (std::size_t p = 0; p < n; ++p) m.image.push_back(std::min(p + k, n - 1));
        a.act.push_back(m);
        a.weight.push_back(WeightValue(static_cast<double>(k)));
    }
    a.mul.assign(a.count(), std::vector<std::size_t>(a.count()));
    for (std::size_t g = 0; g < a.count(); ++g)
        for (std::size_t h = 0; h < a.count(); ++h) a.mul[g][h] = std::min(g + h, max_shift);
    return a;
}

}  // namespace

TEST_CASE("saturating shift monoid acts on a chain") {
    auto a = shift_action_on_chain(5, 4);
    CHECK(verify_action(a).ok());
    CHECK(two_morphism_exists(a, 0, 2));
    CHECK_FALSE(two_morphism_exists(a, 2, 0));
}

TEST_CASE("broken action table is reported") {
    auto a = shift_action_on_chain(4, 2);
    a.act[2] = FiniteMap::identity(4);  // act(s1*s1) != act(s1) o act(s1)
    auto report = verify_action(a);
    REQUIRE_FALSE(report.ok());
    bool compat = false;
    for (const auto& v : report.violations) compat |= v.axiom == "ACTION_COMPAT";
    CHECK(compat);
}

TEST_CASE("parametric two-morphism tests are closed form") {
    ParamPoset line = ParamPoset::real_line();
    ParamPoset nonneg = ParamPoset::real_line_nonneg();

    CHECK(two_morphism_exists(line, ParamMonotoneMap::affine_shift(1.0), ParamMonotoneMap::affine_shift(2.0)));
    CHECK_FALSE(two_morphism_exists(line, ParamMonotoneMap::affine_shift(2.0), ParamMonotoneMap::affine_shift(1.0)));

    // identity vs any translation
    CHECK(two_morphism_exists(line, ParamMonotoneMap::affine_shift(0.0), ParamMonotoneMap::affine_shift(0.5)));

    // 2p <= 0.5p fails at p = 1
    CHECK_FALSE(
        two_morphism_exists(nonneg, ParamMonotoneMap::scalar_multiply(2.0), ParamMonotoneMap::scalar_multiply(0.5)));
    CHECK(two_morphism_exists(nonneg, ParamMonotoneMap::scalar_multiply(0.5), ParamMonotoneMap::scalar_multiply(2.0)));

    ParamPoset plane = ParamPoset::product_rn(2);
    CHECK(two_morphism_exists(plane, ParamMonotoneMap::vector_shift({0.0, 1.0}),
                              ParamMonotoneMap::vector_shift({0.5, 1.0})));
    CHECK_FALSE(two_morphism_exists(plane, ParamMonotoneMap::vector_shift({0.5, 1.0}),
                                    ParamMonotoneMap::vector_shift({0.0, 2.0})));
}

TEST_CASE("piecewise linear maps compare at knots") {
    auto pl = ParamMonotoneMap::piecewise_linear({{0.0, 0.5}, {1.0, 1.0}, {2.0, 3.0}});
    CHECK(pl.apply(0.5) == Catch::Approx(0.75));
    CHECK(pl.apply(-1.0) == Catch::Approx(-0.5));
    CHECK(pl.apply(3.0) == Catch::Approx(4.0));

    ParamPoset line = ParamPoset::real_line();
    CHECK(two_morphism_exists(line, pl, ParamMonotoneMap::affine_shift(2.0)));
    CHECK_FALSE(two_morphism_exists(line, ParamMonotoneMap::affine_shift(2.0), pl));
    CHECK(two_morphism_exists(line, ParamMonotoneMap::affine_shift(-1.0), pl));
    // no closed form for scalar vs piecewise linear
    CHECK_THROWS(two_morphism_exists(line, pl, ParamMonotoneMap::scalar_multiply(2.0)));
}

TEST_CASE("shipped parametric actions satisfy the action laws on samples") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    std::uniform_real_distribution<double> upos(0.1, 5.0);

    for (int trial = 0; trial < 1000; ++trial) {
        double s = std::abs(u(rng)), t = std::abs(u(rng)), p = u(rng);
        auto gs = ParamMonotoneMap::affine_shift(s);
        auto gt = ParamMonotoneMap::affine_shift(t);
        auto gst = ParamMonotoneMap::affine_shift(s + t);
        CHECK(gs.apply(gt.apply(p)) == Catch::Approx(gst.apply(p)));

        double c1 = upos(rng), c2 = upos(rng), q = upos(rng);
        auto m1 = ParamMonotoneMap::scalar_multiply(c1);
        auto m2 = ParamMonotoneMap::scalar_multiply(c2);
        auto m12 = ParamMonotoneMap::scalar_multiply(c1 * c2);
        CHECK(m1.apply(m2.apply(q)) == Catch::Approx(m12.apply(q)));
    }
}
