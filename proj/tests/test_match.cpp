#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "ild/match.hpp"

using namespace ild;

namespace {

// Test-only oracle: recursive enumeration of all matchings (bars pair up or
// retire to the diagonal), minimizing the max cost. Exponential.
double bottleneck_brute(const std::vector<Bar>& b1, const std::vector<Bar>& b2, std::size_t i,
                        std::vector<bool>& used2) {
    if (i == b1.size()) {
        double worst = 0.0;
        for (std::size_t j = 0; j < b2.size(); ++j)
            if (!used2[j]) worst = std::max(worst, detail::bar_diag_cost(b2[j]));
        return worst;
    }
    double best = std::numeric_limits<double>::infinity();
    // diagonal
    {
        double here = detail::bar_diag_cost(b1[i]);
        double rest = bottleneck_brute(b1, b2, i + 1, used2);
        best = std::min(best, std::max(here, rest));
    }
    for (std::size_t j = 0; j < b2.size(); ++j) {
        if (used2[j]) continue;
        used2[j] = true;
        double here = detail::bar_match_cost(b1[i], b2[j]);
        if (here < best) {
            double rest = bottleneck_brute(b1, b2, i + 1, used2);
            best = std::min(best, std::max(here, rest));
        }
        used2[j] = false;
    }
    return best;
}

double bottleneck_brute(const Barcode& a, const Barcode& b) {
    std::vector<bool> used2(b.bars.size(), false);
    return bottleneck_brute(a.bars, b.bars, 0, used2);
}

Barcode random_barcode(std::mt19937_64& rng, std::size_t max_bars, double essential_prob = 0.0) {
    std::uniform_int_distribution<std::size_t> nb(0, max_bars);
    std::uniform_real_distribution<double> u(0.0, 4.0);
    std::uniform_real_distribution<double> len(0.0, 3.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    Barcode bc;
    std::size_t n = nb(rng);
    for (std::size_t i = 0; i < n; ++i) {
        double birth = u(rng);
        if (coin(rng) < essential_prob)
            bc.bars.emplace_back(birth, kInfDeath);
        else
            bc.bars.emplace_back(birth, birth + len(rng));
    }
    return bc;
}

}  // namespace

TEST_CASE("single bar versus empty costs half the length") {
    Barcode one({{0.0, 2.0}});
    Barcode none;
    CHECK(bottleneck(one, none).value() == Catch::Approx(1.0));
    CHECK(bottleneck(none, one).value() == Catch::Approx(1.0));
}

TEST_CASE("identical barcodes are at distance zero") {
    Barcode b({{0.0, 2.0}, {1.0, 5.0}, {0.5, kInfDeath}});
    CHECK(bottleneck(b, b).value() == 0.0);
}

TEST_CASE("direct match beats the diagonal") {
    // direct = 1, via diagonal = max(2, 1.5) = 2; exhaustive oracle agrees
    Barcode a({{0.0, 4.0}});
    Barcode b({{1.0, 4.0}});
    CHECK(bottleneck(a, b).value() == Catch::Approx(1.0));
    CHECK(bottleneck_brute(a, b) == Catch::Approx(1.0));
}

TEST_CASE("half-unit bars stay at half no matter their birth") {
    for (double a : {1.0, 10.0, 100.0, 1000.0}) {
        Barcode bc({{a, a + 1.0}});
        CHECK(bottleneck(bc, Barcode{}).value() == 0.5);
    }
}

TEST_CASE("unbalanced essential bars force infinite distance") {
    Barcode a({{0.0, kInfDeath}});
    Barcode b;
    CHECK(bottleneck(a, b).is_infinite());

    Barcode c({{3.0, kInfDeath}});
    CHECK(bottleneck(a, c).value() == Catch::Approx(3.0));
}

TEST_CASE("matches exhaustive oracle on random barcodes") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 60; ++trial) {
        Barcode a = random_barcode(rng, 4);
        Barcode b = random_barcode(rng, 4);
        double expect = bottleneck_brute(a, b);
        CHECK(bottleneck(a, b).value() == Catch::Approx(expect));
    }
}

TEST_CASE("matches exhaustive oracle with essential bars present") {
    std::mt19937_64 rng(43);
    int nontrivial = 0;
    for (int trial = 0; trial < 60; ++trial) {
        Barcode a = random_barcode(rng, 3, 0.4);
        Barcode b = random_barcode(rng, 3, 0.4);
        std::size_t ia = 0, ib = 0;
        for (auto& x : a.bars) ia += x.essential();
        for (auto& x : b.bars) ib += x.essential();
        WeightValue got = bottleneck(a, b);
        if (ia != ib) {
            CHECK(got.is_infinite());
        } else {
            ++nontrivial;
            CHECK(got.value() == Catch::Approx(bottleneck_brute(a, b)));
        }
    }
    CHECK(nontrivial > 5);
}

TEST_CASE("bottleneck is a pseudometric on random barcodes") {
    std::mt19937_64 rng(44);
    std::vector<Barcode> pts;
    for (int i = 0; i < 12; ++i) pts.push_back(random_barcode(rng, 4, 0.2));
    auto d = [](const Barcode& x, const Barcode& y) { return bottleneck(x, y); };
    AuditOptions opts;
    opts.eps = 1e-12;
    CHECK(audit_pseudometric(d, pts, opts).ok());
}
