#include <doctest.h>

#include <random>

#include "hyperell/charsum.hpp"
#include "hyperell/enumerate.hpp"
#include "hyperell/factor.hpp"
#include "hyperell/verify.hpp"

using namespace hyperell;

namespace {

Poly P(FieldPtr f, std::initializer_list<int> coeffs) {
    std::vector<uint8_t> c;
    for (int v : coeffs) c.push_back(uint8_t(v));
    return Poly(f, std::move(c));
}

} // namespace

TEST_CASE("residue symbol spec examples over F_3") {
    auto f = Field::get(3);
    CHECK(residue_symbol(P(f, {1, 1}), Poly::t(f)) == 1);    // (t+1 / t): residue 1
    CHECK(residue_symbol(Poly::t(f), Poly::t(f)) == 0);      // P | f
    CHECK(residue_symbol(P(f, {1, 0, 1}), P(f, {1, 1})) == -1);   // residue 2, not a square
    CHECK_THROWS(residue_symbol(Poly::t(f), P(f, {2, 0, 1})));    // t^2+2 reducible
}

TEST_CASE("euler criterion vs reciprocity chain, exhaustive grids") {
    struct Grid {
        int p, r, pmax, amax;
    };
    // grid scaled per field so the Euler oracle stays affordable
    for (Grid g : {Grid{3, 1, 5, 6}, Grid{5, 1, 4, 5}, Grid{3, 2, 3, 4}}) {
        auto f = Field::get(g.p, g.r);
        for (int dp = 1; dp <= g.pmax; ++dp) {
            for (const Poly& prime : primes_of_degree(f, dp)) {
                for (int da = 0; da <= g.amax; ++da) {
                    uint64_t total = count_Mn(f, da);
                    for (uint64_t i = 0; i < total; ++i) {
                        Poly a = Poly::monic_from_index(f, da, i);
                        CHECK(jacobi_symbol(a, prime) == residue_symbol(a, prime));
                    }
                }
            }
        }
    }
}

TEST_CASE("chi spec examples") {
    auto f = Field::get(3);
    QuadChar chi(P(f, {1, 0, 1}));   // D = t^2 + 1
    CHECK(chi.chi(Poly::t(f)) == 1);
    CHECK(chi.chi(Poly::one(f)) == 1);
    CHECK(chi.chi(P(f, {1, 1})) == -1);
}

TEST_CASE("multiplicativity chi_D(fg) = chi_D(f) chi_D(g)") {
    for (int q : {3, 5}) {
        auto field = Field::get(q);
        std::mt19937_64 gen(100 + q);
        for (int iter = 0; iter < 50; ++iter) {
            int nd = 1 + int(gen() % 5);
            Poly D = Poly::monic_from_index(field, nd, gen() % count_Mn(field, nd));
            if (!is_squarefree(D)) continue;
            QuadChar chi(D);
            for (int j = 0; j < 20; ++j) {
                int da = 1 + int(gen() % 4), db = 1 + int(gen() % 4);
                Poly a = Poly::monic_from_index(field, da, gen() % count_Mn(field, da));
                Poly b = Poly::monic_from_index(field, db, gen() % count_Mn(field, db));
                CHECK(chi.chi(a * b) == chi.chi(a) * chi.chi(b));
            }
        }
    }
}

TEST_CASE("chi_D(f) = 0 iff gcd(f, D) != 1, exhaustive deg <= 4, q = 3") {
    auto field = Field::get(3);
    for (int nd = 1; nd <= 4; ++nd) {
        EnsembleCursor cur = EnsembleCursor::full(field, EnsembleKind::Hn, nd);
        Poly D;
        while (cur.next(D)) {
            QuadChar chi(D);
            for (int da = 0; da <= 4; ++da) {
                uint64_t total = count_Mn(field, da);
                for (uint64_t i = 0; i < total; ++i) {
                    Poly a = Poly::monic_from_index(field, da, i);
                    CHECK((chi.chi(a) == 0) == (gcd(a, D).degree() > 0));
                }
            }
        }
    }
}

TEST_CASE("char_sum_Mn spec examples and vanishing") {
    auto f = Field::get(3);
    QuadChar chi(P(f, {1, 0, 1}));
    CHECK(char_sum_Mn(chi, 0) == 1);
    CHECK(char_sum_Mn(chi, 1) == -1);
    CHECK(char_sum_Mn(chi, 2) == 0);

    // vanishing for all n >= deg D, D in H_{<=5}
    for (int nd = 1; nd <= 5; ++nd) {
        EnsembleCursor cur = EnsembleCursor::full(f, EnsembleKind::Hn, nd);
        Poly D;
        while (cur.next(D)) {
            QuadChar c(D);
            for (int n = nd; n <= 6; ++n) CHECK(char_sum_Mn(c, n) == 0);
        }
    }
}

TEST_CASE("average_square_char: frozen values and enumeration oracle") {
    auto f = Field::get(3);

    SUBCASE("f = 1 is exact") {
        auto r = average_square_char(f, 4, Poly::one(f));
        CHECK(r.empirical == 1);
        CHECK(r.main == 1);
        CHECK(r.scaled_err == 0);
    }

    SUBCASE("f = t, q=3, n=4") {
        auto r = average_square_char(f, 4, Poly::t(f));
        CHECK(r.main == mpq_class(3, 4));
        CHECK(r.empirical == mpq_class(20, 27));
        CHECK(r.scaled_err == mpq_class(1, 2));
    }

    SUBCASE("f = t(t+1), q=3, n=4: main = 9/16, empirical matches direct loop") {
        Poly g = Poly::t(f) * P(f, {1, 1});
        auto r = average_square_char(f, 4, g);
        CHECK(r.main == mpq_class(9, 16));
        // independent oracle: direct count over H_4
        long coprime = 0, total = 0;
        EnsembleCursor cur = EnsembleCursor::full(f, EnsembleKind::Hn, 4);
        Poly D;
        while (cur.next(D)) {
            ++total;
            if (gcd(D, g).degree() == 0) ++coprime;
        }
        mpq_class expect(coprime, total);
        expect.canonicalize();
        CHECK(r.empirical == expect);
    }
}

TEST_CASE("lemma 3.2 scaled error stays bounded across n in {4,6,8}") {
    auto f = Field::get(3);
    SuiteResult r = verify_lemma32(f, {4, 6, 8}, 10);
    CHECK(r.pass);
    CHECK(r.stat <= 3.0);
}

TEST_CASE("polya-vinogradov: decomposition, hypothesis check, oracle sum") {
    auto f = Field::get(3);

    // l = t^3 decomposes as (t, t)
    auto [l1, l2] = squarefree_decompose(P(f, {0, 0, 0, 1}));
    CHECK(l1 == Poly::t(f));
    CHECK(l2 == Poly::t(f));

    // l = t^2 is a perfect square: hypothesis violation
    CHECK_THROWS(polya_vinogradov_ratio(f, 4, P(f, {0, 0, 1})));

    // l = t, q=3, n=4: oracle = direct sum over H_4
    int64_t oracle = 0;
    EnsembleCursor cur = EnsembleCursor::full(f, EnsembleKind::Hn, 4);
    Poly D;
    while (cur.next(D)) oracle += jacobi_symbol(D, Poly::t(f));
    PolyaVinogradov pv = polya_vinogradov_ratio(f, 4, Poly::t(f));
    CHECK(pv.abs_sum == uint64_t(oracle < 0 ? -oracle : oracle));
    CHECK(pv.bound_base == doctest::Approx(std::sqrt(54.0)));
    CHECK(pv.l1 == Poly::t(f));
}

TEST_CASE("QuadChar rejects bad moduli") {
    auto f = Field::get(3);
    CHECK_THROWS(QuadChar(P(f, {1, 2, 1})));             // (t+1)^2 not square-free
    CHECK_THROWS(QuadChar(P(f, {1, 1}).scaled(2)));      // not monic
}
