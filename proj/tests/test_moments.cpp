#include <doctest.h>

#include <cmath>
#include <complex>
#include <set>

#include "hyperell/charsum.hpp"
#include "hyperell/enumerate.hpp"
#include "hyperell/moments.hpp"
#include "hyperell/verify.hpp"

using namespace hyperell;

namespace {

Poly P(FieldPtr f, std::initializer_list<int> coeffs) {
    std::vector<uint8_t> c;
    for (int v : coeffs) c.push_back(uint8_t(v));
    return Poly(f, std::move(c));
}

} // namespace

TEST_CASE("mu_sigma frozen examples") {
    SUBCASE("m=1, k=1, theta=pi, g=100") {
        PredictedMagnitude pm = mu_sigma(ShiftConfig{{1}, {M_PI}, {0.0}}, 100);
        CHECK(pm.mu == doctest::Approx(std::log(1.0 / (2.0 * M_PI))).epsilon(1e-14));
        CHECK(pm.mu == doctest::Approx(-1.8378770664093453).epsilon(1e-12));
    }

    SUBCASE("m=2, k=(1,2), theta=(0.5,0.25), g=10") {
        PredictedMagnitude pm = mu_sigma(ShiftConfig{{1, 2}, {0.5, 0.25}, {0.0, 0.0}}, 10);
        CHECK(pm.mu == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-14));
        double sigma = 10.0 * std::log(10.0) + 8.0 * std::log(2.0) +
                       8.0 * (std::log(4.0) + std::log(4.0 / 3.0));
        CHECK(pm.sigma == doctest::Approx(sigma).epsilon(1e-14));
    }

    SUBCASE("branch tie at theta = 1/(2g): both branches give g") {
        const int g = 100;
        PredictedMagnitude pm =
            mu_sigma(ShiftConfig{{1, 1}, {1.0 / (2 * g), 1.0 / (2 * g) + 1e-9}, {0.0, 0.0}}, g);
        CHECK(pm.F_single[0] == doctest::Approx(std::log(double(g))).epsilon(1e-12));
        CHECK(pm.F_single[1] == doctest::Approx(std::log(double(g))).epsilon(1e-6));
    }

    SUBCASE("degenerate config rejected") {
        CHECK_THROWS(mu_sigma(ShiftConfig{{1, 1}, {0.2, 0.2}, {0.0, 0.0}}, 10));
    }

    SUBCASE("c_v: finite entries only, +inf sentinel when none") {
        PredictedMagnitude a = mu_sigma(ShiftConfig{{1, 1}, {0.5 / 10, 1.0 / 10}, {0.0, 0.0}}, 10);
        CHECK(a.c_v == doctest::Approx(1.5));   // g|theta1+theta2| dominates
        PredictedMagnitude b = mu_sigma(ShiftConfig{{1, 1}, {1.0, 2.0}, {0.0, 0.0}}, 50);
        CHECK(std::isinf(b.c_v));
    }
}

TEST_CASE("alpha cap: alpha_j = O(1/g) enforced as 10/g") {
    ShiftConfig cfg{{1}, {0.1}, {0.3}};
    CHECK_NOTHROW(cfg.validate());
    CHECK_THROWS(cfg.validate_for_genus(50));    // 0.3 > 10/50
    CHECK_NOTHROW(cfg.validate_for_genus(30));   // 0.3 <= 10/30
}

TEST_CASE("tau_k spec examples") {
    auto f = Field::get(3);
    Poly prime = P(f, {1, 0, 1});
    CHECK(tau_k(2, prime * prime) == 3);
    CHECK(tau_k(5, Poly::one(f)) == 1);
    CHECK(tau_k(3, prime) == 3);
    CHECK(tau_k_prime_power(2, 2) == 3);
    CHECK(tau_k_prime_power(3, 1) == 3);
}

TEST_CASE("a_f coefficients") {
    auto f = Field::get(3);

    SUBCASE("a_1 = 1") {
        TruncatedSeries ts = build_af(f, ShiftConfig{{1, 1}, {0.3, 0.9}, {0.0, 0.0}}, 1.0);
        CHECK(ts.coeff(0, 0) == std::complex<double>(1.0, 0.0));
    }

    SUBCASE("a_P = k1 e^{i theta1 dP} + k2 e^{i theta2 dP}") {
        ShiftConfig cfg{{2, 3}, {0.4, 1.1}, {0.0, 0.0}};
        TruncatedSeries ts = build_af(f, cfg, 0.5);   // max_deg = 2
        for (const Poly& prime : primes_of_degree(f, 2)) {
            std::complex<double> expect = 2.0 * std::polar(1.0, 0.4 * 2) + 3.0 * std::polar(1.0, 1.1 * 2);
            CHECK(std::abs(ts.coeff(prime) - expect) < 1e-12);
        }
    }

    SUBCASE("theta = alpha = 0 collapses to tau_{k1+k2}, deg <= 4") {
        ShiftConfig cfg{{1, 2}, {0.0, 0.0}, {0.0, 0.0}};
        TruncatedSeries ts = build_af(f, cfg, 4.0 / 3.0);   // (k1+k2) X = 4
        REQUIRE(ts.max_deg() == 4);
        for (int d = 0; d <= 4; ++d) {
            uint64_t total = count_Mn(f, d);
            for (uint64_t i = 0; i < total; ++i) {
                Poly g = Poly::monic_from_index(f, d, i);
                CHECK(ts.coeff(d, i).real() == doctest::Approx(double(tau_k(3, g))).epsilon(1e-12));
                CHECK(std::abs(ts.coeff(d, i).imag()) < 1e-12);
            }
        }
    }
}

TEST_CASE("shifted moment: frozen n=3 value and independent oracle") {
    auto f = Field::get(3);
    MomentParams p;
    p.field = f;
    p.n = 3;
    p.cfg = ShiftConfig{{1}, {0.0}, {0.0}};
    MomentReport r = shifted_moment(p);
    CHECK(r.ensemble_size == 18);
    CHECK(r.S == doctest::Approx(88.0).epsilon(1e-12));

    // oracle: direct character sums, no Newton recurrence
    double S = 0.0;
    EnsembleCursor cur = EnsembleCursor::full(f, EnsembleKind::Hn, 3);
    Poly D;
    while (cur.next(D)) {
        QuadChar chi(D);
        double u = 1.0 / std::sqrt(3.0), val = 0.0, upow = 1.0;
        for (int i = 0; i <= 2; ++i) {
            val += double(char_sum_Mn(chi, i)) * upow;
            upow *= u;
        }
        S += val * val;
    }
    CHECK(r.S == doctest::Approx(S).epsilon(1e-12));
}

TEST_CASE("degree-1 ensemble: all L = 1, S = q") {
    auto f = Field::get(3);
    MomentParams p;
    p.field = f;
    p.n = 1;
    p.cfg = ShiftConfig{{2}, {0.7}, {0.0}};
    MomentReport r = shifted_moment(p);
    CHECK(r.S == doctest::Approx(3.0));
    CHECK(r.zero_count == 0);
}

TEST_CASE("moment is real non-negative and conjugation-symmetric") {
    auto f = Field::get(3);
    PrimeSweep sweep(f, 6);
    EnsembleCursor cur = EnsembleCursor::full(f, EnsembleKind::Hn, 7);
    Poly D;
    const double theta = 0.37, q = 3.0;
    while (cur.next(D)) {
        LPolynomial L = build_lpoly(sweep, D, true);
        std::complex<double> up = std::polar(1.0, theta) / std::sqrt(q);
        std::complex<double> um = std::polar(1.0, -theta) / std::sqrt(q);
        CHECK(std::norm(L.eval(up)) == doctest::Approx(std::norm(L.eval(um))).epsilon(1e-12));
    }
}

TEST_CASE("sampling: uniform over H_n members, deterministic in the seed") {
    auto f = Field::get(3);
    auto s1 = sample_Hn(f, 6, 500, 99);
    auto s2 = sample_Hn(f, 6, 500, 99);
    REQUIRE(s1.size() == 500);
    for (size_t i = 0; i < s1.size(); ++i) CHECK(s1[i] == s2[i]);
    for (const Poly& D : s1) {
        CHECK(D.degree() == 6);
        CHECK(D.is_monic());
        CHECK(is_squarefree(D));
    }
    auto s3 = sample_Hn(f, 6, 500, 100);
    bool same = true;
    for (size_t i = 0; i < s1.size(); ++i)
        if (!(s1[i] == s3[i])) same = false;
    CHECK_FALSE(same);
}

TEST_CASE("moment reports are identical across thread counts") {
    auto f = Field::get(3);
    MomentReport base;
    for (unsigned t : {1u, 4u, 8u}) {
        MomentParams p;
        p.field = f;
        p.n = 8;
        p.cfg = ShiftConfig{{1, 1}, {0.2, 0.9}, {0.0, 0.0}};
        p.threads = t;
        MomentReport r = shifted_moment(p);
        if (t == 1) {
            base = r;
        } else {
            CHECK(r.S == base.S);   // bitwise
            CHECK(r.S_over_H == base.S_over_H);
        }
    }
}

TEST_CASE("lower bound pipeline") {
    auto f = Field::get(3);

    SUBCASE("X -> 0: truncated series is 1, Cauchy-Schwarz sanity case") {
        MomentParams p;
        p.field = f;
        p.n = 5;
        p.cfg = ShiftConfig{{1, 1}, {0.3, 0.7}, {0.0, 0.0}};
        LowerBoundResult r = lower_bound_pipeline(p, 0.0);
        CHECK(r.trunc_deg == 0);
        CHECK(r.S2 == doctest::Approx(double(count_Hn(f, 5))).epsilon(1e-12));
        CHECK(r.cauchy_lower <= r.full_moment * (1.0 + 1e-9));
    }

    SUBCASE("q=3, n=5, k=(1,1), theta=(0.3,0.7): CS inequality and S2 oracle") {
        MomentParams p;
        p.field = f;
        p.n = 5;
        p.cfg = ShiftConfig{{1, 1}, {0.3, 0.7}, {0.0, 0.0}};
        LowerBoundResult r = lower_bound_pipeline(p);
        CHECK(r.S1 > 0.0);
        CHECK(r.S2 > 0.0);
        CHECK(r.cauchy_lower <= r.full_moment * (1.0 + 1e-9));
        // oracle for S2 at tiny truncation: direct double loop
        TruncatedSeries ts = build_af(f, p.cfg, 2.0 / 4.0);
        REQUIRE(ts.max_deg() == r.trunc_deg);
        double S2 = 0.0;
        EnsembleCursor cur = EnsembleCursor::full(f, EnsembleKind::Hn, 5);
        Poly D;
        while (cur.next(D)) {
            std::complex<double> tr = 0.0;
            for (int d = 0; d <= ts.max_deg(); ++d) {
                uint64_t tot = count_Mn(f, d);
                for (uint64_t i = 0; i < tot; ++i) {
                    int chi = jacobi_symbol(D, Poly::monic_from_index(f, d, i));
                    if (chi) tr += ts.coeff(d, i) * (double(chi) * std::pow(3.0, -0.5 * d));
                }
            }
            S2 += std::norm(tr);
        }
        CHECK(r.S2 == doctest::Approx(S2).epsilon(1e-10));
    }
}

TEST_CASE("tail histogram properties") {
    auto f = Field::get(3);
    MomentParams p;
    p.field = f;
    p.n = 9;
    p.cfg = ShiftConfig{{1}, {0.25}, {0.0}};   // 1/g with g=4
    std::vector<double> grid{-1e6, -4.0, -2.0, 0.0, 2.0, 4.0, 8.0, 1e6};
    TailHistogram h = tail_histogram(p, grid);
    CHECK(h.total == count_Hn(f, 9));
    CHECK(h.count[0] == h.total - h.zero_count);   // V -> -inf catches everything kept
    for (size_t i = 1; i < h.count.size(); ++i) CHECK(h.count[i] <= h.count[i - 1]);
    CHECK(h.count.back() == 0);
    CHECK(h.gaussian_ref[3] == doctest::Approx(double(h.total)));
}

TEST_CASE("section 5 decomposition") {
    auto f = Field::get(3);

    SUBCASE("a_j(P) weight: theta=pi flips the degree-1 sign") {
        ShiftConfig cpi{{1}, {M_PI}, {0.0}};
        ShiftConfig c0{{1}, {0.0}, {0.0}};
        auto rpi = section5_decomposition(f, 4, cpi, 2, 1);
        auto r0 = section5_decomposition(f, 4, c0, 2, 1);
        REQUIRE(rpi.S1.size() == r0.S1.size());
        for (size_t i = 0; i < rpi.S1.size(); ++i)
            CHECK(rpi.S1[i] == doctest::Approx(-r0.S1[i]).epsilon(1e-12));
    }

    SUBCASE("a_j(P) bounded by a recorded constant ~ 1") {
        ShiftConfig cfg{{1, 1}, {0.3, 1.1}, {0.05, 0.0}};
        auto r = section5_decomposition(f, 6, cfg, 4, 2);
        CHECK(r.max_abs_aj <= 1.0 + 1e-12);
    }

    SUBCASE("moment of S2(D) against the even-moment bound, l in {1,2,3}") {
        ShiftConfig cfg{{1}, {0.5}, {0.0}};
        const int n = 7;
        for (int l : {1, 2, 3}) {
            int N = n / (2 * l);
            if (N < 2) continue;
            int N0 = std::max(1, N - 1);
            auto r = section5_decomposition(f, n, cfg, N, N0);
            double lhs = 0.0;
            for (double v : r.S2) lhs += std::pow(v * v, l);
            double wsum = 0.0;
            for (int d = N0 + 1; d <= N; ++d) {
                double a_alpha = 1.0 / d - 1.0 / (d * std::pow(3.0, 2.0 * d));
                double aj = 2.0 * a_alpha * d * std::cos(0.5 * d);
                wsum += double(primes_of_degree(f, d).size()) * aj * aj / std::pow(3.0, d);
            }
            double fac = 1.0;
            for (int i = 2 * l; i > l; --i) fac *= i;
            for (int i = 0; i < l; ++i) fac /= 2.0;
            double rhs = 4.0 * double(count_Hn(f, n)) * fac * std::pow(wsum, l);
            CHECK(lhs <= rhs);
        }
    }
}

TEST_CASE("choose_section5_params branch selection") {
    auto a = choose_section5_params(2.0, 100, 10.0, 1.0, 3);
    CHECK(a.A == doctest::Approx(0.5 * std::log(10.0)));
    auto b = choose_section5_params(15.0, 100, 10.0, 0.01, 3);
    CHECK(b.A == doctest::Approx(10.0 * std::log(10.0) / (2.0 * 15.0)));
    auto c = choose_section5_params(1000.0, 100, 10.0, 1.0, 3);
    CHECK(c.A == doctest::Approx(7.0));
    CHECK(c.N >= 1);
    CHECK(c.N0 >= 1);
    CHECK((c.N0 < c.N || c.N == 1));
}

TEST_CASE("derivative moment: n=1 gives 0, n=7 matches direct oracle") {
    auto f = Field::get(3);
    auto z = derivative_moment(f, 1, 2, 1);
    CHECK(z.value == 0.0);

    auto r = derivative_moment(f, 7, 2, 1);
    double acc = 0.0;
    uint64_t cnt = 0;
    EnsembleCursor cur = EnsembleCursor::full(f, EnsembleKind::Hn, 7);
    Poly D;
    while (cur.next(D)) {
        LPolynomial L = build_lpoly(D);
        double u = 1.0 / std::sqrt(3.0), v = 0.0;
        for (int i = 1; i < int(L.c.size()); ++i) v += double(i) * double(L.c[i]) * std::pow(u, i - 1);
        acc += v * v;
        ++cnt;
    }
    CHECK(r.value == doctest::Approx(acc / double(cnt)).epsilon(1e-10));
    CHECK(r.predicted == doctest::Approx(std::pow(3.0, 5.0)));   // g^{k(k+1)/2 + lk}, g=3
}

TEST_CASE("lemma 3.5 cosine-sum grid stays under 2.0") {
    SuiteResult r = verify_lemma35(2.0);
    CHECK(r.pass);
    MESSAGE("lemma 3.5 max defect: ", r.stat);
}

TEST_CASE("lemma 3.6 bound with factor 4, q=3 n=7 (unit-scale)") {
    auto f = Field::get(3);
    SuiteResult r = verify_lemma36(f, 7, {1, 2, 3}, {1, 2, 3}, 4.0);
    CHECK(r.pass);
}

TEST_CASE("prime power sums extended by recurrence match swept values") {
    for (int q : {3, 5}) {
        auto f = Field::get(q);
        PrimeSweep small(f, 4), big(f, 8);
        for (int n : {3, 4, 5}) {
            EnsembleCursor cur = EnsembleCursor::full(f, EnsembleKind::Hn, n);
            Poly D;
            while (cur.next(D)) {
                LPolynomial a = build_lpoly(small, D, true, 8);
                LPolynomial b = build_lpoly(big, D, true);
                REQUIRE(a.s.size() == b.s.size());
                for (size_t i = 1; i < a.s.size(); ++i) CHECK(a.s[i] == b.s[i]);
            }
        }
    }
}
