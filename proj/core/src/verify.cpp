#include "hyperell/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hyperell/analytic.hpp"
#include "hyperell/charsum.hpp"
#include "hyperell/enumerate.hpp"
#include "hyperell/factor.hpp"
#include "hyperell/parallel.hpp"
#include "hyperell/report.hpp"

namespace hyperell {

namespace {

constexpr uint64_t kChunk = 4096;

struct CheckAccum {
    uint64_t checked = 0;
    uint64_t failures = 0;
    double max_stat = 0.0;

    static CheckAccum combine(CheckAccum a, const CheckAccum& b) {
        a.checked += b.checked;
        a.failures += b.failures;
        a.max_stat = std::max(a.max_stat, b.max_stat);
        return a;
    }
};

// run fn over every D in H_n for nmin <= n <= nmax; fn updates a CheckAccum.
// s_extend: continue the prime power sums past the sweep (exact, recurrence).
template <class Fn>
CheckAccum sweep_ensembles(const FieldPtr& f, int nmin, int nmax, unsigned threads, int s_extend,
                           Fn fn) {
    CheckAccum total;
    for (int n = nmin; n <= nmax; ++n) {
        PrimeSweep sweep(f, std::max(n - 1, 1));
        uint64_t space = count_Mn(f, n);
        CheckAccum acc = parallel_reduce_chunks<CheckAccum>(
            space, kChunk, resolve_threads(threads),
            [&](uint64_t b, uint64_t e) {
                CheckAccum a;
                EnsembleCursor cur = EnsembleCursor::range(f, EnsembleKind::Hn, n, b, e);
                Poly D;
                while (cur.next(D)) {
                    LPolynomial L = build_lpoly(sweep, D, true, s_extend);
                    fn(L, a);
                }
                return a;
            },
            CheckAccum::combine, CheckAccum{});
        total = CheckAccum::combine(total, acc);
    }
    return total;
}

} // namespace

SuiteResult verify_fe(const FieldPtr& f, int nmin, int nmax, unsigned threads) {
    CheckAccum acc = sweep_ensembles(f, nmin, nmax, threads, 0, [](const LPolynomial& L, CheckAccum& a) {
        ++a.checked;
        if (!verify_functional_equation(L).ok) ++a.failures;
    });
    SuiteResult r;
    r.name = "fe";
    r.checked = acc.checked;
    r.pass = acc.failures == 0;
    r.stat = double(acc.failures);
    r.note = "exact star-coefficient identity, q=" + std::to_string(f->q());
    return r;
}

SuiteResult verify_rh(const FieldPtr& f, int nmin, int nmax, double tol, unsigned threads) {
    CheckAccum acc = sweep_ensembles(f, nmin, nmax, threads, 0, [&](const LPolynomial& L, CheckAccum& a) {
        ++a.checked;
        try {
            EigenAngles ea = verify_rh(L, tol);
            a.max_stat = std::max(a.max_stat, ea.max_radius_err);
        } catch (const std::exception&) {
            ++a.failures;
        }
    });
    SuiteResult r;
    r.name = "rh";
    r.checked = acc.checked;
    r.pass = acc.failures == 0;
    r.stat = acc.max_stat;
    r.note = "max | |u| - q^{-1/2} | over all roots";
    return r;
}

SuiteResult verify_afe(const FieldPtr& f, int nmax, const std::vector<double>& s_values, double tol,
                       unsigned threads) {
    CheckAccum acc = sweep_ensembles(f, 2, nmax, threads, 0, [&](const LPolynomial& L, CheckAccum& a) {
        ++a.checked;
        for (double s : s_values) {
            AfeResult res = approx_functional_equation(L, s);
            double defect = std::abs(res.lhs - res.rhs) / (1.0 + std::abs(res.lhs));
            a.max_stat = std::max(a.max_stat, defect);
            if (defect > tol) ++a.failures;
        }
    });
    SuiteResult r;
    r.name = "afe";
    r.checked = acc.checked;
    r.pass = acc.failures == 0;
    r.stat = acc.max_stat;
    r.note = "max relative |lhs-rhs|";
    return r;
}

SuiteResult verify_pointcount(const FieldPtr& f, const std::vector<int>& ns, int k_max) {
    SuiteResult r;
    r.name = "pointcount";
    r.columns = {"D", "k", "direct", "from_L"};
    uint64_t failures = 0;
    for (int n : ns) {
        EnsembleCursor cur = EnsembleCursor::full(f, EnsembleKind::Hn, n);
        Poly D;
        while (cur.next(D)) {
            for (const PointCount& pc : point_count_crosscheck(D, k_max)) {
                ++r.checked;
                if (pc.direct != pc.from_L) {
                    ++failures;
                    r.rows.push_back({D.to_string(), std::to_string(pc.k), std::to_string(pc.direct),
                                      std::to_string(pc.from_L)});
                }
            }
        }
    }
    r.pass = failures == 0;
    r.stat = double(failures);
    r.note = "exact N_k equality";
    return r;
}

SuiteResult verify_charsum_vanishing(const FieldPtr& f, int dmax, int nmax) {
    SuiteResult r;
    r.name = "charsum";
    uint64_t failures = 0;
    for (int d = 1; d <= dmax; ++d) {
        EnsembleCursor cur = EnsembleCursor::full(f, EnsembleKind::Hn, d);
        Poly D;
        while (cur.next(D)) {
            QuadChar chi(D);
            for (int n = d; n <= nmax; ++n) {
                ++r.checked;
                if (char_sum_Mn(chi, n) != 0) ++failures;
            }
        }
    }
    r.pass = failures == 0;
    r.stat = double(failures);
    r.note = "sum over M_n of chi_D vanishes for n >= deg D";
    return r;
}

SuiteResult verify_lemma32(const FieldPtr& f, const std::vector<int>& ns, int n_test_polys) {
    SuiteResult r;
    r.name = "lemma32";
    r.columns = {"n", "f", "empirical", "main", "scaled_err"};

    // fixed test set: first monic polynomials by (degree, index), skipping 1
    std::vector<Poly> tests;
    {
        EnsembleCursor cur = EnsembleCursor::full(f, EnsembleKind::MLeqN, 3);
        Poly g;
        cur.next(g);   // skip the constant 1
        while (int(tests.size()) < n_test_polys && cur.next(g)) tests.push_back(g);
    }

    double max_over_n = 0.0, min_over_n = std::numeric_limits<double>::infinity();
    for (int n : ns) {
        double per_n_max = 0.0;
        for (const Poly& t : tests) {
            SquareCharAverage avg = average_square_char(f, n, t);
            double scaled = avg.scaled_err.get_d();
            per_n_max = std::max(per_n_max, scaled);
            r.rows.push_back({std::to_string(n), t.to_string(), format_double(avg.empirical.get_d()),
                              format_double(avg.main.get_d()), format_double(scaled)});
            ++r.checked;
        }
        max_over_n = std::max(max_over_n, per_n_max);
        min_over_n = std::min(min_over_n, per_n_max);
    }
    r.stat = (min_over_n > 0.0) ? max_over_n / min_over_n : max_over_n;
    r.pass = std::isfinite(r.stat) && r.stat <= 3.0;
    r.note = "scaled error |avg - Euler|*|H_n| growth ratio across n grid";
    return r;
}

SuiteResult verify_lemma33(const FieldPtr& f, int n, int l_deg_max) {
    SuiteResult r;
    r.name = "lemma33";
    r.columns = {"l", "abs_sum", "sqrt_Hn", "ratio"};
    double max_ratio = 0.0;
    for (int d = 1; d <= l_deg_max; ++d) {
        uint64_t total = count_Mn(f, d);
        for (uint64_t idx = 0; idx < total; ++idx) {
            Poly l = Poly::monic_from_index(f, d, idx);
            auto [l1, l2] = squarefree_decompose(l);
            if (l1.is_one()) continue;   // perfect square: hypothesis fails
            PolyaVinogradov pv = polya_vinogradov_ratio(f, n, l);
            double ratio = double(pv.abs_sum) / pv.bound_base;
            max_ratio = std::max(max_ratio, ratio);
            r.rows.push_back({l.to_string(), std::to_string(pv.abs_sum), format_double(pv.bound_base),
                              format_double(ratio)});
            ++r.checked;
        }
    }
    r.stat = max_ratio;
    r.pass = true;   // empirical constant recorded, not asserted
    r.note = "max |sum chi| / sqrt(|H_n|) (C_eps recorded)";
    return r;
}

SuiteResult verify_lemma34(const FieldPtr& f, int nmax, const std::vector<int>& Ns,
                           const std::vector<double>& alphas, const std::vector<double>& thetas,
                           double C_max, unsigned threads) {
    int maxN = *std::max_element(Ns.begin(), Ns.end());
    CheckAccum acc =
        sweep_ensembles(f, 2, nmax, threads, maxN, [&](const LPolynomial& L, CheckAccum& a) {
            ++a.checked;
            for (int N : Ns)
                for (double alpha : alphas)
                    for (double theta : thetas) {
                        double defect = lemma34_defect(L, N, alpha, theta);
                        if (std::isfinite(defect)) a.max_stat = std::max(a.max_stat, defect);
                        // -inf (exact zero of L) satisfies the bound trivially
                        if (defect > C_max) ++a.failures;
                    }
        });
    SuiteResult r;
    r.name = "lemma34";
    r.checked = acc.checked;
    r.pass = acc.failures == 0;
    r.stat = acc.max_stat;
    r.note = "max additive defect of the log|L| prime-sum bound";
    return r;
}

SuiteResult verify_lemma35(double C_max) {
    SuiteResult r;
    r.name = "lemma35";
    double max_defect = -std::numeric_limits<double>::infinity();
    const std::vector<int> ns{10, 100, 1000, 10000};
    for (int i = 0; i < 50; ++i) {
        double theta = 1e-4 * std::pow(3.0 / 1e-4, i / 49.0);   // log-spaced in [1e-4, 3]
        for (int n : ns) {
            double sum = 0.0;
            for (int m = 1; m <= n; ++m) sum += std::cos(theta * m) / m;
            double bound = std::log(std::min(double(n), 1.0 / theta));
            max_defect = std::max(max_defect, sum - bound);
            ++r.checked;
        }
    }
    r.stat = max_defect;
    r.pass = max_defect <= C_max;
    r.note = "max of sum cos(theta m)/m - log min{n, 1/theta}";
    return r;
}

SuiteResult verify_lemma36(const FieldPtr& f, int n, const std::vector<int>& ls,
                           const std::vector<uint64_t>& seeds, double C_factor) {
    SuiteResult r;
    r.name = "lemma36";
    r.columns = {"l", "seed", "lhs", "rhs_bound", "ratio"};
    const double q = double(f->q());
    bool ok = true;
    double max_ratio = 0.0;

    for (int l : ls) {
        int y = n / (2 * l);   // 2 l y <= n
        if (y < 1) continue;
        PrimeSweep sweep(f, y);

        for (uint64_t seed : seeds) {
            // random complex a(P), |Re|,|Im| <= 1, indexed per degree then prime
            std::mt19937_64 gen(seed);
            std::uniform_real_distribution<double> unif(-1.0, 1.0);
            std::vector<std::vector<std::complex<double>>> a(y + 1);
            double weight_sum = 0.0;   // sum |a(P)|^2 / |P|
            for (int d = 1; d <= y; ++d) {
                const auto& ps = primes_of_degree(f, d);
                for (size_t i = 0; i < ps.size(); ++i) {
                    std::complex<double> av(unif(gen), unif(gen));
                    a[d].push_back(av);
                    weight_sum += std::norm(av) / std::pow(q, d);
                }
            }

            // LHS = sum over H_n of |sum_{deg P <= y} a(P) chi_D(P) / |P|^{1/2}|^{2l}
            uint64_t space = count_Mn(f, n);
            CompensatedSum lhs_acc = parallel_reduce_chunks<CompensatedSum>(
                space, kChunk, resolve_threads(0),
                [&](uint64_t bb, uint64_t ee) {
                    CompensatedSum cs;
                    EnsembleCursor cur = EnsembleCursor::range(f, EnsembleKind::Hn, n, bb, ee);
                    Poly D;
                    while (cur.next(D)) {
                        std::complex<double> inner = 0.0;
                        for (int d = 1; d <= y; ++d) {
                            const auto& ps = primes_of_degree(f, d);
                            double w = std::pow(q, -0.5 * d);
                            for (size_t i = 0; i < ps.size(); ++i) {
                                int chi = jacobi_symbol(D, ps[i]);
                                if (chi) inner += a[d][i] * (chi * w);
                            }
                        }
                        double pw = 1.0, n2 = std::norm(inner);
                        for (int e2 = 0; e2 < l; ++e2) pw *= n2;
                        cs.add(pw);
                    }
                    return cs;
                },
                [](CompensatedSum x, const CompensatedSum& y2) {
                    x.add(y2.value());
                    return x;
                },
                CompensatedSum{});

            double lhs = lhs_acc.value();
            double fac = 1.0;   // (2l)! / (l! 2^l)
            for (int i = 2 * l; i > l; --i) fac *= i;
            for (int i = 0; i < l; ++i) fac /= 2.0;
            double rhs = C_factor * double(count_Hn(f, n)) * fac * std::pow(weight_sum, l);
            double ratio = lhs / rhs;
            max_ratio = std::max(max_ratio, ratio);
            if (lhs > rhs) ok = false;
            r.rows.push_back({std::to_string(l), std::to_string(seed), format_double(lhs),
                              format_double(rhs), format_double(ratio)});
            ++r.checked;
        }
    }
    r.pass = ok;
    r.stat = max_ratio;
    r.note = "LHS <= C |H_n| (2l)!/(l! 2^l) (sum |a|^2/|P|)^l";
    return r;
}

SuiteResult verify_lemma37(int q, const std::vector<int>& gs, const std::vector<double>& thetas) {
    SuiteResult r;
    r.name = "lemma37";
    r.columns = {"g", "theta", "branch", "max_abs", "comparator", "ratio"};
    double max_ratio = 0.0;
    for (int g : gs)
        for (double theta : thetas) {
            ZetaBoundCheck z = zeta_bound_check(q, g, theta);
            max_ratio = std::max(max_ratio, z.ratio);
            r.rows.push_back({std::to_string(g), format_double(theta),
                              z.finite_branch ? "finite" : "infinite", format_double(z.max_abs),
                              format_double(z.comparator), format_double(z.ratio)});
            ++r.checked;
        }
    r.stat = max_ratio;
    r.pass = true;   // recorded constant
    r.note = "max |Z(uv)| / comparator over contours";
    return r;
}

SuiteResult verify_bofp(const FieldPtr& f, int dmax, double tol) {
    SuiteResult r;
    r.name = "bofp";
    // 5-point (k, theta, alpha) grid
    const std::vector<ShiftConfig> grid{
        {{1, 1}, {0.0, 0.0}, {0.0, 0.0}},
        {{1, 1}, {0.4, 1.1}, {0.0, 0.0}},
        {{1, 2}, {0.7, 0.2}, {0.05, 0.0}},
        {{2, 2}, {1.3, 2.1}, {0.0, 0.1}},
        {{2, 1}, {3.14159, 0.5}, {0.2, 0.3}},
    };
    double max_diff = 0.0;
    uint64_t failures = 0;
    for (int d = 1; d <= dmax; ++d)
        for (const Poly& P : primes_of_degree(f, d))
            for (const ShiftConfig& cfg : grid) {
                std::complex<double> lhs = b_of_l(P, cfg);
                std::complex<double> rhs = b_of_prime_closed_form(f->q(), d, cfg);
                double diff = std::abs(lhs - rhs);
                max_diff = std::max(max_diff, diff);
                if (diff > tol * std::max(1.0, std::abs(rhs))) ++failures;
                ++r.checked;
            }
    r.pass = failures == 0;
    r.stat = max_diff;
    r.note = "b(P) exhaustive vs closed form";
    return r;
}

SuiteResult verify_perron(const FieldPtr& f, int n_trunc_max, double tol) {
    SuiteResult r;
    r.name = "perron";
    r.columns = {"config", "N", "direct_re", "extracted_re", "diff"};
    const std::vector<ShiftConfig> grid{
        {{1, 1}, {0.4, 1.1}, {0.0, 0.0}},
        {{1, 1}, {0.0, 1.5707963267948966}, {0.0, 0.0}},
        {{1, 2}, {0.9, 0.3}, {0.1, 0.0}},
        {{2, 1}, {2.0, 0.6}, {0.0, 0.2}},
        {{2, 2}, {0.25, 2.5}, {0.05, 0.05}},
    };
    uint64_t failures = 0;
    double max_diff = 0.0;
    for (size_t ci = 0; ci < grid.size(); ++ci) {
        PerronCheck pc = perron_check(f, grid[ci], n_trunc_max);
        double rel = pc.diff / (1.0 + std::abs(pc.direct));
        max_diff = std::max(max_diff, rel);
        if (rel > tol) ++failures;
        r.rows.push_back({std::to_string(ci), std::to_string(n_trunc_max), format_double(pc.direct.real()),
                          format_double(pc.extracted.real()), format_double(pc.diff)});
        ++r.checked;
    }
    r.pass = failures == 0;
    r.stat = max_diff;
    r.note = "direct sum b(l)/|l| vs coefficient extraction";
    return r;
}

SuiteResult verify_stirling(int kmax) {
    SuiteResult r;
    r.name = "stirling";
    bool ok = true;
    for (int k = 1; k <= kmax; ++k) {
        int64_t bound = 1;
        for (int i = 2; i <= k + 1; ++i) bound *= i;
        for (int i = 0; i <= k; ++i) {
            ++r.checked;
            if (stirling_first(k, i) > bound) ok = false;
        }
        // expansion cross-check: F_{k}(x) coefficients match s^{(k-1)}_{m-1}
        auto coeffs = rising_factorial_coeffs(k);
        for (int m = 1; m <= k; ++m) {
            ++r.checked;
            if (coeffs[m] != stirling_first(k - 1, k - m)) ok = false;
        }
    }
    r.pass = ok;
    r.stat = 0.0;
    r.note = "s^{(k)}_{k-i} <= (k+1)! and rising-factorial expansion";
    return r;
}

} // namespace hyperell
