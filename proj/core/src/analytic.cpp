#include "hyperell/analytic.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "hyperell/enumerate.hpp"
#include "hyperell/factor.hpp"

namespace hyperell {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

PowerSeries<mpq_class> zeta_series_exact(int q, int N) {
    if (N < 0) throw std::invalid_argument("zeta_series_exact: N < 0");
    PowerSeries<mpq_class> z(N);
    mpq_class acc = 1;
    for (int n = 0; n <= N; ++n) {
        z.c[n] = acc;
        acc *= q;
    }
    return z;
}

PowerSeries<std::complex<double>> zeta_series(int q, int N) {
    PowerSeries<std::complex<double>> z(N);
    double acc = 1.0;
    for (int n = 0; n <= N; ++n) {
        z.c[n] = acc;
        acc *= q;
    }
    return z;
}

std::complex<double> b_of_l(const Poly& l, const ShiftConfig& cfg) {
    cfg.validate();
    if (cfg.m() != 2) throw std::invalid_argument("b_of_l: m = 2 required");
    if (!l.is_monic()) throw std::invalid_argument("b_of_l: l must be monic");

    const double q = double(l.field()->q());
    const int k1 = cfg.k[0], k2 = cfg.k[1];
    const double a1 = cfg.alpha[0], a2 = cfg.alpha[1];
    const double t1 = cfg.theta[0], t2 = cfg.theta[1];

    Factorization fac = factorize(l);

    // Exhaustive ordered 4-factorizations f1 f2 f3 f4 = l^2, enumerated as
    // independent exponent compositions per prime.  Each tuple contributes
    // tau_{k1}(f1) tau_{k1}(f2) tau_{k2}(f3) tau_{k2}(f4)
    //   |f1 f2|^{-a1} |f3 f4|^{-a2} e^{i t1 (d1 - d2) + i t2 (d3 - d4)}.
    std::complex<double> total = 0.0;
    size_t np = fac.factors.size();
    // deg1 accumulates d(f1) - d(f2), deg2 accumulates d(f3) - d(f4)
    std::function<void(size_t, double, double, double)> rec =
        [&](size_t pi, double tauw, double deg1, double deg2) {
            if (pi == np) {
                total += tauw * std::polar(1.0, t1 * deg1 + t2 * deg2);
                return;
            }
            const int dP = fac.factors[pi].prime.degree();
            const int E = 2 * fac.factors[pi].mult;
            for (int e1 = 0; e1 <= E; ++e1)
                for (int e2 = 0; e2 + e1 <= E; ++e2)
                    for (int e3 = 0; e3 + e2 + e1 <= E; ++e3) {
                        int e4 = E - e1 - e2 - e3;
                        double w = double(tau_k_prime_power(k1, e1)) * double(tau_k_prime_power(k1, e2)) *
                                   double(tau_k_prime_power(k2, e3)) * double(tau_k_prime_power(k2, e4));
                        w *= std::pow(q, -double(dP) * (a1 * (e1 + e2) + a2 * (e3 + e4)));
                        rec(pi + 1, tauw * w, deg1 + dP * (e1 - e2), deg2 + dP * (e3 - e4));
                    }
        };
    rec(0, 1.0, 0.0, 0.0);

    for (const auto& pp : fac.factors) {
        double nP = double(pp.prime.norm());
        total *= nP / (nP + 1.0);
    }
    return total;
}

std::complex<double> b_of_prime_closed_form(int q, int dP, const ShiftConfig& cfg) {
    cfg.validate();
    if (cfg.m() != 2) throw std::invalid_argument("b_of_prime_closed_form: m = 2 required");
    const double nP = std::pow(double(q), dP);
    const int k1 = cfg.k[0], k2 = cfg.k[1];

    std::complex<double> sum = 0.0;
    for (int j = 0; j < 2; ++j) {
        double kj = cfg.k[j];
        double w = kj * (kj + 1.0) / 2.0 / std::pow(nP, 2.0 * cfg.alpha[j]);
        for (int eps : {+1, -1}) sum += w * std::polar(1.0, 2.0 * eps * cfg.theta[j] * dP);
        sum += kj * kj / std::pow(nP, 2.0 * cfg.alpha[j]);
    }
    for (int e1 : {+1, -1})
        for (int e2 : {+1, -1})
            sum += double(k1) * k2 / std::pow(nP, cfg.alpha[0] + cfg.alpha[1]) *
                   std::polar(1.0, (e1 * cfg.theta[0] + e2 * cfg.theta[1]) * dP);
    return sum / (1.0 + 1.0 / nP);
}

PerronCheck perron_check(const FieldPtr& f, const ShiftConfig& cfg, int N_trunc) {
    if (N_trunc < 0 || N_trunc > 8) throw std::invalid_argument("perron_check: N_trunc in [0, 8]");
    const double q = double(f->q());

    std::complex<double> direct = 0.0;
    std::vector<std::complex<double>> B(N_trunc + 1, 0.0);   // B_m = sum_{l in M_m} b(l)
    for (int m = 0; m <= N_trunc; ++m) {
        uint64_t total = count_Mn(f, m);
        for (uint64_t idx = 0; idx < total; ++idx) {
            Poly l = Poly::monic_from_index(f, m, idx);
            std::complex<double> b = b_of_l(l, cfg);
            B[m] += b;
            direct += b / std::pow(q, m);
        }
    }
    std::complex<double> extracted = 0.0;
    for (int m = 0; m <= N_trunc; ++m) extracted += B[m] * std::pow(q, -m);

    PerronCheck out;
    out.direct = direct;
    out.extracted = extracted;
    out.diff = std::abs(direct - extracted);
    return out;
}

int64_t stirling_first(int k, int i) {
    if (i < 0 || i > k) throw std::invalid_argument("stirling_first: need 0 <= i <= k");
    // e_i(1..k) by DP
    std::vector<int64_t> e(i + 1, 0);
    e[0] = 1;
    for (int v = 1; v <= k; ++v)
        for (int j = std::min(i, v); j >= 1; --j) e[j] += e[j - 1] * v;
    return e[i];
}

double rising_factorial(int n, double x) {
    if (n < 0) throw std::invalid_argument("rising_factorial: n < 0");
    double acc = 1.0;
    for (int j = 0; j < n; ++j) acc *= (x + j);
    return acc;
}

std::vector<int64_t> rising_factorial_coeffs(int n) {
    // F_n(x) = x (x+1) ... (x+n-1); coefficients ascending in x
    std::vector<int64_t> c{1};
    if (n == 0) return c;
    c = {0, 1};   // x
    for (int j = 1; j < n; ++j) {
        std::vector<int64_t> nxt(c.size() + 1, 0);
        for (size_t i = 0; i < c.size(); ++i) {
            nxt[i] += c[i] * j;
            nxt[i + 1] += c[i];
        }
        c = std::move(nxt);
    }
    return c;
}

ShiftClassification classify_shifts(const ShiftConfig& cfg, int g) {
    cfg.validate();
    if (cfg.m() != 2) throw std::invalid_argument("classify_shifts: m = 2 required");
    ShiftClassification out;
    const int k1 = cfg.k[0], k2 = cfg.k[1];
    double cv = -1.0;

    for (int j = 0; j < 2; ++j) {
        double v = g * std::abs(cfg.theta[j]);
        out.single_finite[j] = v <= kSingleShiftFiniteThreshold + 1e-12;
        if (out.single_finite[j]) cv = std::max(cv, v);
    }
    double vsum = g * std::abs(cfg.theta[0] + cfg.theta[1]);
    double vdiff = g * std::abs(cfg.theta[0] - cfg.theta[1]);
    out.pair_sum_finite = vsum <= kPairShiftFiniteThreshold + 1e-12;
    out.pair_diff_finite = vdiff <= kPairShiftFiniteThreshold + 1e-12;
    if (out.pair_sum_finite) cv = std::max(cv, vsum);
    if (out.pair_diff_finite) cv = std::max(cv, vdiff);
    out.c_v = cv < 0.0 ? std::numeric_limits<double>::infinity() : cv;

    out.V = k1 * k1 + k2 * k2;
    for (int j = 0; j < 2; ++j)
        if (out.single_finite[j]) out.V += cfg.k[j] * (cfg.k[j] + 1);
    if (out.pair_sum_finite) out.V += 2 * k1 * k2;
    if (out.pair_diff_finite) out.V += 2 * k1 * k2;
    return out;
}

namespace {

// log e_i(1/1, ..., 1/n) table (stable in log space), i <= imax, n <= nmax.
struct RecipElemSym {
    int imax, nmax;
    std::vector<double> tab;   // [i * (nmax+1) + n]

    RecipElemSym(int imax_, int nmax_) : imax(imax_), nmax(nmax_), tab(size_t(imax + 1) * (nmax + 1), -INFINITY) {
        auto at = [&](int i, int n) -> double& { return tab[size_t(i) * (nmax + 1) + n]; };
        for (int n = 0; n <= nmax; ++n) at(0, n) = 0.0;
        for (int i = 1; i <= imax; ++i)
            for (int n = i; n <= nmax; ++n) {
                double a = at(i, n - 1);
                double b = at(i - 1, n - 1) - std::log(double(n));
                at(i, n) = std::max(a, b) + std::log1p(std::exp(-std::abs(a - b)));
            }
    }
    double log_e(int i, int n) const {
        if (i == 0) return 0.0;
        if (i > n) return -INFINITY;
        return tab[size_t(i) * (nmax + 1) + n];
    }
};

// s^{(j-1)}_{m-1} * m! / j!  =  e_{m-1}(1, 1/2, ..., 1/(j-1)) * m! / j
double stirling_ratio(const RecipElemSym& tab, int m, int j) {
    double lg = std::lgamma(double(m) + 1.0) + tab.log_e(m - 1, j - 1) - std::log(double(j));
    return std::exp(lg);
}

} // namespace

double appendix_d(int l, int T, const std::vector<double>& e) {
    if (l == 0) return 1.0;
    if (l < 0 || l > T - 1) throw std::invalid_argument("appendix_d: need 0 <= l <= T-1");
    auto ee = [&](int i) { return i >= 0 && i < int(e.size()) ? e[i] : 0.0; };
    if (ee(T - l) == 0.0) throw std::invalid_argument("appendix_d: e[T-l] must be nonzero");
    RecipElemSym tab(l, T);
    double acc = 0.0;
    for (int j = l + 1; j <= T; ++j) {
        double el = ee(T - j);
        if (el != 0.0) acc += el * stirling_ratio(tab, l, j);
    }
    return 1.0 + acc / ee(T - l);
}

ResidueMainTerm residue_main_term(const ShiftConfig& cfg, int g, const std::vector<double>& e,
                                  double X) {
    cfg.validate();
    if (cfg.m() != 2) throw std::invalid_argument("residue_main_term: m = 2 required");
    if (g < 2) throw std::invalid_argument("residue_main_term: g >= 2 required");
    if (e.empty() || e[0] == 0.0) throw std::invalid_argument("residue_main_term: need e[0] != 0");
    const int K = cfg.k_total();
    if (X < 0.0) X = double(g) / (2.0 * K);
    const double x = K * X;   // the rising-factorial argument; g/2 at the default X

    ShiftClassification cls = classify_shifts(cfg, g);
    const int V = cls.V;

    // b-series: product over finite-shift factors of (1 + z/(1-qu))^{-M},
    // expanded with the negative-binomial series.  The unit prefactors cancel
    // in conjugate pairs, so the product below is the full correction series.
    struct Factor {
        std::complex<double> z;
        int M;
    };
    std::vector<Factor> factors;
    for (int j = 0; j < 2; ++j)
        if (cls.single_finite[j]) {
            int M = cfg.k[j] * (cfg.k[j] + 1) / 2;
            for (int eps : {+1, -1})
                factors.push_back({std::polar(1.0, -2.0 * eps * cfg.theta[j]) - 1.0, M});
        }
    if (cls.pair_sum_finite)
        for (int eps : {+1, -1})
            factors.push_back({std::polar(1.0, -double(eps) * (cfg.theta[0] + cfg.theta[1])) - 1.0,
                               cfg.k[0] * cfg.k[1]});
    if (cls.pair_diff_finite)
        for (int eps : {+1, -1})
            factors.push_back({std::polar(1.0, -double(eps) * (cfg.theta[0] - cfg.theta[1])) - 1.0,
                               cfg.k[0] * cfg.k[1]});

    constexpr int kMaxTerms = 500;
    std::vector<std::complex<double>> b(kMaxTerms + 1, 0.0);
    b[0] = 1.0;
    for (const Factor& fac : factors) {
        // series (1 + z x)^{-M} = sum_n (-1)^n C(M+n-1, n) z^n x^n, x = 1/(1-qu)
        std::vector<std::complex<double>> fs(kMaxTerms + 1);
        fs[0] = 1.0;
        double binom = 1.0;
        std::complex<double> zn = 1.0;
        for (int n = 1; n <= kMaxTerms; ++n) {
            binom *= double(fac.M + n - 1) / n;
            zn *= fac.z;
            fs[n] = ((n & 1) ? -1.0 : 1.0) * binom * zn;
        }
        std::vector<std::complex<double>> nb(kMaxTerms + 1, 0.0);
        for (int i = 0; i <= kMaxTerms; ++i) {
            if (b[i] == 0.0) continue;
            for (int j = 0; i + j <= kMaxTerms; ++j) nb[i + j] += b[i] * fs[j];
        }
        b = std::move(nb);
    }

    ResidueMainTerm out;
    out.V = V;
    out.c_v = cls.c_v;
    out.b.assign(b.begin(), b.begin() + std::min<size_t>(b.size(), 64));

    auto ee = [&](int i) { return i >= 0 && i < int(e.size()) ? e[i] : 0.0; };

    // third-sum convention: the appendix d_n divides by e_{T-n} = e_V
    bool third_active = false;
    for (size_t i = V + 1; i < e.size(); ++i)
        if (e[i] != 0.0) third_active = true;
    if (third_active && ee(V) == 0.0)
        throw std::invalid_argument("residue_main_term: e[V] = 0 but e[V+l] != 0; third sum undefined");

    // shared tables sized for the largest T we may touch
    const int Tmax = V + kMaxTerms;
    RecipElemSym tab(std::min(Tmax, V + kMaxTerms), Tmax);

    double lead = 0.0, second = 0.0, third = 0.0;
    int small_streak = 0;
    int n = 0;
    for (; n <= kMaxTerms; ++n) {
        const int T = V + n;
        // x^{V+n} / (V+n)!  computed stably as prod x/(i)
        double lx = (V + n) * std::log(x) - std::lgamma(double(V + n) + 1.0);
        double xpow_fact = std::exp(lx);
        double bn = b[n].real();   // imaginary parts cancel by conjugate pairing
        double lead_term = e[0] != 0.0 ? ee(0) * bn * xpow_fact : 0.0;
        lead += lead_term;

        // second sum: l = 1..V, power T - l, coefficient e_l b_n d_{T-l}
        for (int l = 1; l <= V; ++l) {
            double el = ee(l);
            if (el == 0.0) continue;
            int mpow = T - l;
            double lx2 = mpow * std::log(x) - std::lgamma(double(mpow) + 1.0);
            // e_l * d_{T-l} = e_l + sum_{j > T-l} e_{T-j} s-ratio  (the combined
            // coefficient; no division by e)
            double comb = el;
            if (mpow >= 1) {
                for (int j = mpow + 1; j <= T; ++j) {
                    double ej = ee(T - j);
                    if (ej != 0.0) comb += ej * stirling_ratio(tab, mpow, j);
                }
            }
            second += bn * comb * std::exp(lx2);
        }

        // third sum: e_{V+l} b_{n+l} d_n with the appendix T = V + n convention
        for (int l = 1; l + V < int(e.size()); ++l) {
            double evl = ee(V + l);
            if (evl == 0.0 || n + l > kMaxTerms) continue;
            double dn = 1.0;
            if (n >= 1) {
                double acc = 0.0;
                for (int j = n + 1; j <= T; ++j) {
                    double ej = ee(T - j);
                    if (ej != 0.0) acc += ej * stirling_ratio(tab, n, j);
                }
                dn = 1.0 + acc / ee(V);
            }
            double lx3 = n * std::log(x) - std::lgamma(double(n) + 1.0);
            third += evl * b[n + l].real() * dn * std::exp(lx3);
        }

        if (std::abs(lead_term) < 1e-14 * (std::abs(lead) + 1e-300)) {
            if (++small_streak >= 3) break;
        } else {
            small_streak = 0;
        }
    }
    out.n_terms = n;
    out.converged = n <= kMaxTerms;
    if (!out.converged) throw std::runtime_error("residue_main_term: series did not converge in 500 terms");
    out.leading = lead;
    out.second_sum = second;
    out.third_sum = third;
    return out;
}

ZetaBoundCheck zeta_bound_check(int q, int g, double theta) {
    if (!(theta > -kPi && theta < kPi)) throw std::invalid_argument("zeta_bound_check: theta in (-pi, pi)");
    ZetaBoundCheck out;
    const std::complex<double> v = std::polar(1.0, theta);
    const double gt = g * std::abs(theta);
    out.finite_branch = gt <= kSingleShiftFiniteThreshold + 1e-12;

    auto scan_circle = [&](double radius) {
        double mx = 0.0;
        for (int i = 0; i < 720; ++i) {
            std::complex<double> u = 1.0 / double(q) + std::polar(radius, 2.0 * kPi * i / 720.0);
            mx = std::max(mx, std::abs(1.0 / (1.0 - double(q) * u * v)));
        }
        return mx;
    };

    if (out.finite_branch) {
        double rt = std::max(gt, 0.05);   // guard the degenerate theta -> 0 point-circle
        out.max_abs = scan_circle(rt / g);
        out.comparator = double(g);
    } else {
        for (double r : {0.5, 1.0, 2.0}) out.max_abs = std::max(out.max_abs, scan_circle(r / g));
        out.comparator = 1.0 / std::abs(theta);
    }
    out.ratio = out.max_abs / out.comparator;
    return out;
}

} // namespace hyperell
