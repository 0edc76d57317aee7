#ifndef HYPERELL_ANALYTIC_HPP
#define HYPERELL_ANALYTIC_HPP

#include <complex>
#include <cstdint>
#include <gmpxx.h>
#include <vector>

#include "hyperell/moments.hpp"
#include "hyperell/poly.hpp"

namespace hyperell {

/// Truncated power series with ring arithmetic at a fixed order N
/// (coefficients 0..N; multiplication drops everything above N).
template <class T>
struct PowerSeries {
    int N = 0;
    std::vector<T> c;   // size N + 1

    explicit PowerSeries(int order = 0) : N(order), c(order + 1, T(0)) {}

    PowerSeries operator+(const PowerSeries& o) const {
        check(o);
        PowerSeries r(N);
        for (int i = 0; i <= N; ++i) r.c[i] = c[i] + o.c[i];
        return r;
    }
    PowerSeries operator-(const PowerSeries& o) const {
        check(o);
        PowerSeries r(N);
        for (int i = 0; i <= N; ++i) r.c[i] = c[i] - o.c[i];
        return r;
    }
    PowerSeries operator*(const PowerSeries& o) const {
        check(o);
        PowerSeries r(N);
        for (int i = 0; i <= N; ++i)
            for (int j = 0; i + j <= N; ++j) r.c[i + j] += c[i] * o.c[j];
        return r;
    }
    void check(const PowerSeries& o) const {
        if (N != o.N) throw std::invalid_argument("PowerSeries: order mismatch");
    }
};

/// Z(u) = 1/(1-qu): coefficients q^n, exact.
PowerSeries<mpq_class> zeta_series_exact(int q, int N);
PowerSeries<std::complex<double>> zeta_series(int q, int N);

/// b(l) for the m = 2 diagonal: sum over ordered 4-factorizations of l^2 of
/// tau_{k1} tau_{k1} tau_{k2} tau_{k2} weights times the shifted phases, times
/// prod_{P | l} (1 + 1/|P|)^{-1}.  Exhaustive enumeration (organized
/// multiplicatively over the primes of l).
std::complex<double> b_of_l(const Poly& l, const ShiftConfig& cfg);

/// Closed form of b(P) for irreducible P of degree dP (displayed identity).
std::complex<double> b_of_prime_closed_form(int q, int dP, const ShiftConfig& cfg);

struct PerronCheck {
    std::complex<double> direct;      // sum_{l in M_{<=N}} b(l)/|l|
    std::complex<double> extracted;   // sum_m q^{-m} B_m with B_m = [u^m] B(u)
    double diff;
};
PerronCheck perron_check(const FieldPtr& f, const ShiftConfig& cfg, int N_trunc);

/// Stirling numbers of the first kind in the paper's normalization:
/// s^{(k)}_{k-i} = e_i(1, ..., k).  stirling_first(k, i) returns that value.
int64_t stirling_first(int k, int i);

/// F_n(x) = x (x+1) ... (x+n-1); F_0 = 1.
double rising_factorial(int n, double x);
/// Exact monomial coefficients of F_n (index = power of x), for cross-checks.
std::vector<int64_t> rising_factorial_coeffs(int n);

/// Shift classification for the residue computation at finite g: which poles
/// sit inside the contour centred at 1/q.
struct ShiftClassification {
    bool single_finite[2] = {false, false};
    bool pair_sum_finite = false;    // theta_1 + theta_2
    bool pair_diff_finite = false;   // theta_1 - theta_2
    double c_v = 0.0;                // max over finite entries of g|.|; +inf if none
    int V = 0;                       // total pole order at u = 1/q minus 1
};
ShiftClassification classify_shifts(const ShiftConfig& cfg, int g);

struct ResidueMainTerm {
    int V = 0;
    double leading = 0.0;       // e_0 sum_n b_n (g/2)^{V+n} / (V+n)!
    double second_sum = 0.0;    // l = 1..V correction (d-weighted)
    double third_sum = 0.0;     // l > V correction ("paper-convention" d_n indexing)
    int n_terms = 0;
    bool converged = true;
    double c_v = 0.0;
    std::vector<std::complex<double>> b;   // the expansion coefficients b_n used
};
/// Evaluates the three sums of the residue expansion with caller-supplied
/// Taylor coefficients e of the analytic factor; X defaults to g/(2 sum k).
ResidueMainTerm residue_main_term(const ShiftConfig& cfg, int g, const std::vector<double>& e,
                                  double X = -1.0);

/// d_l of the appendix bookkeeping, with T playing the "V + n" of the formula.
/// Needs e[T - l] != 0.
double appendix_d(int l, int T, const std::vector<double>& e);

struct ZetaBoundCheck {
    double max_abs = 0.0;      // max |Z(uv)| over the sampled contour
    double comparator = 0.0;   // g (finite branch) or 1/|theta|
    bool finite_branch = false;
    double ratio = 0.0;        // max_abs / comparator
};
/// Samples |Z(uv)| on circles |u - 1/q| ~ 1/g per the two branches of the
/// zeta bound near the 1-line.
ZetaBoundCheck zeta_bound_check(int q, int g, double theta);

} // namespace hyperell

#endif
