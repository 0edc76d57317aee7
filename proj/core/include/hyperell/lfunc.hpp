#ifndef HYPERELL_LFUNC_HPP
#define HYPERELL_LFUNC_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "hyperell/poly.hpp"

namespace hyperell {

/// The L-polynomial of a monic square-free D: L(u) = sum_f chi_D(f) u^{deg f},
/// a polynomial of degree <= deg(D) - 1 with integer coefficients
/// c_i = sum_{f in M_i} chi_D(f).  lambda = 1 iff deg(D) is even, in which
/// case (1 - u) divides L exactly and star = L / (1 - u) has degree
/// 2g = deg(D) - 1 - lambda and satisfies star_i = q^{i-g} star_{2g-i}.
///
/// s carries the prime power sums s_k = sum_{d | k} d * sum_{P in P_d}
/// chi_D(P)^{k/d} used by the coefficient recurrence and by the explicit
/// prime-sum bounds; kept because several verifier passes reuse it.
struct LPolynomial {
    Poly D;
    int lambda = 0;
    int g = 0;
    std::vector<int64_t> c;      // size deg(D), c[0] = 1
    std::vector<int64_t> star;   // size 2g + 1
    std::vector<int64_t> s;      // size sweep bound + 1, s[0] unused

    int q() const { return D.field()->q(); }
    std::complex<double> eval(std::complex<double> u) const;
    std::complex<double> eval_star(std::complex<double> u) const;
};

/// Shared per-(field, degree bound) flat prime table for fast sweeps.
/// Coefficients of all monic irreducibles of degree 1..dmax, contiguous.
class PrimeSweep {
public:
    PrimeSweep(FieldPtr f, int dmax);

    const FieldPtr& field() const { return field_; }
    int dmax() const { return dmax_; }
    int64_t prime_count(int d) const { return counts_[d]; }

    /// chi_D(P) for every stored prime; out[d] gets (sum of chi, count of zeros)
    /// per degree d.  D's coefficient buffer is passed in raw form.
    void sweep(const Poly& D, std::vector<int64_t>& sum_by_deg,
               std::vector<int64_t>& zeros_by_deg) const;

private:
    FieldPtr field_;
    int dmax_;
    std::vector<int64_t> counts_;          // [d] number of primes of degree d
    std::vector<uint32_t> offsets_;        // [d] start into coeff buffer (units of d+1)
    std::vector<uint8_t> coeffs_;          // packed ascending coefficients
    std::vector<uint32_t> offsets_f3_;     // [d] start into the bitsliced buffers
    std::vector<uint64_t> f3_lo_, f3_hi_;  // bitsliced primes, F_3 fields only
};

/// Build from prime symbol values (Newton recurrence on the Euler product).
/// Checks that D is monic square-free unless skip_checks.  s_extend_to > dmax
/// continues the power sums past the sweep via the same recurrence run in
/// reverse (c_k = 0 for k >= deg D), exact and sweep-free.
LPolynomial build_lpoly(const Poly& D);
LPolynomial build_lpoly(const PrimeSweep& sweep, const Poly& D, bool skip_checks = false,
                        int s_extend_to = 0);

struct FECheck {
    bool ok = true;
    int bad_index = -1;
};
/// Exact integer identity star_i = q^{i-g} star_{2g-i}.
FECheck verify_functional_equation(const LPolynomial& L);

struct EigenAngles {
    std::vector<double> angles;    // theta_j of inverse roots nu_j = sqrt(q) e^{i theta_j}
    double max_radius_err = 0.0;   // max | |u_j| - q^{-1/2} |
    double residual = 0.0;         // max |L*(u_j)|
};
/// Roots of L* via companion-matrix eigenvalues; throws if any root leaves
/// the circle |u| = q^{-1/2} by more than tol.
EigenAngles verify_rh(const LPolynomial& L, double tol = 1e-8);

struct AfeResult {
    double lhs = 0.0;        // L(s, chi_D) by direct evaluation at u = q^{-s}
    double rhs = 0.0;        // the four sums of the approximate functional equation
    double main_sum = 0.0, dual_sum = 0.0, corr1 = 0.0, corr2 = 0.0;
};
AfeResult approx_functional_equation(const LPolynomial& L, double s);

/// l-th derivative of u -> L(u) at u = q^{-1/2}; exact coefficient
/// differentiation, floating evaluation.
double derivative_value(const LPolynomial& L, int l);

struct PointCount {
    int k;
    int64_t direct;   // affine solutions of y^2 = D(x) over F_{q^k} plus points at infinity
    int64_t from_L;   // extracted from log Z_C via Newton power sums of star
};
std::vector<PointCount> point_count_crosscheck(const Poly& D, int k_max);

/// log|L(v q^{-1/2-alpha})| minus the two explicit terms of the prime-sum
/// upper bound; the additive O(1) constant of the inequality is whatever this
/// returns, so callers record/check its maximum.
double lemma34_defect(const LPolynomial& L, int N, double alpha, double theta);

/// One-line export record: D coeffs; lambda; g; c list; star list.
std::string lpoly_export_record(const LPolynomial& L);

} // namespace hyperell

#endif
