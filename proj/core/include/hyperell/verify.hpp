#ifndef HYPERELL_VERIFY_HPP
#define HYPERELL_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "hyperell/moments.hpp"
#include "hyperell/poly.hpp"

namespace hyperell {

/// One verification suite outcome.  `stat` is the suite's headline number
/// (max defect, max ratio, ... as documented per suite); rows are CSV-ready
/// detail lines.
struct SuiteResult {
    std::string name;
    bool pass = false;
    uint64_t checked = 0;
    double stat = 0.0;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::string note;
};

/// Exact star-coefficient functional equation over all D in H_n, nmin <= n <= nmax.
SuiteResult verify_fe(const FieldPtr& f, int nmin, int nmax, unsigned threads = 0);

/// All roots of L* on |u| = q^{-1/2} within tol; stat = max radial error.
SuiteResult verify_rh(const FieldPtr& f, int nmin, int nmax, double tol = 1e-8, unsigned threads = 0);

/// Approximate functional equation at each s; stat = max relative defect.
SuiteResult verify_afe(const FieldPtr& f, int nmax, const std::vector<double>& s_values,
                       double tol = 1e-10, unsigned threads = 0);

/// Exact N_k equality, direct count vs series extraction.
SuiteResult verify_pointcount(const FieldPtr& f, const std::vector<int>& ns, int k_max);

/// sum_{f in M_n} chi_D(f) = 0 for n >= deg D, by direct enumeration.
SuiteResult verify_charsum_vanishing(const FieldPtr& f, int dmax, int nmax);

/// Lemma 3.2 scaled errors over an n-grid and test polynomial set;
/// stat = (max over n of the per-n max scaled error) / (min over n of same).
SuiteResult verify_lemma32(const FieldPtr& f, const std::vector<int>& ns, int n_test_polys);

/// Polya-Vinogradov ratios |sum chi| / sqrt(|H_n|); recorded, stat = max ratio.
SuiteResult verify_lemma33(const FieldPtr& f, int n, int l_deg_max);

/// Prime-sum upper bound for log |L|; stat = max additive defect over the grid.
SuiteResult verify_lemma34(const FieldPtr& f, int nmax, const std::vector<int>& Ns,
                           const std::vector<double>& alphas, const std::vector<double>& thetas,
                           double C_max, unsigned threads = 0);

/// Cosine-sum bound; stat = max defect over the (theta, n) grid.
SuiteResult verify_lemma35(double C_max);

/// Even-moment bound of short prime character sums with random coefficients.
SuiteResult verify_lemma36(const FieldPtr& f, int n, const std::vector<int>& ls,
                           const std::vector<uint64_t>& seeds, double C_factor);

/// Zeta bounds near u = 1/q on both branches; stat = max ratio (recorded).
SuiteResult verify_lemma37(int q, const std::vector<int>& gs, const std::vector<double>& thetas);

/// b(P): exhaustive 4-factorization vs closed form on a config grid.
SuiteResult verify_bofp(const FieldPtr& f, int dmax, double tol = 1e-12);

/// Perron bookkeeping: direct sum vs coefficient extraction on shift configs.
SuiteResult verify_perron(const FieldPtr& f, int n_trunc_max, double tol = 1e-10);

/// Stirling bound s^{(k)}_{k-i} <= (k+1)! and rising-factorial expansion.
SuiteResult verify_stirling(int kmax);

} // namespace hyperell

#endif
