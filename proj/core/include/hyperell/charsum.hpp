#ifndef HYPERELL_CHARSUM_HPP
#define HYPERELL_CHARSUM_HPP

#include <cstdint>
#include <gmpxx.h>
#include <optional>
#include <vector>

#include "hyperell/factor.hpp"
#include "hyperell/poly.hpp"

namespace hyperell {

constexpr uint64_t kDefaultEnumCap = 20'000'000;

/// Quadratic residue symbol (a/P) by the Euler criterion a^{(|P|-1)/2} mod P.
/// Ground-truth oracle; P must be monic irreducible (checked).
int residue_symbol(const Poly& a, const Poly& P);

/// Same value via the quadratic-reciprocity Euclidean chain; no
/// irreducibility check, so it also computes Jacobi symbols (m monic,
/// possibly composite).  Carries the (-1)^{((q-1)/2) deg.deg} sign, which is
/// always +1 when q = 1 mod 4.
int jacobi_symbol(const Poly& a, const Poly& m);

/// Raw kernel on coefficient buffers: b monic of degree db >= 1, a of degree
/// <= da (entries above its true degree must be zero).  Both buffers are
/// clobbered.  This is the hot path of every ensemble sweep.
int jacobi_kernel(const Field& F, uint8_t* a, int da, uint8_t* b, int db);

/// Bitsliced F_3 variant: bit j of lo/hi flags coefficient j being 1/2.
/// b monic of degree db >= 1; degrees up to 63.
int jacobi_kernel_f3(uint64_t alo, uint64_t ahi, uint64_t blo, uint64_t bhi, int db);
void pack_f3(const uint8_t* coeffs, int len, uint64_t& lo, uint64_t& hi);

/// chi_D = (D/.), the quadratic character attached to a monic square-free D,
/// extended multiplicatively to all monic f.  chi(f) = 0 iff gcd(f, D) != 1.
class QuadChar {
public:
    explicit QuadChar(Poly D, bool cache_factorization = false);

    const Poly& modulus() const { return D_; }
    int chi(const Poly& monic_f) const;

private:
    Poly D_;
    std::optional<Factorization> fac_;
};

/// Exact sum over all monic f of degree n of chi_D(f); zero once n >= deg D.
int64_t char_sum_Mn(const QuadChar& D, int n);

/// Lemma-3.2 style average of chi_D(f^2) over H_n, exact rationals.
struct SquareCharAverage {
    mpq_class empirical;    // |H_n|^{-1} #: {D in H_n coprime to f}
    mpq_class main;         // prod_{P|f} (1 + 1/|P|)^{-1}
    mpq_class scaled_err;   // |empirical - main| * |H_n|
};
SquareCharAverage average_square_char(const FieldPtr& f, int n, const Poly& poly,
                                      uint64_t cap = kDefaultEnumCap);

/// Polya-Vinogradov data for non-square l: exact |sum_{D in H_n} chi_D(l)|,
/// sqrt(|H_n|), and the square-free decomposition l = l1 * l2^2.
struct PolyaVinogradov {
    uint64_t abs_sum;
    double bound_base;
    Poly l1, l2;
};
PolyaVinogradov polya_vinogradov_ratio(const FieldPtr& f, int n, const Poly& l,
                                       uint64_t cap = kDefaultEnumCap);

/// Square-free decomposition helper (l = l1 * l2^2 with l1 square-free).
std::pair<Poly, Poly> squarefree_decompose(const Poly& l);

} // namespace hyperell

#endif
