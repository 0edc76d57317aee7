#ifndef HYPERELL_FACTOR_HPP
#define HYPERELL_FACTOR_HPP

#include <cstdint>
#include <vector>

#include "hyperell/poly.hpp"

namespace hyperell {

struct PrimePower {
    Poly prime;   // monic irreducible
    int mult;
};

/// Monic prime powers sorted by (degree, coefficient order), together with
/// the leading unit; unit * prod(prime^mult) reconstructs the input exactly.
struct Factorization {
    uint8_t unit = 1;
    std::vector<PrimePower> factors;
};

/// All monic irreducibles of degree d, coefficient order.  Cached per field;
/// built by trial division, desk-scale degrees only.
const std::vector<Poly>& primes_of_degree(const FieldPtr& f, int d);

/// Mobius-count of monic irreducibles of degree d: (1/d) sum_{e|d} mu(e) q^{d/e}.
uint64_t prime_count_formula(const FieldPtr& f, int d);

bool is_irreducible(const Poly& f);   // throws on constants
bool is_squarefree(const Poly& f);    // throws on zero

Factorization factorize(const Poly& f);          // throws on zero
Poly unfactorize(const FieldPtr& f, const Factorization& fac);
std::vector<Poly> divisors(const FieldPtr& f, const Factorization& fac);  // monic divisors

/// Number of ordered k-tuples of monic polynomials with product f.
int64_t tau_k(int k, const Poly& f);
int64_t tau_k_prime_power(int k, int e);   // binom(e+k-1, k-1)

/// von Mangoldt: deg(P) when f = P^e, else 0.
int von_mangoldt(const Poly& f);

} // namespace hyperell

#endif
