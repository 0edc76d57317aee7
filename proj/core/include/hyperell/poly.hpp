#ifndef HYPERELL_POLY_HPP
#define HYPERELL_POLY_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hyperell/field.hpp"

namespace hyperell {

/// Element of F_q[t].  Coefficients ascending by degree, always canonical
/// (no trailing zeros); the zero polynomial has an empty coefficient vector
/// and degree() == -1 (sentinel, never used in arithmetic).  |f| = q^deg(f),
/// |0| = 0.  Immutable value type; all operations return fresh canonical
/// polynomials and require matching fields.
class Poly {
public:
    Poly() = default;
    Poly(FieldPtr f, std::vector<uint8_t> coeffs);

    static Poly zero(FieldPtr f) { return Poly(std::move(f), {}); }
    static Poly one(FieldPtr f) { return Poly(std::move(f), {1}); }
    static Poly constant(FieldPtr f, uint8_t c) { return Poly(std::move(f), {c}); }
    static Poly t(FieldPtr f) { return Poly(std::move(f), {0, 1}); }

    /// Monic polynomial of the given degree whose non-leading coefficients are
    /// the base-q digits of idx (c_0 least significant).  Inverse of lex_index().
    static Poly monic_from_index(FieldPtr f, int degree, uint64_t idx);

    const FieldPtr& field() const { return field_; }
    int degree() const { return int(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
    bool is_monic() const { return !c_.empty() && c_.back() == 1; }
    bool is_constant() const { return c_.size() <= 1; }
    uint8_t coeff(int i) const { return (i >= 0 && i < int(c_.size())) ? c_[i] : 0; }
    uint8_t leading() const { return c_.empty() ? 0 : c_.back(); }
    const std::vector<uint8_t>& coeffs() const { return c_; }

    /// q^degree; 0 for the zero polynomial.
    uint64_t norm() const;

    uint64_t lex_index() const;

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator%(const Poly& m) const { return divmod(m).second; }
    Poly operator/(const Poly& m) const { return divmod(m).first; }
    std::pair<Poly, Poly> divmod(const Poly& m) const;

    bool operator==(const Poly& o) const;
    bool operator!=(const Poly& o) const { return !(*this == o); }
    /// Order by (degree, then coefficients from highest down); zero first.
    bool operator<(const Poly& o) const;

    Poly scaled(uint8_t c) const;
    Poly monic_scaled() const;   // divide by leading coefficient; zero stays zero
    Poly derivative() const;     // formal derivative
    uint8_t eval(uint8_t x) const;

    std::string to_string() const;
    static Poly parse(FieldPtr f, const std::string& s);

private:
    void require_same_field(const Poly& o) const;

    FieldPtr field_;
    std::vector<uint8_t> c_;
};

Poly gcd(const Poly& a, const Poly& b);   // returned monic; gcd(0,0) = 0

} // namespace hyperell

#endif
