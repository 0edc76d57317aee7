#ifndef HYPERELL_FIELD_HPP
#define HYPERELL_FIELD_HPP

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyperell {

/// A finite field F_q with odd q = p^r, q <= 243 or so (desk scale).
///
/// Elements are table indices in [0, q).  For r = 1 the index is the residue
/// itself; for r > 1 the index encodes the coefficient vector over F_p in
/// base p (constant coefficient = least significant digit).  The quotient
/// modulus is the lexicographically smallest monic irreducible of degree r
/// over F_p, so a field is determined by (p, r) alone and instances are
/// cached and shared.
class Field {
public:
    using elem = uint8_t;

    static std::shared_ptr<const Field> get(int p, int r = 1);

    int p() const { return p_; }
    int r() const { return r_; }
    int q() const { return q_; }

    /// Modulus coefficients over F_p, ascending degree, size r+1; empty when r == 1.
    const std::vector<uint8_t>& modulus() const { return modulus_; }

    elem add(elem a, elem b) const { return add_[a * q_ + b]; }
    elem sub(elem a, elem b) const { return sub_[a * q_ + b]; }
    elem mul(elem a, elem b) const { return mul_[a * q_ + b]; }
    elem neg(elem a) const { return neg_[a]; }
    elem inv(elem a) const {
        if (a == 0) throw std::domain_error("Field::inv(0)");
        return inv_[a];
    }
    elem div(elem a, elem b) const { return mul(a, inv(b)); }

    /// Quadratic character of F_q*: +1 for nonzero squares, -1 otherwise, 0 at 0.
    int legendre(elem a) const { return chi2_[a]; }

    const elem* mul_table() const { return mul_.data(); }
    const elem* add_table() const { return add_.data(); }
    const elem* sub_table() const { return sub_.data(); }
    const elem* inv_table() const { return inv_.data(); }
    const int8_t* legendre_table() const { return chi2_.data(); }

    /// Element <-> text: "c" for r = 1, "a0/a1/..." (F_p digits) for r > 1.
    std::string elem_to_string(elem a) const;
    elem elem_from_string(const std::string& s) const;

    bool same(const Field& other) const { return p_ == other.p_ && r_ == other.r_; }

private:
    Field(int p, int r);

    int p_, r_, q_;
    std::vector<uint8_t> modulus_;
    std::vector<elem> add_, sub_, mul_, neg_, inv_;
    std::vector<int8_t> chi2_;
};

using FieldPtr = std::shared_ptr<const Field>;

/// Degree-k extension of F_q, built as F_q[t]/(m) with m the lexicographically
/// smallest monic irreducible of degree k.  Elements are coefficient vectors
/// over the base field (ascending, fixed length k).  Used for point counting,
/// where q^k stays tiny.
class ExtField {
public:
    using Elem = std::vector<uint8_t>;

    ExtField(FieldPtr base, int k);

    const FieldPtr& base() const { return base_; }
    int k() const { return k_; }
    uint64_t size() const { return size_; }
    uint64_t mult_group_order() const { return size_ - 1; }
    const std::vector<uint8_t>& modulus() const { return modulus_; }

    Elem zero() const { return Elem(k_, 0); }
    Elem from_base(uint8_t c) const;
    Elem from_index(uint64_t i) const;
    uint64_t index_of(const Elem& a) const;

    Elem add(const Elem& a, const Elem& b) const;
    Elem mul(const Elem& a, const Elem& b) const;
    bool is_zero(const Elem& a) const;

    /// +1 nonzero square, -1 nonsquare, 0 at zero.
    int legendre(const Elem& a) const;

private:
    FieldPtr base_;
    int k_;
    uint64_t size_;
    std::vector<uint8_t> modulus_;   // ascending over base, size k+1, monic
    std::vector<int8_t> chi_;        // indexed by element index
};

} // namespace hyperell

#endif
