#include "hyperell/poly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace hyperell {

Poly::Poly(FieldPtr f, std::vector<uint8_t> coeffs) : field_(std::move(f)), c_(std::move(coeffs)) {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Poly Poly::monic_from_index(FieldPtr f, int degree, uint64_t idx) {
    if (degree < 0) throw std::invalid_argument("monic_from_index: degree < 0");
    std::vector<uint8_t> c(degree + 1, 0);
    const int q = f->q();
    for (int i = 0; i < degree; ++i) { c[i] = uint8_t(idx % q); idx /= q; }
    if (idx != 0) throw std::invalid_argument("monic_from_index: index out of range");
    c[degree] = 1;
    return Poly(std::move(f), std::move(c));
}

uint64_t Poly::norm() const {
    if (is_zero()) return 0;
    uint64_t n = 1;
    for (int i = 0; i < degree(); ++i) n *= uint64_t(field_->q());
    return n;
}

uint64_t Poly::lex_index() const {
    uint64_t idx = 0;
    for (int i = degree() - 1; i >= 0; --i) idx = idx * field_->q() + c_[i];
    return idx;
}

void Poly::require_same_field(const Poly& o) const {
    if (!field_ || !o.field_ || !field_->same(*o.field_))
        throw std::invalid_argument("Poly: field mismatch");
}

Poly Poly::operator+(const Poly& o) const {
    require_same_field(o);
    std::vector<uint8_t> c(std::max(c_.size(), o.c_.size()), 0);
    for (size_t i = 0; i < c.size(); ++i)
        c[i] = field_->add(i < c_.size() ? c_[i] : 0, i < o.c_.size() ? o.c_[i] : 0);
    return Poly(field_, std::move(c));
}

Poly Poly::operator-(const Poly& o) const {
    require_same_field(o);
    std::vector<uint8_t> c(std::max(c_.size(), o.c_.size()), 0);
    for (size_t i = 0; i < c.size(); ++i)
        c[i] = field_->sub(i < c_.size() ? c_[i] : 0, i < o.c_.size() ? o.c_[i] : 0);
    return Poly(field_, std::move(c));
}

Poly Poly::operator*(const Poly& o) const {
    require_same_field(o);
    if (is_zero() || o.is_zero()) return Poly(field_, {});
    std::vector<uint8_t> c(c_.size() + o.c_.size() - 1, 0);
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (size_t j = 0; j < o.c_.size(); ++j)
            c[i + j] = field_->add(c[i + j], field_->mul(c_[i], o.c_[j]));
    }
    return Poly(field_, std::move(c));
}

std::pair<Poly, Poly> Poly::divmod(const Poly& m) const {
    require_same_field(m);
    if (m.is_zero()) throw std::domain_error("Poly: division by zero polynomial");
    if (degree() < m.degree()) return {Poly(field_, {}), *this};
    std::vector<uint8_t> rem(c_);
    std::vector<uint8_t> quo(degree() - m.degree() + 1, 0);
    const uint8_t lead_inv = field_->inv(m.leading());
    for (int d = degree(); d >= m.degree(); --d) {
        uint8_t cd = rem[d];
        if (cd == 0) continue;
        uint8_t k = field_->mul(cd, lead_inv);
        quo[d - m.degree()] = k;
        for (int j = 0; j <= m.degree(); ++j)
            rem[d - m.degree() + j] = field_->sub(rem[d - m.degree() + j], field_->mul(k, m.c_[j]));
    }
    return {Poly(field_, std::move(quo)), Poly(field_, std::move(rem))};
}

bool Poly::operator==(const Poly& o) const {
    if (!field_ || !o.field_) return c_ == o.c_ && !field_ == !o.field_;
    return field_->same(*o.field_) && c_ == o.c_;
}

bool Poly::operator<(const Poly& o) const {
    if (degree() != o.degree()) return degree() < o.degree();
    for (int i = degree(); i >= 0; --i)
        if (c_[i] != o.c_[i]) return c_[i] < o.c_[i];
    return false;
}

Poly Poly::scaled(uint8_t k) const {
    std::vector<uint8_t> c(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) c[i] = field_->mul(c_[i], k);
    return Poly(field_, std::move(c));
}

Poly Poly::monic_scaled() const {
    if (is_zero() || is_monic()) return *this;
    return scaled(field_->inv(leading()));
}

Poly Poly::derivative() const {
    if (degree() < 1) return Poly(field_, {});
    std::vector<uint8_t> c(c_.size() - 1, 0);
    for (size_t i = 1; i < c_.size(); ++i) {
        // i * c_i in F_q: repeated addition, i < 32 at desk scale
        uint8_t v = 0;
        for (size_t j = 0; j < i % size_t(field_->p()); ++j) v = field_->add(v, c_[i]);
        c[i - 1] = v;
    }
    return Poly(field_, std::move(c));
}

uint8_t Poly::eval(uint8_t x) const {
    uint8_t acc = 0;
    for (int i = degree(); i >= 0; --i) acc = field_->add(field_->mul(acc, x), c_[i]);
    return acc;
}

std::string Poly::to_string() const {
    if (is_zero()) return field_->elem_to_string(0);
    std::ostringstream os;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (i) os << ',';
        os << field_->elem_to_string(c_[i]);
    }
    return os.str();
}

Poly Poly::parse(FieldPtr f, const std::string& s) {
    std::vector<uint8_t> c;
    std::istringstream is(s);
    std::string part;
    while (std::getline(is, part, ',')) c.push_back(f->elem_from_string(part));
    if (c.empty()) throw std::invalid_argument("Poly::parse: empty input");
    return Poly(std::move(f), std::move(c));
}

Poly gcd(const Poly& a, const Poly& b) {
    Poly x = a, y = b;
    while (!y.is_zero()) {
        Poly r = x % y;
        x = std::move(y);
        y = std::move(r);
    }
    return x.monic_scaled();
}

} // namespace hyperell
