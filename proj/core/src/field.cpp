#include "hyperell/field.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

namespace hyperell {

namespace {

bool is_prime_int(int n) {
    if (n < 2) return false;
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Minimal F_p[x] helpers on digit vectors (ascending, trimmed), used only to
// construct field tables.  Poly proper lives in poly.hpp and depends on Field.
using Vec = std::vector<int>;

Vec trim(Vec a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

Vec mul_mod_p(const Vec& a, const Vec& b, int p) {
    if (a.empty() || b.empty()) return {};
    Vec c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    return trim(c);
}

Vec mod_p(Vec a, const Vec& m, int p) {
    a = trim(std::move(a));
    const int dm = int(m.size()) - 1;
    while (int(a.size()) - 1 >= dm) {
        int da = int(a.size()) - 1;
        int lead = a[da];                       // m monic
        for (int j = 0; j <= dm; ++j) {
            int& t = a[da - dm + j];
            t = ((t - lead * m[j]) % p + p) % p;
        }
        a = trim(std::move(a));
        if (a.empty()) break;
    }
    return a;
}

bool divides(const Vec& d, Vec a, int p) { return mod_p(std::move(a), d, p).empty(); }

// Irreducibility over F_p by trial division; degrees here are <= 3 (q <= 9 in
// practice), so cost is irrelevant.
bool irreducible_fp(const Vec& f, int p) {
    int df = int(f.size()) - 1;
    if (df < 1) return false;
    // enumerate monic divisors of degree 1..df/2
    for (int d = 1; 2 * d <= df; ++d) {
        uint64_t total = 1;
        for (int i = 0; i < d; ++i) total *= uint64_t(p);
        for (uint64_t idx = 0; idx < total; ++idx) {
            Vec g(d + 1, 0);
            uint64_t t = idx;
            for (int i = 0; i < d; ++i) { g[i] = int(t % p); t /= p; }
            g[d] = 1;
            if (divides(g, f, p)) return false;
        }
    }
    return true;
}

Vec smallest_irreducible_fp(int p, int r) {
    uint64_t total = 1;
    for (int i = 0; i < r; ++i) total *= uint64_t(p);
    for (uint64_t idx = 0; idx < total; ++idx) {
        Vec f(r + 1, 0);
        uint64_t t = idx;
        for (int i = 0; i < r; ++i) { f[i] = int(t % p); t /= p; }
        f[r] = 1;
        if (irreducible_fp(f, p)) return f;
    }
    throw std::logic_error("no irreducible modulus found");   // impossible
}

} // namespace

Field::Field(int p, int r) : p_(p), r_(r) {
    if (!is_prime_int(p) || p == 2) throw std::invalid_argument("Field: p must be an odd prime");
    if (r < 1) throw std::invalid_argument("Field: r must be >= 1");
    q_ = 1;
    for (int i = 0; i < r; ++i) {
        q_ *= p;
        if (q_ > 255) throw std::invalid_argument("Field: q too large for table representation");
    }

    Vec mod;
    if (r > 1) {
        mod = smallest_irreducible_fp(p, r);
        modulus_.assign(mod.begin(), mod.end());
    }

    auto digits = [&](int idx) {
        Vec v(r_, 0);
        for (int i = 0; i < r_; ++i) { v[i] = idx % p_; idx /= p_; }
        return trim(std::move(v));
    };
    auto index = [&](const Vec& v) {
        int idx = 0;
        for (int i = int(v.size()) - 1; i >= 0; --i) idx = idx * p_ + v[i];
        // v is ascending; recompute properly
        idx = 0;
        int pw = 1;
        for (size_t i = 0; i < v.size(); ++i) { idx += v[i] * pw; pw *= p_; }
        return idx;
    };

    add_.resize(size_t(q_) * q_);
    mul_.resize(size_t(q_) * q_);
    neg_.resize(q_);
    inv_.assign(q_, 0);
    chi2_.assign(q_, -1);

    for (int a = 0; a < q_; ++a) {
        Vec va = digits(a);
        for (int b = 0; b < q_; ++b) {
            Vec vb = digits(b);
            Vec s(std::max(va.size(), vb.size()), 0);
            for (size_t i = 0; i < s.size(); ++i) {
                int x = (i < va.size() ? va[i] : 0) + (i < vb.size() ? vb[i] : 0);
                s[i] = x % p_;
            }
            add_[size_t(a) * q_ + b] = elem(index(trim(s)));
            Vec m = (r_ == 1) ? Vec{(a * b) % p_} : mod_p(mul_mod_p(va, vb, p_), mod, p_);
            mul_[size_t(a) * q_ + b] = elem(index(trim(std::move(m))));
        }
    }
    for (int a = 0; a < q_; ++a) {
        Vec va = digits(a), n(va.size());
        for (size_t i = 0; i < va.size(); ++i) n[i] = (p_ - va[i]) % p_;
        neg_[a] = elem(index(trim(std::move(n))));
    }
    for (int a = 1; a < q_; ++a)
        for (int b = 1; b < q_; ++b)
            if (mul_[size_t(a) * q_ + b] == 1) { inv_[a] = elem(b); break; }

    sub_.resize(size_t(q_) * q_);
    for (int a = 0; a < q_; ++a)
        for (int b = 0; b < q_; ++b)
            sub_[size_t(a) * q_ + b] = add_[size_t(a) * q_ + neg_[b]];

    chi2_[0] = 0;
    for (int a = 1; a < q_; ++a) chi2_[mul_[size_t(a) * q_ + a]] = 1;
}

std::shared_ptr<const Field> Field::get(int p, int r) {
    static std::mutex mtx;
    static std::map<std::pair<int, int>, std::shared_ptr<const Field>> cache;
    std::lock_guard<std::mutex> lk(mtx);
    auto key = std::make_pair(p, r);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto f = std::shared_ptr<const Field>(new Field(p, r));
    cache[key] = f;
    return f;
}

std::string Field::elem_to_string(elem a) const {
    if (r_ == 1) return std::to_string(int(a));
    std::ostringstream os;
    int v = a;
    for (int i = 0; i < r_; ++i) {
        if (i) os << '/';
        os << v % p_;
        v /= p_;
    }
    return os.str();
}

Field::elem Field::elem_from_string(const std::string& s) const {
    if (r_ == 1) {
        size_t pos = 0;
        int v = std::stoi(s, &pos);
        if (pos != s.size() || v < 0 || v >= p_)
            throw std::invalid_argument("bad field element '" + s + "'");
        return elem(v);
    }
    int idx = 0, pw = 1, count = 0;
    std::istringstream is(s);
    std::string part;
    while (std::getline(is, part, '/')) {
        size_t pos = 0;
        int v = std::stoi(part, &pos);
        if (pos != part.size() || v < 0 || v >= p_)
            throw std::invalid_argument("bad field element '" + s + "'");
        idx += v * pw;
        pw *= p_;
        ++count;
    }
    if (count != r_) throw std::invalid_argument("bad field element '" + s + "': expected " + std::to_string(r_) + " digits");
    return elem(idx);
}

ExtField::ExtField(FieldPtr base, int k) : base_(std::move(base)), k_(k) {
    if (k < 1) throw std::invalid_argument("ExtField: k must be >= 1");
    size_ = 1;
    for (int i = 0; i < k; ++i) {
        size_ *= uint64_t(base_->q());
        if (size_ > (uint64_t(1) << 40)) throw std::invalid_argument("ExtField: q^k too large");
    }

    // lexicographically smallest monic irreducible of degree k over F_q:
    // scan index order, trial-divide by all lower-degree monics.
    const int q = base_->q();
    auto reduces_to_zero = [&](std::vector<uint8_t> a, const std::vector<uint8_t>& m) {
        int dm = int(m.size()) - 1;
        auto deg = [](const std::vector<uint8_t>& v) {
            int d = int(v.size()) - 1;
            while (d >= 0 && v[d] == 0) --d;
            return d;
        };
        int da;
        while ((da = deg(a)) >= dm) {
            uint8_t lead = base_->mul(a[da], base_->inv(m[dm]));
            for (int j = 0; j <= dm; ++j)
                a[da - dm + j] = base_->sub(a[da - dm + j], base_->mul(lead, m[j]));
        }
        return deg(a) < 0;
    };
    auto irreducible = [&](const std::vector<uint8_t>& f) {
        int df = int(f.size()) - 1;
        for (int d = 1; 2 * d <= df; ++d) {
            uint64_t total = 1;
            for (int i = 0; i < d; ++i) total *= uint64_t(q);
            for (uint64_t idx = 0; idx < total; ++idx) {
                std::vector<uint8_t> g(d + 1, 0);
                uint64_t t = idx;
                for (int i = 0; i < d; ++i) { g[i] = uint8_t(t % q); t /= q; }
                g[d] = 1;
                if (reduces_to_zero(f, g)) return false;
            }
        }
        return true;
    };

    if (k == 1) {
        modulus_ = {0, 1};   // t itself; quotient is F_q
    } else {
        uint64_t total = size_;
        bool found = false;
        for (uint64_t idx = 0; idx < total && !found; ++idx) {
            std::vector<uint8_t> f(k + 1, 0);
            uint64_t t = idx;
            for (int i = 0; i < k; ++i) { f[i] = uint8_t(t % q); t /= q; }
            f[k] = 1;
            if (irreducible(f)) { modulus_ = f; found = true; }
        }
        if (!found) throw std::logic_error("ExtField: no irreducible modulus found");
    }

    chi_.assign(size_, -1);
    chi_[0] = 0;
    for (uint64_t i = 1; i < size_; ++i) {
        Elem x = from_index(i);
        chi_[index_of(mul(x, x))] = 1;
    }
}

ExtField::Elem ExtField::from_base(uint8_t c) const {
    Elem e(k_, 0);
    e[0] = c;
    return e;
}

ExtField::Elem ExtField::from_index(uint64_t i) const {
    Elem e(k_, 0);
    for (int j = 0; j < k_; ++j) { e[j] = uint8_t(i % base_->q()); i /= base_->q(); }
    return e;
}

uint64_t ExtField::index_of(const Elem& a) const {
    uint64_t i = 0;
    for (int j = k_ - 1; j >= 0; --j) i = i * base_->q() + a[j];
    return i;
}

ExtField::Elem ExtField::add(const Elem& a, const Elem& b) const {
    Elem c(k_);
    for (int i = 0; i < k_; ++i) c[i] = base_->add(a[i], b[i]);
    return c;
}

ExtField::Elem ExtField::mul(const Elem& a, const Elem& b) const {
    std::vector<uint8_t> c(2 * k_ - 1, 0);
    for (int i = 0; i < k_; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < k_; ++j)
            c[i + j] = base_->add(c[i + j], base_->mul(a[i], b[j]));
    }
    // reduce by monic modulus
    for (int d = 2 * k_ - 2; d >= k_; --d) {
        uint8_t lead = c[d];
        if (lead == 0) continue;
        c[d] = 0;
        for (int j = 0; j < k_; ++j)
            c[d - k_ + j] = base_->sub(c[d - k_ + j], base_->mul(lead, modulus_[j]));
    }
    c.resize(k_);
    return c;
}

bool ExtField::is_zero(const Elem& a) const {
    for (auto v : a)
        if (v) return false;
    return true;
}

int ExtField::legendre(const Elem& a) const { return chi_[index_of(a)]; }

} // namespace hyperell
