#include "hyperell/enumerate.hpp"

#include <cmath>
#include <stdexcept>

#include "hyperell/factor.hpp"

namespace hyperell {

namespace {
uint64_t upow(uint64_t b, int e) {
    uint64_t r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}
} // namespace

uint64_t count_Mn(const FieldPtr& f, int n) {
    if (n < 0) throw std::invalid_argument("count_Mn: n < 0");
    return upow(f->q(), n);
}

uint64_t count_Hn(const FieldPtr& f, int n) {
    if (n < 1) throw std::invalid_argument("count_Hn: n < 1");
    if (n == 1) return f->q();
    return upow(f->q(), n - 1) * (f->q() - 1);
}

uint64_t ensemble_count(const FieldPtr& f, EnsembleKind kind, int n) {
    switch (kind) {
        case EnsembleKind::Mn: return count_Mn(f, n);
        case EnsembleKind::Hn: return count_Hn(f, n);
        case EnsembleKind::Pn:
            if (n < 1) throw std::invalid_argument("ensemble_count: n < 1 for Pn");
            return prime_count_formula(f, n);
        case EnsembleKind::MLeqN: {
            uint64_t total = 0;
            for (int d = 0; d <= n; ++d) total += count_Mn(f, d);
            return total;
        }
    }
    throw std::logic_error("unreachable");
}

EnsembleCursor::EnsembleCursor(FieldPtr f, EnsembleKind kind, int n, uint64_t begin, uint64_t end)
    : field_(std::move(f)), kind_(kind), n_(n), cur_degree_(0), next_idx_(begin), end_(end) {
    if ((kind == EnsembleKind::Hn || kind == EnsembleKind::Pn) && n < 1)
        throw std::invalid_argument("EnsembleCursor: n must be >= 1 for Hn/Pn");
    if (n < 0) throw std::invalid_argument("EnsembleCursor: n < 0");
}

EnsembleCursor EnsembleCursor::full(FieldPtr f, EnsembleKind kind, int n) {
    uint64_t end = (kind == EnsembleKind::MLeqN) ? 0 : upow(f->q(), n);
    return EnsembleCursor(std::move(f), kind, n, 0, end);
}

EnsembleCursor EnsembleCursor::range(FieldPtr f, EnsembleKind kind, int n, uint64_t begin, uint64_t end) {
    if (kind == EnsembleKind::MLeqN)
        throw std::invalid_argument("EnsembleCursor::range: MLeqN does not support subranges");
    uint64_t total = upow(f->q(), n);
    if (begin > end || end > total) throw std::invalid_argument("EnsembleCursor::range: bad range");
    return EnsembleCursor(std::move(f), kind, n, begin, end);
}

bool EnsembleCursor::next(Poly& out) {
    if (kind_ == EnsembleKind::MLeqN) {
        while (cur_degree_ <= n_) {
            uint64_t deg_total = upow(field_->q(), cur_degree_);
            if (next_idx_ < deg_total) {
                out = Poly::monic_from_index(field_, cur_degree_, next_idx_++);
                return true;
            }
            next_idx_ = 0;
            ++cur_degree_;
        }
        return false;
    }
    while (next_idx_ < end_) {
        uint64_t idx = next_idx_++;
        Poly cand = Poly::monic_from_index(field_, n_, idx);
        switch (kind_) {
            case EnsembleKind::Mn: out = std::move(cand); return true;
            case EnsembleKind::Hn:
                if (is_squarefree(cand)) { out = std::move(cand); return true; }
                break;
            case EnsembleKind::Pn:
                if (is_irreducible(cand)) { out = std::move(cand); return true; }
                break;
            default: throw std::logic_error("unreachable");
        }
    }
    return false;
}

PrimeCountCheck prime_count_check(const FieldPtr& f, int n) {
    if (n < 1) throw std::invalid_argument("prime_count_check: n < 1");
    uint64_t count = 0;
    EnsembleCursor cur = EnsembleCursor::full(f, EnsembleKind::Pn, n);
    Poly p;
    while (cur.next(p)) ++count;
    PrimeCountCheck out;
    out.count = count;
    out.main_term = double(count_Mn(f, n)) / n;
    out.error = std::abs(double(count) - out.main_term);
    double benchmark = std::pow(double(f->q()), n / 2.0) / n;
    out.c = out.error / benchmark;
    if (out.c > 2.0) throw std::runtime_error("prime_count_check: error term exceeds 2 q^{n/2}/n");
    return out;
}

} // namespace hyperell
