#include "hyperell/factor.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace hyperell {

namespace {

struct PrimeCache {
    std::mutex mtx;
    std::vector<std::vector<Poly>> by_degree;   // [d] valid once size > d
};

PrimeCache& cache_for(const FieldPtr& f) {
    static std::mutex mtx;
    static std::map<std::pair<int, int>, PrimeCache> caches;
    std::lock_guard<std::mutex> lk(mtx);
    return caches[{f->p(), f->r()}];
}

// Trial division against primes of degree <= deg(g)/2; assumes the cache is
// already filled that far.
bool irreducible_with_cache(const Poly& g, const std::vector<std::vector<Poly>>& by_degree) {
    for (int d = 1; 2 * d <= g.degree(); ++d)
        for (const Poly& p : by_degree[d])
            if ((g % p).is_zero()) return false;
    return true;
}

void ensure_degree(PrimeCache& pc, const FieldPtr& f, int d) {
    std::lock_guard<std::mutex> lk(pc.mtx);
    if (int(pc.by_degree.size()) > d) return;
    if (pc.by_degree.empty()) pc.by_degree.resize(1);
    for (int cur = int(pc.by_degree.size()); cur <= d; ++cur) {
        std::vector<Poly> primes;
        uint64_t total = 1;
        for (int i = 0; i < cur; ++i) total *= uint64_t(f->q());
        for (uint64_t idx = 0; idx < total; ++idx) {
            Poly g = Poly::monic_from_index(f, cur, idx);
            if (irreducible_with_cache(g, pc.by_degree)) primes.push_back(std::move(g));
        }
        pc.by_degree.push_back(std::move(primes));
    }
}

} // namespace

const std::vector<Poly>& primes_of_degree(const FieldPtr& f, int d) {
    if (d < 1) throw std::invalid_argument("primes_of_degree: d must be >= 1");
    PrimeCache& pc = cache_for(f);
    ensure_degree(pc, f, d);
    std::lock_guard<std::mutex> lk(pc.mtx);
    return pc.by_degree[d];
}

uint64_t prime_count_formula(const FieldPtr& f, int d) {
    if (d < 1) throw std::invalid_argument("prime_count_formula: d must be >= 1");
    auto mobius = [](int n) {
        int m = 1;
        for (int p = 2; p * p <= n; ++p) {
            if (n % p == 0) {
                n /= p;
                if (n % p == 0) return 0;
                m = -m;
            }
        }
        if (n > 1) m = -m;
        return m;
    };
    int64_t total = 0;
    for (int e = 1; e <= d; ++e) {
        if (d % e) continue;
        int64_t qe = 1;
        for (int i = 0; i < d / e; ++i) qe *= f->q();
        total += mobius(e) * qe;
    }
    return uint64_t(total / d);
}

bool is_irreducible(const Poly& g) {
    if (g.degree() < 1) throw std::invalid_argument("is_irreducible: constant input");
    PrimeCache& pc = cache_for(g.field());
    ensure_degree(pc, g.field(), g.degree() / 2);
    std::lock_guard<std::mutex> lk(pc.mtx);
    return irreducible_with_cache(g, pc.by_degree);
}

bool is_squarefree(const Poly& f) {
    if (f.is_zero()) throw std::invalid_argument("is_squarefree: zero polynomial");
    if (f.degree() == 0) return true;
    Poly d = f.derivative();
    if (d.is_zero()) return false;   // f = h(t^p), a p-th power
    return gcd(f, d).degree() == 0;
}

Factorization factorize(const Poly& f) {
    if (f.is_zero()) throw std::invalid_argument("factorize: zero polynomial");
    Factorization out;
    out.unit = f.leading();
    Poly rest = f.monic_scaled();
    int d = 1;
    while (rest.degree() > 0) {
        if (2 * d > rest.degree()) {
            // remainder is prime
            out.factors.push_back({rest, 1});
            break;
        }
        for (const Poly& p : primes_of_degree(f.field(), d)) {
            if (rest.degree() < p.degree()) break;
            if (!(rest % p).is_zero()) continue;
            int e = 0;
            while ((rest % p).is_zero()) {
                rest = rest / p;
                ++e;
            }
            out.factors.push_back({p, e});
            if (rest.degree() == 0) break;
        }
        ++d;
    }
    return out;
}

Poly unfactorize(const FieldPtr& f, const Factorization& fac) {
    Poly acc = Poly::constant(f, fac.unit);
    for (const auto& pp : fac.factors)
        for (int i = 0; i < pp.mult; ++i) acc = acc * pp.prime;
    return acc;
}

std::vector<Poly> divisors(const FieldPtr& f, const Factorization& fac) {
    std::vector<Poly> out{Poly::one(f)};
    for (const auto& pp : fac.factors) {
        std::vector<Poly> next;
        next.reserve(out.size() * (pp.mult + 1));
        Poly pe = Poly::one(f);
        for (int e = 0; e <= pp.mult; ++e) {
            for (const Poly& d : out) next.push_back(d * pe);
            if (e < pp.mult) pe = pe * pp.prime;
        }
        out = std::move(next);
    }
    return out;
}

int64_t tau_k_prime_power(int k, int e) {
    // binom(e + k - 1, k - 1)
    int64_t num = 1;
    for (int i = 1; i <= e; ++i) num = num * (k - 1 + i) / i;
    return num;
}

int64_t tau_k(int k, const Poly& f) {
    if (k < 1) throw std::invalid_argument("tau_k: k must be >= 1");
    if (!f.is_monic()) throw std::invalid_argument("tau_k: f must be monic");
    int64_t t = 1;
    for (const auto& pp : factorize(f).factors) t *= tau_k_prime_power(k, pp.mult);
    return t;
}

int von_mangoldt(const Poly& f) {
    if (f.is_zero() || f.degree() == 0) return 0;
    auto fac = factorize(f);
    if (fac.factors.size() != 1) return 0;
    return fac.factors[0].prime.degree();
}

} // namespace hyperell
