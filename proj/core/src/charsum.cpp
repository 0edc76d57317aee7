#include "hyperell/charsum.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "hyperell/enumerate.hpp"

namespace hyperell {

namespace {

constexpr int kMaxDeg = 63;

int true_degree(const uint8_t* a, int da) {
    while (da >= 0 && a[da] == 0) --da;
    return da;
}

// r^e mod m, schoolbook; oracle path only.
std::vector<uint8_t> powmod(const Field& F, std::vector<uint8_t> base, uint64_t e,
                            const std::vector<uint8_t>& m) {
    const int dm = int(m.size()) - 1;
    auto reduce = [&](std::vector<uint8_t>& a) {
        int da = true_degree(a.data(), int(a.size()) - 1);
        while (da >= dm) {
            uint8_t lead = a[da];   // m monic
            for (int j = 0; j <= dm; ++j)
                a[da - dm + j] = F.sub(a[da - dm + j], F.mul(lead, m[j]));
            da = true_degree(a.data(), da);
        }
        a.resize(size_t(std::max(da, -1) + 1));
    };
    auto mulr = [&](const std::vector<uint8_t>& x, const std::vector<uint8_t>& y) {
        if (x.empty() || y.empty()) return std::vector<uint8_t>{};
        std::vector<uint8_t> z(x.size() + y.size() - 1, 0);
        for (size_t i = 0; i < x.size(); ++i) {
            if (!x[i]) continue;
            for (size_t j = 0; j < y.size(); ++j)
                z[i + j] = F.add(z[i + j], F.mul(x[i], y[j]));
        }
        reduce(z);
        return z;
    };
    std::vector<uint8_t> acc{1};
    reduce(base);
    while (e) {
        if (e & 1) acc = mulr(acc, base);
        base = mulr(base, base);
        e >>= 1;
    }
    return acc;
}

} // namespace

namespace {

// Specialized chain for prime q: constant-modulus arithmetic via tiny LUTs.
template <int Q>
int jacobi_kernel_prime(uint8_t* a, int da, uint8_t* b, int db) {
    constexpr bool sign_active = ((Q - 1) / 2) & 1;   // q = 3 mod 4
    struct Tables {
        int8_t leg[Q] = {};
        uint8_t inv[Q] = {};
        uint8_t red[(Q - 1) * Q + 1] = {};   // t % Q for t <= (Q-1) + (Q-1)^2
        constexpr Tables() {
            for (int x = 1; x < Q; ++x) leg[x] = -1;
            for (int x = 1; x < Q; ++x) leg[(x * x) % Q] = 1;
            for (int x = 1; x < Q; ++x)
                for (int y = 1; y < Q; ++y)
                    if ((x * y) % Q == 1) inv[x] = uint8_t(y);
            for (int t = 0; t <= (Q - 1) * Q; ++t) red[t] = uint8_t(t % Q);
        }
    };
    static constexpr Tables T;

    int sign = 1;
    for (;;) {
        while (da >= 0 && a[da] == 0) --da;
        while (da >= db) {
            const unsigned lead = a[da];
            if (lead) {
                const unsigned neg = Q - lead;
                uint8_t* dst = a + (da - db);
                for (int j = 0; j < db; ++j) dst[j] = T.red[dst[j] + neg * b[j]];
            }
            --da;
            while (da >= 0 && a[da] == 0) --da;
        }
        if (da < 0) return 0;                          // b | a, deg b >= 1
        const unsigned lead = a[da];
        if (T.leg[lead] < 0 && (db & 1)) sign = -sign;   // unit: chi2(c)^{deg b}
        if (da == 0) return sign;
        if (lead != 1) {
            const unsigned il = T.inv[lead];
            for (int j = 0; j < da; ++j) a[j] = T.red[a[j] * il];
            a[da] = 1;
        }
        if (sign_active && (da & 1) && (db & 1)) sign = -sign;   // reciprocity flip
        std::swap(a, b);
        std::swap(da, db);
    }
}

} // namespace

// Bitsliced F_3 chain: coefficient j lives in bit j of (lo, hi) with
// 0 = (0,0), 1 = (1,0), 2 = (0,1).  One SWAR add handles a full elimination
// step; degrees come from count-leading-zeros.  Degrees <= 63.
int jacobi_kernel_f3(uint64_t alo, uint64_t ahi, uint64_t blo, uint64_t bhi, int db) {
    // branchless except for loop control: the lead coefficient is a coin flip,
    // so conditional swaps beat the mispredict cost by a wide margin
    unsigned par = 0;   // sign parity
    for (;;) {
        uint64_t amask = alo | ahi;
        if (!amask) return 0;
        int da = 63 - __builtin_clzll(amask);
        while (da >= db) {
            const int sh = da - db;
            // lead == 1: add negation (bhi, blo); lead == 2: add (blo, bhi)
            const uint64_t m = -((alo >> da) & 1);
            const uint64_t t = (blo ^ bhi) & m;
            const uint64_t ylo = (blo ^ t) << sh, yhi = (bhi ^ t) << sh;
            const uint64_t nx = ~(alo | ahi), ny = ~(ylo | yhi);
            const uint64_t zl = (nx & ylo) | (alo & ny) | (ahi & yhi);
            const uint64_t zh = (nx & yhi) | (ahi & ny) | (alo & ylo);
            alo = zl;
            ahi = zh;
            amask = alo | ahi;
            if (!amask) return 0;
            da = 63 - __builtin_clzll(amask);
        }
        const uint64_t lead2 = (ahi >> da) & 1;
        par ^= unsigned(lead2) & unsigned(db);      // unit 2 non-square, deg b odd
        if (da == 0) break;
        const uint64_t sm = (alo ^ ahi) & (-lead2);   // scale by 2 = swap planes
        alo ^= sm;
        ahi ^= sm;
        par ^= unsigned(da) & unsigned(db);         // reciprocity, (q-1)/2 odd
        std::swap(alo, blo);
        std::swap(ahi, bhi);
        db = da;
    }
    return (par & 1) ? -1 : 1;
}

void pack_f3(const uint8_t* c, int len, uint64_t& lo, uint64_t& hi) {
    lo = hi = 0;
    for (int j = 0; j < len; ++j) {
        lo |= uint64_t(c[j] == 1) << j;
        hi |= uint64_t(c[j] == 2) << j;
    }
}

int jacobi_kernel(const Field& F, uint8_t* a, int da, uint8_t* b, int db) {
    if (F.r() == 1) {
        switch (F.p()) {
            case 3: {
                if (da < 64 && db < 64) {
                    uint64_t alo, ahi, blo, bhi;
                    pack_f3(a, da + 1, alo, ahi);
                    pack_f3(b, db + 1, blo, bhi);
                    return jacobi_kernel_f3(alo, ahi, blo, bhi, db);
                }
                return jacobi_kernel_prime<3>(a, da, b, db);
            }
            case 5: return jacobi_kernel_prime<5>(a, da, b, db);
            case 7: return jacobi_kernel_prime<7>(a, da, b, db);
            case 11: return jacobi_kernel_prime<11>(a, da, b, db);
            case 13: return jacobi_kernel_prime<13>(a, da, b, db);
            default: break;
        }
    }
    const int q = F.q();
    const uint8_t* mul = F.mul_table();
    const uint8_t* sub = F.sub_table();
    const uint8_t* inv = F.inv_table();
    const int8_t* leg = F.legendre_table();
    const bool sign_active = ((q - 1) / 2) & 1;

    int sign = 1;
    for (;;) {
        da = true_degree(a, da);
        while (da >= db) {
            const uint8_t lead = a[da];
            if (lead) {
                const uint8_t* mrow = mul + size_t(lead) * q;
                uint8_t* dst = a + (da - db);
                for (int j = 0; j < db; ++j) dst[j] = sub[size_t(dst[j]) * q + mrow[b[j]]];
            }
            --da;
            da = true_degree(a, da);
        }
        if (da < 0) return 0;
        const uint8_t lead = a[da];
        if (leg[lead] < 0 && (db & 1)) sign = -sign;
        if (da == 0) return sign;
        if (lead != 1) {
            const uint8_t* mrow = mul + size_t(inv[lead]) * q;
            for (int j = 0; j < da; ++j) a[j] = mrow[a[j]];
            a[da] = 1;
        }
        if (sign_active && (da & 1) && (db & 1)) sign = -sign;
        std::swap(a, b);
        std::swap(da, db);
    }
}

int jacobi_symbol(const Poly& a, const Poly& m) {
    if (!a.field()->same(*m.field())) throw std::invalid_argument("jacobi_symbol: field mismatch");
    if (!m.is_monic()) throw std::invalid_argument("jacobi_symbol: modulus must be monic");
    if (m.is_one()) return 1;
    if (a.degree() > kMaxDeg || m.degree() > kMaxDeg)
        throw std::invalid_argument("jacobi_symbol: degree too large");
    uint8_t abuf[kMaxDeg + 1] = {0}, bbuf[kMaxDeg + 1] = {0};
    std::memcpy(abuf, a.coeffs().data(), a.coeffs().size());
    std::memcpy(bbuf, m.coeffs().data(), m.coeffs().size());
    return jacobi_kernel(*a.field(), abuf, std::max(a.degree(), 0), bbuf, m.degree());
}

int residue_symbol(const Poly& a, const Poly& P) {
    if (!P.is_monic() || P.degree() < 1 || !is_irreducible(P))
        throw std::invalid_argument("residue_symbol: P must be monic irreducible");
    const Field& F = *a.field();
    Poly r = a % P;
    if (r.is_zero()) return 0;
    uint64_t e = (P.norm() - 1) / 2;
    auto res = powmod(F, r.coeffs(), e, P.coeffs());
    if (res.size() != 1) throw std::logic_error("residue_symbol: nonconstant Euler power");
    if (res[0] == 1) return 1;
    if (res[0] == F.neg(1)) return -1;
    throw std::logic_error("residue_symbol: Euler power not +-1");
}

QuadChar::QuadChar(Poly D, bool cache_factorization) : D_(std::move(D)) {
    if (!D_.is_monic()) throw std::invalid_argument("QuadChar: D must be monic");
    if (!is_squarefree(D_)) throw std::invalid_argument("QuadChar: D must be square-free");
    if (cache_factorization) fac_ = factorize(D_);
}

int QuadChar::chi(const Poly& f) const {
    if (!f.is_monic()) throw std::invalid_argument("QuadChar::chi: f must be monic");
    return jacobi_symbol(D_, f);
}

int64_t char_sum_Mn(const QuadChar& D, int n) {
    if (n < 0) throw std::invalid_argument("char_sum_Mn: n < 0");
    if (n == 0) return 1;
    const FieldPtr& f = D.modulus().field();
    int64_t sum = 0;
    EnsembleCursor cur = EnsembleCursor::full(f, EnsembleKind::Mn, n);
    Poly g;
    while (cur.next(g)) sum += D.chi(g);
    return sum;
}

SquareCharAverage average_square_char(const FieldPtr& f, int n, const Poly& poly, uint64_t cap) {
    if (n < 2) throw std::invalid_argument("average_square_char: n must be >= 2");
    if (!poly.is_monic()) throw std::invalid_argument("average_square_char: f must be monic");
    if (count_Mn(f, n) > cap) throw std::runtime_error("average_square_char: ensemble exceeds cap");

    uint64_t hn = count_Hn(f, n), coprime = 0;
    EnsembleCursor cur = EnsembleCursor::full(f, EnsembleKind::Hn, n);
    Poly D;
    while (cur.next(D)) {
        // chi_D(f^2) = 1 iff gcd(D, f) = 1, else 0
        if (poly.is_one() || gcd(D, poly).degree() == 0) ++coprime;
    }

    SquareCharAverage out;
    out.empirical = mpq_class(long(coprime), long(hn));
    out.empirical.canonicalize();
    out.main = 1;
    for (const auto& pp : factorize(poly).factors) {
        long np = long(pp.prime.norm());
        out.main *= mpq_class(np, np + 1);
    }
    out.main.canonicalize();
    mpq_class diff = out.empirical - out.main;
    if (diff < 0) diff = -diff;
    out.scaled_err = diff * long(hn);
    out.scaled_err.canonicalize();
    return out;
}

std::pair<Poly, Poly> squarefree_decompose(const Poly& l) {
    const FieldPtr& f = l.field();
    Poly l1 = Poly::one(f), l2 = Poly::one(f);
    for (const auto& pp : factorize(l).factors) {
        if (pp.mult & 1) l1 = l1 * pp.prime;
        for (int i = 0; i < pp.mult / 2; ++i) l2 = l2 * pp.prime;
    }
    return {l1, l2};
}

PolyaVinogradov polya_vinogradov_ratio(const FieldPtr& f, int n, const Poly& l, uint64_t cap) {
    if (!l.is_monic()) throw std::invalid_argument("polya_vinogradov_ratio: l must be monic");
    auto [l1, l2] = squarefree_decompose(l);
    if (l1.is_one()) throw std::invalid_argument("polya_vinogradov_ratio: l is a perfect square");
    if (count_Mn(f, n) > cap) throw std::runtime_error("polya_vinogradov_ratio: ensemble exceeds cap");

    int64_t sum = 0;
    EnsembleCursor cur = EnsembleCursor::full(f, EnsembleKind::Hn, n);
    Poly D;
    while (cur.next(D)) sum += jacobi_symbol(D, l);

    PolyaVinogradov out;
    out.abs_sum = uint64_t(sum < 0 ? -sum : sum);
    out.bound_base = std::sqrt(double(count_Hn(f, n)));
    out.l1 = l1;
    out.l2 = l2;
    return out;
}

} // namespace hyperell
