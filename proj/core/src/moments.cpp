#include "hyperell/moments.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

#include "hyperell/charsum.hpp"
#include "hyperell/enumerate.hpp"
#include "hyperell/factor.hpp"
#include "hyperell/parallel.hpp"

namespace hyperell {

namespace {

constexpr uint64_t kChunk = 4096;   // fixed; reduction order must not depend on threads

int genus_of(int n) { return (n - 1 - (n % 2 == 0 ? 1 : 0)) / 2; }

bool distinct_thetas(const ShiftConfig& cfg) {
    for (size_t i = 0; i < cfg.theta.size(); ++i)
        for (size_t j = i + 1; j < cfg.theta.size(); ++j)
            if (cfg.theta[i] == cfg.theta[j]) return false;
    return true;
}

double log_min(double inv_arg, int g) {
    // log min{1/inv_arg, g} with 1/0 treated as +inf
    if (inv_arg == 0.0) return std::log(double(g));
    return std::log(std::min(1.0 / inv_arg, double(g)));
}

struct MomentAccum {
    CompensatedSum S;
    uint64_t members = 0;
    uint64_t zeros = 0;
};

MomentAccum combine(MomentAccum a, const MomentAccum& b) {
    a.S.add(b.S.value());
    a.members += b.members;
    a.zeros += b.zeros;
    return a;
}

} // namespace

int ShiftConfig::k_total() const {
    int t = 0;
    for (int v : k) t += v;
    return t;
}

void ShiftConfig::validate() const {
    if (k.empty() || k.size() != theta.size() || k.size() != alpha.size())
        throw std::invalid_argument("ShiftConfig: k/theta/alpha must be non-empty and equal length");
    for (int v : k)
        if (v < 1) throw std::invalid_argument("ShiftConfig: exponents k_j must be positive integers");
    for (double t : theta)
        if (!(t >= 0.0 && t <= M_PI + 1e-12)) throw std::invalid_argument("ShiftConfig: theta_j in [0, pi]");
    for (double a : alpha)
        if (!(a >= 0.0 && a < 0.5)) throw std::invalid_argument("ShiftConfig: alpha_j in [0, 1/2)");
}

void ShiftConfig::validate_for_genus(int g) const {
    validate();
    if (g < 1) return;
    for (double a : alpha)
        if (a > kAlphaCapOverG / g + 1e-15)
            throw std::invalid_argument("ShiftConfig: alpha_j exceeds the O(1/g) cap (10/g)");
}

PredictedMagnitude mu_sigma(const ShiftConfig& cfg, int g) {
    cfg.validate();
    if (g < 2) throw std::invalid_argument("mu_sigma: g must be >= 2");
    const int m = cfg.m();
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (cfg.theta[i] == cfg.theta[j])
                throw std::invalid_argument("mu_sigma: degenerate config, theta_i == theta_j");

    PredictedMagnitude out;
    double k2 = 0.0;
    for (int j = 0; j < m; ++j) {
        double Fj = log_min(2.0 * std::abs(cfg.theta[j]), g);
        out.F_single.push_back(Fj);
        out.mu += cfg.k[j] * Fj;
        k2 += double(cfg.k[j]) * cfg.k[j];
        out.finite_shift.push_back(g * std::abs(cfg.theta[j]) <= kSingleShiftFiniteThreshold + 1e-12);
    }
    out.sigma = 2.0 * k2 * std::log(double(g));
    for (int j = 0; j < m; ++j) out.sigma += 2.0 * double(cfg.k[j]) * cfg.k[j] * out.F_single[j];
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            double Fij = log_min(std::abs(cfg.theta[i] - cfg.theta[j]), g) +
                         log_min(std::abs(cfg.theta[i] + cfg.theta[j]), g);
            out.F_pair.push_back(Fij);
            out.sigma += 4.0 * cfg.k[i] * cfg.k[j] * Fij;
        }

    // c_v: max over the finite entries of {g|theta_j|, g|theta_i -+ theta_j|}
    double cv = -1.0;
    for (int j = 0; j < m; ++j) {
        double v = g * std::abs(cfg.theta[j]);
        if (v <= kSingleShiftFiniteThreshold + 1e-12) cv = std::max(cv, v);
    }
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            for (double s : {cfg.theta[i] - cfg.theta[j], cfg.theta[i] + cfg.theta[j]}) {
                double v = g * std::abs(s);
                if (v <= kPairShiftFiniteThreshold + 1e-12) cv = std::max(cv, v);
            }
    out.c_v = cv < 0.0 ? std::numeric_limits<double>::infinity() : cv;
    return out;
}

TruncatedSeries build_af(const FieldPtr& f, const ShiftConfig& cfg, double X) {
    cfg.validate();
    if (X < 0) throw std::invalid_argument("build_af: X must be >= 0");
    const int max_deg = int(std::floor(cfg.k_total() * X + 1e-9));
    TruncatedSeries out(f, max_deg);

    const int m = cfg.m();
    // recursive ordered-factorization convolution
    for (int deg = 0; deg <= max_deg; ++deg) {
        uint64_t total = count_Mn(f, deg);
        out.raw()[deg].assign(total, 0.0);
        for (uint64_t idx = 0; idx < total; ++idx) {
            Poly poly = Poly::monic_from_index(f, deg, idx);
            Factorization fac = factorize(poly);
            std::vector<Poly> divs = divisors(f, fac);
            std::complex<double> a = 0.0;

            // weight of assigning monic h to slot j
            auto w = [&](const Poly& h, int j) {
                return double(tau_k(cfg.k[j], h)) * std::pow(double(h.norm()), -cfg.alpha[j]) *
                       std::polar(1.0, cfg.theta[j] * std::max(h.degree(), 0));
            };
            // recurse over slots: rem is what's left to factor
            std::function<void(int, const Poly&, std::complex<double>)> rec =
                [&](int slot, const Poly& rem, std::complex<double> acc) {
                    if (slot == m - 1) {
                        a += acc * w(rem, slot);
                        return;
                    }
                    for (const Poly& d : divisors(f, factorize(rem)))
                        rec(slot + 1, rem / d, acc * w(d, slot));
                };
            (void)divs;
            rec(0, poly, 1.0);

            // |a_f| <= tau_{sum k}(f)
            double bound = double(tau_k(cfg.k_total(), poly));
            if (std::abs(a) > bound * (1.0 + 1e-9))
                throw std::logic_error("build_af: |a_f| exceeds tau bound");
            out.raw()[deg][idx] = a;
        }
    }
    return out;
}

std::vector<Poly> sample_Hn(const FieldPtr& f, int n, uint64_t count, uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_Hn: n < 1");
    std::mt19937_64 gen(seed);
    std::vector<Poly> out;
    out.reserve(count);
    std::vector<uint8_t> c(n + 1, 0);
    while (out.size() < count) {
        for (int i = 0; i < n; ++i) c[i] = uint8_t(gen() % uint64_t(f->q()));
        c[n] = 1;
        Poly cand(f, std::vector<uint8_t>(c));
        if (is_squarefree(cand)) out.push_back(std::move(cand));
    }
    return out;
}

namespace {

// Shared per-D walk: enumerate H_n (index-filtered) or a pregenerated sample
// list, build the L-polynomial with a shared PrimeSweep, hand it to fn.
// Chunking is fixed so reductions are thread-count independent.
template <class Fn>
MomentAccum sweep_moment(const MomentParams& p, int sweep_dmax, Fn per_D) {
    p.cfg.validate();
    const unsigned threads = resolve_threads(p.threads);
    PrimeSweep sweep(p.field, sweep_dmax);

    if (p.mode == MomentMode::Enumerate) {
        uint64_t space = count_Mn(p.field, p.n);
        if (space > p.cap) throw std::runtime_error("moment sweep: enumeration exceeds cap");
        return parallel_reduce_chunks<MomentAccum>(
            space, kChunk, threads,
            [&](uint64_t b, uint64_t e) {
                MomentAccum acc;
                EnsembleCursor cur = EnsembleCursor::range(p.field, EnsembleKind::Hn, p.n, b, e);
                Poly D;
                while (cur.next(D)) {
                    LPolynomial L = build_lpoly(sweep, D, true);
                    ++acc.members;
                    per_D(L, acc);
                }
                return acc;
            },
            combine, MomentAccum{});
    }

    if (p.samples == 0) throw std::invalid_argument("moment sweep: sample mode needs samples > 0");
    std::vector<Poly> list = sample_Hn(p.field, p.n, p.samples, p.seed);
    return parallel_reduce_chunks<MomentAccum>(
        list.size(), kChunk, threads,
        [&](uint64_t b, uint64_t e) {
            MomentAccum acc;
            for (uint64_t i = b; i < e; ++i) {
                LPolynomial L = build_lpoly(sweep, list[i], true);
                ++acc.members;
                per_D(L, acc);
            }
            return acc;
        },
        combine, MomentAccum{});
}

std::vector<std::complex<double>> eval_points(const ShiftConfig& cfg, int q) {
    std::vector<std::complex<double>> u;
    for (int j = 0; j < cfg.m(); ++j)
        u.push_back(std::polar(1.0, cfg.theta[j]) * std::pow(double(q), -0.5 - cfg.alpha[j]));
    return u;
}

} // namespace

MomentReport shifted_moment(const MomentParams& p) {
    auto t0 = std::chrono::steady_clock::now();
    const int g = genus_of(p.n);
    p.cfg.validate_for_genus(g);

    auto u = eval_points(p.cfg, p.field->q());
    MomentAccum acc = sweep_moment(p, std::max(p.n - 1, 1), [&](const LPolynomial& L, MomentAccum& a) {
        double prod = 1.0;
        bool zero = false;
        for (int j = 0; j < p.cfg.m(); ++j) {
            double n2 = std::norm(L.eval(u[j]));   // |L|^2
            if (n2 == 0.0) zero = true;
            double f = 1.0;
            for (int e = 0; e < p.cfg.k[j]; ++e) f *= n2;
            prod *= f;
        }
        if (zero) ++a.zeros;
        a.S.add(prod);
    });

    MomentReport r;
    r.q = p.field->q();
    r.n = p.n;
    r.g = g;
    r.m = p.cfg.m();
    r.k = p.cfg.k;
    r.theta = p.cfg.theta;
    r.alpha = p.cfg.alpha;
    r.mode = (p.mode == MomentMode::Enumerate) ? "enumerate" : "sample";
    r.seed = p.seed;
    r.S = acc.S.value();
    r.ensemble_size = acc.members;
    r.S_over_H = r.S / double(acc.members);
    if (g >= 2 && distinct_thetas(p.cfg)) {
        PredictedMagnitude pm = mu_sigma(p.cfg, g);
        r.mu = pm.mu;
        r.sigma = pm.sigma;
        r.predicted = std::exp(pm.mu + 0.5 * pm.sigma);
        r.ratio = r.S_over_H / r.predicted;
    }
    r.zero_count = acc.zeros;
    r.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

LowerBoundResult lower_bound_pipeline(const MomentParams& p, double X_override) {
    const int g = genus_of(p.n);
    p.cfg.validate_for_genus(g);
    const int K = p.cfg.k_total();
    const double X = X_override >= 0.0 ? X_override : double(g) / (2.0 * K);

    TruncatedSeries af = build_af(p.field, p.cfg, X);
    const int tdeg = af.max_deg();

    // per-degree monic lists with factorizations into prime indices would be
    // overkill here: tdeg stays tiny (<= g/2), so evaluate chi by jacobi.
    auto u = eval_points(p.cfg, p.field->q());
    const double q = double(p.field->q());

    struct LBAccum {
        CompensatedSum S1, S2, full;
        uint64_t members = 0;
    };
    auto comb = [](LBAccum a, const LBAccum& b) {
        a.S1.add(b.S1.value());
        a.S2.add(b.S2.value());
        a.full.add(b.full.value());
        a.members += b.members;
        return a;
    };

    const unsigned threads = resolve_threads(p.threads);
    PrimeSweep sweep(p.field, std::max(p.n - 1, 1));
    uint64_t space = count_Mn(p.field, p.n);
    if (p.mode != MomentMode::Enumerate) throw std::invalid_argument("lower_bound_pipeline: enumerate only");
    if (space > p.cap) throw std::runtime_error("lower_bound_pipeline: enumeration exceeds cap");

    LBAccum acc = parallel_reduce_chunks<LBAccum>(
        space, kChunk, threads,
        [&](uint64_t b, uint64_t e) {
            LBAccum a;
            EnsembleCursor cur = EnsembleCursor::range(p.field, EnsembleKind::Hn, p.n, b, e);
            Poly D;
            while (cur.next(D)) {
                LPolynomial L = build_lpoly(sweep, D, true);
                ++a.members;
                // truncated series value
                std::complex<double> trunc = 0.0;
                for (int deg = 0; deg <= tdeg; ++deg) {
                    uint64_t total = count_Mn(p.field, deg);
                    double wnorm = std::pow(q, -0.5 * deg);
                    for (uint64_t idx = 0; idx < total; ++idx) {
                        std::complex<double> coeff = af.coeff(deg, idx);
                        if (coeff == 0.0) continue;
                        Poly fpoly = Poly::monic_from_index(p.field, deg, idx);
                        int chi = jacobi_symbol(D, fpoly);
                        if (chi) trunc += coeff * (double(chi) * wnorm);
                    }
                }
                // full product L^{k1} ... L^{km}
                std::complex<double> full = 1.0;
                for (int j = 0; j < p.cfg.m(); ++j) {
                    std::complex<double> Lv = L.eval(u[j]);
                    for (int e2 = 0; e2 < p.cfg.k[j]; ++e2) full *= Lv;
                }
                a.S2.add(std::norm(trunc));
                a.S1.add(std::abs(full * std::conj(trunc)));
                a.full.add(std::norm(full));
            }
            return a;
        },
        comb, LBAccum{});

    LowerBoundResult r;
    r.S1 = acc.S1.value();
    r.S2 = acc.S2.value();
    r.full_moment = acc.full.value();
    r.cauchy_lower = (r.S2 > 0.0) ? r.S1 * r.S1 / r.S2 : 0.0;
    r.trunc_deg = tdeg;
    if (r.cauchy_lower > r.full_moment * (1.0 + 1e-9))
        throw std::runtime_error("lower_bound_pipeline: Cauchy-Schwarz violated");
    if (g >= 2 && distinct_thetas(p.cfg)) {
        PredictedMagnitude pm = mu_sigma(p.cfg, g);
        r.predicted = double(acc.members) * std::exp(pm.mu + 0.5 * pm.sigma);
    }
    return r;
}

TailHistogram tail_histogram(const MomentParams& p, const std::vector<double>& V_grid) {
    const int g = genus_of(p.n);
    p.cfg.validate_for_genus(g);
    PredictedMagnitude pm = mu_sigma(p.cfg, g);

    auto u = eval_points(p.cfg, p.field->q());
    struct TailAccum {
        std::vector<uint64_t> count;
        uint64_t zeros = 0, members = 0;
    };

    // per-D statistic compared against mu + V for each grid entry
    const unsigned threads = resolve_threads(p.threads);
    PrimeSweep sweep(p.field, std::max(p.n - 1, 1));

    auto per_chunk_stat = [&](const LPolynomial& L, TailAccum& a) {
        double T = 0.0;
        bool zero = false;
        for (int j = 0; j < p.cfg.m(); ++j) {
            double absL = std::abs(L.eval(u[j]));
            if (absL == 0.0) {
                zero = true;
                break;
            }
            T += 2.0 * p.cfg.k[j] * std::log(absL);
        }
        if (zero) {
            ++a.zeros;
            return;
        }
        for (size_t i = 0; i < V_grid.size(); ++i)
            if (T >= pm.mu + V_grid[i]) ++a.count[i];
    };
    auto comb = [&](TailAccum a, const TailAccum& b) {
        for (size_t i = 0; i < a.count.size(); ++i) a.count[i] += b.count[i];
        a.zeros += b.zeros;
        a.members += b.members;
        return a;
    };
    TailAccum init;
    init.count.assign(V_grid.size(), 0);

    TailAccum acc;
    if (p.mode == MomentMode::Enumerate) {
        uint64_t space = count_Mn(p.field, p.n);
        if (space > p.cap) throw std::runtime_error("tail_histogram: enumeration exceeds cap");
        acc = parallel_reduce_chunks<TailAccum>(
            space, kChunk, threads,
            [&](uint64_t b, uint64_t e) {
                TailAccum a = init;
                EnsembleCursor cur = EnsembleCursor::range(p.field, EnsembleKind::Hn, p.n, b, e);
                Poly D;
                while (cur.next(D)) {
                    LPolynomial L = build_lpoly(sweep, D, true);
                    ++a.members;
                    per_chunk_stat(L, a);
                }
                return a;
            },
            comb, init);
    } else {
        std::vector<Poly> list = sample_Hn(p.field, p.n, p.samples, p.seed);
        acc = parallel_reduce_chunks<TailAccum>(
            list.size(), kChunk, threads,
            [&](uint64_t b, uint64_t e) {
                TailAccum a = init;
                for (uint64_t i = b; i < e; ++i) {
                    LPolynomial L = build_lpoly(sweep, list[i], true);
                    ++a.members;
                    per_chunk_stat(L, a);
                }
                return a;
            },
            comb, init);
    }

    TailHistogram h;
    h.V = V_grid;
    h.count = acc.count;
    h.zero_count = acc.zeros;
    h.total = acc.members;
    h.mu = pm.mu;
    h.sigma = pm.sigma;
    for (double V : V_grid) h.gaussian_ref.push_back(double(acc.members) * std::exp(-V * V / pm.sigma));
    return h;
}

Section5Params choose_section5_params(double V, int g, double sigma, double K, int q) {
    Section5Params out;
    double logsig = std::log(sigma);
    if (V <= sigma)
        out.A = 0.5 * logsig;
    else if (V <= sigma * logsig / (25.0 * K))
        out.A = sigma * logsig / (2.0 * V);
    else
        out.A = 7.0 * K;
    double Nreal = double(g) * out.A / V - 1.0;
    out.N = std::max(1, int(std::floor(Nreal + 0.5)));
    double logqg = std::log(double(g)) / std::log(double(q));
    out.N0 = std::max(1, int(std::floor(double(out.N) / logqg + 0.5)));
    if (out.N0 >= out.N) out.N0 = std::max(1, out.N - 1);
    return out;
}

Section5Result section5_decomposition(const FieldPtr& f, int n, const ShiftConfig& cfg,
                                      int N, int N0, unsigned threads) {
    cfg.validate();
    if (!(N0 >= 1 && N0 < N)) throw std::invalid_argument("section5_decomposition: need 1 <= N0 < N");
    const double q = double(f->q());

    // per-degree weights sum_j k_j a_{alpha_j}(d) d cos(theta_j d)
    std::vector<double> wate(N + 1, 0.0);
    double max_aj = 0.0;
    for (int d = 1; d <= N; ++d) {
        double wsum = 0.0;
        for (int j = 0; j < cfg.m(); ++j) {
            double a_alpha = 1.0 / (d * std::pow(q, d * cfg.alpha[j])) - 1.0 / (d * std::pow(q, 2.0 * d));
            double aj = a_alpha * d * std::cos(cfg.theta[j] * d);
            max_aj = std::max(max_aj, std::abs(aj));
            wsum += cfg.k[j] * aj;
        }
        wate[d] = wsum;
    }

    Section5Result out;
    out.max_abs_aj = max_aj;

    PrimeSweep sweep(f, N);
    const unsigned nt = resolve_threads(threads);
    uint64_t space = count_Mn(f, n);

    // gather per-D values in ensemble order; chunks write disjoint slices
    std::vector<std::vector<double>> s1_chunks, s2_chunks;
    uint64_t n_chunks = (space + kChunk - 1) / kChunk;
    s1_chunks.resize(n_chunks);
    s2_chunks.resize(n_chunks);
    parallel_reduce_chunks<int>(
        space, kChunk, nt,
        [&](uint64_t b, uint64_t e) {
            uint64_t ci = b / kChunk;
            EnsembleCursor cur = EnsembleCursor::range(f, EnsembleKind::Hn, n, b, e);
            Poly D;
            std::vector<int64_t> A, zeros;
            while (cur.next(D)) {
                sweep.sweep(D, A, zeros);
                double S1 = 0.0, S2 = 0.0;
                for (int d = 1; d <= N; ++d) {
                    // sum over P of chi_D(P)/|P|^{1/2} * w(d) = w(d) q^{-d/2} A_d
                    double term = 2.0 * wate[d] * std::pow(q, -0.5 * d) * double(A[d]);
                    if (d <= N0)
                        S1 += term;
                    else
                        S2 += term;
                }
                s1_chunks[ci].push_back(S1);
                s2_chunks[ci].push_back(S2);
            }
            return 0;
        },
        [](int a, int) { return a; }, 0);

    for (uint64_t ci = 0; ci < n_chunks; ++ci) {
        out.S1.insert(out.S1.end(), s1_chunks[ci].begin(), s1_chunks[ci].end());
        out.S2.insert(out.S2.end(), s2_chunks[ci].begin(), s2_chunks[ci].end());
    }
    return out;
}

DerivativeMoment derivative_moment(const FieldPtr& f, int n, int k, int l, unsigned threads) {
    if (k < 1 || l < 1) throw std::invalid_argument("derivative_moment: k, l >= 1");
    MomentParams p;
    p.field = f;
    p.n = n;
    p.cfg = ShiftConfig{{1}, {0.0}, {0.0}};
    p.threads = threads;

    MomentAccum acc = sweep_moment(p, std::max(n - 1, 1), [&](const LPolynomial& L, MomentAccum& a) {
        double v = std::abs(derivative_value(L, l));
        double pw = 1.0;
        for (int e = 0; e < k; ++e) pw *= v;
        a.S.add(pw);
    });

    DerivativeMoment out;
    out.value = acc.S.value() / double(acc.members);
    const int g = genus_of(n);
    out.predicted = std::pow(double(g), 0.5 * k * (k + 1) + double(l) * k);
    return out;
}

} // namespace hyperell
