#include "hyperell/lfunc.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstring>
#include <sstream>
#include <stdexcept>

#include "hyperell/charsum.hpp"
#include "hyperell/enumerate.hpp"
#include "hyperell/factor.hpp"

namespace hyperell {

std::complex<double> LPolynomial::eval(std::complex<double> u) const {
    std::complex<double> acc = 0.0;
    for (int i = int(c.size()) - 1; i >= 0; --i) acc = acc * u + double(c[i]);
    return acc;
}

std::complex<double> LPolynomial::eval_star(std::complex<double> u) const {
    std::complex<double> acc = 0.0;
    for (int i = int(star.size()) - 1; i >= 0; --i) acc = acc * u + double(star[i]);
    return acc;
}

PrimeSweep::PrimeSweep(FieldPtr f, int dmax) : field_(std::move(f)), dmax_(dmax) {
    counts_.assign(dmax + 1, 0);
    offsets_.assign(dmax + 1, 0);
    size_t total = 0;
    for (int d = 1; d <= dmax; ++d) total += primes_of_degree(field_, d).size() * size_t(d + 1);
    coeffs_.reserve(total);
    const bool f3 = field_->p() == 3 && field_->r() == 1;
    if (f3) offsets_f3_.assign(dmax + 1, 0);
    for (int d = 1; d <= dmax; ++d) {
        const auto& ps = primes_of_degree(field_, d);
        counts_[d] = int64_t(ps.size());
        offsets_[d] = uint32_t(coeffs_.size());
        if (f3) offsets_f3_[d] = uint32_t(f3_lo_.size());
        for (const Poly& p : ps) {
            coeffs_.insert(coeffs_.end(), p.coeffs().begin(), p.coeffs().end());
            if (f3) {
                uint64_t lo, hi;
                pack_f3(p.coeffs().data(), d + 1, lo, hi);
                f3_lo_.push_back(lo);
                f3_hi_.push_back(hi);
            }
        }
    }
}

void PrimeSweep::sweep(const Poly& D, std::vector<int64_t>& sum_by_deg,
                       std::vector<int64_t>& zeros_by_deg) const {
    sum_by_deg.assign(dmax_ + 1, 0);
    zeros_by_deg.assign(dmax_ + 1, 0);
    const Field& F = *field_;
    const auto& dc = D.coeffs();
    const int dd = D.degree();

    if (!f3_lo_.empty() && dd < 64) {
        uint64_t Dlo, Dhi;
        pack_f3(dc.data(), dd + 1, Dlo, Dhi);
        for (int d = 1; d <= dmax_; ++d) {
            const uint64_t* plo = f3_lo_.data() + offsets_f3_[d];
            const uint64_t* phi = f3_hi_.data() + offsets_f3_[d];
            int64_t sum = 0, zeros = 0;
            for (int64_t i = 0; i < counts_[d]; ++i) {
                int v = jacobi_kernel_f3(Dlo, Dhi, plo[i], phi[i], d);
                sum += v;
                zeros += (v == 0);
            }
            sum_by_deg[d] = sum;
            zeros_by_deg[d] = zeros;
        }
        return;
    }

    uint8_t abuf[64], bbuf[64];
    for (int d = 1; d <= dmax_; ++d) {
        const uint8_t* pc = coeffs_.data() + offsets_[d];
        int64_t sum = 0, zeros = 0;
        for (int64_t i = 0; i < counts_[d]; ++i, pc += d + 1) {
            std::memcpy(abuf, dc.data(), dd + 1);
            std::memcpy(bbuf, pc, d + 1);
            int v = jacobi_kernel(F, abuf, dd, bbuf, d);
            sum += v;
            zeros += (v == 0);
        }
        sum_by_deg[d] = sum;
        zeros_by_deg[d] = zeros;
    }
}

LPolynomial build_lpoly(const PrimeSweep& sweep, const Poly& D, bool skip_checks, int s_extend_to) {
    if (!skip_checks) {
        if (!D.is_monic() || D.degree() < 1)
            throw std::invalid_argument("build_lpoly: D must be monic of degree >= 1");
        if (!is_squarefree(D)) throw std::invalid_argument("build_lpoly: D must be square-free");
    }
    const int n = D.degree();
    if (sweep.dmax() < n - 1) throw std::invalid_argument("build_lpoly: sweep table too small");

    LPolynomial L;
    L.D = D;
    L.lambda = (n % 2 == 0) ? 1 : 0;
    L.g = (n - 1 - L.lambda) / 2;

    // A_d = sum_P chi_D(P), B_d = #{P : chi_D(P) != 0} over primes of degree d
    std::vector<int64_t> A, zeros;
    sweep.sweep(D, A, zeros);

    // s_k = sum_{d | k} d * (A_d if k/d odd, else B_d); computed out to the
    // sweep bound since the prime-sum verifiers consume degrees beyond deg D.
    L.s.assign(sweep.dmax() + 1, 0);
    for (int k = 1; k <= sweep.dmax(); ++k) {
        int64_t sk = 0;
        for (int d = 1; d <= k; ++d) {
            if (k % d) continue;
            int64_t Bd = sweep.prime_count(d) - zeros[d];
            sk += int64_t(d) * (((k / d) & 1) ? A[d] : Bd);
        }
        L.s[k] = sk;
    }

    // k c_k = sum_{j=1}^{k} s_j c_{k-j}
    L.c.assign(n, 0);
    L.c[0] = 1;
    for (int k = 1; k < n; ++k) {
        int64_t acc = 0;
        for (int j = 1; j <= k; ++j) acc += L.s[j] * L.c[k - j];
        if (acc % k) throw std::logic_error("build_lpoly: coefficient recurrence not integral");
        L.c[k] = acc / k;
    }

    // c_k = 0 for k >= n turns the same recurrence around: prime power sums
    // beyond the sweep come for free, exactly.
    if (s_extend_to > sweep.dmax()) {
        if (sweep.dmax() < n - 1 || (s_extend_to >= n && sweep.dmax() + 1 < n))
            throw std::invalid_argument("build_lpoly: cannot extend s across a gap");
        L.s.resize(s_extend_to + 1, 0);
        for (int k = std::max(n, sweep.dmax() + 1); k <= s_extend_to; ++k) {
            int64_t acc = 0;
            for (int j = std::max(1, k - n + 1); j <= k - 1; ++j) acc -= L.s[j] * L.c[k - j];
            L.s[k] = acc;
        }
    }

    // star = L / (1-u)^lambda, exact synthetic division
    if (L.lambda == 0) {
        L.star = L.c;
    } else {
        // L(u) = (1-u) * star(u): star_i = star_{i-1} + c_i running form
        L.star.assign(n - 1, 0);
        int64_t carry = L.c[0];
        for (int i = 0; i + 1 < n; ++i) {
            L.star[i] = carry;
            carry = L.star[i] + L.c[i + 1];
        }
        if (carry != 0) throw std::logic_error("build_lpoly: (1-u) does not divide L for even deg D");
    }
    if (int(L.star.size()) != 2 * L.g + 1) throw std::logic_error("build_lpoly: star degree mismatch");
    return L;
}

LPolynomial build_lpoly(const Poly& D) {
    PrimeSweep sweep(D.field(), std::max(D.degree() - 1, 1));
    return build_lpoly(sweep, D, false, 0);
}

FECheck verify_functional_equation(const LPolynomial& L) {
    const int g = L.g;
    const int64_t q = L.q();
    for (int i = g; i <= 2 * g; ++i) {
        int64_t qpow = 1;
        for (int j = 0; j < i - g; ++j) qpow *= q;
        if (L.star[i] != qpow * L.star[2 * g - i]) return {false, i};
    }
    return {true, -1};
}

EigenAngles verify_rh(const LPolynomial& L, double tol) {
    EigenAngles out;
    const int deg = int(L.star.size()) - 1;
    if (deg == 0) return out;

    // substitute u = w / sqrt(q): the scaled polynomial has its roots on the
    // unit circle, which conditions the companion matrix far better than the
    // raw integer coefficients (which span q^g)
    const double sq = std::sqrt(double(L.q()));
    std::vector<double> sc(deg + 1);
    for (int i = 0; i <= deg; ++i) sc[i] = double(L.star[i]) * std::pow(sq, -i);

    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -sc[i] / sc[deg];
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    if (es.info() != Eigen::Success) throw std::runtime_error("verify_rh: eigensolver failed");

    auto eval_scaled = [&](std::complex<double> w, std::complex<double>& p, std::complex<double>& dp) {
        p = 0.0;
        dp = 0.0;
        for (int i = deg; i >= 0; --i) {
            dp = dp * w + p;
            p = p * w + sc[i];
        }
    };

    const double target = 1.0 / sq;
    for (int i = 0; i < deg; ++i) {
        std::complex<double> w = es.eigenvalues()(i);
        // Newton polish; simple roots converge to machine precision in 2-3 steps
        for (int it = 0; it < 4; ++it) {
            std::complex<double> p, dp;
            eval_scaled(w, p, dp);
            if (std::abs(dp) == 0.0) break;
            std::complex<double> step = p / dp;
            w -= step;
            if (std::abs(step) < 1e-15) break;
        }
        std::complex<double> u = w / sq;
        out.max_radius_err = std::max(out.max_radius_err, std::abs(std::abs(u) - target));
        out.residual = std::max(out.residual, std::abs(L.eval_star(u)));
        std::complex<double> nu = 1.0 / u;   // |nu| = sqrt(q)
        out.angles.push_back(std::arg(nu / sq));
    }
    if (out.max_radius_err > tol)
        throw std::runtime_error("verify_rh: root off the circle |u| = q^{-1/2} beyond tolerance");
    return out;
}

namespace {

// X_D(s) = |D|^{1/2-s} X(s) with the odd/even branch.
double completed_factor(int q, int n, double s) {
    double X;
    if (n % 2 == 1) {
        X = std::pow(double(q), s - 0.5);
    } else {
        X = (1.0 - std::pow(double(q), -s)) / (1.0 - std::pow(double(q), -(1.0 - s))) *
            std::pow(double(q), -1.0 + 2.0 * s);
    }
    return std::pow(double(q), n * (0.5 - s)) * X;
}

} // namespace

AfeResult approx_functional_equation(const LPolynomial& L, double s) {
    if (s < 0.5 || s >= 1.0) throw std::invalid_argument("approx_functional_equation: s in [1/2, 1)");
    const int q = L.q();
    const int g = L.g, n = L.D.degree();
    const double XD = completed_factor(q, n, s);

    AfeResult out;
    for (size_t i = 0; i < L.c.size(); ++i) out.lhs += double(L.c[i]) * std::pow(double(q), -double(i) * s);

    double sum_c_g = 0.0, sum_c_gm1 = 0.0;   // unweighted partial coefficient sums
    for (int i = 0; i <= g && i < int(L.c.size()); ++i) {
        out.main_sum += double(L.c[i]) * std::pow(double(q), -double(i) * s);
        sum_c_g += double(L.c[i]);
    }
    for (int i = 0; i <= g - 1 && i < int(L.c.size()); ++i) {
        out.dual_sum += double(L.c[i]) * std::pow(double(q), -double(i) * (1.0 - s));
        sum_c_gm1 += double(L.c[i]);
    }
    out.dual_sum *= XD;
    if (L.lambda) {
        out.corr1 = std::pow(double(q), -s * (g + 1)) * sum_c_g;
        out.corr2 = XD * std::pow(double(q), -(1.0 - s) * g) * sum_c_gm1;
    }
    out.rhs = out.main_sum + out.dual_sum - out.corr1 - out.corr2;
    return out;
}

double derivative_value(const LPolynomial& L, int l) {
    if (l < 0) throw std::invalid_argument("derivative_value: l < 0");
    if (l >= int(L.c.size())) return 0.0;
    const double u = 1.0 / std::sqrt(double(L.q()));
    double acc = 0.0;
    for (int i = int(L.c.size()) - 1; i >= l; --i) {
        // falling factorial i (i-1) ... (i-l+1), exact in int64 at desk degrees
        int64_t ff = 1;
        for (int j = 0; j < l; ++j) ff *= (i - j);
        acc = acc * u + double(ff * L.c[i]);
    }
    // Horner above accumulates sum_i ff * c_i u^{i-l}
    return acc;
}

std::vector<PointCount> point_count_crosscheck(const Poly& D, int k_max) {
    if (D.degree() < 3) throw std::invalid_argument("point_count_crosscheck: deg D >= 3 required");
    if (k_max < 1 || k_max > 4) throw std::invalid_argument("point_count_crosscheck: k_max in [1,4]");
    LPolynomial L = build_lpoly(D);

    // Newton power sums p_k of the inverse roots of star: star_i = a_i,
    // p_k = -k a_k - sum_{j=1}^{k-1} a_j p_{k-j} (a_0 = 1).
    std::vector<int64_t> p(k_max + 1, 0);
    auto a = [&](int i) -> int64_t { return i < int(L.star.size()) ? L.star[i] : 0; };
    for (int k = 1; k <= k_max; ++k) {
        int64_t acc = -int64_t(k) * a(k);
        for (int j = 1; j < k; ++j) acc -= a(j) * p[k - j];
        p[k] = acc;
    }

    const FieldPtr& f = D.field();
    const int inf_points = (D.degree() % 2 == 1) ? 1 : 2;
    std::vector<PointCount> out;
    for (int k = 1; k <= k_max; ++k) {
        ExtField ext(f, k);
        int64_t affine = 0;
        for (uint64_t i = 0; i < ext.size(); ++i) {
            ExtField::Elem x = ext.from_index(i);
            // Horner over the extension, base coefficients embedded
            ExtField::Elem z = ext.zero();
            for (int j = D.degree(); j >= 0; --j)
                z = ext.add(ext.mul(z, x), ext.from_base(D.coeff(j)));
            affine += 1 + ext.legendre(z);
        }
        int64_t qk = 1;
        for (int i = 0; i < k; ++i) qk *= f->q();
        out.push_back({k, affine + inf_points, qk + 1 - p[k]});
    }
    return out;
}

double lemma34_defect(const LPolynomial& L, int N, double alpha, double theta) {
    if (N < 1 || N >= int(L.s.size()))
        throw std::invalid_argument("lemma34_defect: need 1 <= N < deg D");
    const double q = double(L.q());
    const std::complex<double> v = std::polar(1.0, theta);
    const std::complex<double> u = v * std::pow(q, -0.5 - alpha);

    double absL = std::abs(L.eval(u));
    double logL = std::log(absL);   // -inf at an exact zero; inequality then trivially holds

    double lead = (2.0 * L.g / (N + 1)) *
                  std::log((1.0 + std::pow(q, -alpha * (N + 1))) / (1.0 + std::pow(q, -2.0 * (N + 1))));

    // sum over prime powers f with deg f <= N equals sum_d a_alpha(d) v^d q^{-d/2} s_d
    std::complex<double> prime_sum = 0.0;
    std::complex<double> vd = 1.0;
    for (int d = 1; d <= N; ++d) {
        vd *= v;
        double a_alpha = 1.0 / (d * std::pow(q, d * alpha)) - 1.0 / (d * std::pow(q, 2.0 * d));
        prime_sum += vd * (a_alpha * std::pow(q, -0.5 * d) * double(L.s[d]));
    }
    return logL - lead - prime_sum.real();
}

std::string lpoly_export_record(const LPolynomial& L) {
    std::ostringstream os;
    os << L.D.to_string() << ';' << L.lambda << ';' << L.g << ';';
    for (size_t i = 0; i < L.c.size(); ++i) {
        if (i) os << ',';
        os << L.c[i];
    }
    os << ';';
    for (size_t i = 0; i < L.star.size(); ++i) {
        if (i) os << ',';
        os << L.star[i];
    }
    return os.str();
}

} // namespace hyperell
