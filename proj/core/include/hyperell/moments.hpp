#ifndef HYPERELL_MOMENTS_HPP
#define HYPERELL_MOMENTS_HPP

#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "hyperell/lfunc.hpp"
#include "hyperell/poly.hpp"

namespace hyperell {

/// Shift tuple (m, k, theta, alpha): the moment multiplies |L(v_j q^{-1/2-alpha_j})|^{2 k_j}
/// with v_j = e^{i theta_j}.  theta_j in [0, pi] (0 allowed for limiting
/// configurations; the CLI enforces (0, pi] for experiment runs), alpha_j in
/// [0, 1/2) and alpha_j <= alpha_cap_over_g / g wherever a genus is in play.
struct ShiftConfig {
    std::vector<int> k;
    std::vector<double> theta;
    std::vector<double> alpha;

    int m() const { return int(k.size()); }
    int k_total() const;
    void validate() const;                       // shapes + ranges
    void validate_for_genus(int g) const;        // adds the alpha = O(1/g) cap
};

constexpr double kAlphaCapOverG = 10.0;   // alpha_j <= 10/g

/// Single-shift entries are "finite" when g|theta| <= 1, pair shifts when
/// g|theta_i -+ theta_j| <= 2 (two finite singles force that bound).
constexpr double kSingleShiftFiniteThreshold = 1.0;
constexpr double kPairShiftFiniteThreshold = 2.0;

struct PredictedMagnitude {
    double mu = 0.0;
    double sigma = 0.0;
    std::vector<double> F_single;          // log min{1/(2|theta_j|), g}
    std::vector<double> F_pair;            // per i<j: both pair logs summed
    std::vector<bool> finite_shift;        // W membership per j
    double c_v = std::numeric_limits<double>::infinity();
};
PredictedMagnitude mu_sigma(const ShiftConfig& cfg, int g);

/// Truncated-series coefficients a_f over monic f with deg f <= max_deg:
/// a_f = sum over ordered factorizations f_1...f_m = f of
/// prod tau_{k_j}(f_j) |f_j|^{-alpha_j} e^{i theta_j deg f_j}.
class TruncatedSeries {
public:
    TruncatedSeries(FieldPtr f, int max_deg) : field_(std::move(f)), max_deg_(max_deg) {
        a_.resize(max_deg + 1);
    }
    int max_deg() const { return max_deg_; }
    std::complex<double> coeff(int deg, uint64_t lex_idx) const { return a_[deg][lex_idx]; }
    std::complex<double> coeff(const Poly& f) const { return a_[f.degree()][f.lex_index()]; }
    std::vector<std::vector<std::complex<double>>>& raw() { return a_; }
    const std::vector<std::vector<std::complex<double>>>& raw() const { return a_; }

private:
    FieldPtr field_;
    int max_deg_;
    std::vector<std::vector<std::complex<double>>> a_;
};
TruncatedSeries build_af(const FieldPtr& f, const ShiftConfig& cfg, double X);

enum class MomentMode { Enumerate, Sample };

struct MomentParams {
    FieldPtr field;
    int n = 0;
    ShiftConfig cfg;
    MomentMode mode = MomentMode::Enumerate;
    uint64_t samples = 0;       // Sample mode
    uint64_t seed = 0;
    uint64_t cap = 20'000'000;  // Enumerate mode: |M_n| must stay below this
    unsigned threads = 0;       // 0 = hardware
};

struct MomentReport {
    int q = 0, n = 0, g = 0, m = 0;
    std::vector<int> k;
    std::vector<double> theta, alpha;
    std::string mode;
    uint64_t seed = 0;
    double S = 0.0;             // sum over D of prod |L_j|^{2 k_j}
    double S_over_H = 0.0;
    double mu = 0.0, sigma = 0.0;
    double predicted = 0.0;     // exp(mu + sigma/2)
    double ratio = 0.0;         // S_over_H / predicted
    double S1 = 0.0, S2 = 0.0, cauchy_lower = 0.0;
    uint64_t zero_count = 0;    // D with some L_j = 0 at the evaluation point
    uint64_t ensemble_size = 0; // |H_n| (enumerate) or sample count
    double wall_time_ms = 0.0;
};

MomentReport shifted_moment(const MomentParams& p);

struct LowerBoundResult {
    double S1 = 0.0;            // sum_D |L^{k1} L^{k2} conj(L_trunc)|
    double S2 = 0.0;            // sum_D |L_trunc|^2
    double cauchy_lower = 0.0;  // S1^2 / S2
    double full_moment = 0.0;   // sum_D |L^{k1} L^{k2}|^2
    double predicted = 0.0;     // |H_n| exp(mu + sigma/2)
    int trunc_deg = 0;
};
/// m = 2 pipeline of the Cauchy-Schwarz lower bound; X = g / (2(k1+k2))
/// unless overridden.  m > 2 runs by direct generalization (experimental).
LowerBoundResult lower_bound_pipeline(const MomentParams& p, double X_override = -1.0);

struct TailHistogram {
    std::vector<double> V;
    std::vector<uint64_t> count;        // #{D : sum_j 2 k_j log|L_j| >= mu + V}
    std::vector<double> gaussian_ref;   // |H_n| exp(-V^2 / sigma)
    uint64_t zero_count = 0;
    uint64_t total = 0;
    double mu = 0.0, sigma = 0.0;
};
TailHistogram tail_histogram(const MomentParams& p, const std::vector<double>& V_grid);

/// Section-5 prime sums per D, split at N0:
/// S1(D) = 2 sum_{deg P <= N0} chi_D(P)/|P|^{1/2} sum_j k_j a_j(P),
/// S2(D) likewise over N0 < deg P <= N, with
/// a_j(P) = a_{alpha_j}(deg P) deg(P) cos(theta_j deg P).
struct Section5Result {
    std::vector<double> S1, S2;   // indexed by ensemble order
    double max_abs_aj = 0.0;
};
Section5Result section5_decomposition(const FieldPtr& f, int n, const ShiftConfig& cfg,
                                      int N, int N0, unsigned threads = 0);

struct Section5Params {
    double A = 0.0;
    int N = 0, N0 = 0;
};
/// A per the three V-ranges, then g/(N+1) = V/A and N0 = N / log_q(g),
/// rounded to nearest (ties up), both clamped to >= 1.
Section5Params choose_section5_params(double V, int g, double sigma, double K, int q);

struct DerivativeMoment {
    double value = 0.0;       // sum_D |L^{(l)}(q^{-1/2})|^k / |H_n|
    double predicted = 0.0;   // g^{k(k+1)/2 + l k}
};
DerivativeMoment derivative_moment(const FieldPtr& f, int n, int k, int l, unsigned threads = 0);

/// Uniform sample of H_n by rejection on monic degree-n draws.
std::vector<Poly> sample_Hn(const FieldPtr& f, int n, uint64_t count, uint64_t seed);

} // namespace hyperell

#endif
