#ifndef HYPERELL_ENUMERATE_HPP
#define HYPERELL_ENUMERATE_HPP

#include <cstdint>
#include <functional>

#include "hyperell/poly.hpp"

namespace hyperell {

enum class EnsembleKind { Mn, Pn, Hn, MLeqN };

/// Closed-form (Mn, Hn, MLeqN) or Mobius-count (Pn) cardinality.
uint64_t ensemble_count(const FieldPtr& f, EnsembleKind kind, int n);

uint64_t count_Mn(const FieldPtr& f, int n);
uint64_t count_Hn(const FieldPtr& f, int n);

/// Streaming cursor over an ensemble in coefficient order (monic degree-n
/// polynomials ordered by lex_index; MLeqN ascends through degrees 0..n).
/// Visits each member exactly once.  Cursors over disjoint index subranges
/// of the same ensemble partition it, which is the range-splitting contract
/// used by the parallel sweeps.
class EnsembleCursor {
public:
    static EnsembleCursor full(FieldPtr f, EnsembleKind kind, int n);
    /// Restrict to underlying monic indices [begin, end); Mn/Pn/Hn only.
    static EnsembleCursor range(FieldPtr f, EnsembleKind kind, int n, uint64_t begin, uint64_t end);

    /// Advance; returns false when exhausted.
    bool next(Poly& out);

    uint64_t index_space() const { return end_; }

private:
    EnsembleCursor(FieldPtr f, EnsembleKind kind, int n, uint64_t begin, uint64_t end);

    FieldPtr field_;
    EnsembleKind kind_;
    int n_;
    int cur_degree_;       // MLeqN only
    uint64_t next_idx_, end_;
};

struct PrimeCountCheck {
    uint64_t count;
    double main_term;   // q^n / n
    double error;       // |count - main_term|
    double c;           // error / (q^{n/2}/n)
};
PrimeCountCheck prime_count_check(const FieldPtr& f, int n);

} // namespace hyperell

#endif
