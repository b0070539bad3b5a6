#pragma once

#include "kstab/kernels.hpp"
#include "kstab/norms.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

namespace kstab {

struct CertificateError : std::runtime_error {
    explicit CertificateError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Sylvester Hadamard matrix of order 2^m: symmetric, entries +-1,
/// H H = order * I.
struct HadamardMatrix {
    unsigned exponent = 0;  // order = 2^exponent
    std::size_t order = 1;
    std::vector<std::int8_t> entries;  // row-major

    int at(std::size_t i, std::size_t j) const { return entries[i * order + j]; }
};

inline constexpr unsigned kHadamardExpCap = 12;

/// Iterated 2x2 doubling; throws above the materialization cap.
HadamardMatrix sylvester_hadamard(unsigned m);

/// Exact check of H H = order * I (used by tests and small-order builds).
bool hadamard_is_orthogonal(const HadamardMatrix& h);

/// Machine-checkable facts about M^(h) = (H_n + sqrt(n) I) / (h ||H_n + sqrt(n) I||_1)
/// with n = 4^m chosen as the smallest power of 4 with sqrt(n) >= 2h.
struct MhCertificate {
    std::size_t h = 0;
    std::size_t n = 0;          // matrix dimension, a power of 4
    unsigned dim_exponent = 0;  // n = 4^dim_exponent
    Rational scale;             // 1 / (h * ||M0||_1)
    Rational l1;                // ||M^(h)||_1 = 1/h, exact
    OpNormValue op;             // exact for n <= 16, analytic upper bound otherwise
    Rational idempotent_scale;  // c with M^(h) M^(h) = c M^(h) (PSD witness)
};

/// Closed-form certificate; verifies ||M^(h)||_{inf,1} <= 1/h^2 and throws
/// CertificateError if the construction fails to meet it. Does not
/// materialize the matrix except for the n <= 16 exact enumeration.
MhCertificate certify_M_h(std::size_t h);

struct MhMatrix {
    SymMatrix matrix;
    MhCertificate cert;
};

/// Materializes M^(h) and re-verifies the certificate against the entries
/// (L1 exactly; the idempotent identity for moderate n).
MhMatrix build_M_h(std::size_t h);

struct CounterexampleBlock {
    std::size_t h = 0;
    std::size_t n = 0;
    Rational epsilon;   // 1/(3h)
    Rational offset;    // T_h; T_1 = 0, T_{h+1} = T_h + 2 n_h + 1
    MhCertificate cert;
    Rational op_bound;  // cert.op.value + 4 * (1/h) * epsilon <= 7/(3h^2)
};

/// Per-block records with certificates; blocks need no matrix storage.
struct CounterexampleSpec {
    std::optional<std::size_t> h_max;  // nullopt: unbounded (lazy kernel)
    std::vector<CounterexampleBlock> blocks;  // materialized records (prefix)

    /// Record for block h, computing and caching it on demand.
    const CounterexampleBlock& block(std::size_t h);
};

CounterexampleBlock counterexample_block(std::size_t h, const Rational& offset);

struct Counterexample {
    std::shared_ptr<BlockDiagKernel> kernel;
    CounterexampleSpec spec;
};

/// Assembles the block-diagonal kernel; blocks materialize lazily on
/// evaluation. h_max == nullopt builds the unbounded (fully lazy) kernel.
Counterexample build_counterexample(std::optional<std::size_t> h_max);

struct SeriesEvidence {
    std::size_t horizon = 0;
    Rational l1_partial;          // sum_{h<=H} 1/h  (harmonic number)
    double l1_divergence_lower;   // ln(H+1) <= l1_partial
    Rational op_partial;          // sum of per-block operator-norm bounds
    Rational op_tail;             // 7/(3H) bounds everything past the horizon
    Rational op_total_bound;      // op_partial + op_tail

    struct Row {
        std::size_t h;
        Rational l1_partial;
        Rational op_total_bound;  // valid bound on ||K||_{inf,1} at this horizon
    };
    std::vector<Row> rows;
};

/// Divergence / convergence evidence up to horizon H. The L1 partial sums
/// grow without bound while the operator-norm bounds stay below 7 pi^2 / 18.
SeriesEvidence series_evidence(CounterexampleSpec& spec, std::size_t horizon);

}  // namespace kstab
