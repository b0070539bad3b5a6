#include "kstab/counterexample.hpp"

#include <cmath>
#include <stdexcept>

namespace kstab {

HadamardMatrix sylvester_hadamard(unsigned m) {
    if (m > kHadamardExpCap)
        throw std::invalid_argument("sylvester_hadamard: exponent exceeds cap " +
                                    std::to_string(kHadamardExpCap));
    HadamardMatrix h;
    h.exponent = m;
    h.order = std::size_t{1} << m;
    h.entries.assign(h.order * h.order, 1);
    for (std::size_t half = 1; half < h.order; half *= 2) {
        // double the current half x half block into [H H; H -H]
        for (std::size_t i = 0; i < half; ++i)
            for (std::size_t j = 0; j < half; ++j) {
                std::int8_t v = h.entries[i * h.order + j];
                h.entries[i * h.order + (j + half)] = v;
                h.entries[(i + half) * h.order + j] = v;
                h.entries[(i + half) * h.order + (j + half)] = static_cast<std::int8_t>(-v);
            }
    }
    return h;
}

bool hadamard_is_orthogonal(const HadamardMatrix& h) {
    for (std::size_t i = 0; i < h.order; ++i)
        for (std::size_t j = i; j < h.order; ++j) {
            long long dot = 0;
            for (std::size_t k = 0; k < h.order; ++k)
                dot += static_cast<long long>(h.at(i, k)) * h.at(j, k);
            if (dot != (i == j ? static_cast<long long>(h.order) : 0)) return false;
        }
    return true;
}

namespace {

// Smallest m >= 1 with 2^m >= 2h; then n = 4^m and sqrt(n) = 2^m.
unsigned dim_exponent_for(std::size_t h) {
    unsigned m = 1;
    while ((std::size_t{1} << m) < 2 * h) ++m;
    return m;
}

}  // namespace

MhCertificate certify_M_h(std::size_t h) {
    if (h < 1) throw std::invalid_argument("certify_M_h: h must be >= 1");
    MhCertificate cert;
    cert.h = h;
    cert.dim_exponent = dim_exponent_for(h);
    const BigInt sqrt_n = BigInt(1) << cert.dim_exponent;
    const BigInt n = sqrt_n * sqrt_n;
    cert.n = n.convert_to<std::size_t>();

    // ||M0||_1 for M0 = H_n + sqrt(n) I: off-diagonal entries are +-1 and the
    // Sylvester diagonal is traceless, so the diagonal contributes n*sqrt(n).
    const BigInt m0_l1 = n * n - n + n * sqrt_n;
    cert.scale = Rational(1, BigInt(h) * m0_l1);
    cert.l1 = Rational(1, BigInt(h));

    // M0^2 = H^2 + 2 sqrt(n) H + n I = 2 sqrt(n) M0, so M^(h)^2 = c M^(h).
    cert.idempotent_scale = sqrt_n * 2 * cert.scale;

    const Rational target = Rational(1, BigInt(h) * BigInt(h));
    if (cert.n <= 16) {
        HadamardMatrix had = sylvester_hadamard(2 * cert.dim_exponent);
        RationalMatrix e(cert.n, cert.n);
        for (std::size_t i = 0; i < cert.n; ++i)
            for (std::size_t j = 0; j < cert.n; ++j)
                e.at(i, j) = Rational(had.at(i, j)) + (i == j ? Rational(sqrt_n) : 0);
        cert.op = matrix_opnorm_inf1_exact(SymMatrix(std::move(e)));
        cert.op.value *= cert.scale;
    } else {
        // ||M0 v||_1 <= ||H v||_1 + sqrt(n) ||v||_1 <= n^{3/2} + n^{3/2}
        cert.op.value = Rational(2 * n * sqrt_n) * cert.scale;
        cert.op.flavor = Flavor::upper_bound;
    }
    if (cert.op.value > target)
        throw CertificateError("certify_M_h: ||M^(h)||_{inf,1} certificate exceeds 1/h^2 at h=" +
                               std::to_string(h));
    return cert;
}

MhMatrix build_M_h(std::size_t h) {
    MhCertificate cert = certify_M_h(h);
    const unsigned had_exp = 2 * cert.dim_exponent;
    HadamardMatrix had = sylvester_hadamard(had_exp);
    if (had.order <= 64 && !hadamard_is_orthogonal(had))
        throw CertificateError("build_M_h: Hadamard orthogonality check failed");

    const Rational sqrt_n = Rational(BigInt(1) << cert.dim_exponent);
    RationalMatrix e(cert.n, cert.n);
    for (std::size_t i = 0; i < cert.n; ++i)
        for (std::size_t j = 0; j < cert.n; ++j)
            e.at(i, j) = (Rational(had.at(i, j)) + (i == j ? sqrt_n : 0)) * cert.scale;
    SymMatrix m(std::move(e));

    if (matrix_l1(m) != cert.l1)
        throw CertificateError("build_M_h: entrywise L1 disagrees with certificate");
    if (cert.n <= 64) {
        // exact idempotent identity M^2 = c M certifies the spectrum {0, c}
        for (std::size_t i = 0; i < cert.n; ++i)
            for (std::size_t j = 0; j < cert.n; ++j) {
                Rational s = 0;
                for (std::size_t k = 0; k < cert.n; ++k) s += m.at(i, k) * m.at(k, j);
                if (s != cert.idempotent_scale * m.at(i, j))
                    throw CertificateError("build_M_h: idempotent identity failed");
            }
    }
    return {std::move(m), std::move(cert)};
}

CounterexampleBlock counterexample_block(std::size_t h, const Rational& offset) {
    CounterexampleBlock b;
    b.h = h;
    b.cert = certify_M_h(h);
    b.n = b.cert.n;
    b.epsilon = Rational(1, 3 * BigInt(h));
    b.offset = offset;
    b.op_bound = b.cert.op.value + 4 * b.cert.l1 * b.epsilon;
    if (b.op_bound > Rational(7, 3 * BigInt(h) * BigInt(h)))
        throw CertificateError("counterexample_block: block bound exceeds 7/(3h^2)");
    return b;
}

const CounterexampleBlock& CounterexampleSpec::block(std::size_t h) {
    if (h < 1 || (h_max && h > *h_max))
        throw std::out_of_range("CounterexampleSpec: block index");
    while (blocks.size() < h) {
        Rational offset = 0;
        if (!blocks.empty())
            offset = blocks.back().offset + 2 * Rational(blocks.back().n) + 1;
        blocks.push_back(counterexample_block(blocks.size() + 1, offset));
    }
    return blocks[h - 1];
}

Counterexample build_counterexample(std::optional<std::size_t> h_max) {
    if (h_max && *h_max < 1)
        throw std::invalid_argument("build_counterexample: h_max must be >= 1");
    Counterexample ce;
    ce.spec.h_max = h_max;
    if (h_max) ce.spec.block(*h_max);  // verify all certificates up front

    auto shared_spec = std::make_shared<CounterexampleSpec>(ce.spec);
    auto layout = [shared_spec](std::size_t h) {
        const CounterexampleBlock& b = shared_spec->block(h);
        return BlockDiagKernel::Layout{b.offset, b.offset + 1 - b.epsilon,
                                       b.offset + 2 * Rational(b.n) + b.epsilon};
    };
    auto factory = [shared_spec](std::size_t h) {
        const CounterexampleBlock& b = shared_spec->block(h);
        return std::make_shared<const TrapezoidKernel>(build_M_h(h).matrix, b.epsilon);
    };
    ce.kernel = std::make_shared<BlockDiagKernel>(layout, factory, h_max);
    return ce;
}

SeriesEvidence series_evidence(CounterexampleSpec& spec, std::size_t horizon) {
    if (horizon < 1) throw std::invalid_argument("series_evidence: horizon must be >= 1");
    if (spec.h_max && horizon > *spec.h_max)
        throw std::invalid_argument("series_evidence: horizon exceeds block count");
    SeriesEvidence ev;
    ev.horizon = horizon;
    ev.l1_partial = 0;
    ev.op_partial = 0;
    ev.rows.reserve(horizon);
    for (std::size_t h = 1; h <= horizon; ++h) {
        const CounterexampleBlock& b = spec.block(h);
        ev.l1_partial += b.cert.l1;
        ev.op_partial += b.op_bound;
        ev.rows.push_back({h, ev.l1_partial, ev.op_partial + Rational(7, 3 * BigInt(h))});
    }
    ev.l1_divergence_lower = std::log(static_cast<double>(horizon) + 1.0);
    ev.op_tail = Rational(7, 3 * BigInt(horizon));
    ev.op_total_bound = ev.op_partial + ev.op_tail;
    return ev;
}

}  // namespace kstab
