#include "kstab/matrix.hpp"

#include <stdexcept>

namespace kstab {

SymMatrix::SymMatrix(RationalMatrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols())
        throw std::invalid_argument("SymMatrix: not square");
    for (std::size_t i = 0; i < entries_.rows(); ++i)
        for (std::size_t j = i + 1; j < entries_.cols(); ++j)
            if (entries_.at(i, j) != entries_.at(j, i))
                throw std::invalid_argument("SymMatrix: not symmetric");
}

SymMatrix SymMatrix::from_factor(RationalMatrix v) {
    const std::size_t n = v.rows(), m = v.cols();
    RationalMatrix e(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            Rational s = 0;
            for (std::size_t r = 0; r < m; ++r) s += v.at(i, r) * v.at(j, r);
            e.at(i, j) = s;
            e.at(j, i) = s;
        }
    SymMatrix out(std::move(e));
    out.factor_ = std::move(v);
    return out;
}

const RationalMatrix& SymMatrix::factor() const {
    if (!factor_) throw std::logic_error("SymMatrix: no V factor attached");
    return *factor_;
}

void SymMatrix::attach_factor(RationalMatrix v) {
    if (v.rows() != dim()) throw std::invalid_argument("attach_factor: row mismatch");
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = 0; j < dim(); ++j) {
            Rational s = 0;
            for (std::size_t r = 0; r < v.cols(); ++r) s += v.at(i, r) * v.at(j, r);
            if (s != at(i, j))
                throw std::invalid_argument("attach_factor: V V^T differs from M");
        }
    factor_ = std::move(v);
}

std::vector<Rational> SymMatrix::multiply(const std::vector<Rational>& v) const {
    if (v.size() != dim()) throw std::invalid_argument("multiply: size mismatch");
    std::vector<Rational> out(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
        Rational s = 0;
        for (std::size_t j = 0; j < dim(); ++j) s += at(i, j) * v[j];
        out[i] = std::move(s);
    }
    return out;
}

SymMatrix SymMatrix::scaled(const Rational& c) const {
    RationalMatrix e(dim(), dim());
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = 0; j < dim(); ++j) e.at(i, j) = c * at(i, j);
    SymMatrix out(std::move(e));
    if (factor_ && c >= 0) {
        // c*M = (sqrt(c) V)(sqrt(c) V)^T only when sqrt(c) is rational; keep
        // the factor only in that case.
        Rational num = numerator(c), den = denominator(c);
        BigInt sn = boost::multiprecision::sqrt(numerator(c));
        BigInt sd = boost::multiprecision::sqrt(denominator(c));
        if (sn * sn == numerator(c) && sd * sd == denominator(c)) {
            Rational sc(sn, sd);
            RationalMatrix v(factor_->rows(), factor_->cols());
            for (std::size_t i = 0; i < v.rows(); ++i)
                for (std::size_t r = 0; r < v.cols(); ++r)
                    v.at(i, r) = sc * factor_->at(i, r);
            out.factor_ = std::move(v);
        }
    }
    return out;
}

Rational SymMatrix::max_abs_entry() const {
    Rational m = 0;
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = 0; j < dim(); ++j)
            if (rat_abs(at(i, j)) > m) m = rat_abs(at(i, j));
    return m;
}

SymMatrix identity_matrix(std::size_t n) {
    RationalMatrix e(n, n);
    for (std::size_t i = 0; i < n; ++i) e.at(i, i) = 1;
    return SymMatrix(std::move(e));
}

}  // namespace kstab
