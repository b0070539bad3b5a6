#pragma once

#include "kstab/rational.hpp"

#include <optional>
#include <vector>

namespace kstab {

/// Dense rectangular array of exact rationals, row-major.
class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rational& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool operator==(const RationalMatrix&) const = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rational> data_;
};

/// Symmetric matrix with exact rational entries; the seed of every kernel
/// in this library. May carry a factor V with M = V V^T, which serves as an
/// exact positive-semidefiniteness certificate.
class SymMatrix {
public:
    SymMatrix() = default;

    /// Takes ownership of `entries`; throws if not square or not symmetric.
    explicit SymMatrix(RationalMatrix entries);

    /// Builds M = V V^T exactly and keeps V as factor.
    static SymMatrix from_factor(RationalMatrix v);

    std::size_t dim() const { return entries_.rows(); }
    const Rational& at(std::size_t i, std::size_t j) const { return entries_.at(i, j); }
    const RationalMatrix& entries() const { return entries_; }

    bool has_factor() const { return factor_.has_value(); }
    const RationalMatrix& factor() const;
    std::size_t factor_rank() const { return factor_ ? factor_->cols() : 0; }

    /// Attaches a factor after construction; throws if V V^T != M entrywise.
    void attach_factor(RationalMatrix v);

    /// M v for a sign (or any rational) vector.
    std::vector<Rational> multiply(const std::vector<Rational>& v) const;

    SymMatrix scaled(const Rational& c) const;

    Rational max_abs_entry() const;

    bool operator==(const SymMatrix& o) const { return entries_ == o.entries_; }

private:
    RationalMatrix entries_;
    std::optional<RationalMatrix> factor_;
};

SymMatrix identity_matrix(std::size_t n);

}  // namespace kstab
