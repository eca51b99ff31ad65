#ifndef DERHAM_MATRIX_HPP
#define DERHAM_MATRIX_HPP

#include "derham/rational.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace derham {

using RationalVector = std::vector<Rational>;

/// Dense row-major matrix of exact rationals.
class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static RationalMatrix identity(std::size_t n);
    /// Throws ValidationError on ragged input; `cols` is used when there are no rows.
    static RationalMatrix from_rows(const std::vector<std::vector<Rational>>& rows, std::size_t cols = 0);
    static RationalMatrix from_columns(const std::vector<RationalVector>& columns, std::size_t rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    RationalVector column(std::size_t j) const;
    RationalMatrix columns(const std::vector<std::size_t>& which) const;
    RationalMatrix transpose() const;
    bool is_zero() const;

    RationalVector apply(const RationalVector& x) const;

    friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
    friend RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b);
    friend RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b);
    friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

RationalMatrix hstack(const RationalMatrix& a, const RationalMatrix& b);
RationalMatrix vstack(const RationalMatrix& a, const RationalMatrix& b);
RationalMatrix block_diagonal(const RationalMatrix& a, const RationalMatrix& b);

std::string to_string(const RationalMatrix& m);

/// Exact rank by fraction-free (Bareiss) elimination on a row-scaled integer copy.
std::size_t rank(const RationalMatrix& m);

struct RowEchelon {
    RationalMatrix reduced;
    std::vector<std::size_t> pivots;  ///< pivot column of each nonzero row
};

/// Reduced row echelon form with pivots chosen left to right, top to bottom.
RowEchelon rref(const RationalMatrix& m);

/// Basis of the null space as columns (cols x nullity), one vector per free column.
RationalMatrix kernel_basis(const RationalMatrix& m);

/// Solution of m x = b with free variables set to zero, if one exists.
std::optional<RationalVector> solve(const RationalMatrix& m, const RationalVector& b);

/// Inverse of a square matrix; std::nullopt when singular.
std::optional<RationalMatrix> inverse(const RationalMatrix& m);

}  // namespace derham

#endif
