#include "derham/matrix.hpp"

#include "derham/error.hpp"

#include <utility>

namespace derham {

RationalMatrix RationalMatrix::identity(std::size_t n) {
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

RationalMatrix RationalMatrix::from_rows(const std::vector<std::vector<Rational>>& rows, std::size_t cols) {
    if (!rows.empty()) cols = rows.front().size();
    RationalMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw ValidationError("ragged matrix rows");
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

RationalMatrix RationalMatrix::from_columns(const std::vector<RationalVector>& columns, std::size_t rows) {
    RationalMatrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j].size() != rows) throw ValidationError("column length mismatch");
        for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
    }
    return m;
}

RationalVector RationalMatrix::column(std::size_t j) const {
    RationalVector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
}

RationalMatrix RationalMatrix::columns(const std::vector<std::size_t>& which) const {
    RationalMatrix out(rows_, which.size());
    for (std::size_t k = 0; k < which.size(); ++k) {
        for (std::size_t i = 0; i < rows_; ++i) out(i, k) = (*this)(i, which[k]);
    }
    return out;
}

RationalMatrix RationalMatrix::transpose() const {
    RationalMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    }
    return t;
}

bool RationalMatrix::is_zero() const {
    for (const auto& x : data_) {
        if (x != 0) return false;
    }
    return true;
}

RationalVector RationalMatrix::apply(const RationalVector& x) const {
    if (x.size() != cols_) throw ValidationError("matrix-vector shape mismatch");
    RationalVector y(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            if ((*this)(i, j) != 0 && x[j] != 0) y[i] += (*this)(i, j) * x[j];
        }
    }
    return y;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.cols_ != b.rows_) {
        throw ValidationError("matrix product shape mismatch: " + std::to_string(a.rows_) + "x" +
                              std::to_string(a.cols_) + " times " + std::to_string(b.rows_) + "x" +
                              std::to_string(b.cols_));
    }
    RationalMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const Rational& aik = a(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.cols_; ++j) {
                if (b(k, j) != 0) c(i, j) += aik * b(k, j);
            }
        }
    }
    return c;
}

RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw ValidationError("matrix sum shape mismatch");
    RationalMatrix c = a;
    for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] += b.data_[i];
    return c;
}

RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw ValidationError("matrix difference shape mismatch");
    RationalMatrix c = a;
    for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] -= b.data_[i];
    return c;
}

RationalMatrix hstack(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.rows() != b.rows()) throw ValidationError("hstack row mismatch");
    RationalMatrix c(a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) c(i, a.cols() + j) = b(i, j);
    }
    return c;
}

RationalMatrix vstack(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.cols() != b.cols()) throw ValidationError("vstack column mismatch");
    return hstack(a.transpose(), b.transpose()).transpose();
}

RationalMatrix block_diagonal(const RationalMatrix& a, const RationalMatrix& b) {
    RationalMatrix c(a.rows() + b.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
    }
    for (std::size_t i = 0; i < b.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) c(a.rows() + i, a.cols() + j) = b(i, j);
    }
    return c;
}

std::string to_string(const RationalMatrix& m) {
    std::string s = "[";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        s += i ? ", [" : "[";
        for (std::size_t j = 0; j < m.cols(); ++j) s += (j ? ", " : "") + to_string(m(i, j));
        s += "]";
    }
    return s + "]";
}

std::size_t rank(const RationalMatrix& m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    std::vector<std::vector<Integer>> a(rows, std::vector<Integer>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        Integer scale = 1;
        for (std::size_t j = 0; j < cols; ++j) scale = boost::multiprecision::lcm(scale, denominator(m(i, j)));
        for (std::size_t j = 0; j < cols; ++j) a[i][j] = numerator(m(i, j)) * (scale / denominator(m(i, j)));
    }
    Integer previous = 1;
    std::size_t r = 0;
    for (std::size_t col = 0; col < cols && r < rows; ++col) {
        std::size_t p = r;
        while (p < rows && a[p][col] == 0) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[r]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t j = col + 1; j < cols; ++j) {
                a[i][j] = (a[r][col] * a[i][j] - a[i][col] * a[r][j]) / previous;
            }
            a[i][col] = 0;
        }
        previous = a[r][col];
        ++r;
    }
    return r;
}

RowEchelon rref(const RationalMatrix& m) {
    RowEchelon out{m, {}};
    RationalMatrix& a = out.reduced;
    std::size_t r = 0;
    for (std::size_t col = 0; col < a.cols() && r < a.rows(); ++col) {
        std::size_t p = r;
        while (p < a.rows() && a(p, col) == 0) ++p;
        if (p == a.rows()) continue;
        if (p != r) {
            for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(r, j));
        }
        const Rational inv = 1 / a(r, col);
        for (std::size_t j = col; j < a.cols(); ++j) a(r, j) *= inv;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == r || a(i, col) == 0) continue;
            const Rational f = a(i, col);
            for (std::size_t j = col; j < a.cols(); ++j) {
                if (a(r, j) != 0) a(i, j) -= f * a(r, j);
            }
        }
        out.pivots.push_back(col);
        ++r;
    }
    return out;
}

RationalMatrix kernel_basis(const RationalMatrix& m) {
    const RowEchelon e = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t p : e.pivots) is_pivot[p] = true;
    std::vector<RationalVector> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        RationalVector v(m.cols());
        v[free] = 1;
        for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced(r, free);
        basis.push_back(std::move(v));
    }
    return RationalMatrix::from_columns(basis, m.cols());
}

std::optional<RationalVector> solve(const RationalMatrix& m, const RationalVector& b) {
    if (b.size() != m.rows()) throw ValidationError("solve: right-hand side has the wrong length");
    RationalMatrix aug(m.rows(), m.cols() + 1);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
        aug(i, m.cols()) = b[i];
    }
    const RowEchelon e = rref(aug);
    if (!e.pivots.empty() && e.pivots.back() == m.cols()) return std::nullopt;
    RationalVector x(m.cols());
    for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = e.reduced(r, m.cols());
    return x;
}

std::optional<RationalMatrix> inverse(const RationalMatrix& m) {
    if (m.rows() != m.cols()) throw ValidationError("inverse of a non-square matrix");
    const std::size_t n = m.rows();
    const RowEchelon e = rref(hstack(m, RationalMatrix::identity(n)));
    if (e.pivots.size() < n || (n > 0 && e.pivots[n - 1] != n - 1)) return std::nullopt;
    RationalMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.reduced(i, n + j);
    }
    return inv;
}

}  // namespace derham
