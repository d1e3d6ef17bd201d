#pragma once

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace perfbeam {

/// Row-major dense matrix for the small systems in this library (<= 64x64).
template <class T>
class BasicDenseMatrix {
  public:
    BasicDenseMatrix() = default;
    BasicDenseMatrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_{rows}, cols_{cols}, data_(rows * cols, fill) {}

    static BasicDenseMatrix identity(std::size_t n) {
        BasicDenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = T{1};
        }
        return m;
    }

    static BasicDenseMatrix from_rows(std::vector<std::vector<T>> const& rows) {
        if (rows.empty() || rows.front().empty()) {
            throw DomainError("matrix must have at least one row and column");
        }
        BasicDenseMatrix m(rows.size(), rows.front().size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != m.cols_) {
                throw DomainError("ragged row in matrix literal");
            }
            std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
        }
        return m;
    }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }

    T& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    T operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    [[nodiscard]] std::span<T> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    [[nodiscard]] std::span<T const> row(std::size_t r) const noexcept {
        return {data_.data() + r * cols_, cols_};
    }

    [[nodiscard]] BasicDenseMatrix transposed() const {
        BasicDenseMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                t(j, i) = (*this)(i, j);
            }
        }
        return t;
    }

    [[nodiscard]] T max_abs() const noexcept {
        T m{};
        for (T v : data_) {
            m = std::max(m, std::abs(v));
        }
        return m;
    }

    friend BasicDenseMatrix operator*(BasicDenseMatrix const& a, BasicDenseMatrix const& b) {
        if (a.cols_ != b.rows_) {
            throw DomainError("matrix product dimension mismatch");
        }
        BasicDenseMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                T const aik = a(i, k);
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    c(i, j) += aik * b(k, j);
                }
            }
        }
        return c;
    }

    friend BasicDenseMatrix operator-(BasicDenseMatrix a, BasicDenseMatrix const& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
            throw DomainError("matrix difference dimension mismatch");
        }
        for (std::size_t i = 0; i < a.data_.size(); ++i) {
            a.data_[i] -= b.data_[i];
        }
        return a;
    }

    friend bool operator==(BasicDenseMatrix const&, BasicDenseMatrix const&) = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using DenseMatrix = BasicDenseMatrix<double>;

[[nodiscard]] inline std::vector<double> multiply(DenseMatrix const& a, std::span<double const> x) {
    if (a.cols() != x.size()) {
        throw DomainError("matrix-vector dimension mismatch");
    }
    std::vector<double> y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto const r = a.row(i);
        y[i] = std::inner_product(r.begin(), r.end(), x.begin(), 0.0);
    }
    return y;
}

/// A^T x
[[nodiscard]] inline std::vector<double> multiply_transposed(DenseMatrix const& a, std::span<double const> x) {
    if (a.rows() != x.size()) {
        throw DomainError("transposed matrix-vector dimension mismatch");
    }
    std::vector<double> y(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto const r = a.row(i);
        for (std::size_t j = 0; j < a.cols(); ++j) {
            y[j] += r[j] * x[i];
        }
    }
    return y;
}

inline constexpr double singular_pivot_threshold = 1e-12;

/// Gauss-Jordan inverse with partial pivoting.
template <class T>
[[nodiscard]] BasicDenseMatrix<T> invert(BasicDenseMatrix<T> const& a) {
    if (!a.is_square() || a.rows() == 0) {
        throw DomainError("invert requires a non-empty square matrix");
    }
    std::size_t const n = a.rows();
    BasicDenseMatrix<T> work = a;
    BasicDenseMatrix<T> inv = BasicDenseMatrix<T>::identity(n);

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(work(r, col)) > std::abs(work(pivot, col))) {
                pivot = r;
            }
        }
        if (std::abs(work(pivot, col)) < singular_pivot_threshold) {
            throw SingularMatrixError("matrix is singular at pivot " + std::to_string(col), col);
        }
        if (pivot != col) {
            std::swap_ranges(work.row(col).begin(), work.row(col).end(), work.row(pivot).begin());
            std::swap_ranges(inv.row(col).begin(), inv.row(col).end(), inv.row(pivot).begin());
        }
        T const d = work(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            work(col, j) /= d;
            inv(col, j) /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) {
                continue;
            }
            T const f = work(r, col);
            if (f == T{}) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                work(r, j) -= f * work(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

/// Minimizer of ||A w - b||_2 by Householder QR.
///
/// A column whose diagonal entry in R falls below 1e-12 times the largest
/// column norm is reported as rank deficient.
[[nodiscard]] inline std::vector<double> least_squares(DenseMatrix const& a, std::span<double const> b) {
    std::size_t const m = a.rows();
    std::size_t const n = a.cols();
    if (m < n || n == 0) {
        throw DomainError("least_squares needs rows >= cols >= 1");
    }
    if (b.size() != m) {
        throw DomainError("least_squares right-hand side has wrong length");
    }

    double max_col_norm = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            s += a(i, j) * a(i, j);
        }
        max_col_norm = std::max(max_col_norm, std::sqrt(s));
    }
    double const rank_tol = 1e-12 * max_col_norm;

    DenseMatrix r = a;
    std::vector<double> qtb(b.begin(), b.end());
    std::vector<double> v(m);

    for (std::size_t k = 0; k < n; ++k) {
        double norm = 0.0;
        for (std::size_t i = k; i < m; ++i) {
            norm += r(i, k) * r(i, k);
        }
        norm = std::sqrt(norm);
        if (norm <= rank_tol) {
            throw RankDeficientError("design matrix is rank deficient at column " + std::to_string(k), k);
        }
        double const alpha = r(k, k) > 0.0 ? -norm : norm;
        for (std::size_t i = k; i < m; ++i) {
            v[i] = r(i, k);
        }
        v[k] -= alpha;
        double vnorm2 = 0.0;
        for (std::size_t i = k; i < m; ++i) {
            vnorm2 += v[i] * v[i];
        }
        // apply H = I - 2 v v^T / (v^T v) to the trailing block and to b
        for (std::size_t j = k; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = k; i < m; ++i) {
                s += v[i] * r(i, j);
            }
            s = 2.0 * s / vnorm2;
            for (std::size_t i = k; i < m; ++i) {
                r(i, j) -= s * v[i];
            }
        }
        double s = 0.0;
        for (std::size_t i = k; i < m; ++i) {
            s += v[i] * qtb[i];
        }
        s = 2.0 * s / vnorm2;
        for (std::size_t i = k; i < m; ++i) {
            qtb[i] -= s * v[i];
        }
    }

    std::vector<double> w(n, 0.0);
    for (std::size_t kk = n; kk-- > 0;) {
        double s = qtb[kk];
        for (std::size_t j = kk + 1; j < n; ++j) {
            s -= r(kk, j) * w[j];
        }
        w[kk] = s / r(kk, kk);
    }
    return w;
}

/// Lower-triangular L with A = L L^T.
[[nodiscard]] inline DenseMatrix cholesky(DenseMatrix const& a) {
    if (!a.is_square()) {
        throw DomainError("cholesky requires a square matrix");
    }
    std::size_t const n = a.rows();
    DenseMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) {
            d -= l(j, k) * l(j, k);
        }
        if (!(d > 0.0)) {
            throw NotPositiveDefiniteError(
                "matrix is not positive definite: leading minor " + std::to_string(j + 1), j + 1);
        }
        l(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) {
                s -= l(i, k) * l(j, k);
            }
            l(i, j) = s / l(j, j);
        }
    }
    return l;
}

struct EigenPair {
    double value = 0.0;
    std::vector<double> vector;
};

/// Cyclic Jacobi rotations for a symmetric matrix; eigenpairs ascending.
[[nodiscard]] inline std::vector<EigenPair> symmetric_eig(DenseMatrix a) {
    if (!a.is_square()) {
        throw DomainError("symmetric_eig requires a square matrix");
    }
    std::size_t const n = a.rows();
    DenseMatrix v = DenseMatrix::identity(n);

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                s += a(i, j) * a(i, j);
            }
        }
        return std::sqrt(s);
    };
    double const scale = std::max(a.max_abs(), 1e-300);

    for (int sweep = 0; sweep < 100 && off_norm() > 1e-16 * scale; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double const apq = a(p, q);
                if (std::abs(apq) < 1e-300) {
                    continue;
                }
                double const theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double const t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double const c = 1.0 / std::sqrt(t * t + 1.0);
                double const s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    double const akp = a(k, p);
                    double const akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double const apk = a(p, k);
                    double const aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double const vkp = v(k, p);
                    double const vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<EigenPair> pairs(n);
    for (std::size_t j = 0; j < n; ++j) {
        pairs[j].value = a(j, j);
        pairs[j].vector.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            pairs[j].vector[i] = v(i, j);
        }
    }
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](EigenPair const& x, EigenPair const& y) { return x.value < y.value; });
    return pairs;
}

/// Solves K v = mu M v for symmetric K and symmetric positive definite M.
///
/// M = L L^T reduces the pencil to C = L^-1 K L^-T; eigenvectors are mapped
/// back as v = L^-T y, which makes them M-orthonormal.
[[nodiscard]] inline std::vector<EigenPair> generalized_sym_eig(DenseMatrix const& k, DenseMatrix const& m) {
    if (!k.is_square() || !m.is_square() || k.rows() != m.rows()) {
        throw DomainError("generalized_sym_eig requires square matrices of equal size");
    }
    std::size_t const n = k.rows();
    DenseMatrix const l = cholesky(m);

    // Y = L^-1 K by forward substitution, column by column
    DenseMatrix y(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = k(i, c);
            for (std::size_t j = 0; j < i; ++j) {
                s -= l(i, j) * y(j, c);
            }
            y(i, c) = s / l(i, i);
        }
    }
    // C = Y L^-T, i.e. C^T = L^-1 Y^T
    DenseMatrix cmat(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = y(r, i);
            for (std::size_t j = 0; j < i; ++j) {
                s -= l(i, j) * cmat(r, j);
            }
            cmat(r, i) = s / l(i, i);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double const avg = 0.5 * (cmat(i, j) + cmat(j, i));
            cmat(i, j) = avg;
            cmat(j, i) = avg;
        }
    }

    auto pairs = symmetric_eig(std::move(cmat));
    for (auto& p : pairs) {
        // back substitution with L^T
        std::vector<double> x(n);
        for (std::size_t i = n; i-- > 0;) {
            double s = p.vector[i];
            for (std::size_t j = i + 1; j < n; ++j) {
                s -= l(j, i) * x[j];
            }
            x[i] = s / l(i, i);
        }
        p.vector = std::move(x);
    }
    return pairs;
}

} // namespace perfbeam
