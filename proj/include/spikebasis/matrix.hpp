#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace spikebasis {

/// Dense row-major matrix of doubles, sized for desk-scale linear algebra
/// (n <= 64). Entry (i, j) is row i, column j, both zero-based.
class Matrix {
public:
    Matrix() = default;

    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("Matrix: negative dimension");
        data_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill);
    }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
        const int r = static_cast<int>(rows.size());
        const int c = r == 0 ? 0 : static_cast<int>(rows.begin()->size());
        Matrix m(r, c);
        int i = 0;
        for (const auto& row : rows) {
            if (static_cast<int>(row.size()) != c)
                throw std::invalid_argument("Matrix::from_rows: ragged rows");
            int j = 0;
            for (double v : row) m(i, j++) = v;
            ++i;
        }
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    double& operator()(int i, int j) { return data_[idx(i, j)]; }
    double operator()(int i, int j) const { return data_[idx(i, j)]; }

    double at(int i, int j) const {
        check_index(i, j);
        return data_[idx(i, j)];
    }

    const std::vector<double>& data() const { return data_; }

    std::vector<double> row(int i) const {
        check_index(i, 0);
        std::vector<double> out(static_cast<std::size_t>(cols_));
        for (int j = 0; j < cols_; ++j) out[static_cast<std::size_t>(j)] = (*this)(i, j);
        return out;
    }

    std::vector<double> col(int j) const {
        check_index(0, j);
        std::vector<double> out(static_cast<std::size_t>(rows_));
        for (int i = 0; i < rows_; ++i) out[static_cast<std::size_t>(i)] = (*this)(i, j);
        return out;
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    /// Copy with row i and column j removed.
    Matrix minor_removing(int i, int j) const {
        check_index(i, j);
        Matrix m(rows_ - 1, cols_ - 1);
        for (int r = 0, mr = 0; r < rows_; ++r) {
            if (r == i) continue;
            for (int c = 0, mc = 0; c < cols_; ++c) {
                if (c == j) continue;
                m(mr, mc) = (*this)(r, c);
                ++mc;
            }
            ++mr;
        }
        return m;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
               static_cast<std::size_t>(j);
    }

    void check_index(int i, int j) const {
        if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
            throw std::out_of_range("Matrix: index out of range");
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

inline Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("Matrix multiply: shape mismatch");
    Matrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

inline std::vector<double> operator*(const Matrix& a, const std::vector<double>& x) {
    if (a.cols() != static_cast<int>(x.size()))
        throw std::invalid_argument("Matrix-vector multiply: shape mismatch");
    std::vector<double> y(static_cast<std::size_t>(a.rows()), 0.0);
    for (int i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[static_cast<std::size_t>(j)];
        y[static_cast<std::size_t>(i)] = s;
    }
    return y;
}

inline Matrix operator*(double s, const Matrix& a) {
    Matrix b = a;
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) b(i, j) *= s;
    return b;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

inline double frobenius_distance(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("frobenius_distance: shape mismatch");
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            const double d = a(i, j) - b(i, j);
            s += d * d;
        }
    return std::sqrt(s);
}

/// LU factorization with partial pivoting. `det()` is zero when a pivot
/// vanished exactly; scale-aware singularity policy lives in Basis.
struct Lu {
    Matrix lu;
    std::vector<int> piv;
    int sign = 1;
    bool singular = false;

    double det() const {
        if (singular) return 0.0;
        double d = static_cast<double>(sign);
        for (int i = 0; i < lu.rows(); ++i) d *= lu(i, i);
        return d;
    }

    std::vector<double> solve(std::vector<double> b) const {
        const int n = lu.rows();
        if (singular) throw std::domain_error("Lu::solve: singular factorization");
        std::vector<double> x(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(piv[static_cast<std::size_t>(i)])];
        for (int i = 1; i < n; ++i)
            for (int k = 0; k < i; ++k) x[static_cast<std::size_t>(i)] -= lu(i, k) * x[static_cast<std::size_t>(k)];
        for (int i = n - 1; i >= 0; --i) {
            for (int k = i + 1; k < n; ++k) x[static_cast<std::size_t>(i)] -= lu(i, k) * x[static_cast<std::size_t>(k)];
            x[static_cast<std::size_t>(i)] /= lu(i, i);
        }
        return x;
    }

    Matrix inverse() const {
        const int n = lu.rows();
        Matrix inv(n, n);
        std::vector<double> e(static_cast<std::size_t>(n), 0.0);
        for (int j = 0; j < n; ++j) {
            e[static_cast<std::size_t>(j)] = 1.0;
            std::vector<double> x = solve(e);
            for (int i = 0; i < n; ++i) inv(i, j) = x[static_cast<std::size_t>(i)];
            e[static_cast<std::size_t>(j)] = 0.0;
        }
        return inv;
    }
};

inline Lu lu_factor(const Matrix& m) {
    if (!m.square()) throw std::invalid_argument("lu_factor: matrix not square");
    const int n = m.rows();
    Lu f;
    f.lu = m;
    f.piv.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) f.piv[static_cast<std::size_t>(i)] = i;

    // Row permutation is tracked in piv; rows of lu are swapped in place.
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;

    for (int k = 0; k < n; ++k) {
        int p = k;
        double best = std::abs(f.lu(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double v = std::abs(f.lu(i, k));
            if (v > best) {
                best = v;
                p = i;
            }
        }
        if (best == 0.0) {
            f.singular = true;
            return f;
        }
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(p, j));
            std::swap(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(p)]);
            f.sign = -f.sign;
        }
        for (int i = k + 1; i < n; ++i) {
            f.lu(i, k) /= f.lu(k, k);
            const double lik = f.lu(i, k);
            for (int j = k + 1; j < n; ++j) f.lu(i, j) -= lik * f.lu(k, j);
        }
    }
    f.piv = perm;
    return f;
}

/// Determinant via LU; det of the empty 0x0 matrix is 1 by convention.
inline double determinant(const Matrix& m) {
    if (!m.square()) throw std::invalid_argument("determinant: matrix not square");
    if (m.rows() == 0) return 1.0;
    if (m.rows() == 1) return m(0, 0);
    if (m.rows() == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    return lu_factor(m).det();
}

}  // namespace spikebasis
