#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "spikebasis/errors.hpp"
#include "spikebasis/matrix.hpp"
#include "spikebasis/rng.hpp"

namespace spikebasis {

namespace tol {
inline constexpr double kOrthonormal = 1e-10;
inline constexpr double kVolumePreserving = 1e-10;
inline constexpr double kTransposeFastPath = 1e-12;
inline constexpr double kInvertibility = 1e-12;   // times max_abs^n
inline constexpr double kSingularMinor = 1e-12;
}  // namespace tol

/// Dictionary the basis is drawn from: O(n), SL±(n, R) or GL(n, R).
enum class DictionaryClass { Orthonormal, VolumePreserving, General };

inline bool is_orthonormal(const Matrix& m, double eps = tol::kOrthonormal) {
    if (!m.square()) return false;
    return max_abs_diff(m.transpose() * m, Matrix::identity(m.rows())) <= eps;
}

inline bool is_volume_preserving(double det, double eps = tol::kVolumePreserving) {
    return std::abs(std::abs(det) - 1.0) <= eps;
}

/// Invertible n x n basis with its determinant, inverse and cofactor matrix
/// computed once at construction. The cofactor at (i, j) is
/// (-1)^(i+j) times the determinant of the matrix with row i and column j
/// removed; cofactors drive every closed-form marginal quantity downstream,
/// so they are cached here rather than recomputed per coordinate.
class Basis {
public:
    explicit Basis(Matrix entries) : entries_(std::move(entries)) {
        if (!entries_.square() || entries_.rows() < 1)
            throw std::invalid_argument("Basis: matrix must be square and nonempty");
        for (double v : entries_.data())
            if (!std::isfinite(v)) throw std::invalid_argument("Basis: entries must be finite");
        n_ = entries_.rows();

        const double scale = entries_.max_abs();
        det_ = determinant(entries_);
        if (scale == 0.0 || std::abs(det_) < tol::kInvertibility * std::pow(scale, n_))
            throw SingularMatrixError("Basis: matrix is singular or too close to singular");

        if (is_orthonormal(entries_, tol::kTransposeFastPath)) {
            inverse_ = entries_.transpose();
        } else {
            inverse_ = lu_factor(entries_).inverse();
        }
        compute_cofactors();
    }

    /// Construct from a known (analysis, synthesis) pair. `entries` is the
    /// basis (synthesis) matrix and `inv` its exact inverse; the product is
    /// checked, the supplied inverse is kept verbatim.
    static Basis with_inverse(Matrix entries, Matrix inv) {
        if (!entries.square() || entries.rows() < 1 || inv.rows() != entries.rows() ||
            inv.cols() != entries.cols())
            throw std::invalid_argument("Basis::with_inverse: shape mismatch");
        const double scale = std::max(1.0, entries.max_abs() * inv.max_abs());
        if (max_abs_diff(entries * inv, Matrix::identity(entries.rows())) > 1e-10 * scale)
            throw std::invalid_argument("Basis::with_inverse: product is not the identity");
        return Basis(std::move(entries), std::move(inv));
    }

    int n() const { return n_; }
    const Matrix& entries() const { return entries_; }
    const Matrix& inverse() const { return inverse_; }
    const Matrix& cofactor_matrix() const { return cofactors_; }
    double det() const { return det_; }

    double cofactor(int i, int j) const { return cofactors_.at(i, j); }

    DictionaryClass dictionary_class() const {
        if (is_orthonormal(entries_)) return DictionaryClass::Orthonormal;
        if (is_volume_preserving(det_)) return DictionaryClass::VolumePreserving;
        return DictionaryClass::General;
    }

private:
    Basis(Matrix entries, Matrix inv)
        : entries_(std::move(entries)), inverse_(std::move(inv)) {
        n_ = entries_.rows();
        for (double v : entries_.data())
            if (!std::isfinite(v)) throw std::invalid_argument("Basis: entries must be finite");
        const double scale = entries_.max_abs();
        det_ = determinant(entries_);
        if (scale == 0.0 || std::abs(det_) < tol::kInvertibility * std::pow(scale, n_))
            throw SingularMatrixError("Basis: matrix is singular or too close to singular");
        compute_cofactors();
    }

    void compute_cofactors() {
        cofactors_ = Matrix(n_, n_);
        if (n_ == 1) {
            cofactors_(0, 0) = 1.0;
            return;
        }
        if (n_ <= 12) {
            for (int i = 0; i < n_; ++i)
                for (int j = 0; j < n_; ++j) {
                    const double m = determinant(entries_.minor_removing(i, j));
                    cofactors_(i, j) = ((i + j) % 2 == 0) ? m : -m;
                }
        } else {
            // adj(B) = det(B) B^{-1}, and the cofactor matrix is adj(B)^T.
            for (int i = 0; i < n_; ++i)
                for (int j = 0; j < n_; ++j) cofactors_(i, j) = det_ * inverse_(j, i);
        }
    }

    int n_ = 0;
    Matrix entries_;
    Matrix inverse_;
    Matrix cofactors_;
    double det_ = 0.0;
};

/// Residual of the identity
///   b_ij - r^T M^{-1} c = det(B) / cofactor(i, j),
/// where M is B with row i and column j removed, r is row i of B without
/// entry j, and c is column j of B without entry i. Returns the absolute
/// difference between the two sides.
inline double verify_cofactor_identity(const Basis& b, int i, int j) {
    const double cof = b.cofactor(i, j);
    if (std::abs(cof) < tol::kSingularMinor)
        throw SingularMinorError("verify_cofactor_identity: minor at (i, j) is singular");
    const int n = b.n();
    if (n == 1) return std::abs(b.entries()(0, 0) - b.det());

    const Matrix minor = b.entries().minor_removing(i, j);
    std::vector<double> r;
    r.reserve(static_cast<std::size_t>(n - 1));
    for (int k = 0; k < n; ++k)
        if (k != j) r.push_back(b.entries()(i, k));
    std::vector<double> c;
    c.reserve(static_cast<std::size_t>(n - 1));
    for (int k = 0; k < n; ++k)
        if (k != i) c.push_back(b.entries()(k, j));

    const std::vector<double> z = lu_factor(minor).solve(std::move(c));
    double dot = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) dot += r[k] * z[k];

    const double lhs = b.entries()(i, j) - dot;
    const double rhs = b.det() / cof;
    return std::abs(lhs - rhs);
}

/// Reflection across the hyperplane orthogonal to (1, ..., 1)/sqrt(n):
/// I_n - (2/n) 1 1^T. Orthogonal, symmetric, determinant -1.
inline Basis householder_reflector(int n) {
    if (n < 2) throw std::invalid_argument("householder_reflector: need n >= 2");
    Matrix m(n, n);
    const double off = -2.0 / n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = (i == j) ? 1.0 + off : off;
    return Basis(std::move(m));
}

/// Hand-picked orthonormal bases that minimize the coordinatewise marginal
/// entropy of the simple spike process; defined for n = 2, 3, 4 only
/// (for n >= 5 use the standard basis or householder_reflector).
inline Basis reference_lsdb(int n) {
    switch (n) {
        case 2: {
            const double s = 1.0 / std::sqrt(2.0);
            return Basis(Matrix::from_rows({{s, s}, {s, -s}}));
        }
        case 3: {
            const double a = 1.0 / std::sqrt(3.0);
            const double b = 1.0 / std::sqrt(6.0);
            const double c = 1.0 / std::sqrt(2.0);
            return Basis(Matrix::from_rows({{a, b, c}, {a, b, -c}, {a, -2.0 * b, 0.0}}));
        }
        case 4: {
            const double h = 0.5;
            return Basis(Matrix::from_rows({{h, h, h, h},
                                            {h, h, -h, -h},
                                            {h, -h, h, -h},
                                            {h, -h, -h, h}}));
        }
        default:
            throw std::invalid_argument("reference_lsdb: defined for n in {2, 3, 4}");
    }
}

/// Biorthogonal minimizer pair of the marginal-entropy cost over GL(n, R)
/// for the simple spike process. The analysis matrix has first row a and
/// row k equal to b_k off the diagonal with c_k at position (k, k); the
/// synthesis matrix is its exact inverse, assembled from d_k = 1/(c_k - b_k).
struct GlLsdbPair {
    Matrix analysis;
    Matrix synthesis;
    bool volume_preserving = false;

    /// The pair as a Basis: entries = synthesis, inverse = analysis.
    Basis basis() const { return Basis::with_inverse(synthesis, analysis); }
};

inline GlLsdbPair gl_lsdb_pair(double a, const std::vector<double>& b,
                               const std::vector<double>& c) {
    if (b.size() != c.size())
        throw std::invalid_argument("gl_lsdb_pair: b and c must have equal length");
    const int n = static_cast<int>(b.size()) + 1;
    if (n <= 2) throw std::invalid_argument("gl_lsdb_pair: need n > 2 (b, c of length n - 1)");
    if (a == 0.0) throw DegenerateParametersError("gl_lsdb_pair: a must be nonzero");
    for (std::size_t k = 0; k < b.size(); ++k)
        if (b[k] == c[k])
            throw DegenerateParametersError("gl_lsdb_pair: b_k and c_k must differ");

    GlLsdbPair pair;
    pair.analysis = Matrix(n, n);
    for (int j = 0; j < n; ++j) pair.analysis(0, j) = a;
    for (int i = 1; i < n; ++i) {
        const double bi = b[static_cast<std::size_t>(i - 1)];
        for (int j = 0; j < n; ++j) pair.analysis(i, j) = bi;
        pair.analysis(i, i) = c[static_cast<std::size_t>(i - 1)];
    }

    std::vector<double> d(b.size());
    double bd_sum = 0.0;
    for (std::size_t k = 0; k < b.size(); ++k) {
        d[k] = 1.0 / (c[k] - b[k]);
        bd_sum += b[k] * d[k];
    }
    pair.synthesis = Matrix(n, n);
    pair.synthesis(0, 0) = (1.0 + bd_sum) / a;
    for (int j = 1; j < n; ++j) pair.synthesis(0, j) = -d[static_cast<std::size_t>(j - 1)];
    for (int i = 1; i < n; ++i) {
        const double di = d[static_cast<std::size_t>(i - 1)];
        pair.synthesis(i, 0) = -b[static_cast<std::size_t>(i - 1)] * di / a;
        pair.synthesis(i, i) = di;
    }

    const double scale =
        std::max(1.0, pair.analysis.max_abs() * pair.synthesis.max_abs());
    if (max_abs_diff(pair.analysis * pair.synthesis, Matrix::identity(n)) > 1e-8 * scale)
        throw DegenerateParametersError(
            "gl_lsdb_pair: parameters produce a numerically degenerate pair");

    pair.volume_preserving = is_volume_preserving(determinant(pair.analysis));
    return pair;
}

/// Alignment of a basis against a reference modulo column permutation and
/// column sign flips. permutation[j] = source column matched to reference
/// column j; signs[j] in {+1, -1}; residual is the Frobenius distance of the
/// aligned matrix to the reference.
struct CanonicalForm {
    std::vector<int> permutation;
    std::vector<int> signs;
    double residual = 0.0;
};

inline CanonicalForm canonicalize(const Basis& b, const Basis& reference) {
    if (b.n() != reference.n())
        throw std::invalid_argument("canonicalize: dimensions differ");
    const int n = b.n();
    CanonicalForm form;
    form.permutation.assign(static_cast<std::size_t>(n), -1);
    form.signs.assign(static_cast<std::size_t>(n), 1);
    std::vector<bool> used(static_cast<std::size_t>(n), false);

    // Greedy match in reference-column order: largest |inner product| wins.
    for (int j = 0; j < n; ++j) {
        int best_k = -1;
        double best_dot = 0.0;
        double best_abs = -1.0;
        for (int k = 0; k < n; ++k) {
            if (used[static_cast<std::size_t>(k)]) continue;
            double dot = 0.0;
            for (int i = 0; i < n; ++i) dot += reference.entries()(i, j) * b.entries()(i, k);
            if (std::abs(dot) > best_abs) {
                best_abs = std::abs(dot);
                best_dot = dot;
                best_k = k;
            }
        }
        used[static_cast<std::size_t>(best_k)] = true;
        form.permutation[static_cast<std::size_t>(j)] = best_k;
        form.signs[static_cast<std::size_t>(j)] = best_dot >= 0.0 ? 1 : -1;
    }

    double sq = 0.0;
    for (int j = 0; j < n; ++j) {
        const int k = form.permutation[static_cast<std::size_t>(j)];
        const double s = static_cast<double>(form.signs[static_cast<std::size_t>(j)]);
        for (int i = 0; i < n; ++i) {
            const double d = s * b.entries()(i, k) - reference.entries()(i, j);
            sq += d * d;
        }
    }
    form.residual = std::sqrt(sq);
    return form;
}

/// True when every row and column holds exactly one entry of modulus 1 and
/// zeros elsewhere, all within eps.
inline bool is_signed_permutation(const Matrix& m, double eps = 1e-8) {
    if (!m.square()) return false;
    const int n = m.rows();
    std::vector<int> col_hits(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        int row_hits = 0;
        for (int j = 0; j < n; ++j) {
            const double v = std::abs(m(i, j));
            if (std::abs(v - 1.0) <= eps) {
                ++row_hits;
                ++col_hits[static_cast<std::size_t>(j)];
            } else if (v > eps) {
                return false;
            }
        }
        if (row_hits != 1) return false;
    }
    for (int c : col_hits)
        if (c != 1) return false;
    return true;
}

/// Haar-distributed random orthogonal matrix: modified Gram-Schmidt on a
/// Gaussian matrix (two passes), diagonal of R kept positive.
inline Basis random_orthonormal(int n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("random_orthonormal: need n >= 1");
    for (;;) {
        Matrix g(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
        bool ok = true;
        for (int j = 0; j < n && ok; ++j) {
            for (int pass = 0; pass < 2; ++pass)
                for (int k = 0; k < j; ++k) {
                    double dot = 0.0;
                    for (int i = 0; i < n; ++i) dot += g(i, k) * g(i, j);
                    for (int i = 0; i < n; ++i) g(i, j) -= dot * g(i, k);
                }
            double norm = 0.0;
            for (int i = 0; i < n; ++i) norm += g(i, j) * g(i, j);
            norm = std::sqrt(norm);
            if (norm < 1e-8) {
                ok = false;
                break;
            }
            for (int i = 0; i < n; ++i) g(i, j) /= norm;
        }
        if (ok) return Basis(std::move(g));
    }
}

/// Random element of SL±(n, R): Gaussian entries rescaled to |det| = 1.
inline Basis random_volume_preserving(int n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("random_volume_preserving: need n >= 1");
    for (;;) {
        Matrix g(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
        const double d = determinant(g);
        if (std::abs(d) < 1e-6) continue;
        const double s = std::pow(std::abs(d), -1.0 / n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g(i, j) *= s;
        return Basis(std::move(g));
    }
}

}  // namespace spikebasis
