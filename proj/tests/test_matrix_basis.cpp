#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "oracle.hpp"
#include "spikebasis/basis.hpp"
#include "spikebasis/matrix.hpp"
#include "spikebasis/rng.hpp"

using namespace spikebasis;

namespace {

Matrix random_matrix(int n, Rng& rng, double scale = 1.0) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = scale * rng.normal();
    return m;
}

}  // namespace

TEST_CASE("matrix basics") {
    Matrix m = Matrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
    REQUIRE(m.rows() == 2);
    REQUIRE(m(1, 0) == 3.0);
    REQUIRE(m.transpose()(0, 1) == 3.0);
    REQUIRE(m.max_abs() == 4.0);
    REQUIRE_THROWS_AS(m.at(2, 0), std::out_of_range);

    const Matrix id = Matrix::identity(3);
    REQUIRE(max_abs_diff(id * id, id) == 0.0);

    const Matrix mi = m.minor_removing(0, 1);
    REQUIRE(mi.rows() == 1);
    REQUIRE(mi(0, 0) == 3.0);

    REQUIRE_THROWS_AS(Matrix::from_rows({{1.0}, {1.0, 2.0}}), std::invalid_argument);
}

TEST_CASE("determinant and LU inverse agree with Laplace expansion") {
    Rng rng(7);
    for (int n = 1; n <= 6; ++n) {
        for (int rep = 0; rep < 5; ++rep) {
            const Matrix m = random_matrix(n, rng);
            const double d_ref = oracle::det_laplace(m);
            REQUIRE_THAT(determinant(m), Catch::Matchers::WithinAbs(d_ref, 1e-10));
            if (std::abs(d_ref) > 1e-3) {
                const Matrix inv = lu_factor(m).inverse();
                REQUIRE(max_abs_diff(m * inv, Matrix::identity(n)) < 1e-10);
            }
        }
    }
}

TEST_CASE("lu solve handles permuted systems") {
    const Matrix m = Matrix::from_rows({{0.0, 2.0, 1.0}, {1.0, 0.0, 0.0}, {4.0, 1.0, 3.0}});
    const auto f = lu_factor(m);
    REQUIRE_FALSE(f.singular);
    const std::vector<double> x = f.solve({3.0, 1.0, 8.0});
    const std::vector<double> back = m * x;
    REQUIRE_THAT(back[0], Catch::Matchers::WithinAbs(3.0, 1e-12));
    REQUIRE_THAT(back[1], Catch::Matchers::WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(back[2], Catch::Matchers::WithinAbs(8.0, 1e-12));
}

TEST_CASE("basis construction validates invertibility") {
    REQUIRE_THROWS_AS(Basis(Matrix(3, 3, 0.0)), SingularMatrixError);
    REQUIRE_THROWS_AS(Basis(Matrix::from_rows({{1.0, 2.0}, {2.0, 4.0}})), SingularMatrixError);
    REQUIRE_THROWS_AS(Basis(Matrix(2, 3, 1.0)), std::invalid_argument);

    // Scale must not matter: a tiny well-conditioned matrix is fine.
    const Basis tiny(Matrix::from_rows({{1e-8, 0.0}, {0.0, 1e-8}}));
    REQUIRE_THAT(tiny.det(), Catch::Matchers::WithinAbs(1e-16, 1e-22));
}

TEST_CASE("basis inverse and cofactors on random matrices") {
    Rng rng(11);
    for (int n = 2; n <= 6; ++n) {
        for (int rep = 0; rep < 4; ++rep) {
            Matrix m = random_matrix(n, rng);
            if (std::abs(oracle::det_laplace(m)) < 1e-2) continue;
            const Basis b(m);
            REQUIRE(max_abs_diff(b.entries() * b.inverse(), Matrix::identity(n)) < 1e-10);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    REQUIRE_THAT(b.cofactor(i, j),
                                 Catch::Matchers::WithinAbs(oracle::cofactor_laplace(m, i, j), 1e-9));
        }
    }
}

TEST_CASE("cofactors of an integer matrix match hand expansion exactly") {
    const Matrix m = Matrix::from_rows({{2.0, -1.0, 3.0}, {0.0, 4.0, 1.0}, {5.0, 2.0, -2.0}});
    const Basis b(m);
    // 2x2 minor determinants, expanded by hand.
    REQUIRE(b.cofactor(0, 0) == 4.0 * -2.0 - 1.0 * 2.0);      // -10
    REQUIRE(b.cofactor(0, 1) == -(0.0 * -2.0 - 1.0 * 5.0));   // 5
    REQUIRE(b.cofactor(1, 2) == -(2.0 * 2.0 - (-1.0) * 5.0)); // -9
    REQUIRE(b.cofactor(2, 0) == -1.0 * 1.0 - 3.0 * 4.0);      // -13
    REQUIRE(oracle::cofactor_laplace(m, 0, 0) == -10.0);
    REQUIRE(oracle::cofactor_laplace(m, 2, 0) == -13.0);
}

TEST_CASE("orthonormal fast path returns the exact transpose") {
    const Basis hr = householder_reflector(5);
    REQUIRE(max_abs_diff(hr.inverse(), hr.entries().transpose()) == 0.0);
}

TEST_CASE("large-n cofactor route matches the minor route") {
    Rng rng(13);
    const int n = 13;  // adjugate route
    Matrix m = random_matrix(n, rng);
    const Basis b(m);
    // Recompute a handful of cofactors directly from minors.
    for (int i = 0; i < n; i += 5)
        for (int j = 1; j < n; j += 4) {
            const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            const double direct = sign * determinant(m.minor_removing(i, j));
            REQUIRE_THAT(b.cofactor(i, j),
                         Catch::Matchers::WithinAbs(direct, 1e-8 * std::abs(direct) + 1e-8));
        }
}

TEST_CASE("cofactor identity holds on well conditioned matrices") {
    Rng rng(17);
    for (int rep = 0; rep < 20; ++rep) {
        const Basis b(random_matrix(5, rng));
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) {
                if (std::abs(b.cofactor(i, j)) < 1e-6) continue;
                REQUIRE(verify_cofactor_identity(b, i, j) < 1e-8);
            }
    }
}

TEST_CASE("cofactor identity refuses singular minors") {
    // Minor at (0, 0) is [[1, 1], [1, 1]].
    const Matrix m = Matrix::from_rows({{5.0, 2.0, 3.0}, {0.0, 1.0, 1.0}, {1.0, 1.0, 1.0}});
    const Basis b(m);
    REQUIRE(std::abs(b.cofactor(0, 0)) < 1e-12);
    REQUIRE_THROWS_AS(verify_cofactor_identity(b, 0, 0), SingularMinorError);
    REQUIRE(verify_cofactor_identity(b, 0, 1) < 1e-10);
}

TEST_CASE("householder reflector properties") {
    REQUIRE_THROWS_AS(householder_reflector(1), std::invalid_argument);
    for (int n : {2, 3, 8, 64}) {
        const Basis hr = householder_reflector(n);
        REQUIRE(is_orthonormal(hr.entries()));
        REQUIRE_THAT(hr.det(), Catch::Matchers::WithinAbs(-1.0, 1e-10));
        REQUIRE(max_abs_diff(hr.entries(), hr.entries().transpose()) == 0.0);
        REQUIRE(max_abs_diff(hr.entries() * hr.entries(), Matrix::identity(n)) < 1e-13);
        REQUIRE_THAT(hr.entries()(0, 0), Catch::Matchers::WithinAbs((n - 2.0) / n, 1e-15));
        REQUIRE_THAT(hr.entries()(0, 1), Catch::Matchers::WithinAbs(-2.0 / n, 1e-15));
    }
}

TEST_CASE("reference entropy minimizers are orthonormal") {
    for (int n : {2, 3, 4}) {
        const Basis b = reference_lsdb(n);
        REQUIRE(b.n() == n);
        REQUIRE(is_orthonormal(b.entries(), 1e-12));
    }
    REQUIRE_THROWS_AS(reference_lsdb(5), std::invalid_argument);
    REQUIRE_THROWS_AS(reference_lsdb(1), std::invalid_argument);

    const Basis haar = reference_lsdb(2);
    REQUIRE_THAT(haar.entries()(0, 0), Catch::Matchers::WithinAbs(1.0 / std::sqrt(2.0), 1e-15));
    const Basis walsh = reference_lsdb(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) REQUIRE(std::abs(walsh.entries()(i, j)) == 0.5);
}

TEST_CASE("biorthogonal pair construction") {
    SECTION("parameter validation") {
        REQUIRE_THROWS_AS(gl_lsdb_pair(0.0, {0.0, 0.0}, {1.0, 1.0}), DegenerateParametersError);
        REQUIRE_THROWS_AS(gl_lsdb_pair(1.0, {1.0, 0.0}, {1.0, 1.0}), DegenerateParametersError);
        REQUIRE_THROWS_AS(gl_lsdb_pair(1.0, {0.0}, {1.0}), std::invalid_argument);
        REQUIRE_THROWS_AS(gl_lsdb_pair(1.0, {0.0, 0.0}, {1.0}), std::invalid_argument);
    }

    SECTION("the two matrices invert each other") {
        Rng rng(23);
        for (int n = 3; n <= 8; ++n) {
            std::vector<double> b(static_cast<std::size_t>(n - 1));
            std::vector<double> c(static_cast<std::size_t>(n - 1));
            for (std::size_t k = 0; k < b.size(); ++k) {
                b[k] = rng.normal();
                c[k] = b[k] + 0.5 + rng.uniform01();
            }
            const GlLsdbPair pair = gl_lsdb_pair(1.5, b, c);
            REQUIRE(max_abs_diff(pair.analysis * pair.synthesis, Matrix::identity(n)) < 1e-12);
            const Basis basis = pair.basis();
            REQUIRE(max_abs_diff(basis.inverse(), pair.analysis) == 0.0);
        }
    }

    SECTION("volume preservation flag") {
        REQUIRE(gl_lsdb_pair(1.0, {0.0, 0.0}, {1.0, 1.0}).volume_preserving);
        REQUIRE(gl_lsdb_pair(1.0, {1.0, 1.0}, {2.0, 2.0}).volume_preserving);
        REQUIRE_FALSE(gl_lsdb_pair(2.0, {0.0, 0.0}, {1.0, 1.0}).volume_preserving);
        // a = ±prod(c_k - b_k)^(-1) restores |det| = 1.
        REQUIRE(gl_lsdb_pair(0.25, {0.0, 0.0}, {2.0, 2.0}).volume_preserving);
    }
}

TEST_CASE("canonicalize recognizes permuted sign-flipped copies") {
    const Basis walsh = reference_lsdb(4);
    Matrix shuffled(4, 4);
    // Columns reordered (2, 0, 3, 1) with signs (-, +, -, +).
    const int order[4] = {2, 0, 3, 1};
    const double sign[4] = {-1.0, 1.0, -1.0, 1.0};
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i) shuffled(i, j) = sign[j] * walsh.entries()(i, order[j]);
    const CanonicalForm form = canonicalize(Basis(shuffled), walsh);
    REQUIRE(form.residual < 1e-12);
    for (int j = 0; j < 4; ++j) {
        REQUIRE(order[form.permutation[static_cast<std::size_t>(j)]] == j);
    }
}

TEST_CASE("canonical residual measures genuine distance") {
    const double t = 0.3;
    const Basis rot(Matrix::from_rows({{std::cos(t), -std::sin(t)}, {std::sin(t), std::cos(t)}}));
    const CanonicalForm form = canonicalize(rot, Basis(Matrix::identity(2)));
    // Frobenius distance of R(0.3) to I is 2 sin(0.15) per matched column.
    REQUIRE_THAT(form.residual,
                 Catch::Matchers::WithinAbs(2.0 * std::sqrt(1.0 - std::cos(t)), 1e-12));
    REQUIRE(form.residual > 0.1);
}

TEST_CASE("signed permutation detection") {
    REQUIRE(is_signed_permutation(Matrix::identity(4)));
    Matrix m = Matrix::identity(3);
    m(0, 0) = -1.0;
    REQUIRE(is_signed_permutation(m));
    REQUIRE_FALSE(is_signed_permutation(reference_lsdb(2).entries()));
    m(0, 1) = 0.5;
    REQUIRE_FALSE(is_signed_permutation(m));
}

TEST_CASE("random orthonormal and volume preserving draws") {
    Rng rng(29);
    for (int n : {2, 3, 5, 8}) {
        for (int rep = 0; rep < 10; ++rep) {
            const Basis q = random_orthonormal(n, rng);
            REQUIRE(is_orthonormal(q.entries(), 1e-12));
            const Basis s = random_volume_preserving(n, rng);
            REQUIRE_THAT(std::abs(s.det()), Catch::Matchers::WithinAbs(1.0, 1e-10));
        }
    }
}

TEST_CASE("dictionary classification") {
    REQUIRE(Basis(Matrix::identity(3)).dictionary_class() == DictionaryClass::Orthonormal);
    Matrix d = Matrix::identity(3);
    d(0, 0) = 2.0;
    d(1, 1) = 0.5;
    REQUIRE(Basis(d).dictionary_class() == DictionaryClass::VolumePreserving);
    d(2, 2) = 3.0;
    REQUIRE(Basis(d).dictionary_class() == DictionaryClass::General);
}
