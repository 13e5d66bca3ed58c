#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "flagattr/numerics.hpp"
#include "oracles.hpp"

using namespace flagattr;
using namespace flagattr::numerics;

namespace {

double reconstruction_residual(const ComplexMatrix& m, const HermitianSpectrum& s) {
    const std::size_t n = m.rows();
    ComplexMatrix d(n, n);
    for (std::size_t i = 0; i < n; ++i) d(i, i) = s.eigenvalues[i];
    const ComplexMatrix rec = matmul(matmul(s.eigenvectors, d), s.eigenvectors.adjoint());
    double dev = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) dev = std::max(dev, std::abs(rec(i, j) - m(i, j)));
    return dev;
}

double unitarity_defect(const ComplexMatrix& u) {
    const ComplexMatrix g = matmul(u, u.adjoint());
    double dev = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j)
            dev = std::max(dev, std::abs(g(i, j) - (i == j ? cdbl{1.0, 0.0} : cdbl{0.0, 0.0})));
    return dev;
}

}  // namespace

TEST_CASE("diagonal input is already diagonalized") {
    ComplexMatrix m(2, 2);
    m(0, 0) = 2.0;
    m(1, 1) = 1.0;
    const HermitianSpectrum s = hermitian_eigendecompose(m, 1e-12);
    CHECK(s.eigenvalues[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(s.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(s.eigenvectors(0, 0) - cdbl{1.0, 0.0}) < 1e-12);
    CHECK(std::abs(s.eigenvectors(1, 1) - cdbl{1.0, 0.0}) < 1e-12);
    CHECK(s.multiplicity_blocks.size() == 2);
}

TEST_CASE("symmetric off-diagonal 2x2") {
    ComplexMatrix m(2, 2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    const HermitianSpectrum s = hermitian_eigendecompose(m, 1e-12);
    CHECK(s.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(s.eigenvalues[1] == doctest::Approx(-1.0));
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(s.eigenvectors(0, 0) - cdbl{r, 0.0}) < 1e-12);
    CHECK(std::abs(s.eigenvectors(1, 0) - cdbl{r, 0.0}) < 1e-12);
    CHECK(std::abs(s.eigenvectors(0, 1) - cdbl{r, 0.0}) < 1e-12);
    CHECK(std::abs(s.eigenvectors(1, 1) - cdbl{-r, 0.0}) < 1e-12);
}

TEST_CASE("random Hermitian reconstruction and unitarity") {
    std::mt19937_64 rng(1234);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 7);
        const ComplexMatrix m = oracles::random_hermitian(n, rng);
        const HermitianSpectrum s = hermitian_eigendecompose(m, 1e-9);
        CHECK(unitarity_defect(s.eigenvectors) < 1e-10);
        CHECK(reconstruction_residual(m, s) < 1e-10 * std::max(1.0, m.max_abs()));
        for (std::size_t i = 0; i + 1 < s.eigenvalues.size(); ++i)
            CHECK(s.eigenvalues[i] >= s.eigenvalues[i + 1]);
    }
}

TEST_CASE("multiplicity blocks group equal eigenvalues") {
    ComplexMatrix m(3, 3);
    m(0, 0) = 3.0;
    m(1, 1) = 3.0;
    m(2, 2) = 1.0;
    const HermitianSpectrum s = hermitian_eigendecompose(m, 1e-12);
    REQUIRE(s.multiplicity_blocks.size() == 2);
    CHECK(s.multiplicity_blocks[0] == std::pair<int, int>{0, 2});
    CHECK(s.multiplicity_blocks[1] == std::pair<int, int>{2, 3});
}

TEST_CASE("hermiticity is enforced") {
    ComplexMatrix m(2, 2);
    m(0, 1) = cdbl{0.0, 1.0};
    m(1, 0) = cdbl{0.0, 1.0};  // adjoint would need -i
    CHECK_THROWS_AS(hermitian_eigendecompose(m, 1e-10), NotHermitian);

    ComplexMatrix rect(2, 3);
    CHECK_THROWS_AS(hermitian_eigendecompose(rect, 1e-10), NotHermitian);

    // near-Hermitian input passes under a loose tolerance only
    ComplexMatrix almost(2, 2);
    almost(0, 1) = 1.0 + 1e-12;
    almost(1, 0) = 1.0;
    CHECK_NOTHROW(hermitian_eigendecompose(almost, 1e-10));
    CHECK_THROWS_AS(hermitian_eigendecompose(almost, 1e-14), NotHermitian);
}

TEST_CASE("rank of simple matrices") {
    ComplexMatrix z(3, 3);
    CHECK(numerical_rank(z) == 0);

    ComplexMatrix ones(2, 2);
    ones(0, 0) = ones(0, 1) = ones(1, 0) = ones(1, 1) = 1.0;
    CHECK(numerical_rank(ones) == 1);

    CHECK(numerical_rank(ComplexMatrix::identity(4)) == 4);
}

TEST_CASE("rank agrees with exact elimination on integer matrices") {
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 5);
        const int k = 1 + static_cast<int>(rng() % n);
        const oracles::IntMatrix m = oracles::random_int_matrix(n, k, 5, rng);
        CHECK(numerical_rank(m.to_complex()) == oracles::exact_rank(m.entries));
    }
    // rank-deficient products: n x r times r x k has rank at most r
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 3);
        const int r = 1 + static_cast<int>(rng() % 2);
        const int k = 2 + static_cast<int>(rng() % 3);
        const oracles::IntMatrix a = oracles::random_int_matrix(n, r, 4, rng);
        const oracles::IntMatrix b = oracles::random_int_matrix(r, k, 4, rng);
        const oracles::IntMatrix p = oracles::int_matmul(a, b);
        CHECK(numerical_rank(p.to_complex()) == oracles::exact_rank(p.entries));
    }
}

TEST_CASE("rank is invariant under unitary factors") {
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 3);
        const oracles::IntMatrix a = oracles::random_int_matrix(n, 2, 4, rng);
        const oracles::IntMatrix b = oracles::random_int_matrix(2, n, 4, rng);
        const ComplexMatrix m = oracles::int_matmul(a, b).to_complex();
        const int r = numerical_rank(m);
        const ComplexMatrix u = oracles::random_unitary(n, rng);
        CHECK(numerical_rank(matmul(u, m)) == r);
        CHECK(numerical_rank(matmul(m, u)) == r);
    }
}

TEST_CASE("rank decisions are stable under tiny perturbations") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1e-12, 1e-12);
    for (int trial = 0; trial < 15; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 3);
        const oracles::IntMatrix a = oracles::random_int_matrix(n, 2, 4, rng);
        const oracles::IntMatrix b = oracles::random_int_matrix(2, n, 4, rng);
        ComplexMatrix m = oracles::int_matmul(a, b).to_complex();
        if (m.max_abs() == 0.0) continue;
        const int r = numerical_rank(m);
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) += cdbl{u(rng), u(rng)};
        CHECK(numerical_rank(m) == r);
    }
}

TEST_CASE("orthonormalize basics") {
    CHECK(unitarity_defect(orthonormalize(ComplexMatrix::identity(3))) < 1e-14);

    ComplexMatrix v(2, 1);
    v(0, 0) = 3.0;
    v(1, 0) = 4.0;
    const ComplexMatrix q = orthonormalize(v);
    CHECK(std::abs(q(0, 0) - cdbl{0.6, 0.0}) < 1e-14);
    CHECK(std::abs(q(1, 0) - cdbl{0.8, 0.0}) < 1e-14);

    ComplexMatrix m(2, 2);
    m(0, 0) = 1.0;
    m(0, 1) = 1.0;
    m(1, 1) = 1.0;
    const ComplexMatrix g = orthonormalize(m);
    CHECK(std::abs(g(0, 0) - cdbl{1.0, 0.0}) < 1e-14);
    CHECK(std::abs(g(1, 0)) < 1e-14);
    CHECK(std::abs(g(0, 1)) < 1e-14);
    CHECK(std::abs(g(1, 1) - cdbl{1.0, 0.0}) < 1e-14);
}

TEST_CASE("orthonormalize rejects dependent columns") {
    ComplexMatrix m(3, 2);
    m(0, 0) = 1.0;
    m(1, 0) = 2.0;
    m(0, 1) = 2.0;
    m(1, 1) = 4.0;
    CHECK_THROWS_AS(orthonormalize(m), RankDeficient);
}

TEST_CASE("orthonormalize preserves column prefix spans") {
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 15; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 4);
        const int k = 1 + static_cast<int>(rng() % n);
        const ComplexMatrix m = oracles::random_complex(n, k, rng);
        const ComplexMatrix q = orthonormalize(m);
        CHECK(unitarity_defect(matmul(q.adjoint(), q)) < 1e-10);
        for (int i = 1; i <= k; ++i) {
            const ComplexMatrix joint =
                hcat(m.block(0, n, 0, i), q.block(0, n, 0, i));
            CHECK(numerical_rank(joint) == i);
        }
    }
}

TEST_CASE("checked rank flags ambiguous decisions") {
    ComplexMatrix m(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = 1e-9;  // exactly at threshold scale
    CHECK_THROWS_AS(checked_rank_with_scale(m, 1e-9, 1.0), IllConditioned);
    m(1, 1) = 1e-3;
    CHECK(checked_rank_with_scale(m, 1e-9, 1.0) == 2);
}

TEST_CASE("principal angles") {
    ComplexMatrix a(3, 1), b(3, 1);
    a(0, 0) = 1.0;
    b(1, 0) = 1.0;
    CHECK(max_principal_angle(a, a) < 1e-8);
    CHECK(max_principal_angle(a, b) == doctest::Approx(std::acos(0.0)));
}
