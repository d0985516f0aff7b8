#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "seqent/linalg.hpp"
#include "seqent/qstate.hpp"
#include "seqent/unitary.hpp"

using namespace seqent;

namespace {

double eig_residual(const ComplexMatrix& a, const HermitianEigen& e) {
    const std::size_t n = a.dim();
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            Complex av = 0.0;
            for (std::size_t j = 0; j < n; ++j) av += a(i, j) * e.vectors(j, k);
            worst = std::max(worst, std::abs(av - e.values[k] * e.vectors(i, k)));
        }
    return worst;
}

}  // namespace

TEST(Kron, IdentityTimesIdentity) {
    EXPECT_EQ(kron(ComplexMatrix::identity(2), ComplexMatrix::identity(2)), ComplexMatrix::identity(4));
}

TEST(Kron, ZZIsDiagonal) {
    const ComplexMatrix zz = kron(pauli::z(), pauli::z());
    const std::array<double, 4> diag{1, -1, -1, 1};
    ComplexMatrix expected = ComplexMatrix::diagonal(diag);
    EXPECT_EQ(zz, expected);
}

TEST(Kron, XXIsAntiDiagonal) {
    const ComplexMatrix xx = kron(pauli::x(), pauli::x());
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(xx(i, j), Complex(i + j == 3 ? 1.0 : 0.0)) << i << "," << j;
}

TEST(Kron, EntryLayout) {
    const ComplexMatrix a{{1, 2}, {3, 4}};
    const ComplexMatrix b{{5, 6, 7}, {8, 9, 10}, {11, 12, 13}};
    const ComplexMatrix k = kron(a, b);
    ASSERT_EQ(k.dim(), 6u);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t r = 0; r < 3; ++r)
                for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(k(i * 3 + r, j * 3 + c), a(i, j) * b(r, c));
}

TEST(Kron, AssociativeOnIntegerMatrices) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> d(-5, 5);
    auto rnd = [&](std::size_t n) {
        ComplexMatrix m(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = Complex(d(rng), d(rng));
        return m;
    };
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = rnd(2), b = rnd(2), c = rnd(3);
        EXPECT_EQ(kron(kron(a, b), c), kron(a, kron(b, c)));
    }
}

TEST(Kron, RejectsEmptyOperand) { EXPECT_THROW(kron(ComplexMatrix{}, ComplexMatrix::identity(2)), SizeError); }

TEST(ComplexMatrix, RejectsBadShapes) {
    EXPECT_THROW(ComplexMatrix(0), SizeError);
    EXPECT_THROW(ComplexMatrix(2, std::vector<Complex>(3)), SizeError);
    EXPECT_THROW((ComplexMatrix{{1, 2}, {3}}), SizeError);
    EXPECT_THROW(ComplexMatrix::identity(2) * ComplexMatrix::identity(3), SizeError);
}

TEST(ComplexMatrix, HermitianAndUnitaryPredicates) {
    EXPECT_TRUE(is_hermitian(pauli::y()));
    EXPECT_FALSE(is_hermitian(ComplexMatrix{{0, 1}, {0, 0}}));
    EXPECT_TRUE(is_unitary(pauli::y()));
    EXPECT_FALSE(is_unitary(ComplexMatrix::identity(2) * Complex(2.0)));
}

TEST(HermitianEig, PauliZ) {
    const auto e = hermitian_eig(pauli::z());
    ASSERT_EQ(e.values.size(), 2u);
    EXPECT_DOUBLE_EQ(e.values[0], -1.0);
    EXPECT_DOUBLE_EQ(e.values[1], 1.0);
}

TEST(HermitianEig, XXYYHamiltonian) {
    const auto e = hermitian_eig(xxyy_hamiltonian());
    const std::array<double, 4> expected{-2, 0, 0, 2};
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(e.values[k], expected[k], 1e-14);
}

TEST(HermitianEig, IdentityKeepsOrder) {
    const auto e = hermitian_eig(ComplexMatrix::identity(4));
    for (double v : e.values) EXPECT_DOUBLE_EQ(v, 1.0);
    EXPECT_EQ(e.vectors, ComplexMatrix::identity(4));
}

TEST(HermitianEig, TiesBrokenByDiagonalIndex) {
    const std::array<double, 4> diag{3, 1, 3, 1};
    const auto e = hermitian_eig(ComplexMatrix::diagonal(diag));
    const std::array<std::size_t, 4> source{1, 3, 0, 2};
    for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(e.vectors(source[k], k), Complex(1.0)) << k;
}

TEST(HermitianEig, RejectsNonHermitian) {
    EXPECT_THROW(hermitian_eig(ComplexMatrix{{0, 1}, {0, 0}}), ContractError);
    EXPECT_THROW(hermitian_eig(ComplexMatrix::identity(32)), SizeError);
}

TEST(HermitianEig, RandomReconstruction) {
    std::mt19937_64 rng(11);
    for (std::size_t dim : {2u, 4u, 16u}) {
        for (int trial = 0; trial < 20; ++trial) {
            const ComplexMatrix a = oracle::random_hermitian(dim, rng);
            const auto e = hermitian_eig(a);
            EXPECT_LT(eig_residual(a, e), 1e-12 * a.max_abs()) << "dim " << dim;
            EXPECT_LT(unitary_residual(e.vectors), 1e-12) << "dim " << dim;
            for (std::size_t k = 1; k < dim; ++k) EXPECT_LE(e.values[k - 1], e.values[k]);
        }
    }
}

TEST(HermitianEig, ComplexTwoByTwoClosedForm) {
    // [[a, z], [conj z, d]] has eigenvalues (a+d)/2 -+ sqrt(((a-d)/2)^2 + |z|^2).
    const double a = 0.3, d = -1.1;
    const Complex z(0.4, -0.7);
    const ComplexMatrix m{{a, z}, {std::conj(z), d}};
    const double mid = (a + d) / 2, rad = std::sqrt((a - d) * (a - d) / 4 + std::norm(z));
    const auto e = hermitian_eig(m);
    EXPECT_NEAR(e.values[0], mid - rad, 1e-15);
    EXPECT_NEAR(e.values[1], mid + rad, 1e-15);
}

TEST(ExpmIHermitian, ZeroAngleIsIdentity) {
    EXPECT_LT(max_abs_diff(expm_i_hermitian(xxyy_hamiltonian(), 0.0), ComplexMatrix::identity(4)), 1e-15);
}

TEST(ExpmIHermitian, XXYYBlockClosedForm) {
    for (double lambda : {0.1, 0.37, 1.2}) {
        const ComplexMatrix u = expm_i_hermitian(xxyy_hamiltonian(), lambda);
        const Complex c = std::cos(2 * lambda), s = Complex(0, -std::sin(2 * lambda));
        ComplexMatrix expected = ComplexMatrix::identity(4);
        expected(1, 1) = expected(2, 2) = c;
        expected(1, 2) = expected(2, 1) = s;
        EXPECT_LT(max_abs_diff(u, expected), 1e-14) << lambda;
    }
}

TEST(ExpmIHermitian, PiOnPauliZIsMinusIdentity) {
    const ComplexMatrix u = expm_i_hermitian(pauli::z(), std::numbers::pi);
    EXPECT_LT(max_abs_diff(u, ComplexMatrix::identity(2) * Complex(-1.0)), 1e-15);
}

TEST(ExpmIHermitian, MatchesTaylorOracleAndIsUnitary) {
    std::mt19937_64 rng(5);
    for (std::size_t dim : {2u, 4u, 16u}) {
        const ComplexMatrix h = oracle::random_hermitian(dim, rng);
        const ComplexMatrix u = expm_i_hermitian(h, 0.7);
        EXPECT_LT(max_abs_diff(u, oracle::expm_taylor(h, 0.7)), 1e-10);
        EXPECT_LT(unitary_residual(u), 1e-10);
    }
}

TEST(ExpmIHermitian, GroupProperty) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> angle(-2.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix h = oracle::random_hermitian(4, rng);
        const double t1 = angle(rng), t2 = angle(rng);
        EXPECT_LT(max_abs_diff(expm_i_hermitian(h, t1) * expm_i_hermitian(h, t2), expm_i_hermitian(h, t1 + t2)), 1e-10);
    }
}

TEST(TraceNorm, Basics) {
    const std::array<double, 2> d{1, -1};
    EXPECT_DOUBLE_EQ(trace_norm_hermitian(ComplexMatrix::diagonal(d)), 2.0);
    std::mt19937_64 rng(8);
    EXPECT_NEAR(trace_norm_hermitian(oracle::random_state(4, rng)), 1.0, 1e-13);
}

TEST(TraceNorm, BellPartialTranspose) {
    EXPECT_NEAR(trace_norm_hermitian(partial_transpose(states::bell(), {"B"})), 2.0, 1e-14);
}

TEST(TraceNorm, BoundsAbsoluteTrace) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        const ComplexMatrix a = oracle::random_hermitian(4, rng);
        EXPECT_GE(trace_norm_hermitian(a) + 1e-12, std::abs(a.trace()));
    }
}
