#include "bsrinf/int_matrix.hpp"

#include <gtest/gtest.h>

#include <random>

using bsrinf::Int;
using bsrinf::IntMatrix;

namespace {

// independent 2x2 oracle: ad - bc
Int det2_oracle(const IntMatrix& m) {
    return m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
}

// independent oracle: cofactor expansion along the first row
Int det_cofactor_oracle(const IntMatrix& m) {
    const std::size_t n = m.rows();
    if (n == 1) return m.at(0, 0);
    Int acc = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (m.at(0, j) == 0) continue;
        IntMatrix minor(n - 1, n - 1);
        for (std::size_t i = 1; i < n; ++i) {
            std::size_t cc = 0;
            for (std::size_t k = 0; k < n; ++k) {
                if (k == j) continue;
                minor.at(i - 1, cc++) = m.at(i, k);
            }
        }
        Int term = m.at(0, j) * det_cofactor_oracle(minor);
        acc += (j % 2 == 0) ? term : -term;
    }
    return acc;
}

} // namespace

TEST(IntMatrix, BasicShapeAndAccess) {
    IntMatrix m(2, 3);
    EXPECT_EQ(m.rows(), 2u);
    EXPECT_EQ(m.cols(), 3u);
    m.at(1, 2) = 7;
    EXPECT_EQ(m.at(1, 2), 7);
    EXPECT_EQ(m.at(0, 0), 0);
    EXPECT_EQ(m.entries().size(), 6u);
}

TEST(IntMatrix, ProductAndIdentity) {
    IntMatrix a{{1, 2}, {3, 4}};
    IntMatrix id = IntMatrix::identity(2);
    EXPECT_EQ(a * id, a);
    EXPECT_EQ(id * a, a);
    IntMatrix b{{0, 1}, {1, 0}};
    IntMatrix ab = a * b;
    EXPECT_EQ(ab, (IntMatrix{{2, 1}, {4, 3}}));
}

TEST(IntMatrix, ProductShapeMismatch) {
    IntMatrix a(2, 3), b(2, 3);
    EXPECT_THROW(a * b, bsrinf::dimension_mismatch);
}

TEST(Determinant, Identity4) {
    EXPECT_EQ(bsrinf::determinant(IntMatrix::identity(4)), 1);
}

TEST(Determinant, PhiMatrixOrder) {
    // lower bidiagonal with n-m on the diagonal, -m below, for (m,n,c)=(2,5,3)
    IntMatrix phi{{3, 0, 0}, {-2, 3, 0}, {0, -2, 3}};
    EXPECT_EQ(bsrinf::determinant(phi), 27);
}

TEST(Determinant, HandOracle2x2) {
    IntMatrix m{{4, 6}, {2, 8}};
    EXPECT_EQ(det2_oracle(m), 20);
    EXPECT_EQ(bsrinf::determinant(m), 20);
}

TEST(Determinant, NotSquareThrows) {
    IntMatrix m(2, 3);
    EXPECT_THROW(bsrinf::determinant(m), bsrinf::not_square);
}

TEST(Determinant, MatchesCofactorOracleOnRandomMatrices) {
    std::mt19937 rng(20240817);
    std::uniform_int_distribution<int> entry(-9, 9);
    std::uniform_int_distribution<int> dim(1, 5);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = static_cast<std::size_t>(dim(rng));
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m.at(i, j) = entry(rng);
        EXPECT_EQ(bsrinf::determinant(m), det_cofactor_oracle(m));
    }
}

TEST(Determinant, SingularWithZeroColumn) {
    IntMatrix m{{0, 1}, {0, 2}};
    EXPECT_EQ(bsrinf::determinant(m), 0);
}
