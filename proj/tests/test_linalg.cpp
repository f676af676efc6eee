#include <gtest/gtest.h>

#include <random>

#include "ispec/error.hpp"
#include "ispec/linalg.hpp"
#include "oracles.hpp"

using namespace ispec;

namespace {

RealMatrix random_skew(int n, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RealMatrix a = RealMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      a(i, j) = u(rng);
      a(j, i) = -a(i, j);
    }
  }
  return a;
}

ComplexMatrix random_complex(int n, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ComplexMatrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = Complex(u(rng), u(rng));
  }
  return a;
}

}  // namespace

TEST(Det, Identity) {
  const ComplexMatrix eye = ComplexMatrix::Identity(5, 5);
  EXPECT_NEAR(std::abs(det(eye) - 1.0), 0.0, 1e-15);
}

TEST(Det, Diagonal) {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 0) = 2.0;
  a(1, 1) = Complex(0.0, 3.0);
  EXPECT_NEAR(std::abs(det(a) - Complex(0.0, 6.0)), 0.0, 1e-14);
}

TEST(Det, MatchesCofactorExpansion) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const auto a = random_complex(6, rng);
    oracle::CMat rows(6, std::vector<oracle::Cx>(6));
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) rows[i][j] = a(i, j);
    }
    const Complex want = oracle::cofactor_det(rows);
    EXPECT_LT(std::abs(det(a) - want) / std::abs(want), 1e-10);
  }
}

TEST(Det, SingularGivesZero) {
  RealMatrix a(2, 2);
  a << 1, 2, 2, 4;
  EXPECT_EQ(det(a), 0.0);
  EXPECT_TRUE(log_det(ComplexMatrix::Zero(3, 3)).singular);
}

TEST(LogDet, AgreesWithDet) {
  std::mt19937 rng(11);
  const auto a = random_complex(7, rng);
  const auto ld = log_det(a);
  const Complex d = det(a);
  EXPECT_NEAR(ld.log_abs, std::log(std::abs(d)), 1e-12);
  EXPECT_NEAR(std::abs(ld.phase - d / std::abs(d)), 0.0, 1e-12);
}

TEST(LogDet, BeyondDoubleRange) {
  const ComplexMatrix a = ComplexMatrix::Identity(400, 400) * 1e3;
  const auto ld = log_det(a);
  EXPECT_NEAR(ld.log_abs, 400 * std::log(1e3), 1e-9);
  EXPECT_FALSE(ld.singular);
}

TEST(Pfaffian, TwoByTwo) {
  RealMatrix a(2, 2);
  a << 0, 1.7, -1.7, 0;
  EXPECT_DOUBLE_EQ(pfaffian(a).value, 1.7);
}

TEST(Pfaffian, FourByFourPairingFormula) {
  const double a12 = 0.3, a13 = -1.1, a14 = 2.0, a23 = 0.7, a24 = 1.9, a34 = -0.4;
  RealMatrix a(4, 4);
  a << 0, a12, a13, a14, -a12, 0, a23, a24, -a13, -a23, 0, a34, -a14, -a24, -a34, 0;
  EXPECT_NEAR(pfaffian(a).value, a12 * a34 - a13 * a24 + a14 * a23, 1e-15);
}

TEST(Pfaffian, MatchesPairingSum) {
  std::mt19937 rng(3);
  for (int n : {2, 4, 6, 8}) {
    const auto a = random_skew(n, rng);
    std::vector<std::vector<double>> rows(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) rows[i][j] = a(i, j);
    }
    EXPECT_NEAR(pfaffian(a).value, oracle::pairing_pfaffian(rows), 1e-12) << n;
  }
}

TEST(Pfaffian, SquareIsDeterminant) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_skew(8, rng);
    const double pf = pfaffian(a).value;
    const double d = det(a);
    EXPECT_LT(std::fabs(pf * pf - d) / std::fabs(d), 1e-9);
  }
}

TEST(Pfaffian, SwapFlipsSign) {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_skew(6, rng);
    Eigen::PermutationMatrix<Eigen::Dynamic> p(6);
    p.setIdentity();
    p.applyTranspositionOnTheRight(trial % 6, (trial + 2) % 6);
    const RealMatrix b = p.transpose() * a * p;
    EXPECT_NEAR(pfaffian(b).value, -pfaffian(a).value, 1e-12);
  }
}

TEST(Pfaffian, ZeroAndSingular) {
  EXPECT_EQ(pfaffian(RealMatrix::Zero(4, 4)).value, 0.0);
  EXPECT_EQ(pfaffian(RealMatrix::Zero(0, 0)).value, 1.0);
}

TEST(Pfaffian, OddDimensionFlagged) {
  std::mt19937 rng(1);
  const auto r = pfaffian(random_skew(5, rng));
  EXPECT_TRUE(r.odd_dimension);
  EXPECT_EQ(r.value, 0.0);
}

TEST(Pfaffian, RejectsNonSkew) {
  RealMatrix a(2, 2);
  a << 0, 1, 1, 0;
  try {
    pfaffian(a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSkew);
  }
}

TEST(InverseEntries, Identity) {
  const std::vector<std::pair<int, int>> pairs{{0, 0}, {0, 1}, {2, 2}, {2, 1}};
  const auto v = inverse_entries(ComplexMatrix::Identity(3, 3), pairs);
  EXPECT_EQ(v[0], Complex(1.0));
  EXPECT_EQ(v[1], Complex(0.0));
  EXPECT_EQ(v[2], Complex(1.0));
  EXPECT_EQ(v[3], Complex(0.0));
}

TEST(InverseEntries, Diagonal) {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 0) = 2.0;
  a(1, 1) = 4.0;
  const std::vector<std::pair<int, int>> pairs{{1, 1}};
  EXPECT_NEAR(std::abs(inverse_entries(a, pairs)[0] - 0.25), 0.0, 1e-15);
}

TEST(InverseEntries, ResidualOfRandomMatrix) {
  std::mt19937 rng(21);
  const auto a = random_complex(6, rng);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) pairs.emplace_back(i, j);
  }
  const auto v = inverse_entries(a, pairs);
  ComplexMatrix inv(6, 6);
  for (std::size_t k = 0; k < pairs.size(); ++k) inv(pairs[k].first, pairs[k].second) = v[k];
  EXPECT_LT((a * inv - ComplexMatrix::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((checked_inverse(a) - inv).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(InverseEntries, NearSingular) {
  ComplexMatrix a(2, 2);
  a << 1.0, 1.0, 1.0, 1.0 + 1e-15;
  const std::vector<std::pair<int, int>> pairs{{0, 0}};
  try {
    inverse_entries(a, pairs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NearSingular);
  }
  EXPECT_THROW(checked_inverse(ComplexMatrix::Zero(3, 3)), Error);
}

TEST(FourierCoeffs, Constant) {
  ComplexMatrix c(2, 2);
  c << 1.0, Complex(0, 2), -3.0, 0.5;
  const auto coeffs = fourier_coeffs([&](Complex) { return c; }, 32, -4, 4);
  ASSERT_EQ(coeffs.size(), 9u);
  for (int k = -4; k <= 4; ++k) {
    const double err = (coeffs[k + 4] - (k == 0 ? c : ComplexMatrix::Zero(2, 2))).cwiseAbs().maxCoeff();
    EXPECT_LT(err, 1e-14) << k;
  }
}

TEST(FourierCoeffs, Monomial) {
  ComplexMatrix c(1, 2);
  c << 2.0, Complex(0, -1);
  const auto coeffs = fourier_coeffs([&](Complex z) -> ComplexMatrix { return z * c; }, 64, -8, 8);
  for (int k = -8; k <= 8; ++k) {
    const double err = (coeffs[k + 8] - (k == 1 ? c : ComplexMatrix::Zero(1, 2))).cwiseAbs().maxCoeff();
    EXPECT_LT(err, 1e-14) << k;
  }
}

TEST(FourierCoeffs, ExactOnTrigonometricPolynomials) {
  const int M = 32;
  std::vector<ComplexMatrix> samples;
  for (int j = 0; j < M; ++j) {
    const Complex z = unit_root(j, M);
    ComplexMatrix s(1, 1);
    s(0, 0) = 3.0 * std::pow(z, 7) - Complex(0, 2) * std::pow(z, -5) + 0.5;
    samples.push_back(s);
  }
  const auto coeffs = fourier_coeffs(samples, -8, 8);
  for (int k = -8; k <= 8; ++k) {
    const Complex want = k == 7 ? Complex(3.0) : k == -5 ? Complex(0, -2) : k == 0 ? Complex(0.5) : Complex(0.0);
    EXPECT_LT(std::abs(coeffs[k + 8](0, 0) - want), 1e-14) << k;
  }
}

TEST(FourierCoeffs, RequiresFineGrid) {
  const std::vector<ComplexMatrix> samples(16, ComplexMatrix::Ones(1, 1));
  EXPECT_THROW(fourier_coeffs(samples, -5, 5), Error);
}

TEST(UnitRoot, Values) {
  EXPECT_NEAR(std::abs(unit_root(0, 8) - 1.0), 0.0, 1e-16);
  EXPECT_NEAR(std::abs(unit_root(2, 8) - Complex(0, 1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(unit_root(4, 8) + 1.0), 0.0, 1e-15);
}
