// Copyright 2026 The adiaband Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

#include "adiaband/operator.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace adiaband {
namespace {

using oracle::RandomHermitian;
using oracle::RandomMatrix;

Operator Diag(std::initializer_list<double> d) {
  RealVector v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v(i++) = x;
  return v.cast<Complex>().asDiagonal();
}

const Operator kSigmaX = (Operator(2, 2) << 0, 1, 1, 0).finished();
const Operator kSigmaY = (Operator(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished();
const Operator kSigmaZ = (Operator(2, 2) << 1, 0, 0, -1).finished();

TEST(HermitianOperator, RejectsNonHermitian) {
  Operator m = kSigmaX;
  m(0, 1) = 2.0;
  EXPECT_ADIABAND_ERROR(HermitianOperator{m}, ErrorCode::kNonHermitianInput);
}

TEST(HermitianOperator, RejectsNonFinite) {
  Operator m = kSigmaZ;
  m(0, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_ADIABAND_ERROR(HermitianOperator{m}, ErrorCode::kNonFiniteEntry);
}

TEST(HermitianOperator, AcceptsDefectWithinTolerance) {
  Operator m = kSigmaX;
  m(0, 1) += 1e-13;
  const HermitianOperator h(m);
  EXPECT_EQ(HermitianDefect(h.matrix()), 0.0);
}

TEST(UnitaryOperator, RejectsNonUnitary) {
  EXPECT_ADIABAND_ERROR(UnitaryOperator{2.0 * kSigmaX}, ErrorCode::kInvalidArgument);
}

TEST(SpectralDecompose, DiagonalTwoClusters) {
  const SpectralData d = SpectralDecompose(HermitianOperator(Diag({0, 1})), 0.0);
  ASSERT_EQ(d.clusters.size(), 2u);
  EXPECT_NEAR(d.eigenvalues(0), 0.0, 1e-15);
  EXPECT_NEAR(d.eigenvalues(1), 1.0, 1e-15);
  EXPECT_LE((d.clusters[0].projector - Diag({1, 0})).norm(), 1e-14);
  EXPECT_LE((d.clusters[1].projector - Diag({0, 1})).norm(), 1e-14);
}

TEST(SpectralDecompose, IdentityIsOneCluster) {
  const SpectralData d = SpectralDecompose(HermitianOperator(Operator::Identity(3, 3)), 0.0);
  ASSERT_EQ(d.clusters.size(), 1u);
  EXPECT_EQ(d.clusters[0].count, 3u);
  EXPECT_LE((d.clusters[0].projector - Operator::Identity(3, 3)).norm(), 1e-14);
}

TEST(SpectralDecompose, MatchesJacobiOracle) {
  for (unsigned seed = 1; seed <= 5; ++seed) {
    const Operator a = RandomHermitian(8, seed);
    const SpectralData d = SpectralDecompose(HermitianOperator(a));
    const oracle::JacobiResult ref = oracle::JacobiEigen(a);
    EXPECT_LE((d.eigenvalues - ref.values).cwiseAbs().maxCoeff(), 1e-10) << "seed " << seed;
  }
}

TEST(SpectralDecompose, ClusterInvariants) {
  // Degenerate spectrum {-1, -1, 2, 2, 2, 5} in a random basis.
  const Eigen::HouseholderQR<Operator> qr(RandomMatrix(6, 11));
  const Operator v = qr.householderQ();
  const Operator a = v * Diag({-1, -1, 2, 2, 2, 5}) * v.adjoint();
  const SpectralData d = SpectralDecompose(HermitianOperator::Symmetrized(a));
  ASSERT_EQ(d.clusters.size(), 3u);
  Operator sum = Operator::Zero(6, 6);
  Operator rebuilt = Operator::Zero(6, 6);
  for (std::size_t j = 0; j < d.clusters.size(); ++j) {
    const Operator& p = d.clusters[j].projector;
    EXPECT_LE(OperatorNorm(p * p - p), 1e-10);
    EXPECT_LE(OperatorNorm(p.adjoint() - p), 1e-10);
    for (std::size_t k = j + 1; k < d.clusters.size(); ++k) {
      EXPECT_LE(OperatorNorm(p * d.clusters[k].projector), 1e-10);
    }
    sum += p;
    rebuilt += d.clusters[j].mean * p;
  }
  EXPECT_LE(OperatorNorm(sum - Operator::Identity(6, 6)), 1e-10);
  EXPECT_LE(OperatorNorm(rebuilt - a), 1e-9 * (1 + OperatorNorm(a)));
  EXPECT_EQ(d.clusters[1].count, 3u);
  EXPECT_EQ(d.ClusterOf(4), 1u);
}

TEST(SpectralDecompose, NearDegeneracyMergesWithinTolerance) {
  const SpectralData d = SpectralDecompose(HermitianOperator(Diag({0, 1e-10, 1})));
  EXPECT_EQ(d.clusters.size(), 2u);
  const SpectralData split = SpectralDecompose(HermitianOperator(Diag({0, 1e-10, 1})), 0.0);
  EXPECT_EQ(split.clusters.size(), 3u);
}

TEST(OperatorNorm, Examples) {
  EXPECT_NEAR(OperatorNorm(kSigmaX), 1.0, 1e-15);
  EXPECT_NEAR(OperatorNorm(Diag({3, -4})), 4.0, 1e-14);
}

TEST(OperatorNorm, DifferenceOfRankOneProjectors) {
  for (double c : {0.0, 0.3, 0.8, 0.99}) {
    Eigen::VectorXcd a = Eigen::VectorXcd::Zero(3), b = Eigen::VectorXcd::Zero(3);
    a(0) = 1.0;
    b(0) = c;
    b(1) = std::sqrt(1 - c * c);
    const Operator m = a * a.adjoint() - b * b.adjoint();
    EXPECT_NEAR(OperatorNorm(m), std::sqrt(1 - c * c), 1e-10);
    EXPECT_NEAR(OperatorNorm(m), oracle::JacobiNorm(m), 1e-10);
  }
}

TEST(OperatorNorm, MatchesJacobiOnNonHermitian) {
  for (unsigned seed = 1; seed <= 5; ++seed) {
    const Operator m = RandomMatrix(5, seed);
    const double n = OperatorNorm(m);
    EXPECT_NEAR(n, oracle::JacobiNorm(m), 1e-10 * n);
  }
}

TEST(OperatorNorm, SubmultiplicativeAndAdjointInvariant) {
  for (unsigned seed = 0; seed < 100; ++seed) {
    const Operator a = RandomMatrix(4, 2 * seed + 1);
    const Operator b = RandomMatrix(4, 2 * seed + 2);
    EXPECT_LE(OperatorNorm(a * b), OperatorNorm(a) * OperatorNorm(b) * (1 + 1e-9));
    EXPECT_NEAR(OperatorNorm(a), OperatorNorm(a.adjoint()), 1e-9 * OperatorNorm(a));
  }
}

TEST(UnitaryExp, ZeroGivesIdentity) {
  const UnitaryOperator u = UnitaryExp(HermitianOperator(Operator::Zero(3, 3)), 2.0);
  EXPECT_LE((u.matrix() - Operator::Identity(3, 3)).norm(), 1e-15);
}

TEST(UnitaryExp, DiagonalPi) {
  const UnitaryOperator u = UnitaryExp(HermitianOperator(Diag({0, std::numbers::pi})), 1.0);
  EXPECT_LE((u.matrix() - Diag({1, -1})).norm(), 1e-14);
}

TEST(UnitaryExp, MatchesTaylorOracle) {
  for (unsigned seed = 1; seed <= 5; ++seed) {
    const Operator a = RandomHermitian(6, seed);
    const UnitaryOperator u = UnitaryExp(HermitianOperator(a), 0.3);
    EXPECT_LE(OperatorNorm(u.matrix() - oracle::TaylorExp(a, 0.3)), 1e-10);
  }
}

TEST(UnitaryExp, GroupProperty) {
  const HermitianOperator a(RandomHermitian(5, 3));
  const Operator lhs = UnitaryExp(a, 0.4).matrix() * UnitaryExp(a, 1.1).matrix();
  EXPECT_LE(OperatorNorm(lhs - UnitaryExp(a, 1.5).matrix()), 1e-9);
}

TEST(UnitaryExp, ScalarFastPath) {
  Operator a(1, 1);
  a(0, 0) = 2.0;
  const UnitaryOperator u = UnitaryExp(HermitianOperator(a), 0.25);
  EXPECT_NEAR(std::abs(u.matrix()(0, 0) - std::exp(Complex(0, -0.5))), 0.0, 1e-15);
}

TEST(Commutator, Examples) {
  const Operator a = RandomMatrix(3, 5);
  EXPECT_EQ(Commutator(a, a).norm(), 0.0);
  EXPECT_EQ(Commutator(Diag({1, 2}), Diag({-3, 7})).norm(), 0.0);
  EXPECT_LE((Commutator(kSigmaX, kSigmaY) - Complex(0, 2) * kSigmaZ).norm(), 1e-15);
}

TEST(Commutator, DimensionMismatch) {
  EXPECT_ADIABAND_ERROR(Commutator(Operator::Zero(2, 2), Operator::Zero(3, 3)),
                        ErrorCode::kDimensionMismatch);
}

}  // namespace
}  // namespace adiaband
