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

#include <gtest/gtest.h>

#include "adiaband/family.hpp"
#include "adiaband/schedule.hpp"
#include "adiaband/spectral.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace adiaband {
namespace {

Operator Diag(std::initializer_list<double> d) {
  RealVector v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v(i++) = x;
  return v.cast<Complex>().asDiagonal();
}

ProjectorBundle Bundle(const Operator& h, const BandSelector& band) {
  return BandProjector(SpectralDecompose(HermitianOperator(h)), band);
}

const Operator kSigmaX = (Operator(2, 2) << 0, 1, 1, 0).finished();
const Operator kSigmaZ = (Operator(2, 2) << 1, 0, 0, -1).finished();

// H(s) = cos(s) sigma_z + sin(s) sigma_x with exact derivatives.
HamiltonianFamily Rotating() {
  auto value = [](double s) -> Operator { return std::cos(s) * kSigmaZ + std::sin(s) * kSigmaX; };
  auto sample = [](double s) {
    const double c = std::cos(s), n = std::sin(s);
    auto h = [](const Operator& m) { return HermitianOperator::Symmetrized(m); };
    return FamilySample{h(c * kSigmaZ + n * kSigmaX), h(-n * kSigmaZ + c * kSigmaX),
                        h(-c * kSigmaZ - n * kSigmaX), h(n * kSigmaZ - c * kSigmaX)};
  };
  return HamiltonianFamily(2, value, sample, DerivativeMode::kAnalytic, "rotating");
}

HamiltonianFamily Constant(const Operator& h) {
  const HermitianOperator a(h);
  const HermitianOperator zero(Operator::Zero(h.rows(), h.cols()));
  return HamiltonianFamily(
      h.rows(), [h](double) { return h; },
      [a, zero](double) { return FamilySample{a, zero, zero, zero}; }, DerivativeMode::kAnalytic,
      "constant");
}

// Eight-level spectrum with a two-cluster band {0.1, 0.1, 0.5} in a random basis.
std::pair<Operator, BandSelector> TwoClusterInstance(unsigned seed) {
  const Eigen::HouseholderQR<Operator> qr(oracle::RandomMatrix(8, seed));
  const Operator v = qr.householderQ();
  const Operator h = v * Diag({-2.0, -1.5, 0.1, 0.1, 0.5, 1.4, 2.0, 3.1}) * v.adjoint();
  return {0.5 * (h + h.adjoint()), BandSelector::ClusterSet({2, 3})};
}

TEST(BandProjector, LowestDegenerateCluster) {
  const ProjectorBundle b = Bundle(Diag({0, 0, 1}), BandSelector::Ground());
  EXPECT_LE((b.P - Diag({1, 1, 0})).norm(), 1e-14);
  EXPECT_EQ(b.m, 1u);
  EXPECT_EQ(b.rank, 2u);
  EXPECT_NEAR(b.gap, 1.0, 1e-14);
  EXPECT_LE((b.P + b.Q - Operator::Identity(3, 3)).norm(), 1e-10);
}

TEST(BandProjector, EnergyWindow) {
  const ProjectorBundle b = Bundle(Diag({0, 1, 5}), BandSelector::EnergyWindow(-0.5, 1.5));
  EXPECT_EQ(b.m, 2u);
  EXPECT_NEAR(b.gap, 4.0, 1e-14);
  Operator sum = Operator::Zero(3, 3);
  for (const auto& c : b.clusters) sum += c.projector;
  EXPECT_LE((sum - b.P).norm(), 1e-10);
}

TEST(BandProjector, GroverMidpointGap) {
  const auto grover = MakeGroverFamily({2, 0, GroverRepresentation::kFull}, LinearSchedule());
  EXPECT_NEAR(BundleAt(grover.family, 0.5, BandSelector::Ground()).gap, 0.5, 1e-12);
}

TEST(BandProjector, Errors) {
  const SpectralData d = SpectralDecompose(HermitianOperator(Diag({0, 1, 2})));
  EXPECT_ADIABAND_ERROR(BandProjector(d, BandSelector::EnergyWindow(5, 6)), ErrorCode::kEmptyBand);
  EXPECT_ADIABAND_ERROR(BandProjector(d, BandSelector::EnergyWindow(-1, 1.0)), ErrorCode::kGapCollapse);
  EXPECT_ADIABAND_ERROR(BandProjector(d, BandSelector::ClusterSet({0, 2})),
                        ErrorCode::kInvalidArgument);
  const SpectralData crossing = SpectralDecompose(HermitianOperator(Diag({0, 1, 1})));
  EXPECT_ADIABAND_ERROR(BandProjector(crossing, BandSelector::Eigen(0, 2)), ErrorCode::kGapCollapse);
}

TEST(BandProjector, WholeSpectrumHasInfiniteGap) {
  const ProjectorBundle b = Bundle(Diag({0, 1}), BandSelector::ClusterSet({0, 1}));
  EXPECT_TRUE(std::isinf(b.gap));
  EXPECT_LE(b.Q.norm(), 1e-14);
}

TEST(ReducedResolvent, Diagonal) {
  const ProjectorBundle a = Bundle(Diag({0, 1}), BandSelector::Ground());
  EXPECT_LE((ReducedResolvent(a, 0.0) - Diag({0, 1})).norm(), 1e-14);
  const ProjectorBundle b = Bundle(Diag({0, 2, 3}), BandSelector::Ground());
  EXPECT_LE((ReducedResolvent(b, 0.0) - Diag({0, 0.5, 1.0 / 3})).norm(), 1e-14);
}

TEST(ReducedResolvent, MatchesPseudoInverse) {
  const auto [h, band] = TwoClusterInstance(3);
  const ProjectorBundle b = Bundle(h, band);
  const Complex z = b.clusters[0].eigenvalue;
  const Operator r = ReducedResolvent(b, z);
  const Operator shifted = h - z * Operator::Identity(8, 8);
  const Operator ref = b.Q * oracle::PseudoInverse(b.Q * shifted * b.Q) * b.Q;
  EXPECT_LE(OperatorNorm(r - ref), 1e-9);
  EXPECT_LE(OperatorNorm(r * shifted * b.Q - b.Q), 1e-9);
  EXPECT_LE(OperatorNorm(r), 1.0 / b.gap + 1e-9);
}

TEST(ReducedResolvent, SingularAtOutsideEigenvalue) {
  const ProjectorBundle b = Bundle(Diag({0, 1}), BandSelector::Ground());
  EXPECT_ADIABAND_ERROR(ReducedResolvent(b, 1.0), ErrorCode::kSingularReducedOperator);
}

TEST(Twiddle, OfProjectorVanishes) {
  const auto [h, band] = TwoClusterInstance(4);
  const ProjectorBundle b = Bundle(h, band);
  EXPECT_LE(Twiddle(b.P, b).norm(), 1e-12);
}

TEST(Twiddle, PauliXClosedForm) {
  const ProjectorBundle b = Bundle(Diag({0, 1}), BandSelector::Ground());
  EXPECT_LE((Twiddle(kSigmaX, b) + kSigmaX).norm(), 1e-14);
}

TEST(Twiddle, MatchesContourAndSylvesterOracles) {
  const auto [h, band] = TwoClusterInstance(5);
  const ProjectorBundle b = Bundle(h, band);
  ASSERT_EQ(b.m, 2u);
  const Operator x = oracle::RandomMatrix(8, 99);
  const Operator t = Twiddle(x, b);
  const Operator contour = TwiddleContourOracle(x, HermitianOperator(h), b);
  EXPECT_LE((t - contour).norm() / contour.norm(), 1e-8);
  EXPECT_LE((t - oracle::SylvesterTwiddle(x, h, b.P)).norm(), 1e-9);
}

TEST(Twiddle, Identities) {
  for (unsigned seed = 1; seed <= 100; ++seed) {
    const Eigen::Index dim = 2 + seed % 7;
    const Operator h = oracle::RandomHermitian(dim, seed);
    const std::size_t count = 1 + seed % static_cast<unsigned>(dim - 1);
    const ProjectorBundle b = Bundle(h, BandSelector::Eigen(0, count));
    const Operator x = oracle::RandomMatrix(dim, seed + 1000);
    const Operator t = Twiddle(x, b);
    EXPECT_LE(OperatorNorm(b.P * t * b.P), 1e-9);
    EXPECT_LE(OperatorNorm(b.Q * t * b.Q), 1e-9);
    EXPECT_LE(OperatorNorm(Commutator(h, t) - (b.P * x - x * b.P)), 1e-8 * (1 + OperatorNorm(x)));
    EXPECT_LE(OperatorNorm(t), std::sqrt(static_cast<double>(b.m)) * OperatorNorm(x) / b.gap + 1e-9);
  }
}

TEST(TwiddleContourOracle, ZeroAndSelfConvergence) {
  const auto [h, band] = TwoClusterInstance(6);
  const ProjectorBundle b = Bundle(h, band);
  const HermitianOperator hh(h);
  EXPECT_LE(TwiddleContourOracle(Operator::Zero(8, 8), hh, b).norm(), 1e-15);
  const Operator x = oracle::RandomMatrix(8, 7);
  ContourSpec coarse, fine;
  coarse.nodes = 64;
  fine.nodes = 128;
  EXPECT_LE((TwiddleContourOracle(x, hh, b, coarse) - TwiddleContourOracle(x, hh, b, fine)).norm(),
            1e-10);
}

TEST(TwiddleContourOracle, RieszProjector) {
  const auto [h, band] = TwoClusterInstance(8);
  const ProjectorBundle b = Bundle(h, band);
  EXPECT_LE(OperatorNorm(RieszProjectorOracle(HermitianOperator(h), b) - b.P), 1e-10);
}

TEST(TwiddleContourOracle, TooFewNodes) {
  const ProjectorBundle b = Bundle(Diag({0, 1}), BandSelector::Ground());
  ContourSpec spec;
  spec.nodes = 8;
  EXPECT_ADIABAND_ERROR(BandContour(b, spec), ErrorCode::kInvalidArgument);
}

TEST(GOperator, TrivialCases) {
  const auto [h, band] = TwoClusterInstance(9);
  const ProjectorBundle b = Bundle(h, band);
  const HermitianOperator hh(h);
  const Operator zero = Operator::Zero(8, 8), id = Operator::Identity(8, 8);
  EXPECT_LE(GOperator(zero, zero, hh, b).norm(), 1e-15);
  EXPECT_LE(GOperator(id, id, hh, b).norm(), 1e-10);
  EXPECT_LE(GOperatorAlgebraic(id, id, b).norm(), 1e-12);
}

TEST(GOperator, AlgebraicIdentity) {
  const Operator h = oracle::RandomHermitian(6, 21);
  const ProjectorBundle b = Bundle(h, BandSelector::Eigen(1, 2));
  const Operator a = oracle::RandomMatrix(6, 22), c = oracle::RandomMatrix(6, 23);
  const Operator quad = GOperator(a, c, HermitianOperator(h), b);
  EXPECT_LE(OperatorNorm(quad - GOperatorAlgebraic(a, c, b)), 1e-7 * (1 + OperatorNorm(quad)));
}

TEST(ProjectorDerivative, ConstantFamily) {
  const HamiltonianFamily f = Constant(Diag({0, 1, 3}));
  const ProjectorBundle b = BundleAt(f, 0.4, BandSelector::Ground());
  EXPECT_LE(ProjectorDerivative(f(0.4), b).norm(), 1e-15);
}

TEST(ProjectorDerivative, GroverMatchesFiniteDifference) {
  const auto grover = MakeGroverFamily({2, 0, GroverRepresentation::kFull}, LinearSchedule());
  const BandSelector band = BandSelector::Ground();
  const double s = 0.5, h = 1e-4;
  const ProjectorBundle b = BundleAt(grover.family, s, band);
  const Operator dp = ProjectorDerivative(grover.family(s), b);
  const Operator fd = (BundleAt(grover.family, s + h, band).P - BundleAt(grover.family, s - h, band).P) / (2 * h);
  EXPECT_LE(OperatorNorm(dp - fd), 1e-6);
  EXPECT_LE(OperatorNorm(b.P * dp * b.P) + OperatorNorm(b.Q * dp * b.Q), 1e-8);
}

TEST(ProjectorDerivative, RotatingSpinHasHalfNorm) {
  const HamiltonianFamily f = Rotating();
  for (double s : {0.0, 0.7, 2.0}) {
    const ProjectorBundle b = BundleAt(f, s, BandSelector::Ground());
    EXPECT_NEAR(b.gap, 2.0, 1e-12);
    EXPECT_NEAR(OperatorNorm(ProjectorDerivative(f(s), b)), 0.5, 1e-12);
  }
}

TEST(TwiddleDerivative, ConstantAndCommutingFamilies) {
  EXPECT_LE(TwiddleDerivative(Constant(Diag({0, 2})), 0.3, BandSelector::Ground()).norm(), 1e-14);
  const HermitianOperator h0(Diag({0, 1, 2})), h1(Diag({0, 2, 5}));
  const HamiltonianFamily commuting = InterpolatingFamily(h0, h1, LinearSchedule());
  EXPECT_LE(TwiddleDerivative(commuting, 0.6, BandSelector::Ground()).norm(), 1e-14);
}

TEST(TwiddleDerivative, GroverMatchesFiniteDifference) {
  const auto grover = MakeGroverFamily({2, 0, GroverRepresentation::kFull}, LinearSchedule());
  const BandSelector band = BandSelector::Ground();
  const double s = 0.3;
  auto qtp = [&](double t) -> Operator {
    const ProjectorBundle b = BundleAt(grover.family, t, band);
    return Twiddle(ProjectorDerivative(grover.family(t), b), b);
  };
  const ProjectorBundle b = BundleAt(grover.family, s, band);
  const Operator fd = b.Q * (qtp(s + 1e-4) - qtp(s - 1e-4)) / 2e-4 * b.P;
  EXPECT_LE(OperatorNorm(TwiddleDerivative(grover.family, s, band) - fd), 1e-5);
}

TEST(ProjectorDerivatives, SecondDerivativeMatchesFiniteDifference) {
  const HamiltonianFamily f = RandomSmoothFamily(5, 3, 2);
  const BandSelector band = BandSelector::Eigen(0, 2);
  const double s = 0.45;
  const BandDerivatives d = EvaluateBandDerivatives(f, s, band);
  auto dp = [&](double t) -> Operator { return ProjectorDerivative(f(t), BundleAt(f, t, band)); };
  EXPECT_LE(OperatorNorm(d.d2P - oracle::Derivative(dp, s, 1e-4)), 1e-6);
}

TEST(BandTracking, SuccessorAndResolve) {
  const auto grover = MakeGroverFamily({3, 0, GroverRepresentation::kFull}, LinearSchedule());
  const BandSelector resolved = ResolveBand(grover.family, BandSelector::Ground());
  const auto* range = std::get_if<BandSelector::EigenRange>(&resolved.mode());
  ASSERT_NE(range, nullptr);
  EXPECT_EQ(range->first, 0u);
  EXPECT_EQ(range->count, 1u);
  const ProjectorBundle a = BundleAt(grover.family, 0.5, resolved);
  const ProjectorBundle b = BundleAt(grover.family, 0.501, resolved);
  EXPECT_TRUE(IsBandSuccessor(a, b));
  const ProjectorBundle other = BundleAt(grover.family, 0.5, BandSelector::Eigen(1, 1));
  EXPECT_FALSE(IsBandSuccessor(a, other));
}

}  // namespace
}  // namespace adiaband
