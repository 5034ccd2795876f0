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

#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "adiaband/family.hpp"
#include "adiaband/numerical_policy.hpp"
#include "adiaband/operator.hpp"

namespace adiaband {

/// Chooses the spectral band P projects onto.
class BandSelector {
 public:
  /// Clusters by index in ascending order (must be contiguous).
  struct Clusters {
    std::vector<std::size_t> indices;
  };
  /// All eigenvalues inside [lower, upper].
  struct Window {
    double lower = 0.0;
    double upper = 0.0;
  };
  /// Eigenvalues first .. first + count - 1 in ascending order.
  struct EigenRange {
    std::size_t first = 0;
    std::size_t count = 1;
  };

  static BandSelector Ground() { return BandSelector(Clusters{{0}}); }
  static BandSelector ClusterSet(std::vector<std::size_t> indices) {
    return BandSelector(Clusters{std::move(indices)});
  }
  static BandSelector EnergyWindow(double lower, double upper) {
    return BandSelector(Window{lower, upper});
  }
  static BandSelector Eigen(std::size_t first, std::size_t count) {
    return BandSelector(EigenRange{first, count});
  }

  const std::variant<Clusters, Window, EigenRange>& mode() const noexcept { return mode_; }

 private:
  explicit BandSelector(std::variant<Clusters, Window, EigenRange> mode) : mode_(std::move(mode)) {}
  std::variant<Clusters, Window, EigenRange> mode_;
};

struct BandCluster {
  double eigenvalue = 0.0;  // cluster mean
  Operator projector;
};

/// Spectral projection onto a band together with the data the twiddle
/// operation needs. The band occupies eigenvalue indices
/// [first, first + rank) of `spectrum`.
struct ProjectorBundle {
  Operator P;
  Operator Q;
  std::vector<BandCluster> clusters;
  std::size_t m = 0;
  /// Distance from the band eigenvalues to the rest of the spectrum;
  /// +infinity when the band is the whole spectrum.
  double gap = 0.0;
  /// Distances to the nearest eigenvalue below / above the band (+infinity
  /// if none).
  double gap_below = 0.0;
  double gap_above = 0.0;
  std::size_t first = 0;
  std::size_t rank = 0;
  SpectralData spectrum;

  bool InBand(std::size_t index) const noexcept { return index >= first && index < first + rank; }
};

ProjectorBundle BandProjector(const SpectralData& spectrum, const BandSelector& band,
                              const NumericalPolicy& policy = {});

/// Resolves any selector against H(0) into an eigenvalue range. The range is
/// reused at every s: the gap condition forbids eigenvalues from entering or
/// leaving the band, so the index range is stable even across crossings
/// inside the band.
BandSelector ResolveBand(const HamiltonianFamily& family, const BandSelector& band,
                         const NumericalPolicy& policy = {});

ProjectorBundle BundleAt(const HamiltonianFamily& family, double s, const BandSelector& band,
                         const NumericalPolicy& policy = {});

/// Overlap-continuity test between consecutive band projectors:
/// trace(P_next P_prev) >= rank - 1/4.
bool IsBandSuccessor(const ProjectorBundle& previous, const ProjectorBundle& next);

/// Q [(H - z)|_Q]^-1 Q.
Operator ReducedResolvent(const ProjectorBundle& bundle, Complex z,
                          const NumericalPolicy& policy = {});

/// -sum_j (P_j X R_j + R_j X P_j) with R_j the reduced resolvent at the j-th
/// band eigenvalue.
Operator Twiddle(const Operator& x, const ProjectorBundle& bundle);

enum class ContourShape { kCircle };

struct ContourSpec {
  std::size_t nodes = 128;
  ContourShape shape = ContourShape::kCircle;
  /// Fraction of each bordering gap the contour reaches into.
  double margin_fraction = 0.5;
};

struct Circle {
  Complex center;
  double radius = 0.0;
};

/// Circle through the points halfway into the gaps below and above the band.
Circle BandContour(const ProjectorBundle& bundle, const ContourSpec& contour,
                   const NumericalPolicy& policy = {});

/// Trapezoid quadrature of (2 pi i)^-1 closed-integral (H-z)^-1 X (H-z)^-1 dz.
/// Resolvents are formed by LU solves of H - z, independent of the
/// eigendecomposition used by Twiddle.
Operator TwiddleContourOracle(const Operator& x, const HermitianOperator& h,
                              const ProjectorBundle& bundle, const ContourSpec& contour = {},
                              const NumericalPolicy& policy = {});

/// -(2 pi i)^-1 closed-integral (H-z)^-1 dz.
Operator RieszProjectorOracle(const HermitianOperator& h, const ProjectorBundle& bundle,
                              const ContourSpec& contour = {}, const NumericalPolicy& policy = {});

/// Quadrature of (2 pi i)^-1 closed-integral R A R B R dz.
Operator GOperator(const Operator& a, const Operator& b, const HermitianOperator& h,
                   const ProjectorBundle& bundle, const ContourSpec& contour = {},
                   const NumericalPolicy& policy = {});

/// (P - Q)(A~ B~ + (A B~)~ - (A~ B)~).
Operator GOperatorAlgebraic(const Operator& a, const Operator& b, const ProjectorBundle& bundle);

/// dP/ds = (dH/ds)~.
Operator ProjectorDerivative(const FamilySample& sample, const ProjectorBundle& bundle);

/// Everything the bounds need at one s.
struct BandDerivatives {
  FamilySample sample;
  ProjectorBundle bundle;
  Operator dP;        // P'
  Operator d2P;       // P''
  Operator tdP;       // (P')~
  Operator q_dtdP_p;  // Q [d/ds (P')~] P
};

/// P'' = (H'')~ + (Q - P)(2 P'^2 + 2 ([H', P'])~), and
/// Q [d/ds (P')~] P = Q ((P'')~ + (H' (P')~)~ - ((P')~ H')~) P.
BandDerivatives EvaluateBandDerivatives(const HamiltonianFamily& family, double s,
                                        const BandSelector& band,
                                        const NumericalPolicy& policy = {});

Operator SecondProjectorDerivative(const FamilySample& sample, const ProjectorBundle& bundle,
                                   const Operator& dP);

/// Q [d/ds (P')~] P at s.
Operator TwiddleDerivative(const HamiltonianFamily& family, double s, const BandSelector& band,
                           const NumericalPolicy& policy = {});

}  // namespace adiaband
