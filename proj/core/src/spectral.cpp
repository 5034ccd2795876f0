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

#include "adiaband/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "adiaband/error.hpp"

namespace adiaband {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Cluster index range [first_cluster, last_cluster] selected by `band`.
std::pair<std::size_t, std::size_t> SelectClusters(const SpectralData& spectrum,
                                                   const BandSelector& band,
                                                   const NumericalPolicy& policy) {
  const auto& clusters = spectrum.clusters;
  return std::visit(
      Overloaded{
          [&](const BandSelector::Clusters& sel) -> std::pair<std::size_t, std::size_t> {
            if (sel.indices.empty()) Fail(ErrorCode::kEmptyBand, "no clusters selected");
            std::vector<std::size_t> idx = sel.indices;
            std::sort(idx.begin(), idx.end());
            for (std::size_t i = 0; i < idx.size(); ++i) {
              if (idx[i] >= clusters.size()) {
                Fail(ErrorCode::kInvalidArgument, "cluster index out of range");
              }
              if (i > 0 && idx[i] != idx[i - 1] + 1) {
                Fail(ErrorCode::kInvalidArgument, "selected clusters must be contiguous");
              }
            }
            return {idx.front(), idx.back()};
          },
          [&](const BandSelector::Window& w) -> std::pair<std::size_t, std::size_t> {
            if (!(w.lower < w.upper)) Fail(ErrorCode::kInvalidArgument, "empty energy window");
            std::size_t lo = clusters.size(), hi = 0;
            for (std::size_t c = 0; c < clusters.size(); ++c) {
              const auto first = static_cast<Eigen::Index>(clusters[c].first);
              const auto count = static_cast<Eigen::Index>(clusters[c].count);
              const auto values = spectrum.eigenvalues.segment(first, count);
              for (Eigen::Index k = 0; k < count; ++k) {
                const double d = std::min(std::abs(values[k] - w.lower), std::abs(values[k] - w.upper));
                if (d <= policy.gap_floor) {
                  Fail(ErrorCode::kGapCollapse, "window endpoint touches the spectrum");
                }
              }
              const bool lo_in = values.minCoeff() >= w.lower && values.minCoeff() <= w.upper;
              const bool hi_in = values.maxCoeff() >= w.lower && values.maxCoeff() <= w.upper;
              if (lo_in != hi_in) Fail(ErrorCode::kInvalidArgument, "a cluster straddles the window");
              if (lo_in) {
                lo = std::min(lo, c);
                hi = std::max(hi, c);
              }
            }
            if (lo == clusters.size()) Fail(ErrorCode::kEmptyBand, "no eigenvalue inside the window");
            return {lo, hi};
          },
          [&](const BandSelector::EigenRange& r) -> std::pair<std::size_t, std::size_t> {
            if (r.count == 0) Fail(ErrorCode::kEmptyBand, "empty eigenvalue range");
            const auto n = static_cast<std::size_t>(spectrum.dim());
            if (r.first + r.count > n) Fail(ErrorCode::kInvalidArgument, "eigenvalue range out of bounds");
            const std::size_t lo = spectrum.ClusterOf(r.first);
            const std::size_t hi = spectrum.ClusterOf(r.first + r.count - 1);
            if (clusters[lo].first != r.first ||
                clusters[hi].first + clusters[hi].count != r.first + r.count) {
              Fail(ErrorCode::kGapCollapse, "band boundary falls inside an eigenvalue cluster");
            }
            return {lo, hi};
          },
      },
      band.mode());
}

}  // namespace

ProjectorBundle BandProjector(const SpectralData& spectrum, const BandSelector& band,
                              const NumericalPolicy& policy) {
  const auto [lo, hi] = SelectClusters(spectrum, band, policy);
  ProjectorBundle b;
  b.first = spectrum.clusters[lo].first;
  b.rank = spectrum.clusters[hi].first + spectrum.clusters[hi].count - b.first;
  b.m = hi - lo + 1;
  const Eigen::Index d = spectrum.dim();
  const auto block =
      spectrum.eigenvectors.middleCols(static_cast<Eigen::Index>(b.first), static_cast<Eigen::Index>(b.rank));
  b.P = block * block.adjoint();
  b.Q = Operator::Identity(d, d) - b.P;
  for (std::size_t c = lo; c <= hi; ++c) {
    b.clusters.push_back({spectrum.clusters[c].mean, spectrum.clusters[c].projector});
  }
  const auto& ev = spectrum.eigenvalues;
  const auto band_lo = static_cast<Eigen::Index>(b.first);
  const auto band_hi = static_cast<Eigen::Index>(b.first + b.rank - 1);
  b.gap_below = band_lo > 0 ? ev[band_lo] - ev[band_lo - 1] : kInf;
  b.gap_above = band_hi + 1 < d ? ev[band_hi + 1] - ev[band_hi] : kInf;
  b.gap = std::min(b.gap_below, b.gap_above);
  if (b.gap <= policy.gap_floor) {
    std::ostringstream msg;
    msg << "band gap " << b.gap << " <= floor " << policy.gap_floor;
    Fail(ErrorCode::kGapCollapse, msg.str());
  }
  b.spectrum = spectrum;
  return b;
}

BandSelector ResolveBand(const HamiltonianFamily& family, const BandSelector& band,
                         const NumericalPolicy& policy) {
  const ProjectorBundle b = BandProjector(SpectralDecompose(family.H(0.0), policy), band, policy);
  return BandSelector::Eigen(b.first, b.rank);
}

ProjectorBundle BundleAt(const HamiltonianFamily& family, double s, const BandSelector& band,
                         const NumericalPolicy& policy) {
  return BandProjector(SpectralDecompose(family.H(s), policy), band, policy);
}

bool IsBandSuccessor(const ProjectorBundle& previous, const ProjectorBundle& next) {
  if (previous.rank != next.rank) return false;
  const double overlap = (next.P * previous.P).trace().real();
  return overlap >= static_cast<double>(previous.rank) - 0.25;
}

Operator ReducedResolvent(const ProjectorBundle& bundle, Complex z, const NumericalPolicy& policy) {
  const auto& sp = bundle.spectrum;
  const Eigen::Index d = sp.dim();
  Eigen::VectorXcd weights = Eigen::VectorXcd::Zero(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    if (bundle.InBand(static_cast<std::size_t>(k))) continue;
    const Complex diff = sp.eigenvalues[k] - z;
    if (std::abs(diff) < policy.gap_floor) {
      Fail(ErrorCode::kSingularReducedOperator, "z lies on the spectrum outside the band");
    }
    weights[k] = 1.0 / diff;
  }
  return sp.eigenvectors * weights.asDiagonal() * sp.eigenvectors.adjoint();
}

Operator Twiddle(const Operator& x, const ProjectorBundle& bundle) {
  const auto& sp = bundle.spectrum;
  RequireSameDim(x, sp.eigenvectors, "Twiddle");
  const Eigen::Index d = sp.dim();
  const auto first = static_cast<Eigen::Index>(bundle.first);
  const auto rank = static_cast<Eigen::Index>(bundle.rank);
  // Only the band rows and columns of the eigenbasis matrix survive, so
  // work with the d x rank slice of the eigenvectors: O(rank d^2).
  const auto vb = sp.eigenvectors.middleCols(first, rank);
  Operator top = (vb.adjoint() * x) * sp.eigenvectors;   // rank x d
  Operator left = sp.eigenvectors.adjoint() * (x * vb);  // d x rank
  for (Eigen::Index a = 0; a < rank; ++a) {
    const double mu = sp.clusters[sp.ClusterOf(static_cast<std::size_t>(first + a))].mean;
    for (Eigen::Index b = 0; b < d; ++b) {
      if (bundle.InBand(static_cast<std::size_t>(b))) {
        top(a, b) = 0.0;
        left(b, a) = 0.0;
        continue;
      }
      const double denom = sp.eigenvalues[b] - mu;
      top(a, b) = -top(a, b) / denom;
      left(b, a) = -left(b, a) / denom;
    }
  }
  return vb * (top * sp.eigenvectors.adjoint()) + (sp.eigenvectors * left) * vb.adjoint();
}

Circle BandContour(const ProjectorBundle& bundle, const ContourSpec& contour,
                   const NumericalPolicy& policy) {
  if (contour.nodes < 16) Fail(ErrorCode::kInvalidArgument, "contour needs >= 16 nodes");
  if (!(contour.margin_fraction > 0.0 && contour.margin_fraction < 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "contour margin fraction must lie in (0, 1)");
  }
  const auto& ev = bundle.spectrum.eigenvalues;
  const double lo = ev[static_cast<Eigen::Index>(bundle.first)];
  const double hi = ev[static_cast<Eigen::Index>(bundle.first + bundle.rank - 1)];
  const double below = std::isfinite(bundle.gap_below) ? bundle.gap_below : bundle.gap;
  const double above = std::isfinite(bundle.gap_above) ? bundle.gap_above : bundle.gap;
  if (!std::isfinite(below) || !std::isfinite(above)) {
    Fail(ErrorCode::kInvalidArgument, "band covers the whole spectrum");
  }
  const double margin = contour.margin_fraction * std::min(below, above);
  if (margin < policy.gap_floor) Fail(ErrorCode::kContourTooClose, "contour margin below gap floor");
  const double left = lo - contour.margin_fraction * below;
  const double right = hi + contour.margin_fraction * above;
  return {Complex(0.5 * (left + right), 0.0), 0.5 * (right - left)};
}

namespace {

// sum_k w_k F(z_k) for the trapezoid rule of (2 pi i)^-1 closed-integral F dz
// on a circle: z_k = c + r e^{i theta_k}, w_k = r e^{i theta_k} / N.
template <typename Integrand>
Operator CircleQuadrature(const Circle& circle, std::size_t nodes, Eigen::Index dim,
                          Integrand integrand) {
  Operator sum = Operator::Zero(dim, dim);
  for (std::size_t k = 0; k < nodes; ++k) {
    const double theta = 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.5) /
                         static_cast<double>(nodes);
    const Complex e = std::polar(circle.radius, theta);
    sum += (e / static_cast<double>(nodes)) * integrand(circle.center + e);
  }
  return sum;
}

Operator Resolvent(const HermitianOperator& h, Complex z) {
  const Eigen::Index d = h.dim();
  const Operator shifted = h.matrix() - z * Operator::Identity(d, d);
  return shifted.partialPivLu().inverse();
}

}  // namespace

Operator TwiddleContourOracle(const Operator& x, const HermitianOperator& h,
                              const ProjectorBundle& bundle, const ContourSpec& contour,
                              const NumericalPolicy& policy) {
  RequireSameDim(x, h, "TwiddleContourOracle");
  const Circle circle = BandContour(bundle, contour, policy);
  return CircleQuadrature(circle, contour.nodes, h.dim(), [&](Complex z) -> Operator {
    const Operator r = Resolvent(h, z);
    return r * x * r;
  });
}

Operator RieszProjectorOracle(const HermitianOperator& h, const ProjectorBundle& bundle,
                              const ContourSpec& contour, const NumericalPolicy& policy) {
  const Circle circle = BandContour(bundle, contour, policy);
  return -CircleQuadrature(circle, contour.nodes, h.dim(),
                           [&](Complex z) -> Operator { return Resolvent(h, z); });
}

Operator GOperator(const Operator& a, const Operator& b, const HermitianOperator& h,
                   const ProjectorBundle& bundle, const ContourSpec& contour,
                   const NumericalPolicy& policy) {
  RequireSameDim(a, h, "GOperator");
  RequireSameDim(b, h, "GOperator");
  const Circle circle = BandContour(bundle, contour, policy);
  return CircleQuadrature(circle, contour.nodes, h.dim(), [&](Complex z) -> Operator {
    const Operator r = Resolvent(h, z);
    return r * a * r * b * r;
  });
}

Operator GOperatorAlgebraic(const Operator& a, const Operator& b, const ProjectorBundle& bundle) {
  const Operator ta = Twiddle(a, bundle);
  const Operator tb = Twiddle(b, bundle);
  return (bundle.P - bundle.Q) *
         (ta * tb + Twiddle(a * tb, bundle) - Twiddle(ta * b, bundle));
}

Operator ProjectorDerivative(const FamilySample& sample, const ProjectorBundle& bundle) {
  return Twiddle(sample.dH.matrix(), bundle);
}

Operator SecondProjectorDerivative(const FamilySample& sample, const ProjectorBundle& bundle,
                                   const Operator& dP) {
  const Operator& dh = sample.dH.matrix();
  return Twiddle(sample.d2H.matrix(), bundle) +
         (bundle.Q - bundle.P) * (2.0 * dP * dP + 2.0 * Twiddle(Commutator(dh, dP), bundle));
}

BandDerivatives EvaluateBandDerivatives(const HamiltonianFamily& family, double s,
                                        const BandSelector& band, const NumericalPolicy& policy) {
  BandDerivatives out;
  out.sample = family(s);
  out.bundle = BandProjector(SpectralDecompose(out.sample.H, policy), band, policy);
  const auto& bundle = out.bundle;
  const Operator& dh = out.sample.dH.matrix();
  out.dP = ProjectorDerivative(out.sample, bundle);
  out.d2P = SecondProjectorDerivative(out.sample, bundle, out.dP);
  out.tdP = Twiddle(out.dP, bundle);
  out.q_dtdP_p = bundle.Q *
                 (Twiddle(out.d2P, bundle) + Twiddle(dh * out.tdP, bundle) -
                  Twiddle(out.tdP * dh, bundle)) *
                 bundle.P;
  return out;
}

Operator TwiddleDerivative(const HamiltonianFamily& family, double s, const BandSelector& band,
                           const NumericalPolicy& policy) {
  return EvaluateBandDerivatives(family, s, band, policy).q_dtdP_p;
}

}  // namespace adiaband
