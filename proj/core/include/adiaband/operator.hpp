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

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "adiaband/numerical_policy.hpp"

namespace adiaband {

using Complex = std::complex<double>;
/// Generic bounded operator on C^dim.
using Operator = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Self-adjoint operator. Construction validates the Hermitian invariant and
/// stores the exactly symmetrized matrix.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  explicit HermitianOperator(const Operator& m, const NumericalPolicy& policy = {});

  /// Skips validation; symmetrizes. For matrices Hermitian by construction.
  static HermitianOperator Symmetrized(const Operator& m);

  const Operator& matrix() const noexcept { return m_; }
  operator const Operator&() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }

 private:
  Operator m_;
};

/// Unitary operator; construction validates ||U^dagger U - I||.
class UnitaryOperator {
 public:
  UnitaryOperator() = default;
  explicit UnitaryOperator(const Operator& m, const NumericalPolicy& policy = {});

  static UnitaryOperator Identity(Eigen::Index dim);
  /// Skips validation. For products of exact unitaries.
  static UnitaryOperator Trusted(Operator m);

  const Operator& matrix() const noexcept { return m_; }
  operator const Operator&() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }

 private:
  Operator m_;
};

/// A maximal run of eigenvalues whose consecutive spacings are <= cluster_tol.
struct EigenCluster {
  std::size_t first = 0;  // index into the ascending eigenvalue list
  std::size_t count = 0;
  double mean = 0.0;
  Operator projector;
};

struct SpectralData {
  RealVector eigenvalues;  // ascending
  Operator eigenvectors;   // columns, orthonormal
  std::vector<EigenCluster> clusters;

  Eigen::Index dim() const noexcept { return eigenvalues.size(); }
  /// Index of the cluster containing eigenvalue `index`.
  std::size_t ClusterOf(std::size_t index) const;
};

/// Throws kNonFiniteEntry if any entry is NaN or infinite.
void RequireFinite(const Operator& a, const char* what);
void RequireSameDim(const Operator& a, const Operator& b, const char* what);

double HermitianDefect(const Operator& a);

SpectralData SpectralDecompose(const HermitianOperator& a, double cluster_tol);
/// Uses cluster_tol = policy.cluster_rel_tol * ||A||.
SpectralData SpectralDecompose(const HermitianOperator& a,
                               const NumericalPolicy& policy = {});

/// Largest singular value, via the eigenvalues of A^dagger A.
double OperatorNorm(const Operator& a);

/// exp(-i t A) built from the spectral decomposition of A.
UnitaryOperator UnitaryExp(const HermitianOperator& a, double t);

Operator Commutator(const Operator& a, const Operator& b);

}  // namespace adiaband
