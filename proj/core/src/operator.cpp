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

#include "adiaband/operator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "adiaband/error.hpp"

namespace adiaband {

void RequireFinite(const Operator& a, const char* what) {
  if (a.size() == 0) Fail(ErrorCode::kInvalidArgument, std::string(what) + ": empty operator");
  if (!a.allFinite()) Fail(ErrorCode::kNonFiniteEntry, what);
}

void RequireSameDim(const Operator& a, const Operator& b, const char* what) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    Fail(ErrorCode::kDimensionMismatch,
         std::string(what) + ": " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
             " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
}

double HermitianDefect(const Operator& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

HermitianOperator::HermitianOperator(const Operator& m, const NumericalPolicy& policy) {
  RequireFinite(m, "HermitianOperator");
  if (m.rows() != m.cols()) Fail(ErrorCode::kDimensionMismatch, "HermitianOperator: not square");
  const double defect = HermitianDefect(m);
  if (defect > policy.hermitian_tol * (1.0 + OperatorNorm(m))) {
    Fail(ErrorCode::kNonHermitianInput, "max |A_jk - conj(A_kj)| = " + std::to_string(defect));
  }
  m_ = 0.5 * (m + m.adjoint());
}

HermitianOperator HermitianOperator::Symmetrized(const Operator& m) {
  HermitianOperator h;
  h.m_ = 0.5 * (m + m.adjoint());
  return h;
}

UnitaryOperator::UnitaryOperator(const Operator& m, const NumericalPolicy& policy) {
  RequireFinite(m, "UnitaryOperator");
  if (m.rows() != m.cols()) Fail(ErrorCode::kDimensionMismatch, "UnitaryOperator: not square");
  const Operator defect = m.adjoint() * m - Operator::Identity(m.rows(), m.cols());
  const double norm = OperatorNorm(defect);
  if (norm > policy.unitarity_tol) {
    Fail(ErrorCode::kInvalidArgument, "||U^dagger U - I|| = " + std::to_string(norm));
  }
  m_ = m;
}

UnitaryOperator UnitaryOperator::Identity(Eigen::Index dim) {
  return Trusted(Operator::Identity(dim, dim));
}

UnitaryOperator UnitaryOperator::Trusted(Operator m) {
  UnitaryOperator u;
  u.m_ = std::move(m);
  return u;
}

std::size_t SpectralData::ClusterOf(std::size_t index) const {
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    if (index >= clusters[c].first && index < clusters[c].first + clusters[c].count) return c;
  }
  Fail(ErrorCode::kInvalidArgument, "eigenvalue index out of range");
}

namespace {

Eigen::SelfAdjointEigenSolver<Operator> Diagonalize(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<Operator> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    Fail(ErrorCode::kConvergenceFailure, "self-adjoint eigensolver did not converge");
  }
  return solver;
}

SpectralData Cluster(const Eigen::SelfAdjointEigenSolver<Operator>& solver, double cluster_tol) {
  if (cluster_tol < 0.0 || !std::isfinite(cluster_tol)) {
    Fail(ErrorCode::kInvalidArgument, "cluster_tol must be finite and non-negative");
  }
  SpectralData out;
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();

  const auto n = static_cast<std::size_t>(out.eigenvalues.size());
  std::size_t start = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i == n || out.eigenvalues[i] - out.eigenvalues[i - 1] > cluster_tol) {
      EigenCluster c;
      c.first = start;
      c.count = i - start;
      const auto first = static_cast<Eigen::Index>(start);
      const auto count = static_cast<Eigen::Index>(c.count);
      c.mean = out.eigenvalues.segment(first, count).mean();
      const auto block = out.eigenvectors.middleCols(first, count);
      c.projector = block * block.adjoint();
      out.clusters.push_back(std::move(c));
      start = i;
    }
  }
  return out;
}

}  // namespace

SpectralData SpectralDecompose(const HermitianOperator& a, double cluster_tol) {
  return Cluster(Diagonalize(a), cluster_tol);
}

SpectralData SpectralDecompose(const HermitianOperator& a, const NumericalPolicy& policy) {
  const auto solver = Diagonalize(a);
  const double norm = solver.eigenvalues().cwiseAbs().maxCoeff();
  const double tol = policy.cluster_rel_tol < 0.0 ? 0.0 : policy.cluster_rel_tol * norm;
  return Cluster(solver, tol);
}

double OperatorNorm(const Operator& a) {
  RequireFinite(a, "OperatorNorm");
  if (a.rows() == a.cols() && (a - a.adjoint()).cwiseAbs().maxCoeff() == 0.0) {
    Eigen::SelfAdjointEigenSolver<Operator> solver(a, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) Fail(ErrorCode::kConvergenceFailure, "eigensolver failed");
    return solver.eigenvalues().cwiseAbs().maxCoeff();
  }
  const Operator gram = a.adjoint() * a;
  Eigen::SelfAdjointEigenSolver<Operator> solver(gram, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    Fail(ErrorCode::kConvergenceFailure, "eigensolver failed on A^dagger A");
  }
  return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
}

UnitaryOperator UnitaryExp(const HermitianOperator& a, double t) {
  const Eigen::Index d = a.dim();
  if (d == 1) {
    Operator u(1, 1);
    u(0, 0) = std::exp(Complex(0.0, -t * a.matrix()(0, 0).real()));
    return UnitaryOperator::Trusted(std::move(u));
  }
  const auto solver = Diagonalize(a);
  const auto& v = solver.eigenvectors();
  Eigen::VectorXcd phases(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    phases[k] = std::exp(Complex(0.0, -t * solver.eigenvalues()[k]));
  }
  return UnitaryOperator::Trusted(v * phases.asDiagonal() * v.adjoint());
}

Operator Commutator(const Operator& a, const Operator& b) {
  RequireSameDim(a, b, "Commutator");
  return a * b - b * a;
}

}  // namespace adiaband
