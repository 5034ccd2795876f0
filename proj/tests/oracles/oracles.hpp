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

// Reference implementations used only by the tests. None of them calls into
// the library's numerical kernels; they trade speed for simplicity.

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

struct JacobiResult {
  Eigen::VectorXd values;   // ascending
  Matrix vectors;           // columns, orthonormal
};

/// Cyclic Jacobi rotations on the real symmetric embedding
/// [[Re A, -Im A], [Im A, Re A]]; each eigenvalue appears twice there.
JacobiResult JacobiEigen(const Matrix& a, double tol = 1e-14, int max_sweeps = 100);

/// Projector onto eigenvalues index [first, first + count) of Hermitian `a`.
Matrix JacobiProjector(const Matrix& a, std::size_t first, std::size_t count);

/// Largest singular value from the Jacobi spectrum of A^dagger A.
double JacobiNorm(const Matrix& a);

/// exp(-i t A) by Taylor series with scaling and squaring.
Matrix TaylorExp(const Matrix& a, double t);

/// U(s) for i dU/ds = tau G(s) U, U(0) = I, by adaptive Dormand-Prince
/// integration; returns U at each requested s (ascending).
std::vector<Matrix> SchrodingerOracle(const std::function<Matrix(double)>& generator, double tau,
                                      const std::vector<double>& s_points, double tol = 1e-11);

/// Romberg integration of a smooth scalar function.
double Romberg(const std::function<double(double)>& f, double a, double b, double tol = 1e-12,
               int max_levels = 22);

/// Composite trapezoid rule with n panels.
double Trapezoid(const std::function<double(double)>& f, double a, double b, std::size_t n);

/// X~ as the unique off-diagonal T with [H, T] = P X - X P, solved as a
/// dense linear system in vec(T).
Matrix SylvesterTwiddle(const Matrix& x, const Matrix& h, const Matrix& p);

/// Moore-Penrose pseudo-inverse by SVD.
Matrix PseudoInverse(const Matrix& a, double rcond = 1e-12);

/// Fourth-order central difference.
Matrix Derivative(const std::function<Matrix(double)>& f, double s, double h);
double Derivative(const std::function<double(double)>& f, double s, double h);

/// Seeded complex Gaussian matrices.
Matrix RandomMatrix(Eigen::Index dim, unsigned seed);
Matrix RandomHermitian(Eigen::Index dim, unsigned seed);

}  // namespace oracle
