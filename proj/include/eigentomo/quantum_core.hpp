// Copyright 2026 The eigentomo Authors
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
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace eigentomo {

using Complex = std::complex<double>;

/// Raised when two operands live in Hilbert spaces of different dimension.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a matrix or vector fails the invariants of a quantum state.
class InvalidStateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace tolerance {
inline constexpr double kNorm = 1e-12;
inline constexpr double kHermitian = 1e-12;
inline constexpr double kTrace = 1e-12;
inline constexpr double kPsdFloor = 1e-10;
// Eigenvalues above this (negative) bound are clamped to zero before a
// matrix square root; anything below is treated as a genuinely non-PSD input.
inline constexpr double kSqrtClamp = 1e-8;
inline constexpr double kDegenerateGap = 1e-10;
}  // namespace tolerance

/// Number of qubits for a power-of-two dimension, or -1 otherwise.
int qubits_for_dimension(Eigen::Index dim);

/// Normalized pure state. Dimensions that are not a power of two are allowed
/// (the oracle suite probes arbitrary Hilbert-space sizes); qubit-level APIs
/// check `is_qubit_register()`.
class StateVector {
 public:
  /// Throws InvalidStateError unless the norm is 1 within 1e-12.
  explicit StateVector(Eigen::VectorXcd amplitudes);

  /// Rescales to unit norm first. Throws on a zero or non-finite vector.
  static StateVector normalized(Eigen::VectorXcd amplitudes);
  static StateVector basis_state(Eigen::Index dim, Eigen::Index index);

  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  Eigen::Index dim() const { return amplitudes_.size(); }
  bool is_qubit_register() const { return qubits_for_dimension(dim()) >= 0; }
  /// Throws std::logic_error when the dimension is not a power of two.
  int n_qubits() const;
  Complex operator[](Eigen::Index i) const { return amplitudes_[i]; }

  Eigen::MatrixXcd projector() const;
  /// Same ray, multiplied by a unit-modulus scalar.
  StateVector with_global_phase(Complex phase) const;

 private:
  Eigen::VectorXcd amplitudes_;
};

/// Hermitian, unit-trace, positive semi-definite matrix.
class DensityMatrix {
 public:
  /// Validates Hermiticity (1e-12), trace (1e-12) and eigenvalues >= -1e-10,
  /// then stores the exactly Hermitian part.
  explicit DensityMatrix(const Eigen::MatrixXcd& entries);

  /// Hermitizes and divides by the trace before validating.
  static DensityMatrix normalized(const Eigen::MatrixXcd& entries);
  static DensityMatrix pure(const StateVector& psi);
  static DensityMatrix maximally_mixed(Eigen::Index dim);
  /// sum_i weights[i] |states[i]><states[i]|; weights must sum to one.
  static DensityMatrix mixture(std::span<const double> weights, std::span<const StateVector> states);

  const Eigen::MatrixXcd& entries() const { return entries_; }
  Eigen::Index dim() const { return entries_.rows(); }
  bool is_qubit_register() const { return qubits_for_dimension(dim()) >= 0; }
  int n_qubits() const;

 private:
  Eigen::MatrixXcd entries_;
};

/// Eigenvalues sorted descending with the matching phase-fixed eigenvectors.
struct Spectrum {
  Eigen::VectorXd eigenvalues;
  std::vector<StateVector> eigenvectors;

  /// kappa(r) = p_1 + ... + p_r. Throws std::out_of_range unless 1 <= r <= dim.
  double kappa(int r) const;
  Eigen::MatrixXcd reassemble() const;
};

/// Raw result of the dense Hermitian eigensolver: columns of `vectors` are
/// eigenvectors, sorted by descending eigenvalue, with each column's
/// largest-magnitude component made real and positive.
struct HermitianEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
};

HermitianEigen hermitian_eigen(const Eigen::MatrixXcd& hermitian);
Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& hermitian);

/// Largest |m - m^dagger| entry.
double hermiticity_error(const Eigen::MatrixXcd& m);

/// Uhlmann fidelity [Tr sqrt(sqrt(sigma) rho sqrt(sigma))]^2.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// <psi|rho|psi>.
double pure_fidelity(const DensityMatrix& rho, const StateVector& psi);

/// |<a|b>|^2.
double overlap(const StateVector& a, const StateVector& b);

/// Half the sum of absolute eigenvalues of (rho - sigma). Accepts any pair of
/// Hermitian matrices; sigma need not be positive.
double trace_distance(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma);
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

Spectrum eigendecompose(const DensityMatrix& rho);

/// kappa(r)^-1 sum_{i<=r} p_i |Psi_i><Psi_i|.
DensityMatrix optimal_rank_r(const DensityMatrix& rho, int r);

}  // namespace eigentomo
