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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "eigentomo/quantum_core.hpp"

namespace eigentomo {

// Conventions used throughout: qubit 0 is the leftmost character of a basis
// label or outcome string and the most significant bit of a computational
// index. Outcome +1 corresponds to bit 0 (|0> in the z basis).

/// Single-qubit unitary whose rows are the bras of the axis eigenstates in
/// eigenvalue order (+1, -1). Throws std::invalid_argument for anything but
/// 'x', 'y', 'z'.
Eigen::Matrix2cd local_rotation(char axis);

/// One local Pauli axis per qubit, e.g. "xzy".
class BasisLabel {
 public:
  explicit BasisLabel(std::string axes);
  static BasisLabel all_z(int n_qubits);

  const std::string& str() const { return axes_; }
  int n_qubits() const { return static_cast<int>(axes_.size()); }
  char axis(int qubit) const { return axes_[static_cast<std::size_t>(qubit)]; }
  bool is_all_z() const;

  friend auto operator<=>(const BasisLabel&, const BasisLabel&) = default;

 private:
  std::string axes_;
};

/// Vector of +-1 measurement results, stored as its computational index.
class Outcome {
 public:
  Outcome(std::uint32_t index, int n_qubits);
  /// Parses "+-+" style strings.
  static Outcome parse(std::string_view signs);
  static Outcome from_spins(std::span<const int> spins);

  std::uint32_t index() const { return index_; }
  int n_qubits() const { return n_qubits_; }
  /// +1 or -1 for the given qubit.
  int spin(int qubit) const;
  Eigen::VectorXd spins() const;
  std::string str() const;

  friend bool operator==(const Outcome&, const Outcome&) = default;

 private:
  std::uint32_t index_;
  int n_qubits_;
};

/// Spin value (+-1) of `qubit` within computational index `index`.
inline int spin_of(std::uint64_t index, int qubit, int n_qubits) {
  return ((index >> (n_qubits - 1 - qubit)) & 1U) ? -1 : 1;
}

/// U_b |v> applied qubit by qubit (n two-branch passes, no dense 2^n x 2^n
/// unitary). `adjoint` applies U_b^dagger instead.
Eigen::VectorXcd rotate_vector(const Eigen::VectorXcd& v, const BasisLabel& basis,
                               bool adjoint = false);
void rotate_vector_in_place(Eigen::Ref<Eigen::VectorXcd> v, const BasisLabel& basis,
                            bool adjoint = false);

/// U_b rho U_b^dagger, again qubit by qubit.
Eigen::MatrixXcd rotate_density(const Eigen::MatrixXcd& rho, const BasisLabel& basis);

/// Dense tensor product of the local rotations. Test oracle use only.
Eigen::MatrixXcd dense_basis_unitary(const BasisLabel& basis);

/// Outcome distribution <o|U_b rho U_b^dagger|o>, indexed by outcome index.
std::vector<double> projector_probabilities(const DensityMatrix& rho, const BasisLabel& basis);
/// Same for a pure state, |<o|U_b|psi>|^2.
std::vector<double> projector_probabilities(const StateVector& psi, const BasisLabel& basis);

enum class BasisMode { kFull, kCompressed };

/// min(3^n, round(3 n (3/2)^n)).
std::size_t compressed_basis_count(int n_qubits);

/// Full: all 3^n labels in lexicographic order. Compressed: a seeded uniform
/// subset without replacement that always contains the all-z label, returned
/// in lexicographic order.
std::vector<BasisLabel> generate_basis_set(int n_qubits, BasisMode mode, std::uint64_t seed);

struct MeasurementRecord {
  BasisLabel basis;
  Outcome outcome;
  double probability;
  std::optional<std::int64_t> shots;
};

enum class DatasetMode { kExact, kSampled };

/// Projective measurement statistics, one record per (basis, outcome) pair.
/// Records are kept sorted by basis label, then outcome index.
class MeasurementDataset {
 public:
  struct BasisGroup {
    BasisLabel basis;
    std::size_t begin;
    std::size_t end;
  };

  /// Sorts the records and validates them: matching qubit counts, no
  /// duplicate pairs, probabilities >= 0, per-basis sums equal to 1 within
  /// `sum_tolerance`.
  MeasurementDataset(int n_qubits, std::vector<MeasurementRecord> records,
                     DatasetMode mode = DatasetMode::kExact,
                     std::optional<std::uint64_t> seed = std::nullopt,
                     double sum_tolerance = 1e-9);

  int n_qubits() const { return n_qubits_; }
  DatasetMode mode() const { return mode_; }
  std::optional<std::uint64_t> seed() const { return seed_; }
  const std::vector<MeasurementRecord>& records() const { return records_; }
  const std::vector<BasisGroup>& groups() const { return groups_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  bool has_shots() const;
  std::vector<BasisLabel> bases() const;

 private:
  int n_qubits_;
  std::vector<MeasurementRecord> records_;
  DatasetMode mode_;
  std::optional<std::uint64_t> seed_;
  std::vector<BasisGroup> groups_;
};

/// Exact probabilities for every outcome of every basis (zeros included).
MeasurementDataset exact_dataset(const DensityMatrix& rho, std::span<const BasisLabel> bases);

/// Multinomial finite-shot frequencies, one independent stream per basis.
MeasurementDataset sample_dataset(const DensityMatrix& rho, std::span<const BasisLabel> bases,
                                  std::int64_t shots_per_basis, std::uint64_t seed);

/// Predicted probability <psi|P_m|psi> for every record of `data`, aligned
/// with data.records().
std::vector<double> predicted_probabilities(const StateVector& psi, const MeasurementDataset& data);

// Dataset files: JSON lines, header {"n_qubits","mode","seed"} then one
// {"basis","outcome","p","shots"} object per record.
void write_dataset(std::ostream& out, const MeasurementDataset& data);
MeasurementDataset read_dataset(std::istream& in);
void write_dataset_file(const std::string& path, const MeasurementDataset& data);
MeasurementDataset read_dataset_file(const std::string& path);

// Synthetic states -----------------------------------------------------------

/// Equal superposition of all single-excitation basis states.
StateVector w_state(int n_qubits);

/// Two-qubit mixture of the Bell states Phi+, Phi-, Psi+, Psi- with
/// weights 0.9, 0.09, 0.009, 0.001.
DensityMatrix bell_mixture();
std::vector<StateVector> bell_states();

/// Synthetic approximate W state. Unperturbed eigenbasis: |W>, |0...0>, the
/// Fourier-phased single-excitation states W_k (k = 1..n-1), then the
/// remaining computational states in index order. The whole basis is rotated
/// by exp(i * perturbation * H) for a seeded random Hermitian H. The leading
/// eigenvalues are `spectrum`; the rest of the unit trace is spread evenly.
DensityMatrix make_w_mixture(int n_qubits, std::span<const double> spectrum, std::uint64_t seed,
                             double perturbation = 0.1);

}  // namespace eigentomo
