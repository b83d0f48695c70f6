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

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "eigentomo/json_io.hpp"
#include "eigentomo/measurement.hpp"
#include "eigentomo/quantum_core.hpp"
#include "eigentomo/trainer.hpp"

namespace eigentomo {

struct SpectralPair {
  double p;
  StateVector psi;
};

/// Rank-k approximation sum_i p_i |psi_i><psi_i|, normalized by sum_i p_i
/// when materialized.
struct SpectralApprox {
  std::vector<SpectralPair> pairs;
  bool normalized = true;

  double total_weight() const;
  /// Throws std::logic_error when empty or when every weight is zero.
  DensityMatrix density() const;
};

struct EigenvalueEstimate {
  /// min p_m / q_m over records with q_m >= floor, clamped into [0, 1].
  double value;
  /// Index into data.records() of the minimizing record.
  std::size_t record;
};

/// Throws std::invalid_argument when no record reaches the floor.
EigenvalueEstimate estimate_dominant_eigenvalue(const MeasurementDataset& data, const StateVector& psi_hat,
                                                double floor = 1e-6);

/// p' = (p - p_hat q) / (1 - p_hat) record by record, then per-basis
/// renormalization. Values in [-1e-9, 0) are clamped to zero; anything lower
/// throws std::domain_error. Shot counts are dropped.
MeasurementDataset deflate(const MeasurementDataset& data, const StateVector& psi_hat, double p_hat);

struct DeflationResult {
  MeasurementDataset data;
  int records_discarded_by_floor = 0;
};

/// As deflate, but records whose predicted probability is below `floor` are
/// clamped to zero whatever their sign and counted instead of throwing.
DeflationResult deflate_with_floor(const MeasurementDataset& data, const StateVector& psi_hat, double p_hat,
                                   double floor);

struct StepRecord {
  int step;
  /// Absolute eigenvalue estimate.
  double p_hat;
  /// Estimate in the deflated frame of this step.
  double p_raw;
  /// |<psi_hat|Psi_step>|^2 against the ground truth, when supplied.
  std::optional<double> eigenstate_fidelity;
  /// || p_hat psi_hat - p Psi || minimized over phase, when truth is supplied.
  std::optional<double> accuracy_residual;
  std::optional<double> likelihood_before;
  double likelihood_after;
  bool accepted;
  int records_discarded_by_floor;
  double orthogonality_residual;
  double training_cost;
  int winning_restart;
};

struct IterationReport {
  std::vector<StepRecord> steps;
};

struct Reconstruction {
  SpectralApprox approx;
  IterationReport report;
  std::vector<TrainingLog> logs;
};

/// Iterative eigenstate extraction: train, estimate, gate on likelihood,
/// deflate, repeat until max_rank or the first rejected step.
Reconstruction reconstruct(const MeasurementDataset& data, int max_rank, const TrainConfig& train_config,
                           double floor = 1e-6, const DensityMatrix* truth = nullptr);

/// sum_m w_m log(max(q_m, floor)) with q_m from the normalized approximation
/// and w_m the shot count when every record has one, else p_m.
double log_likelihood(const SpectralApprox& approx, const MeasurementDataset& data, double floor = 1e-12);

/// fidelity(rho, approx) / kappa(r), r = number of pairs.
double relative_fidelity(const DensityMatrix& rho, const SpectralApprox& approx);

struct BasisEntropy {
  BasisLabel basis;
  double entropy_mixed;
  double entropy_pure;
};

std::vector<BasisEntropy> eigenstate_entropy_profile(const DensityMatrix& rho, const StateVector& psi,
                                                     std::span<const BasisLabel> bases);
/// Mixed-state entropies taken from the dataset's recorded probabilities.
std::vector<BasisEntropy> eigenstate_entropy_profile(const MeasurementDataset& data, const StateVector& psi);

// Result files: {"pairs":[{"p","state"}],"report":[...]}.
io::Json to_json(const StepRecord& step);
io::Json to_json(const Reconstruction& result);
SpectralApprox spectral_approx_from_json(const io::Json& j);

}  // namespace eigentomo
