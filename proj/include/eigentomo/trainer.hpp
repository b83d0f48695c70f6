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
#include <optional>
#include <string>
#include <vector>

#include "eigentomo/costs.hpp"
#include "eigentomo/measurement.hpp"
#include "eigentomo/nqs.hpp"

namespace eigentomo {

struct TrainConfig {
  CostSpec cost;
  double learning_rate = 0.2;
  int max_epochs = 20000;
  /// Stochastic mode: number of bases drawn without replacement per epoch.
  std::optional<int> batch_bases;
  std::uint64_t seed = 0;
  /// Epochs without a relative improvement above tol_rel before stopping.
  int patience = 200;
  double tol_rel = 1e-6;
  int restarts = 1;
  /// Step halvings tried per epoch when the cost goes up.
  int max_halvings = 20;
  double init_scale = 0.01;
  /// Init half-width of the phase network.
  double phase_init_scale = 1.0;
  /// Restarts run concurrently on up to this many threads.
  int threads = 1;

  void validate() const;
};

struct EpochLog {
  int epoch;
  double cost;
  double grad_norm;
  double learning_rate;
  int restart;
};

struct RestartSummary {
  int restart;
  std::uint64_t seed;
  int epochs;
  double best_cost;
  bool failed;
  std::string diagnostic;
};

struct TrainingLog {
  /// All restarts, concatenated in restart order.
  std::vector<EpochLog> epochs;
  std::vector<RestartSummary> restarts;
  int winning_restart = -1;
  double final_cost = 0.0;
  /// sum_k |<prev_k|psi>|^2 for train_next_eigenstate, 0 otherwise.
  double orthogonality_residual = 0.0;
  bool orthogonality_reached = true;

  /// Header: epoch,cost,grad_norm,learning_rate,restart
  std::string to_csv() const;
};

struct TrainResult {
  NqsState state;
  TrainingLog log;
};

/// Fits an NqsState to the dataset by gradient descent with backtracking.
/// Returns the lowest-cost state over all restarts. Exact mode only.
TrainResult train_pure_state(const MeasurementDataset& data, const TrainConfig& config);

/// As train_pure_state with `previous` (orthonormalized) added to the
/// orthogonality penalty. Flags the log when the residual overlap exceeds
/// 1e-3.
TrainResult train_next_eigenstate(const MeasurementDataset& data, const std::vector<StateVector>& previous,
                                  const TrainConfig& config);

/// Gram-Schmidt in the given order; throws if the states are linearly dependent.
std::vector<StateVector> orthonormalize(const std::vector<StateVector>& states);

}  // namespace eigentomo
