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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "eigentomo/measurement.hpp"
#include "eigentomo/nqs.hpp"
#include "eigentomo/quantum_core.hpp"

namespace eigentomo {

/// Per-record discrepancy between dataset probability p and model
/// probability q. L2 is an extra diagnostic kind (squared difference).
enum class CostKind { kL1, kL15, kL2, kKL1, kKL2 };

/// "l1", "l15", "l2", "kl1", "kl2".
std::string to_string(CostKind kind);
/// Inverse of to_string; throws std::invalid_argument on unknown names.
CostKind parse_cost_kind(std::string_view name);

struct CostSpec {
  CostKind kind = CostKind::kL15;
  double orth_weight = 1.0;
  /// Penalized directions; must be pairwise orthonormal within 1e-8.
  std::vector<StateVector> orth_states;
  /// Floor applied to probabilities inside logarithms and divisions.
  double denom_floor = 1e-12;

  /// Throws std::invalid_argument on bad weights, dimensions or overlaps.
  void validate(Eigen::Index dim) const;
};

/// f(p, q) for a single record.
double record_cost(CostKind kind, double p, double q, double floor);
/// df/dq; 0 where the function is not differentiable (p == q for L1).
double record_cost_derivative(CostKind kind, double p, double q, double floor);

double cost_value(const CostSpec& spec, const NqsState& state, const MeasurementDataset& data);
double cost_value(const CostSpec& spec, const StateVector& psi, const MeasurementDataset& data);

/// Same shapes as the two networks of an NqsState.
struct NqsGradient {
  RbmParams lambda;
  RbmParams mu;

  /// Layout matches NqsState::flatten().
  Eigen::VectorXd flatten() const;
  double norm() const;
};

struct CostEvaluation {
  double value = 0.0;
  NqsGradient gradient;
};

/// Cost and (optionally) its analytic gradient. `groups` selects a subset of
/// data.groups() by index; empty means all groups. Exact mode only.
CostEvaluation evaluate_cost(const CostSpec& spec, const NqsState& state, const MeasurementDataset& data,
                             std::span<const std::size_t> groups = {}, bool with_gradient = true);

NqsGradient cost_gradient(const CostSpec& spec, const NqsState& state, const MeasurementDataset& data);

}  // namespace eigentomo
