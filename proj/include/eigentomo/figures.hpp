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

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "eigentomo/costs.hpp"
#include "eigentomo/measurement.hpp"
#include "eigentomo/quantum_core.hpp"
#include "eigentomo/reconstructor.hpp"

namespace eigentomo::figures {

inline constexpr std::array<CostKind, 5> kFig3Costs{CostKind::kL1, CostKind::kL15, CostKind::kL2, CostKind::kKL1,
                                                   CostKind::kKL2};

struct Fig3Config {
  int n_perturbations = 50;
  /// Rotation strengths are log-uniform in [min_strength, max_strength].
  double min_strength = 1e-3;
  double max_strength = 0.3;
  std::uint64_t seed = 0;
  double floor = 1e-6;
};

struct Fig3Row {
  int index;
  double perturbation;
  /// <phi|rho|phi> / p_1, so the unperturbed dominant eigenstate scores 1.
  double fidelity;
  double eps_fidelity;  // 6000 (1 - fidelity)
  double p1b;
  double eps_p1b;  // 10 (p_1 - p1b) / p_1
  std::array<double, 5> costs;  // order of kFig3Costs
};

struct Fig3Data {
  std::vector<Fig3Row> rows;
  /// Spearman correlation of each cost with 1 - fidelity.
  std::array<double, 5> spearman{};

  /// index,perturbation,fidelity,eps_F,p1b,eps_p1b,L1,L15,L2,KL1,KL2
  std::string to_csv() const;
  /// cost,spearman_vs_infidelity
  std::string summary_csv() const;
  double spearman_of(CostKind kind) const;
};

/// Row 0 is the unperturbed dominant eigenstate; rows 1..n apply seeded
/// random unitaries exp(i s H) to it.
Fig3Data fig3_grid(const DensityMatrix& rho, const MeasurementDataset& data, const Fig3Config& config);

struct ProbabilityRow {
  BasisLabel basis;
  Outcome outcome;
  double p_mixed;
  double p_pure;
};

struct Fig4Data {
  std::vector<BasisEntropy> entropies;
  std::vector<ProbabilityRow> probabilities;

  /// basis,entropy_mixed,entropy_pure
  std::string entropy_csv() const;
  /// basis,outcome,p_mixed,p_pure
  std::string probability_csv() const;
  /// Fraction of bases with entropy_pure <= entropy_mixed.
  double fraction_pure_not_above() const;
};

Fig4Data fig4_data(const DensityMatrix& rho, const StateVector& psi, std::span<const BasisLabel> bases);

}  // namespace eigentomo::figures
