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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "eigentomo/json_io.hpp"
#include "eigentomo/quantum_core.hpp"

namespace eigentomo::oracle {

/// Replaceable metric implementations, so the suite can be pointed at a
/// deliberately broken one.
struct Hooks {
  std::function<double(const DensityMatrix&, const DensityMatrix&)> fidelity;
  std::function<double(const DensityMatrix&, const StateVector&)> pure_fidelity;

  static Hooks defaults();
};

struct PropositionReport {
  int proposition = 0;
  int trials = 0;
  double max_violation = 0.0;
  double tolerance = 0.0;
  bool skipped = false;
  std::string note;
  /// Worst offending (rho, challenger) pair, kept only when it violates.
  std::optional<io::Json> witness;

  bool passed() const { return skipped || max_violation <= tolerance; }
  /// Merges another report for the same proposition (max violation wins).
  void absorb(const PropositionReport& other);
  io::Json to_json() const;
};

/// Closest pure state: Haar challengers never beat p_1, and challengers
/// close to p_1 are close to Psi_1. Skipped when p_1 - p_2 <= 1e-8.
PropositionReport check_prop1(const DensityMatrix& rho, int n_challengers, std::uint64_t seed,
                              const Hooks& hooks = Hooks::defaults());

/// Trace distance of pure challengers stays inside [1 - p_1, 1 - p_n];
/// Psi_1 attains the lower end.
PropositionReport check_prop2(const DensityMatrix& rho, int n_challengers, std::uint64_t seed);

/// Random rank-r challengers never exceed kappa(r); optimal_rank_r attains it.
PropositionReport check_prop3(const DensityMatrix& rho, int r, int n_challengers, std::uint64_t seed,
                              const Hooks& hooks = Hooks::defaults());

/// Every tau = sum_i q_i |Psi_i><Psi_i| with q_i >= p_i, sum q_i = 1 lies at
/// trace distance 1 - kappa(r).
PropositionReport check_prop4(const DensityMatrix& rho, int r, int n_family, std::uint64_t seed);

struct WeylReport {
  int trials = 0;
  std::int64_t inequalities = 0;
  double max_violation = 0.0;
  double tolerance = 1e-10;

  bool passed() const { return max_violation <= tolerance; }
  void absorb(const WeylReport& other);
  io::Json to_json() const;
};

/// Both sides of q_j + p_k <= m_i <= q_r + p_s for M = Q + P over every
/// index tuple with j + k - n >= i >= r + s - 1 (1-based, descending order).
WeylReport check_weyl(const Eigen::MatrixXcd& q_matrix, const Eigen::MatrixXcd& p_matrix);
/// Trial 0 uses the pair as given; later trials conjugate P by a seeded
/// Haar unitary.
WeylReport check_weyl(const Eigen::MatrixXcd& q_matrix, const Eigen::MatrixXcd& p_matrix, int n_trials,
                      std::uint64_t seed);
/// Independent random Hermitian pairs of the given dimension.
WeylReport check_weyl_random(Eigen::Index dim, int n_trials, std::uint64_t seed);

struct CorpusConfig {
  std::vector<int> dims{2, 4, 8, 16};
  int n_states = 100;
  int challengers = 200;
  std::uint64_t seed = 2024;
  int threads = 1;
  /// Adds the two-qubit Bell mixture and a four-qubit W mixture.
  bool include_named = true;
  Hooks hooks = Hooks::defaults();
};

struct CorpusSummary {
  std::vector<PropositionReport> propositions;  // ids 1..4
  WeylReport weyl;
  /// Largest |F(rho, optimal_rank_r(rho, r)) - kappa(r)| seen.
  double kappa_attainment_error = 0.0;
  int states = 0;

  bool passed() const;
  io::Json to_json() const;
};

CorpusSummary run_corpus(const CorpusConfig& config);

}  // namespace eigentomo::oracle
