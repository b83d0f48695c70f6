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
#include <vector>

#include <Eigen/Dense>

#include "eigentomo/json_io.hpp"
#include "eigentomo/measurement.hpp"
#include "eigentomo/quantum_core.hpp"
#include "eigentomo/random.hpp"

namespace eigentomo {

/// Largest visible layer for which normalizations are computed by
/// exhaustive enumeration.
inline constexpr int kExactModeCap = 12;

/// Parameters of one real-valued RBM with +-1 visible and hidden units:
/// p(s, h) = exp(sum_ij W_ij s_i h_j + sum_i a_i s_i + sum_j b_j h_j).
struct RbmParams {
  Eigen::MatrixXd weights;      // n_visible x n_hidden
  Eigen::VectorXd visible_bias;
  Eigen::VectorXd hidden_bias;

  static RbmParams zeros(int n_visible, int n_hidden);
  /// i.i.d. uniform entries in [-scale, scale].
  static RbmParams uniform(int n_visible, int n_hidden, double scale, random::Engine& rng);

  int n_visible() const { return static_cast<int>(visible_bias.size()); }
  int n_hidden() const { return static_cast<int>(hidden_bias.size()); }
  Eigen::Index size() const { return weights.size() + visible_bias.size() + hidden_bias.size(); }
  bool all_finite() const;

  /// Layout: W (column-major), a, b.
  Eigen::VectorXd flatten() const;
  static RbmParams unflatten(const Eigen::Ref<const Eigen::VectorXd>& flat, int n_visible, int n_hidden);
};

/// log(2 cosh x) evaluated as |x| + log1p(exp(-2|x|)); safe for any finite x.
double log_two_cosh(double x);

/// Pure state psi(s) = sqrt(p_lambda(s) / Z_lambda) exp(i log p_mu(s) / 2).
/// Immutable; log Z_lambda is cached at construction in exact mode.
class NqsState {
 public:
  NqsState(RbmParams lambda, RbmParams mu);

  /// Both networks drawn uniform in [-scale, scale], hidden = visible.
  static NqsState random(int n_qubits, double scale, std::uint64_t seed);
  static NqsState random(int n_qubits, double amplitude_scale, double phase_scale, std::uint64_t seed);

  const RbmParams& lambda() const { return lambda_; }
  const RbmParams& mu() const { return mu_; }
  int n_qubits() const { return lambda_.n_visible(); }
  std::optional<double> cached_log_partition() const { return log_z_; }

  /// Layout: lambda.flatten() followed by mu.flatten().
  Eigen::VectorXd flatten() const;
  NqsState with_parameters(const Eigen::Ref<const Eigen::VectorXd>& flat) const;

 private:
  RbmParams lambda_;
  RbmParams mu_;
  std::optional<double> log_z_;
};

/// +-1 spin table of all 2^n configurations, row i = configuration index i.
Eigen::MatrixXd spin_table(int n_qubits);

/// log sum_h p(s, h) for one visible configuration.
double rbm_log_marginal(const RbmParams& params, const Outcome& sigma);
double rbm_log_marginal(const RbmParams& params, const Eigen::Ref<const Eigen::VectorXd>& spins);
/// Log marginals of every configuration, in computational-index order.
Eigen::VectorXd rbm_log_marginals(const RbmParams& params);

/// log Z by streaming log-sum-exp over all visible configurations. Throws
/// std::length_error above `cap` visible units; use gibbs_sample there.
double log_partition(const RbmParams& params, int cap = kExactModeCap);

Complex amplitude(const NqsState& state, const Outcome& sigma);
/// All amplitudes in computational-index order (unnormalized round-off only).
Eigen::VectorXcd amplitudes(const NqsState& state);
StateVector to_state_vector(const NqsState& state);

/// |<outcome|U_b|psi>|^2 using qubit-by-qubit rotation.
double rotated_probability(const NqsState& state, const BasisLabel& basis, const Outcome& outcome);

/// P(h_j = +1 | s) = 1 / (1 + exp(-2 (sum_i W_ij s_i + b_j))).
Eigen::VectorXd gibbs_conditional_hidden(const RbmParams& params, const Eigen::Ref<const Eigen::VectorXd>& spins);
/// P(s_i = +1 | h) = 1 / (1 + exp(-2 (sum_j W_ij h_j + a_i))).
Eigen::VectorXd gibbs_conditional_visible(const RbmParams& params, const Eigen::Ref<const Eigen::VectorXd>& hidden);

/// Block Gibbs chain started from a seeded random visible configuration.
/// After `burn_in` sweeps every `thin`-th visible configuration is emitted.
std::vector<Outcome> gibbs_sample(const RbmParams& params, int n_samples, int burn_in, int thin,
                                  std::uint64_t seed);

// Checkpoint files: {"n","m","lambda":{"W","a","b"},"mu":{...},"seed"}.
io::Json to_json(const NqsState& state, std::uint64_t seed);
NqsState nqs_from_json(const io::Json& j);

}  // namespace eigentomo
