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


#include "eigentomo/costs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace eigentomo {

namespace {

double sign(double x) { return (x > 0.0) - (x < 0.0); }

void check_sizes(const MeasurementDataset& data, int n_qubits) {
  if (!data.empty() && data.n_qubits() != n_qubits) {
    throw DimensionError("cost: dataset and state have different qubit counts");
  }
}

std::vector<std::size_t> selected_groups(const MeasurementDataset& data, std::span<const std::size_t> groups) {
  if (groups.empty()) {
    std::vector<std::size_t> all(data.groups().size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return all;
  }
  for (std::size_t g : groups) {
    if (g >= data.groups().size()) throw std::out_of_range("cost: basis group index out of range");
  }
  return {groups.begin(), groups.end()};
}

// Value of the cost at psi and, when chi != nullptr, dC/d(conj psi).
double cost_and_adjoint(const CostSpec& spec, const Eigen::VectorXcd& psi, const MeasurementDataset& data,
                        std::span<const std::size_t> groups, Eigen::VectorXcd* chi) {
  double total = 0.0;
  if (chi) chi->setZero(psi.size());
  Eigen::VectorXcd weighted(psi.size());
  for (std::size_t g : groups) {
    const auto& group = data.groups()[g];
    const Eigen::VectorXcd phi = rotate_vector(psi, group.basis);
    if (chi) weighted.setZero();
    for (std::size_t r = group.begin; r < group.end; ++r) {
      const auto& rec = data.records()[r];
      const Eigen::Index o = rec.outcome.index();
      const double q = std::norm(phi[o]);
      total += record_cost(spec.kind, rec.probability, q, spec.denom_floor);
      if (chi) weighted[o] = record_cost_derivative(spec.kind, rec.probability, q, spec.denom_floor) * phi[o];
    }
    if (chi) *chi += rotate_vector(weighted, group.basis, /*adjoint=*/true);
  }
  if (spec.orth_weight > 0.0) {
    for (const auto& e : spec.orth_states) {
      const Complex c = e.amplitudes().dot(psi);
      total += spec.orth_weight * std::norm(c);
      if (chi) *chi += spec.orth_weight * c * e.amplitudes();
    }
  }
  return total;
}

void accumulate_rbm_gradient(const RbmParams& params, const Eigen::VectorXd& weights, RbmParams& out) {
  const Eigen::MatrixXd s = spin_table(params.n_visible());
  const Eigen::MatrixXd theta = (s * params.weights).rowwise() + params.hidden_bias.transpose();
  const Eigen::MatrixXd t = theta.array().tanh().matrix();
  out.visible_bias = s.transpose() * weights;
  out.hidden_bias = t.transpose() * weights;
  out.weights = s.transpose() * weights.asDiagonal() * t;
}

}  // namespace

std::string to_string(CostKind kind) {
  switch (kind) {
    case CostKind::kL1: return "l1";
    case CostKind::kL15: return "l15";
    case CostKind::kL2: return "l2";
    case CostKind::kKL1: return "kl1";
    case CostKind::kKL2: return "kl2";
  }
  return "?";
}

CostKind parse_cost_kind(std::string_view name) {
  for (CostKind k : {CostKind::kL1, CostKind::kL15, CostKind::kL2, CostKind::kKL1, CostKind::kKL2}) {
    if (name == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown cost kind '" + std::string(name) + "'");
}

void CostSpec::validate(Eigen::Index dim) const {
  if (!(orth_weight >= 0.0) || !std::isfinite(orth_weight)) throw std::invalid_argument("CostSpec: orth_weight must be >= 0");
  if (!(denom_floor > 0.0)) throw std::invalid_argument("CostSpec: denom_floor must be > 0");
  for (std::size_t i = 0; i < orth_states.size(); ++i) {
    if (orth_states[i].dim() != dim) throw DimensionError("CostSpec: orth_states dimension mismatch");
    for (std::size_t j = i + 1; j < orth_states.size(); ++j) {
      if (std::abs(orth_states[i].amplitudes().dot(orth_states[j].amplitudes())) > 1e-8) {
        throw std::invalid_argument("CostSpec: orth_states are not orthonormal");
      }
    }
  }
}

double record_cost(CostKind kind, double p, double q, double floor) {
  const double d = std::abs(p - q);
  switch (kind) {
    case CostKind::kL1: return d;
    case CostKind::kL15: return d * std::sqrt(d);
    case CostKind::kL2: return d * d;
    case CostKind::kKL1: return p > 0.0 ? p * std::log(p / std::max(q, floor)) : 0.0;
    case CostKind::kKL2: return q > 0.0 ? q * std::log(q / std::max(p, floor)) : 0.0;
  }
  return 0.0;
}

double record_cost_derivative(CostKind kind, double p, double q, double floor) {
  switch (kind) {
    case CostKind::kL1: return sign(q - p);
    case CostKind::kL15: return 1.5 * std::sqrt(std::abs(p - q)) * sign(q - p);
    case CostKind::kL2: return 2.0 * (q - p);
    case CostKind::kKL1: return q > floor ? -p / q : 0.0;
    case CostKind::kKL2: return std::log(std::max(q, floor) / std::max(p, floor)) + 1.0;
  }
  return 0.0;
}

double cost_value(const CostSpec& spec, const NqsState& state, const MeasurementDataset& data) {
  return evaluate_cost(spec, state, data, {}, false).value;
}

double cost_value(const CostSpec& spec, const StateVector& psi, const MeasurementDataset& data) {
  if (!psi.is_qubit_register()) throw DimensionError("cost_value: state is not a qubit register");
  check_sizes(data, psi.n_qubits());
  spec.validate(psi.dim());
  const auto groups = selected_groups(data, {});
  return cost_and_adjoint(spec, psi.amplitudes(), data, groups, nullptr);
}

Eigen::VectorXd NqsGradient::flatten() const {
  Eigen::VectorXd flat(lambda.size() + mu.size());
  flat << lambda.flatten(), mu.flatten();
  return flat;
}

double NqsGradient::norm() const { return flatten().norm(); }

CostEvaluation evaluate_cost(const CostSpec& spec, const NqsState& state, const MeasurementDataset& data,
                             std::span<const std::size_t> groups, bool with_gradient) {
  check_sizes(data, state.n_qubits());
  const Eigen::VectorXcd psi = amplitudes(state);
  spec.validate(psi.size());
  const auto selected = selected_groups(data, groups);

  CostEvaluation result;
  Eigen::VectorXcd chi;
  result.value = cost_and_adjoint(spec, psi, data, selected, with_gradient ? &chi : nullptr);
  if (!with_gradient) return result;

  const Eigen::VectorXcd z = chi.conjugate().cwiseProduct(psi);
  const Eigen::VectorXd prob = psi.cwiseAbs2();
  const Eigen::VectorXd re = z.real();
  const Eigen::VectorXd w_lambda = re - re.sum() * prob;
  const Eigen::VectorXd w_mu = -z.imag();

  result.gradient.lambda = RbmParams::zeros(state.lambda().n_visible(), state.lambda().n_hidden());
  result.gradient.mu = RbmParams::zeros(state.mu().n_visible(), state.mu().n_hidden());
  accumulate_rbm_gradient(state.lambda(), w_lambda, result.gradient.lambda);
  accumulate_rbm_gradient(state.mu(), w_mu, result.gradient.mu);
  return result;
}

NqsGradient cost_gradient(const CostSpec& spec, const NqsState& state, const MeasurementDataset& data) {
  return evaluate_cost(spec, state, data).gradient;
}

}  // namespace eigentomo
