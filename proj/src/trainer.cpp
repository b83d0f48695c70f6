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


#include "eigentomo/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iterator>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "eigentomo/json_io.hpp"
#include "eigentomo/random.hpp"

namespace eigentomo {

namespace {

struct RestartOutcome {
  std::optional<NqsState> best;
  std::vector<EpochLog> epochs;
  RestartSummary summary;
};

RestartOutcome run_restart(const MeasurementDataset& data, const TrainConfig& config, int restart) {
  const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(restart);
  RestartOutcome out;
  out.summary = RestartSummary{restart, seed, 0, 0.0, false, ""};

  const std::size_t n_groups = data.groups().size();
  const bool stochastic = config.batch_bases && static_cast<std::size_t>(*config.batch_bases) < n_groups;
  auto batch_rng = random::make_engine(seed, 0xBA7C4);
  std::vector<std::size_t> all_groups(n_groups);
  std::iota(all_groups.begin(), all_groups.end(), std::size_t{0});

  NqsState state = NqsState::random(data.n_qubits(), config.init_scale, config.phase_init_scale, seed);
  double best_cost = cost_value(config.cost, state, data);
  if (!std::isfinite(best_cost)) {
    out.summary.failed = true;
    out.summary.diagnostic = "non-finite initial cost";
    return out;
  }
  out.best = state;
  double reference = best_cost;
  int stale = 0;

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    std::vector<std::size_t> batch;
    if (stochastic) {
      std::sample(all_groups.begin(), all_groups.end(), std::back_inserter(batch),
                  static_cast<std::size_t>(*config.batch_bases), batch_rng);
    }
    const CostEvaluation ev = evaluate_cost(config.cost, state, data, batch);
    const Eigen::VectorXd grad = ev.gradient.flatten();
    const double grad_norm = grad.norm();
    if (!std::isfinite(ev.value) || !grad.allFinite()) {
      out.summary.failed = true;
      out.summary.diagnostic = "non-finite cost or gradient at epoch " + std::to_string(epoch);
      break;
    }

    const Eigen::VectorXd x = state.flatten();
    double lr = config.learning_rate;
    std::optional<NqsState> next;
    for (int h = 0; h <= config.max_halvings; ++h) {
      NqsState candidate = state.with_parameters(x - lr * grad);
      const double c = stochastic ? evaluate_cost(config.cost, candidate, data, batch, false).value
                                  : cost_value(config.cost, candidate, data);
      if (std::isfinite(c) && c <= ev.value) {
        next = std::move(candidate);
        break;
      }
      if (h == config.max_halvings) {
        if (std::isfinite(c)) next = std::move(candidate);
        break;
      }
      lr *= 0.5;
    }
    if (!next) {
      out.summary.failed = true;
      out.summary.diagnostic = "non-finite cost after step at epoch " + std::to_string(epoch);
      break;
    }
    state = std::move(*next);

    const double cost = cost_value(config.cost, state, data);
    out.epochs.push_back(EpochLog{epoch, cost, grad_norm, lr, restart});
    out.summary.epochs = epoch;
    if (!std::isfinite(cost)) {
      out.summary.failed = true;
      out.summary.diagnostic = "non-finite cost at epoch " + std::to_string(epoch);
      break;
    }
    if (cost < best_cost) {
      best_cost = cost;
      out.best = state;
    }
    if (cost < reference * (1.0 - config.tol_rel)) {
      reference = cost;
      stale = 0;
    } else if (++stale >= config.patience) {
      break;
    }
  }
  out.summary.best_cost = best_cost;
  if (out.summary.failed) out.best.reset();
  return out;
}

}  // namespace

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("TrainConfig: learning_rate must be > 0");
  if (max_epochs < 1) throw std::invalid_argument("TrainConfig: max_epochs must be >= 1");
  if (batch_bases && *batch_bases < 1) throw std::invalid_argument("TrainConfig: batch_bases must be >= 1");
  if (patience < 1) throw std::invalid_argument("TrainConfig: patience must be >= 1");
  if (!(tol_rel > 0.0 && tol_rel < 1.0)) throw std::invalid_argument("TrainConfig: tol_rel must lie in (0, 1)");
  if (restarts < 1) throw std::invalid_argument("TrainConfig: restarts must be >= 1");
  if (max_halvings < 0) throw std::invalid_argument("TrainConfig: max_halvings must be >= 0");
  if (!(init_scale > 0.0)) throw std::invalid_argument("TrainConfig: init_scale must be > 0");
  if (!(phase_init_scale > 0.0)) throw std::invalid_argument("TrainConfig: phase_init_scale must be > 0");
  if (threads < 1) throw std::invalid_argument("TrainConfig: threads must be >= 1");
}

std::string TrainingLog::to_csv() const {
  std::ostringstream out;
  out << "epoch,cost,grad_norm,learning_rate,restart\n";
  for (const auto& e : epochs) {
    out << e.epoch << ',' << io::format_double(e.cost) << ',' << io::format_double(e.grad_norm) << ','
        << io::format_double(e.learning_rate) << ',' << e.restart << '\n';
  }
  return out.str();
}

TrainResult train_pure_state(const MeasurementDataset& data, const TrainConfig& config) {
  config.validate();
  if (data.empty() && config.cost.orth_states.empty()) {
    throw std::invalid_argument("train_pure_state: empty dataset");
  }
  const int n = data.empty() ? config.cost.orth_states.front().n_qubits() : data.n_qubits();
  if (n > kExactModeCap) {
    throw std::length_error("train_pure_state: " + std::to_string(n) + " qubits exceed the exact-mode cap");
  }
  config.cost.validate(Eigen::Index{1} << n);
  const MeasurementDataset effective =
      data.empty() ? MeasurementDataset(n, {}, DatasetMode::kExact) : data;

  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(config.restarts));
  const int workers = std::min(config.threads, config.restarts);
  if (workers <= 1) {
    for (int r = 0; r < config.restarts; ++r) outcomes[static_cast<std::size_t>(r)] = run_restart(effective, config, r);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int r = next++; r < config.restarts; r = next++) {
          outcomes[static_cast<std::size_t>(r)] = run_restart(effective, config, r);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  TrainingLog log;
  int winner = -1;
  for (int r = 0; r < config.restarts; ++r) {
    auto& o = outcomes[static_cast<std::size_t>(r)];
    log.epochs.insert(log.epochs.end(), o.epochs.begin(), o.epochs.end());
    log.restarts.push_back(o.summary);
    if (o.best && (winner < 0 || o.summary.best_cost < outcomes[static_cast<std::size_t>(winner)].summary.best_cost)) {
      winner = r;
    }
  }
  if (winner < 0) throw std::runtime_error("train_pure_state: every restart failed (" + log.restarts.front().diagnostic + ")");
  log.winning_restart = winner;
  log.final_cost = outcomes[static_cast<std::size_t>(winner)].summary.best_cost;
  return TrainResult{std::move(*outcomes[static_cast<std::size_t>(winner)].best), std::move(log)};
}

std::vector<StateVector> orthonormalize(const std::vector<StateVector>& states) {
  std::vector<StateVector> basis;
  for (const auto& s : states) {
    Eigen::VectorXcd v = s.amplitudes();
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) v -= b.amplitudes().dot(v) * b.amplitudes();
    }
    if (v.norm() < 1e-8) throw std::invalid_argument("orthonormalize: states are linearly dependent");
    basis.push_back(StateVector::normalized(std::move(v)));
  }
  return basis;
}

TrainResult train_next_eigenstate(const MeasurementDataset& data, const std::vector<StateVector>& previous,
                                  const TrainConfig& config) {
  TrainConfig augmented = config;
  augmented.cost.orth_states = orthonormalize(previous);
  TrainResult result = train_pure_state(data, augmented);
  const StateVector psi = to_state_vector(result.state);
  double residual = 0.0;
  for (const auto& p : previous) residual += overlap(p, psi);
  result.log.orthogonality_residual = residual;
  result.log.orthogonality_reached = residual <= 1e-3;
  return result;
}

}  // namespace eigentomo
