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


#include "eigentomo/reconstructor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "eigentomo/nqs.hpp"
#include "eigentomo/statistics.hpp"

namespace eigentomo {

namespace {

constexpr double kDeflationSlack = 1e-9;

DeflationResult deflate_impl(const MeasurementDataset& data, const StateVector& psi_hat, double p_hat,
                             std::optional<double> floor) {
  if (!(p_hat >= 0.0 && p_hat < 1.0)) throw std::invalid_argument("deflate: p_hat must lie in [0, 1)");
  if (psi_hat.n_qubits() != data.n_qubits()) throw DimensionError("deflate: qubit count mismatch");
  if (p_hat == 0.0) return DeflationResult{data, 0};

  const std::vector<double> q = predicted_probabilities(psi_hat, data);
  std::vector<MeasurementRecord> records;
  records.reserve(data.size());
  int discarded = 0;
  for (const auto& group : data.groups()) {
    const std::size_t first = records.size();
    double sum = 0.0;
    for (std::size_t r = group.begin; r < group.end; ++r) {
      const auto& rec = data.records()[r];
      double v = (rec.probability - p_hat * q[r]) / (1.0 - p_hat);
      if (v < 0.0) {
        if (floor && q[r] < *floor) {
          if (v < -kDeflationSlack) ++discarded;
        } else if (v < -kDeflationSlack) {
          throw std::domain_error("deflate: record " + rec.basis.str() + "/" + rec.outcome.str() +
                                  " would become " + std::to_string(v) + "; eigenvalue overestimated");
        }
        v = 0.0;
      }
      sum += v;
      records.push_back(MeasurementRecord{rec.basis, rec.outcome, v, std::nullopt});
    }
    if (!(sum > 0.0)) throw std::domain_error("deflate: basis " + group.basis.str() + " has no remaining weight");
    for (std::size_t r = first; r < records.size(); ++r) records[r].probability /= sum;
  }
  return DeflationResult{MeasurementDataset(data.n_qubits(), std::move(records), data.mode(), data.seed()), discarded};
}

std::vector<double> approx_probabilities(const SpectralApprox& approx, const MeasurementDataset& data) {
  const double total = approx.total_weight();
  std::vector<double> q(data.size(), 0.0);
  for (const auto& pair : approx.pairs) {
    const std::vector<double> qi = predicted_probabilities(pair.psi, data);
    for (std::size_t r = 0; r < q.size(); ++r) q[r] += pair.p / total * qi[r];
  }
  return q;
}

}  // namespace

double SpectralApprox::total_weight() const {
  double s = 0.0;
  for (const auto& p : pairs) s += p.p;
  return s;
}

DensityMatrix SpectralApprox::density() const {
  if (pairs.empty()) throw std::logic_error("SpectralApprox: no pairs");
  const double total = total_weight();
  if (!(total > 0.0)) throw std::logic_error("SpectralApprox: weights sum to zero");
  std::vector<double> weights;
  std::vector<StateVector> states;
  for (const auto& p : pairs) {
    weights.push_back(p.p / total);
    states.push_back(p.psi);
  }
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(states.front().dim(), states.front().dim());
  for (std::size_t i = 0; i < states.size(); ++i) m += weights[i] * states[i].projector();
  return DensityMatrix::normalized(m);
}

EigenvalueEstimate estimate_dominant_eigenvalue(const MeasurementDataset& data, const StateVector& psi_hat,
                                                double floor) {
  if (!(floor > 0.0)) throw std::invalid_argument("estimate_dominant_eigenvalue: floor must be > 0");
  if (psi_hat.n_qubits() != data.n_qubits()) throw DimensionError("estimate_dominant_eigenvalue: qubit count mismatch");
  const std::vector<double> q = predicted_probabilities(psi_hat, data);
  double best = std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t r = 0; r < q.size(); ++r) {
    if (q[r] < floor) continue;
    const double ratio = data.records()[r].probability / q[r];
    if (ratio < best) {
      best = ratio;
      arg = r;
    }
  }
  if (!std::isfinite(best)) {
    throw std::invalid_argument("estimate_dominant_eigenvalue: no record reaches the floor " + std::to_string(floor));
  }
  return EigenvalueEstimate{std::clamp(best, 0.0, 1.0), arg};
}

MeasurementDataset deflate(const MeasurementDataset& data, const StateVector& psi_hat, double p_hat) {
  return deflate_impl(data, psi_hat, p_hat, std::nullopt).data;
}

DeflationResult deflate_with_floor(const MeasurementDataset& data, const StateVector& psi_hat, double p_hat,
                                   double floor) {
  return deflate_impl(data, psi_hat, p_hat, floor);
}

double log_likelihood(const SpectralApprox& approx, const MeasurementDataset& data, double floor) {
  if (approx.pairs.empty()) throw std::invalid_argument("log_likelihood: empty approximation");
  const std::vector<double> q = approx_probabilities(approx, data);
  const bool counts = data.has_shots();
  double total = 0.0;
  for (std::size_t r = 0; r < q.size(); ++r) {
    const auto& rec = data.records()[r];
    const double w = counts ? static_cast<double>(*rec.shots) : rec.probability;
    if (w != 0.0) total += w * std::log(std::max(q[r], floor));
  }
  return total;
}

double relative_fidelity(const DensityMatrix& rho, const SpectralApprox& approx) {
  const Spectrum spectrum = eigendecompose(rho);
  return fidelity(rho, approx.density()) / spectrum.kappa(static_cast<int>(approx.pairs.size()));
}

Reconstruction reconstruct(const MeasurementDataset& data, int max_rank, const TrainConfig& train_config,
                           double floor, const DensityMatrix* truth) {
  if (max_rank < 1) throw std::invalid_argument("reconstruct: max_rank must be >= 1");
  if (data.empty()) throw std::invalid_argument("reconstruct: empty dataset");
  std::optional<Spectrum> spectrum;
  if (truth) {
    if (truth->n_qubits() != data.n_qubits()) throw DimensionError("reconstruct: truth has a different qubit count");
    spectrum = eigendecompose(*truth);
  }

  Reconstruction result;
  MeasurementDataset current = data;
  std::vector<StateVector> previous;
  double remaining = 1.0;

  for (int step = 1; step <= max_rank; ++step) {
    TrainResult trained = step == 1 ? train_pure_state(current, train_config)
                                    : train_next_eigenstate(current, previous, train_config);
    const StateVector psi = to_state_vector(trained.state);
    const EigenvalueEstimate est = estimate_dominant_eigenvalue(current, psi, floor);
    const double p_abs = est.value * remaining;

    SpectralApprox candidate = result.approx;
    candidate.pairs.push_back(SpectralPair{p_abs, psi});

    StepRecord rec{};
    rec.step = step;
    rec.p_hat = p_abs;
    rec.p_raw = est.value;
    if (spectrum && step <= static_cast<int>(spectrum->eigenvectors.size())) {
      const auto& truth_psi = spectrum->eigenvectors[static_cast<std::size_t>(step - 1)];
      const double p_true = spectrum->eigenvalues[step - 1];
      const double ov = overlap(psi, truth_psi);
      rec.eigenstate_fidelity = ov;
      rec.accuracy_residual =
          std::sqrt(std::max(0.0, p_abs * p_abs + p_true * p_true - 2.0 * p_abs * p_true * std::sqrt(ov)));
    }
    if (step > 1) rec.likelihood_before = log_likelihood(result.approx, data);
    const bool has_weight = candidate.total_weight() > 0.0;
    rec.likelihood_after = has_weight ? log_likelihood(candidate, data) : -std::numeric_limits<double>::infinity();
    rec.accepted = step == 1 || (has_weight && rec.likelihood_after > *rec.likelihood_before);
    rec.orthogonality_residual = trained.log.orthogonality_residual;
    rec.training_cost = trained.log.final_cost;
    rec.winning_restart = trained.log.winning_restart;
    rec.records_discarded_by_floor = 0;
    result.logs.push_back(std::move(trained.log));

    if (!rec.accepted) {
      result.report.steps.push_back(rec);
      break;
    }
    result.approx = std::move(candidate);
    previous.push_back(psi);
    const bool exhausted = est.value >= 1.0 - 1e-9;
    if (step < max_rank && !exhausted) {
      DeflationResult deflated = deflate_with_floor(current, psi, est.value, floor);
      rec.records_discarded_by_floor = deflated.records_discarded_by_floor;
      current = std::move(deflated.data);
      remaining *= 1.0 - est.value;
    }
    result.report.steps.push_back(rec);
    if (exhausted) break;
  }
  return result;
}

std::vector<BasisEntropy> eigenstate_entropy_profile(const DensityMatrix& rho, const StateVector& psi,
                                                     std::span<const BasisLabel> bases) {
  if (rho.dim() != psi.dim()) throw DimensionError("eigenstate_entropy_profile: dimension mismatch");
  std::vector<BasisEntropy> out;
  for (const auto& b : bases) {
    out.push_back(BasisEntropy{b, stats::shannon_entropy(projector_probabilities(rho, b)),
                               stats::shannon_entropy(projector_probabilities(psi, b))});
  }
  return out;
}

std::vector<BasisEntropy> eigenstate_entropy_profile(const MeasurementDataset& data, const StateVector& psi) {
  if (psi.n_qubits() != data.n_qubits()) throw DimensionError("eigenstate_entropy_profile: qubit count mismatch");
  std::vector<BasisEntropy> out;
  for (const auto& g : data.groups()) {
    std::vector<double> p;
    for (std::size_t r = g.begin; r < g.end; ++r) p.push_back(data.records()[r].probability);
    out.push_back(BasisEntropy{g.basis, stats::shannon_entropy(p),
                               stats::shannon_entropy(projector_probabilities(psi, g.basis))});
  }
  return out;
}

io::Json to_json(const StepRecord& s) {
  auto opt = [](const std::optional<double>& v) { return v ? io::Json(*v) : io::Json(nullptr); };
  io::Json j;
  j["step"] = s.step;
  j["p_hat"] = s.p_hat;
  j["p_raw"] = s.p_raw;
  j["eigenstate_fidelity"] = opt(s.eigenstate_fidelity);
  j["accuracy_residual"] = opt(s.accuracy_residual);
  j["likelihood_before"] = opt(s.likelihood_before);
  j["likelihood_after"] = s.likelihood_after;
  j["accepted"] = s.accepted;
  j["records_discarded_by_floor"] = s.records_discarded_by_floor;
  j["orthogonality_residual"] = s.orthogonality_residual;
  j["training_cost"] = s.training_cost;
  j["winning_restart"] = s.winning_restart;
  return j;
}

io::Json to_json(const Reconstruction& result) {
  io::Json pairs = io::Json::array();
  for (const auto& p : result.approx.pairs) {
    io::Json e;
    e["p"] = p.p;
    e["state"] = io::to_json(p.psi);
    pairs.push_back(std::move(e));
  }
  io::Json report = io::Json::array();
  for (const auto& s : result.report.steps) report.push_back(to_json(s));
  io::Json j;
  j["pairs"] = std::move(pairs);
  j["report"] = std::move(report);
  return j;
}

SpectralApprox spectral_approx_from_json(const io::Json& j) {
  SpectralApprox approx;
  for (const auto& e : j.at("pairs")) {
    approx.pairs.push_back(SpectralPair{e.at("p").get<double>(), io::state_vector_from_json(e.at("state"))});
  }
  return approx;
}

}  // namespace eigentomo
