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

#include "eigentomo/nqs.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace eigentomo {

namespace {

void require_visible(const RbmParams& params, Eigen::Index n, const char* op) {
  if (params.n_visible() != n) {
    throw DimensionError(std::string(op) + ": configuration length does not match visible layer");
  }
}

double logistic_2x(double x) { return 1.0 / (1.0 + std::exp(-2.0 * x)); }

io::Json params_to_json(const RbmParams& p) {
  io::Json w = io::Json::array();
  for (Eigen::Index i = 0; i < p.weights.rows(); ++i) {
    io::Json row = io::Json::array();
    for (Eigen::Index j = 0; j < p.weights.cols(); ++j) row.push_back(p.weights(i, j));
    w.push_back(std::move(row));
  }
  io::Json a = io::Json::array();
  for (Eigen::Index i = 0; i < p.visible_bias.size(); ++i) a.push_back(p.visible_bias[i]);
  io::Json b = io::Json::array();
  for (Eigen::Index j = 0; j < p.hidden_bias.size(); ++j) b.push_back(p.hidden_bias[j]);
  io::Json j;
  j["W"] = std::move(w);
  j["a"] = std::move(a);
  j["b"] = std::move(b);
  return j;
}

RbmParams params_from_json(const io::Json& j, int n, int m) {
  RbmParams p = RbmParams::zeros(n, m);
  const auto& w = j.at("W");
  if (static_cast<int>(w.size()) != n) throw std::runtime_error("checkpoint: W must have n rows");
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(w.at(static_cast<std::size_t>(i)).size()) != m) {
      throw std::runtime_error("checkpoint: W rows must have m entries");
    }
    for (int k = 0; k < m; ++k) p.weights(i, k) = w[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].get<double>();
  }
  const auto& a = j.at("a");
  const auto& b = j.at("b");
  if (static_cast<int>(a.size()) != n || static_cast<int>(b.size()) != m) {
    throw std::runtime_error("checkpoint: bias lengths do not match n/m");
  }
  for (int i = 0; i < n; ++i) p.visible_bias[i] = a[static_cast<std::size_t>(i)].get<double>();
  for (int k = 0; k < m; ++k) p.hidden_bias[k] = b[static_cast<std::size_t>(k)].get<double>();
  if (!p.all_finite()) throw std::runtime_error("checkpoint: non-finite parameter");
  return p;
}

}  // namespace

// ---------------------------------------------------------------------------
// RbmParams

RbmParams RbmParams::zeros(int n_visible, int n_hidden) {
  if (n_visible < 1 || n_hidden < 1) throw std::invalid_argument("RbmParams: layer sizes must be positive");
  return RbmParams{Eigen::MatrixXd::Zero(n_visible, n_hidden), Eigen::VectorXd::Zero(n_visible),
                   Eigen::VectorXd::Zero(n_hidden)};
}

RbmParams RbmParams::uniform(int n_visible, int n_hidden, double scale, random::Engine& rng) {
  RbmParams p = zeros(n_visible, n_hidden);
  std::uniform_real_distribution<double> u(-scale, scale);
  for (Eigen::Index k = 0; k < p.weights.size(); ++k) p.weights.data()[k] = u(rng);
  for (Eigen::Index k = 0; k < p.visible_bias.size(); ++k) p.visible_bias[k] = u(rng);
  for (Eigen::Index k = 0; k < p.hidden_bias.size(); ++k) p.hidden_bias[k] = u(rng);
  return p;
}

bool RbmParams::all_finite() const {
  return weights.allFinite() && visible_bias.allFinite() && hidden_bias.allFinite();
}

Eigen::VectorXd RbmParams::flatten() const {
  Eigen::VectorXd flat(size());
  flat << Eigen::Map<const Eigen::VectorXd>(weights.data(), weights.size()), visible_bias, hidden_bias;
  return flat;
}

RbmParams RbmParams::unflatten(const Eigen::Ref<const Eigen::VectorXd>& flat, int n_visible, int n_hidden) {
  RbmParams p = zeros(n_visible, n_hidden);
  if (flat.size() != p.size()) throw DimensionError("RbmParams::unflatten: wrong parameter count");
  const Eigen::Index nw = p.weights.size();
  p.weights = Eigen::Map<const Eigen::MatrixXd>(flat.data(), n_visible, n_hidden);
  p.visible_bias = flat.segment(nw, n_visible);
  p.hidden_bias = flat.segment(nw + n_visible, n_hidden);
  return p;
}

double log_two_cosh(double x) {
  const double ax = std::abs(x);
  return ax + std::log1p(std::exp(-2.0 * ax));
}

// ---------------------------------------------------------------------------
// NqsState

NqsState::NqsState(RbmParams lambda, RbmParams mu) : lambda_(std::move(lambda)), mu_(std::move(mu)) {
  if (lambda_.n_visible() != mu_.n_visible()) {
    throw DimensionError("NqsState: amplitude and phase networks must share the visible layer");
  }
  if (!lambda_.all_finite() || !mu_.all_finite()) throw std::invalid_argument("NqsState: non-finite parameter");
  if (n_qubits() <= kExactModeCap) log_z_ = log_partition(lambda_);
}

NqsState NqsState::random(int n_qubits, double scale, std::uint64_t seed) {
  return random(n_qubits, scale, scale, seed);
}

NqsState NqsState::random(int n_qubits, double amplitude_scale, double phase_scale, std::uint64_t seed) {
  auto rng = random::make_engine(seed, 0x1A17);
  RbmParams lambda = RbmParams::uniform(n_qubits, n_qubits, amplitude_scale, rng);
  RbmParams mu = RbmParams::uniform(n_qubits, n_qubits, phase_scale, rng);
  return NqsState(std::move(lambda), std::move(mu));
}

Eigen::VectorXd NqsState::flatten() const {
  Eigen::VectorXd flat(lambda_.size() + mu_.size());
  flat << lambda_.flatten(), mu_.flatten();
  return flat;
}

NqsState NqsState::with_parameters(const Eigen::Ref<const Eigen::VectorXd>& flat) const {
  const Eigen::Index nl = lambda_.size();
  if (flat.size() != nl + mu_.size()) throw DimensionError("NqsState::with_parameters: wrong parameter count");
  return NqsState(RbmParams::unflatten(flat.head(nl), lambda_.n_visible(), lambda_.n_hidden()),
                  RbmParams::unflatten(flat.tail(mu_.size()), mu_.n_visible(), mu_.n_hidden()));
}

// ---------------------------------------------------------------------------
// Evaluation

Eigen::MatrixXd spin_table(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kExactModeCap) {
    throw std::length_error("spin_table: n_qubits outside exact-mode range");
  }
  static const std::array<Eigen::MatrixXd, kExactModeCap + 1> tables = [] {
    std::array<Eigen::MatrixXd, kExactModeCap + 1> t;
    for (int n = 1; n <= kExactModeCap; ++n) {
      const Eigen::Index dim = Eigen::Index{1} << n;
      t[static_cast<std::size_t>(n)].resize(dim, n);
      for (Eigen::Index i = 0; i < dim; ++i) {
        for (int q = 0; q < n; ++q) t[static_cast<std::size_t>(n)](i, q) = spin_of(static_cast<std::uint64_t>(i), q, n);
      }
    }
    return t;
  }();
  return tables[static_cast<std::size_t>(n_qubits)];
}

double rbm_log_marginal(const RbmParams& params, const Eigen::Ref<const Eigen::VectorXd>& spins) {
  require_visible(params, spins.size(), "rbm_log_marginal");
  const Eigen::VectorXd theta = params.weights.transpose() * spins + params.hidden_bias;
  double total = params.visible_bias.dot(spins);
  for (Eigen::Index j = 0; j < theta.size(); ++j) total += log_two_cosh(theta[j]);
  return total;
}

double rbm_log_marginal(const RbmParams& params, const Outcome& sigma) {
  return rbm_log_marginal(params, sigma.spins());
}

Eigen::VectorXd rbm_log_marginals(const RbmParams& params) {
  const Eigen::MatrixXd s = spin_table(params.n_visible());
  const Eigen::MatrixXd theta = (s * params.weights).rowwise() + params.hidden_bias.transpose();
  Eigen::VectorXd out = s * params.visible_bias;
  for (Eigen::Index r = 0; r < theta.rows(); ++r) {
    for (Eigen::Index j = 0; j < theta.cols(); ++j) out[r] += log_two_cosh(theta(r, j));
  }
  return out;
}

double log_partition(const RbmParams& params, int cap) {
  if (params.n_visible() > cap) {
    throw std::length_error("log_partition: " + std::to_string(params.n_visible()) +
                            " visible units exceed the exact-mode cap of " + std::to_string(cap) +
                            "; use Gibbs sampling instead");
  }
  const int n = params.n_visible();
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::VectorXd spins(n);
  double running_max = -std::numeric_limits<double>::infinity();
  double scaled_sum = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (int q = 0; q < n; ++q) spins[q] = spin_of(static_cast<std::uint64_t>(i), q, n);
    const double l = rbm_log_marginal(params, spins);
    if (l > running_max) {
      scaled_sum = scaled_sum * std::exp(running_max - l) + 1.0;
      running_max = l;
    } else {
      scaled_sum += std::exp(l - running_max);
    }
  }
  return running_max + std::log(scaled_sum);
}

Complex amplitude(const NqsState& state, const Outcome& sigma) {
  const double log_z = state.cached_log_partition() ? *state.cached_log_partition() : log_partition(state.lambda());
  const double modulus = std::exp(0.5 * (rbm_log_marginal(state.lambda(), sigma) - log_z));
  return std::polar(modulus, 0.5 * rbm_log_marginal(state.mu(), sigma));
}

Eigen::VectorXcd amplitudes(const NqsState& state) {
  const double log_z = state.cached_log_partition() ? *state.cached_log_partition() : log_partition(state.lambda());
  const Eigen::VectorXd l = rbm_log_marginals(state.lambda());
  const Eigen::VectorXd m = rbm_log_marginals(state.mu());
  Eigen::VectorXcd psi(l.size());
  for (Eigen::Index i = 0; i < l.size(); ++i) psi[i] = std::polar(std::exp(0.5 * (l[i] - log_z)), 0.5 * m[i]);
  return psi;
}

StateVector to_state_vector(const NqsState& state) { return StateVector::normalized(amplitudes(state)); }

double rotated_probability(const NqsState& state, const BasisLabel& basis, const Outcome& outcome) {
  if (basis.n_qubits() != state.n_qubits() || outcome.n_qubits() != state.n_qubits()) {
    throw DimensionError("rotated_probability: qubit count mismatch");
  }
  const Eigen::VectorXcd rotated = rotate_vector(amplitudes(state), basis);
  return std::norm(rotated[outcome.index()]);
}

// ---------------------------------------------------------------------------
// Gibbs sampling

Eigen::VectorXd gibbs_conditional_hidden(const RbmParams& params, const Eigen::Ref<const Eigen::VectorXd>& spins) {
  require_visible(params, spins.size(), "gibbs_conditional_hidden");
  const Eigen::VectorXd theta = params.weights.transpose() * spins + params.hidden_bias;
  return theta.unaryExpr(&logistic_2x);
}

Eigen::VectorXd gibbs_conditional_visible(const RbmParams& params, const Eigen::Ref<const Eigen::VectorXd>& hidden) {
  if (hidden.size() != params.n_hidden()) {
    throw DimensionError("gibbs_conditional_visible: configuration length does not match hidden layer");
  }
  const Eigen::VectorXd theta = params.weights * hidden + params.visible_bias;
  return theta.unaryExpr(&logistic_2x);
}

std::vector<Outcome> gibbs_sample(const RbmParams& params, int n_samples, int burn_in, int thin,
                                  std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("gibbs_sample: n_samples must be >= 1");
  if (burn_in < 0 || thin < 1) throw std::invalid_argument("gibbs_sample: need burn_in >= 0 and thin >= 1");
  auto rng = random::make_engine(seed, 0x61BB5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = params.n_visible();
  Eigen::VectorXd s(n);
  Eigen::VectorXd h(params.n_hidden());
  for (int i = 0; i < n; ++i) s[i] = unit(rng) < 0.5 ? 1.0 : -1.0;

  auto sweep = [&]() {
    const Eigen::VectorXd ph = gibbs_conditional_hidden(params, s);
    for (Eigen::Index j = 0; j < h.size(); ++j) h[j] = unit(rng) < ph[j] ? 1.0 : -1.0;
    const Eigen::VectorXd pv = gibbs_conditional_visible(params, h);
    for (Eigen::Index i = 0; i < s.size(); ++i) s[i] = unit(rng) < pv[i] ? 1.0 : -1.0;
  };

  for (int k = 0; k < burn_in; ++k) sweep();
  std::vector<Outcome> out;
  out.reserve(static_cast<std::size_t>(n_samples));
  for (int k = 0; k < n_samples; ++k) {
    for (int t = 0; t < thin; ++t) sweep();
    std::uint32_t index = 0;
    for (int i = 0; i < n; ++i) index = (index << 1) | (s[i] < 0 ? 1U : 0U);
    out.emplace_back(index, n);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Checkpoints

io::Json to_json(const NqsState& state, std::uint64_t seed) {
  io::Json j;
  j["n"] = state.lambda().n_visible();
  j["m"] = state.lambda().n_hidden();
  j["lambda"] = params_to_json(state.lambda());
  j["mu"] = params_to_json(state.mu());
  j["seed"] = seed;
  return j;
}

NqsState nqs_from_json(const io::Json& j) {
  const int n = j.at("n").get<int>();
  const int m = j.at("m").get<int>();
  if (n < 1 || m < 1) throw std::runtime_error("checkpoint: n and m must be positive");
  return NqsState(params_from_json(j.at("lambda"), n, m), params_from_json(j.at("mu"), n, m));
}

}  // namespace eigentomo
