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


#include "eigentomo/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "eigentomo/measurement.hpp"
#include "eigentomo/random.hpp"

namespace eigentomo::oracle {

namespace {

constexpr double kTolPure = 1e-10;
constexpr double kTolRank = 1e-9;
constexpr double kDegenerateGap = 1e-8;
constexpr double kProbeGap = 1e-2;

io::Json witness_json(const DensityMatrix& rho, const io::Json& challenger) {
  io::Json j;
  j["rho"] = io::to_json(rho);
  j["challenger"] = challenger;
  return j;
}

io::Json challenger_json(const io::Json& j) { return j; }
template <typename State>
io::Json challenger_json(const State& s) { return io::to_json(s); }

template <typename Challenger>
void record(PropositionReport& rep, double violation, const DensityMatrix& rho, const Challenger& challenger) {
  if (violation > rep.max_violation) {
    rep.max_violation = violation;
    if (violation > rep.tolerance) rep.witness = witness_json(rho, challenger_json(challenger));
  }
}

DensityMatrix pure_density(const StateVector& psi) { return DensityMatrix::pure(psi); }

Eigen::MatrixXcd random_isometry(Eigen::Index dim, int r, random::Engine& rng) {
  const Eigen::MatrixXcd g = random::complex_gaussian(dim, r, rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(dim, r);
}

template <typename Fn>
void parallel_for(int count, int threads, Fn&& body) {
  const int workers = std::max(1, std::min(threads, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

Hooks Hooks::defaults() {
  return Hooks{[](const DensityMatrix& a, const DensityMatrix& b) { return eigentomo::fidelity(a, b); },
               [](const DensityMatrix& a, const StateVector& b) { return eigentomo::pure_fidelity(a, b); }};
}

void PropositionReport::absorb(const PropositionReport& other) {
  trials += other.trials;
  if (other.skipped && !other.note.empty()) {
    if (!note.empty()) note += "; ";
    note += other.note;
  }
  if (other.max_violation > max_violation) {
    max_violation = other.max_violation;
    if (other.witness) witness = other.witness;
  }
}

io::Json PropositionReport::to_json() const {
  io::Json j;
  j["proposition"] = proposition;
  j["trials"] = trials;
  j["max_violation"] = max_violation;
  j["tolerance"] = tolerance;
  j["passed"] = passed();
  j["skipped"] = skipped;
  j["note"] = note;
  j["witness"] = witness ? *witness : io::Json(nullptr);
  return j;
}

PropositionReport check_prop1(const DensityMatrix& rho, int n_challengers, std::uint64_t seed, const Hooks& hooks) {
  PropositionReport rep;
  rep.proposition = 1;
  rep.tolerance = kTolPure;
  const Spectrum s = eigendecompose(rho);
  const double p1 = s.eigenvalues[0];
  const double gap = rho.dim() > 1 ? p1 - s.eigenvalues[1] : 1.0;
  if (gap <= kDegenerateGap) {
    rep.skipped = true;
    rep.note = "degenerate dominant eigenvalue (gap " + io::format_double(gap) + ")";
    return rep;
  }
  auto rng = random::make_engine(seed, 0x9201);
  const StateVector& psi1 = s.eigenvectors[0];
  record(rep, std::abs(hooks.pure_fidelity(rho, psi1) - p1), rho, psi1);
  for (int t = 0; t < n_challengers; ++t) {
    const StateVector phi = random::haar_state(rho.dim(), rng);
    record(rep, hooks.pure_fidelity(rho, phi) - p1, rho, phi);
    ++rep.trials;
  }
  // Uniqueness probe: near-optimal challengers must sit next to Psi_1.
  if (gap >= kProbeGap) {
    std::uniform_real_distribution<double> log_t(-4.0, 0.0);
    for (int t = 0; t < n_challengers; ++t) {
      const Eigen::VectorXcd dir = random::haar_state(rho.dim(), rng).amplitudes();
      const StateVector phi = StateVector::normalized(psi1.amplitudes() + std::pow(10.0, log_t(rng)) * dir);
      const double f = hooks.pure_fidelity(rho, phi);
      record(rep, f - p1, rho, phi);
      if (f >= p1 - 1e-4) record(rep, 0.99 - overlap(phi, psi1), rho, phi);
      ++rep.trials;
    }
  } else {
    rep.note = "uniqueness probe skipped (gap below 0.01)";
  }
  return rep;
}

PropositionReport check_prop2(const DensityMatrix& rho, int n_challengers, std::uint64_t seed) {
  PropositionReport rep;
  rep.proposition = 2;
  rep.tolerance = kTolPure;
  const Spectrum s = eigendecompose(rho);
  const double p1 = s.eigenvalues[0];
  const double pn = s.eigenvalues[s.eigenvalues.size() - 1];
  const double gap = rho.dim() > 1 ? p1 - s.eigenvalues[1] : 1.0;
  if (gap <= kDegenerateGap) {
    rep.skipped = true;
    rep.note = "degenerate dominant eigenvalue (gap " + io::format_double(gap) + ")";
    return rep;
  }
  const StateVector& psi1 = s.eigenvectors[0];
  record(rep, std::abs(trace_distance(rho, pure_density(psi1)) - (1.0 - p1)), rho, psi1);
  auto rng = random::make_engine(seed, 0x9202);
  for (int t = 0; t < n_challengers; ++t) {
    const StateVector phi = random::haar_state(rho.dim(), rng);
    const double d = trace_distance(rho, pure_density(phi));
    record(rep, std::max((1.0 - p1) - d, d - (1.0 - pn)), rho, phi);
    ++rep.trials;
  }
  return rep;
}

PropositionReport check_prop3(const DensityMatrix& rho, int r, int n_challengers, std::uint64_t seed,
                              const Hooks& hooks) {
  if (r < 1 || r > rho.dim()) throw std::out_of_range("check_prop3: r outside [1, dim]");
  PropositionReport rep;
  rep.proposition = 3;
  rep.tolerance = kTolRank;
  const Spectrum s = eigendecompose(rho);
  const double kappa = s.kappa(r);
  const DensityMatrix best = optimal_rank_r(rho, r);
  record(rep, std::abs(hooks.fidelity(rho, best) - kappa), rho, best);

  Eigen::MatrixXcd eig(rho.dim(), rho.dim());
  for (Eigen::Index j = 0; j < rho.dim(); ++j) eig.col(j) = s.eigenvectors[static_cast<std::size_t>(j)].amplitudes();

  auto rng = random::make_engine(seed, 0x9203);
  for (int t = 0; t < n_challengers; ++t) {
    const Eigen::MatrixXcd v = random_isometry(rho.dim(), r, rng);
    const Eigen::VectorXd w = random::simplex_point(r, rng);
    const DensityMatrix sigma = DensityMatrix::normalized(v * w.asDiagonal() * v.adjoint());
    record(rep, hooks.fidelity(rho, sigma) - kappa, rho, sigma);

    // Tr(D rho D) = sum_j p_j k_j with D the subspace projector and
    // k_j = sum_i |<Phi_i|Psi_j>|^2.
    const Eigen::MatrixXcd d = v * v.adjoint();
    const double lhs = (d * rho.entries() * d).trace().real();
    const Eigen::VectorXd k = (v.adjoint() * eig).cwiseAbs2().colwise().sum().transpose();
    const double rhs = s.eigenvalues.dot(k);
    record(rep, std::abs(lhs - rhs), rho, sigma);
    ++rep.trials;
  }
  if (r == rho.dim()) record(rep, std::abs(hooks.fidelity(rho, rho) - 1.0), rho, rho);
  return rep;
}

PropositionReport check_prop4(const DensityMatrix& rho, int r, int n_family, std::uint64_t seed) {
  if (r < 1 || r > rho.dim()) throw std::out_of_range("check_prop4: r outside [1, dim]");
  PropositionReport rep;
  rep.proposition = 4;
  rep.tolerance = kTolPure;
  const Spectrum s = eigendecompose(rho);
  const double kappa = s.kappa(r);
  const Eigen::VectorXd p = s.eigenvalues.head(r);
  auto rng = random::make_engine(seed, 0x9204);
  for (int t = 0; t <= n_family; ++t) {
    const Eigen::VectorXd q = t == 0 ? Eigen::VectorXd(p / kappa)
                                     : Eigen::VectorXd(p + random::simplex_point(r, rng) * (1.0 - kappa));
    Eigen::MatrixXcd tau = Eigen::MatrixXcd::Zero(rho.dim(), rho.dim());
    for (int i = 0; i < r; ++i) tau += q[i] * s.eigenvectors[static_cast<std::size_t>(i)].projector();
    const double d = trace_distance(rho.entries(), tau);
    io::Json qj = io::Json::array();
    for (Eigen::Index i = 0; i < q.size(); ++i) qj.push_back(q[i]);
    record(rep, std::abs(d - (1.0 - kappa)), rho, qj);
    ++rep.trials;
  }
  return rep;
}

void WeylReport::absorb(const WeylReport& other) {
  trials += other.trials;
  inequalities += other.inequalities;
  max_violation = std::max(max_violation, other.max_violation);
}

io::Json WeylReport::to_json() const {
  io::Json j;
  j["trials"] = trials;
  j["inequalities"] = inequalities;
  j["max_violation"] = max_violation;
  j["tolerance"] = tolerance;
  j["passed"] = passed();
  return j;
}

WeylReport check_weyl(const Eigen::MatrixXcd& q_matrix, const Eigen::MatrixXcd& p_matrix) {
  if (q_matrix.rows() != p_matrix.rows() || q_matrix.rows() != q_matrix.cols() || p_matrix.rows() != p_matrix.cols()) {
    throw DimensionError("check_weyl: matrices must be square and equally sized");
  }
  const Eigen::VectorXd q = hermitian_eigenvalues(q_matrix);
  const Eigen::VectorXd p = hermitian_eigenvalues(p_matrix);
  const Eigen::VectorXd m = hermitian_eigenvalues(q_matrix + p_matrix);
  const int n = static_cast<int>(q.size());
  WeylReport rep;
  rep.trials = 1;
  // 1-based indices as in the inequality; vectors are descending.
  for (int i = 1; i <= n; ++i) {
    for (int a = 1; a <= n; ++a) {
      for (int b = 1; b <= n; ++b) {
        if (a + b - n >= i) {
          rep.max_violation = std::max(rep.max_violation, q[a - 1] + p[b - 1] - m[i - 1]);
          ++rep.inequalities;
        }
        if (i >= a + b - 1) {
          rep.max_violation = std::max(rep.max_violation, m[i - 1] - q[a - 1] - p[b - 1]);
          ++rep.inequalities;
        }
      }
    }
  }
  return rep;
}

WeylReport check_weyl(const Eigen::MatrixXcd& q_matrix, const Eigen::MatrixXcd& p_matrix, int n_trials,
                      std::uint64_t seed) {
  WeylReport total = check_weyl(q_matrix, p_matrix);
  auto rng = random::make_engine(seed, 0x9205);
  for (int t = 1; t < n_trials; ++t) {
    const Eigen::MatrixXcd u = random::haar_unitary(p_matrix.rows(), rng);
    total.absorb(check_weyl(q_matrix, u * p_matrix * u.adjoint()));
  }
  return total;
}

WeylReport check_weyl_random(Eigen::Index dim, int n_trials, std::uint64_t seed) {
  WeylReport total;
  auto rng = random::make_engine(seed, 0x9206);
  for (int t = 0; t < n_trials; ++t) {
    const Eigen::MatrixXcd q = random::random_hermitian(dim, rng);
    const Eigen::MatrixXcd p = random::random_hermitian(dim, rng);
    total.absorb(check_weyl(q, p));
  }
  return total;
}

bool CorpusSummary::passed() const {
  if (!weyl.passed() || kappa_attainment_error > kTolRank) return false;
  return std::all_of(propositions.begin(), propositions.end(), [](const auto& r) { return r.passed(); });
}

io::Json CorpusSummary::to_json() const {
  io::Json props = io::Json::array();
  for (const auto& r : propositions) props.push_back(r.to_json());
  io::Json j;
  j["states"] = states;
  j["propositions"] = std::move(props);
  j["weyl"] = weyl.to_json();
  j["kappa_attainment_error"] = kappa_attainment_error;
  j["passed"] = passed();
  return j;
}

CorpusSummary run_corpus(const CorpusConfig& config) {
  if (config.dims.empty() || config.n_states < 0 || config.challengers < 1) {
    throw std::invalid_argument("run_corpus: need dims, n_states >= 0 and challengers >= 1");
  }
  std::vector<DensityMatrix> states;
  for (int i = 0; i < config.n_states; ++i) {
    const int dim = config.dims[static_cast<std::size_t>(i) % config.dims.size()];
    auto rng = random::make_engine(config.seed, 0x1000 + static_cast<std::uint64_t>(i));
    // Every third state is rank deficient.
    const Eigen::Index rank = (i % 3 == 2 && dim > 2) ? dim / 2 : -1;
    states.push_back(random::random_density_matrix(dim, rng, rank));
  }
  if (config.include_named) {
    states.push_back(bell_mixture());
    const double table_spectrum[] = {0.860, 0.063, 0.037};
    states.push_back(make_w_mixture(4, table_spectrum, config.seed));
  }

  struct PerState {
    PropositionReport props[4];
    WeylReport weyl;
    double kappa_error = 0.0;
  };
  std::vector<PerState> results(states.size());
  parallel_for(static_cast<int>(states.size()), config.threads, [&](int i) {
    const DensityMatrix& rho = states[static_cast<std::size_t>(i)];
    const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(i);
    const int dim = static_cast<int>(rho.dim());
    const int r = 1 + i % std::min(dim, 3);
    PerState& out = results[static_cast<std::size_t>(i)];
    out.props[0] = check_prop1(rho, config.challengers, seed, config.hooks);
    out.props[1] = check_prop2(rho, config.challengers, seed);
    out.props[2] = check_prop3(rho, r, config.challengers, seed, config.hooks);
    out.props[3] = check_prop4(rho, r, config.challengers, seed);
    const Spectrum s = eigendecompose(rho);
    for (int k = 1; k <= dim; ++k) {
      out.kappa_error = std::max(out.kappa_error, std::abs(config.hooks.fidelity(rho, optimal_rank_r(rho, k)) - s.kappa(k)));
    }
    auto rng = random::make_engine(seed, 0x9207);
    const StateVector phi = random::haar_state(rho.dim(), rng);
    out.weyl = check_weyl(-phi.projector(), rho.entries(), 4, seed);
    out.weyl.absorb(check_weyl_random(rho.dim(), 2, seed));
  });

  CorpusSummary summary;
  summary.states = static_cast<int>(states.size());
  for (int k = 0; k < 4; ++k) {
    PropositionReport agg;
    agg.proposition = k + 1;
    agg.tolerance = k == 2 ? kTolRank : kTolPure;
    for (const auto& r : results) agg.absorb(r.props[k]);
    summary.propositions.push_back(std::move(agg));
  }
  for (const auto& r : results) {
    summary.weyl.absorb(r.weyl);
    summary.kappa_attainment_error = std::max(summary.kappa_attainment_error, r.kappa_error);
  }
  return summary;
}

}  // namespace eigentomo::oracle
