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


// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "eigentomo/costs.hpp"
#include "eigentomo/figures.hpp"
#include "eigentomo/measurement.hpp"
#include "eigentomo/nqs.hpp"
#include "eigentomo/oracle.hpp"
#include "eigentomo/random.hpp"
#include "eigentomo/reconstructor.hpp"

namespace {

using namespace eigentomo;
namespace fs = std::filesystem;

struct Verdict {
  bool pass;
  std::string detail;
};

class Timer {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

MeasurementDataset full_data(const DensityMatrix& rho) {
  return exact_dataset(rho, generate_basis_set(rho.n_qubits(), BasisMode::kFull, 0));
}

DensityMatrix table_w_mixture() {
  const double spectrum[] = {0.860, 0.063, 0.037};
  return make_w_mixture(4, spectrum, 7);
}

Verdict ac1() {
  Timer t;
  const DensityMatrix rho = bell_mixture();
  const Reconstruction r = reconstruct(full_data(rho), 2, TrainConfig{}, 1e-6, &rho);
  const double secs = t.seconds();
  if (r.approx.pairs.size() < 2) return {false, "second eigenstate rejected"};
  const auto& s = r.report.steps;
  const double ov1 = s[0].eigenstate_fidelity.value_or(0.0);
  const double ov2 = s[1].eigenstate_fidelity.value_or(0.0);
  const double p1b = r.approx.pairs[0].p;
  const double p2b = r.approx.pairs[1].p;
  const double f = fidelity(rho, r.approx.density());
  const bool pass = ov1 >= 0.999 && p1b >= 0.895 && p1b <= 0.905 && ov2 >= 0.999 && p2b >= 0.065 && p2b <= 0.090 &&
                    f >= 0.95 && secs <= 300.0;
  return {pass, "ov1=" + fmt("%.6f", ov1) + " (>=0.999) p1b=" + fmt("%.5f", p1b) + " in [0.895,0.905] ov2=" +
                    fmt("%.6f", ov2) + " (>=0.999) p2b=" + fmt("%.5f", p2b) + " in [0.065,0.090] F=" +
                    fmt("%.5f", f) + " (>=0.95) time=" + fmt("%.1f", secs) + "s (<=300)"};
}

Verdict ac2() {
  Timer t;
  const DensityMatrix rho = table_w_mixture();
  const Reconstruction r = reconstruct(full_data(rho), 2, TrainConfig{}, 1e-6, &rho);
  const double secs = t.seconds();
  const double ov1 = r.report.steps[0].eigenstate_fidelity.value_or(0.0);
  const double kappa2 = eigendecompose(rho).kappa(2);
  const double f = fidelity(rho, r.approx.density());
  const double rf = f / kappa2;
  const bool pass = ov1 >= 0.98 && rf >= 0.95 && secs <= 1800.0;
  std::string steps;
  for (const auto& s : r.report.steps) {
    steps += " step" + std::to_string(s.step) + "(p_hat=" + fmt("%.4f", s.p_hat) +
             ",accepted=" + (s.accepted ? "1" : "0") + ")";
  }
  return {pass, "ov1=" + fmt("%.5f", ov1) + " (>=0.98) F=" + fmt("%.5f", f) + " kappa2=" + fmt("%.4f", kappa2) +
                    " RF=" + fmt("%.5f", rf) + " (>=0.95)" + steps + " time=" + fmt("%.1f", secs) + "s (<=1800)"};
}

Verdict ac3() {
  Timer t;
  const oracle::CorpusSummary s = oracle::run_corpus(oracle::CorpusConfig{});
  const double secs = t.seconds();
  double worst = s.weyl.max_violation;
  for (const auto& p : s.propositions) worst = std::max(worst, p.max_violation);
  const bool pass = worst <= 1e-9 && s.kappa_attainment_error <= 1e-9 && s.passed() && secs <= 600.0;
  return {pass, "states=" + std::to_string(s.states) + " max_violation=" + fmt("%.3g", worst) +
                    " (<=1e-9) kappa_attainment=" + fmt("%.3g", s.kappa_attainment_error) + " (<=1e-9) time=" +
                    fmt("%.1f", secs) + "s (<=600)"};
}

Eigen::VectorXd spins_of(std::uint32_t index, int n) {
  Eigen::VectorXd s(n);
  for (int i = 0; i < n; ++i) s[i] = spin_of(index, i, n);
  return s;
}

double brute_marginal(const RbmParams& p, const Eigen::VectorXd& s) {
  double total = 0.0;
  for (std::uint32_t hi = 0; hi < (1U << p.n_hidden()); ++hi) {
    const Eigen::VectorXd h = spins_of(hi, p.n_hidden());
    total += std::exp(s.dot(p.weights * h) + p.visible_bias.dot(s) + p.hidden_bias.dot(h));
  }
  return total;
}

Verdict ac4() {
  double marginal_err = 0.0;
  for (int draw = 0; draw < 50; ++draw) {
    const int n = 1 + draw % 6;
    auto rng = random::make_engine(9000 + draw);
    const RbmParams p = RbmParams::uniform(n, n, 1.0, rng);
    for (std::uint32_t si = 0; si < (1U << n); ++si) {
      const double rel = std::exp(rbm_log_marginal(p, Outcome(si, n))) / brute_marginal(p, spins_of(si, n)) - 1.0;
      marginal_err = std::max(marginal_err, std::abs(rel));
    }
  }

  auto rng = random::make_engine(9100);
  const RbmParams gp = RbmParams::uniform(4, 4, 0.5, rng);
  const Eigen::VectorXd exact = (rbm_log_marginals(gp).array() - log_partition(gp)).exp();
  std::vector<double> hist(16, 0.0);
  const auto samples = gibbs_sample(gp, 1000000, 100, 5, 9101);
  for (const auto& o : samples) hist[o.index()] += 1.0 / static_cast<double>(samples.size());
  double tv = 0.0;
  for (int i = 0; i < 16; ++i) tv += 0.5 * std::abs(hist[i] - exact[i]);

  double grad_err = 0.0;
  const double h = 1e-5;
  for (CostKind kind : {CostKind::kL1, CostKind::kL15, CostKind::kKL1, CostKind::kKL2}) {
    for (int inst = 0; inst < 20; ++inst) {
      const int n = 2 + inst % 2;
      auto r = random::make_engine(9200 + inst);
      const DensityMatrix rho = random::random_density_matrix(Eigen::Index{1} << n, r);
      const MeasurementDataset data = full_data(rho);
      const NqsState s = NqsState::random(n, 0.5, 9300 + inst);
      CostSpec spec;
      spec.kind = kind;
      const Eigen::VectorXd g = cost_gradient(spec, s, data).flatten();
      const Eigen::VectorXd x = s.flatten();
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        Eigen::VectorXd xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        const double fd =
            (cost_value(spec, s.with_parameters(xp), data) - cost_value(spec, s.with_parameters(xm), data)) / (2 * h);
        const double scale = std::max({std::abs(fd), std::abs(g[i]), 1e-3});
        grad_err = std::max(grad_err, std::abs(fd - g[i]) / scale);
      }
    }
  }
  const bool pass = marginal_err <= 1e-9 && tv <= 0.01 && grad_err <= 1e-5;
  return {pass, "marginal_rel_err=" + fmt("%.3g", marginal_err) + " (<=1e-9) gibbs_tv=" + fmt("%.4f", tv) +
                    " (<=0.01) gradient_rel_err=" + fmt("%.3g", grad_err) + " (<=1e-5)"};
}

Verdict ac5() {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
  d(0, 0) = 0.9;
  d(1, 1) = 0.1;
  const BasisLabel z("z");
  const double est =
      estimate_dominant_eigenvalue(exact_dataset(DensityMatrix(d), std::span(&z, 1)), StateVector::basis_state(2, 0))
          .value;
  const double exact_err = std::abs(est - 0.9);

  double worst_negative = 0.0;
  double worst_consistency = 0.0;
  auto rng = random::make_engine(9400);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + t % 4;
    const Eigen::Index dim = Eigen::Index{1} << n;
    const DensityMatrix rho = random::random_density_matrix(dim, rng);
    const MeasurementDataset data = full_data(rho);
    const Spectrum s = eigendecompose(rho);

    const StateVector psi_hat(random::small_unitary(dim, 0.05, rng) * s.eigenvectors[0].amplitudes());
    const EigenvalueEstimate e = estimate_dominant_eigenvalue(data, psi_hat);
    const std::vector<double> q = predicted_probabilities(psi_hat, data);
    for (std::size_t r = 0; r < q.size(); ++r) {
      if (q[r] >= 1e-6) worst_negative = std::min(worst_negative, data.records()[r].probability - e.value * q[r]);
    }

    const double p1 = s.eigenvalues[0];
    const MeasurementDataset deflated = deflate(data, s.eigenvectors[0], p1);
    const MeasurementDataset expected = full_data(
        DensityMatrix::normalized((rho.entries() - p1 * s.eigenvectors[0].projector()) / (1.0 - p1)));
    for (std::size_t r = 0; r < deflated.size(); ++r) {
      worst_consistency =
          std::max(worst_consistency, std::abs(deflated.records()[r].probability - expected.records()[r].probability));
    }
  }
  const bool pass = exact_err <= 1e-10 && worst_negative >= -1e-9 && worst_consistency <= 1e-9;
  return {pass, "exactness_err=" + fmt("%.3g", exact_err) + " (<=1e-10) min_deflated=" + fmt("%.3g", worst_negative) +
                    " (>=-1e-9) consistency_err=" + fmt("%.3g", worst_consistency) + " (<=1e-9)"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict ac6() {
  const fs::path root = fs::temp_directory_path() / "eigentomo_acceptance";
  fs::remove_all(root);
  auto cli = [](std::vector<std::string> args) {
    std::ostringstream out, err;
    return cli::run_cli(args, out, err);
  };
  auto s = [&](const char* name) { return (root / name).string(); };
  const std::vector<std::string> outputs{"a/dataset.jsonl", "a/state.json", "r/result.json", "r/report.csv",
                                         "r/training_step1.csv", "f/fig3.csv", "v/oracle_report.json"};
  for (const char* run : {"1", "2"}) {
    const fs::path base = root / run;
    const std::string b = base.string();
    if (cli({"--seed", "7", "synth", "--w", "3", "--spectrum", "0.8,0.15", "--bases", "compressed", "--out-dir",
             b + "/a"}) != 0 ||
        cli({"--seed", "7", "reconstruct", "--data", b + "/a/dataset.jsonl", "--truth", b + "/a/state.json",
             "--epochs", "2000", "--restarts", "2", "--out-dir", b + "/r"}) != 0 ||
        cli({"--seed", "7", "figdata", "fig3", "--perturbations", "10", "--out-dir", b + "/f"}) != 0 ||
        cli({"--seed", "7", "verify", "--dims", "2,4", "--states", "6", "--trials", "20", "--out-dir", b + "/v"}) !=
            0) {
      return {false, "a command failed"};
    }
  }
  if (cli({"replay", "--manifest", s("1/r/manifest.json"), "--out-dir", s("3/r")}) != 0) {
    return {false, "replay failed"};
  }
  int identical = 0;
  int compared = 0;
  for (const auto& f : outputs) {
    ++compared;
    identical += slurp(root / "1" / f) == slurp(root / "2" / f) && !slurp(root / "1" / f).empty();
  }
  for (const char* f : {"r/result.json", "r/report.csv"}) {
    ++compared;
    identical += slurp(root / "1" / f) == slurp(root / "3" / f);
  }
  fs::remove_all(root);
  return {identical == compared, std::to_string(identical) + "/" + std::to_string(compared) +
                                     " outputs bit-identical across repeated runs and manifest replay"};
}

Verdict ac7() {
  const DensityMatrix rho = table_w_mixture();
  const auto bases = generate_basis_set(4, BasisMode::kFull, 0);
  const figures::Fig4Data d = figures::fig4_data(rho, eigendecompose(rho).eigenvectors[0], bases);
  const double frac = d.fraction_pure_not_above();
  const bool pass = d.entropies.size() == 81 && frac >= 0.95;
  return {pass, "bases=" + std::to_string(d.entropies.size()) + " fraction_pure_not_above=" + fmt("%.4f", frac) +
                    " (>=0.95)"};
}

Verdict ac8() {
  const DensityMatrix rho = table_w_mixture();
  const figures::Fig3Data g = figures::fig3_grid(rho, full_data(rho), figures::Fig3Config{});
  const double l15 = g.spearman_of(CostKind::kL15);
  const double kl1 = g.spearman_of(CostKind::kKL1);
  const bool pass = l15 >= 0.8 && l15 > kl1;
  return {pass, "rows=" + std::to_string(g.rows.size()) + " spearman(L1.5)=" + fmt("%.4f", l15) +
                    " (>=0.8) spearman(KL1)=" + fmt("%.4f", kl1) + " (< L1.5)"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Verdict (*run)();
  };
  const Criterion criteria[] = {{"AC1 bell-mixture rank-2 reconstruction", ac1},
                                {"AC2 synthetic 4-qubit W mixture", ac2},
                                {"AC3 proposition oracle corpus", ac3},
                                {"AC4 RBM marginals, Gibbs sampling, gradients", ac4},
                                {"AC5 eigenvalue estimator and deflation", ac5},
                                {"AC6 determinism", ac6},
                                {"AC7 entropy profile", ac7},
                                {"AC8 cost ranking", ac8}};
  int failures = 0;
  for (const auto& c : criteria) {
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += v.pass ? 0 : 1;
    std::printf("%s %s: %s\n", v.pass ? "PASS" : "FAIL", c.name, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
  return failures == 0 ? 0 : 1;
}
