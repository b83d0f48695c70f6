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

#include <gtest/gtest.h>

#include <cmath>

namespace eigentomo {
namespace {

Eigen::VectorXd spins_of(std::uint32_t index, int n) {
  Eigen::VectorXd s(n);
  for (int i = 0; i < n; ++i) s[i] = spin_of(index, i, n);
  return s;
}

// Exhaustive hidden-layer sum of the joint weight.
double brute_marginal(const RbmParams& p, const Eigen::VectorXd& s) {
  const int m = p.n_hidden();
  double total = 0.0;
  for (std::uint32_t hi = 0; hi < (1U << m); ++hi) {
    const Eigen::VectorXd h = spins_of(hi, m);
    total += std::exp(s.dot(p.weights * h) + p.visible_bias.dot(s) + p.hidden_bias.dot(h));
  }
  return total;
}

double brute_partition(const RbmParams& p) {
  double total = 0.0;
  for (std::uint32_t si = 0; si < (1U << p.n_visible()); ++si) total += brute_marginal(p, spins_of(si, p.n_visible()));
  return total;
}

RbmParams random_params(int n, int m, double scale, std::uint64_t seed) {
  auto rng = random::make_engine(seed);
  return RbmParams::uniform(n, m, scale, rng);
}

TEST(LogTwoCosh, StableForLargeArguments) {
  EXPECT_NEAR(log_two_cosh(0.0), std::log(2.0), 1e-15);
  EXPECT_NEAR(log_two_cosh(0.7), std::log(2.0 * std::cosh(0.7)), 1e-14);
  EXPECT_NEAR(log_two_cosh(-3.0), std::log(2.0 * std::cosh(3.0)), 1e-14);
  EXPECT_DOUBLE_EQ(log_two_cosh(1000.0), 1000.0);
  EXPECT_DOUBLE_EQ(log_two_cosh(-1000.0), 1000.0);
}

TEST(RbmParams, FlattenRoundTrip) {
  const RbmParams p = random_params(3, 4, 0.5, 1);
  const RbmParams q = RbmParams::unflatten(p.flatten(), 3, 4);
  EXPECT_EQ(q.weights, p.weights);
  EXPECT_EQ(q.visible_bias, p.visible_bias);
  EXPECT_EQ(q.hidden_bias, p.hidden_bias);
  EXPECT_EQ(p.size(), 3 * 4 + 3 + 4);
  EXPECT_LE(p.flatten().cwiseAbs().maxCoeff(), 0.5);
}

TEST(RbmLogMarginal, ZeroAndBiasExamples) {
  const RbmParams zero = RbmParams::zeros(4, 4);
  for (std::uint32_t i = 0; i < 16; ++i) EXPECT_NEAR(rbm_log_marginal(zero, Outcome(i, 4)), 4 * std::log(2.0), 1e-14);
  RbmParams biased = RbmParams::zeros(4, 4);
  biased.visible_bias[0] = 1.0;
  EXPECT_NEAR(rbm_log_marginal(biased, Outcome::parse("+--+")), 1.0 + 4 * std::log(2.0), 1e-14);
}

TEST(RbmLogMarginal, MatchesExhaustiveHiddenSum) {
  for (int draw = 0; draw < 50; ++draw) {
    const int n = 1 + draw % 6;
    const RbmParams p = random_params(n, n, 1.0, 100 + draw);
    const Eigen::VectorXd all = rbm_log_marginals(p);
    for (std::uint32_t si = 0; si < (1U << n); ++si) {
      const double brute = brute_marginal(p, spins_of(si, n));
      EXPECT_NEAR(std::exp(rbm_log_marginal(p, Outcome(si, n))) / brute, 1.0, 1e-9);
      EXPECT_NEAR(std::exp(all[si]) / brute, 1.0, 1e-9);
    }
  }
}

TEST(LogPartition, Examples) {
  EXPECT_NEAR(log_partition(RbmParams::zeros(3, 3)), 6 * std::log(2.0), 1e-13);
  const RbmParams p = random_params(4, 4, 0.8, 7);
  EXPECT_NEAR(log_partition(p), std::log(brute_partition(p)), 1e-9);

  RbmParams factor = RbmParams::zeros(3, 3);
  factor.visible_bias << 0.3, -1.2, 2.0;
  double expected = 3 * std::log(2.0);
  for (int i = 0; i < 3; ++i) expected += std::log(2.0 * std::cosh(factor.visible_bias[i]));
  EXPECT_NEAR(log_partition(factor), expected, 1e-12);

  EXPECT_THROW(log_partition(RbmParams::zeros(13, 13)), std::length_error);
  EXPECT_THROW(log_partition(RbmParams::zeros(5, 5), 4), std::length_error);
}

TEST(Amplitude, ZeroParameters) {
  const NqsState s(RbmParams::zeros(2, 2), RbmParams::zeros(2, 2));
  const Complex expected = 0.5 * std::exp(Complex(0.0, std::log(2.0)));
  for (std::uint32_t i = 0; i < 4; ++i) EXPECT_LT(std::abs(amplitude(s, Outcome(i, 2)) - expected), 1e-14);
  const NqsState one(RbmParams::zeros(1, 1), RbmParams::zeros(1, 1));
  const StateVector v = to_state_vector(one);
  EXPECT_NEAR(overlap(v, StateVector::normalized(Eigen::Vector2cd(1, 1))), 1.0, 1e-14);
}

TEST(Amplitude, MatchesIndependentAssembly) {
  const NqsState s(random_params(4, 4, 0.7, 3), random_params(4, 4, 0.7, 4));
  const double z = brute_partition(s.lambda());
  const Eigen::VectorXcd all = amplitudes(s);
  for (std::uint32_t i = 0; i < 16; ++i) {
    const Eigen::VectorXd sp = spins_of(i, 4);
    const double mod = std::sqrt(brute_marginal(s.lambda(), sp) / z);
    const double phase = 0.5 * std::log(brute_marginal(s.mu(), sp));
    const Complex expected = std::polar(mod, phase);
    EXPECT_LT(std::abs(amplitude(s, Outcome(i, 4)) - expected), 1e-9);
    EXPECT_LT(std::abs(all[i] - expected), 1e-9);
  }
  ASSERT_TRUE(s.cached_log_partition().has_value());
  EXPECT_NEAR(*s.cached_log_partition(), std::log(z), 1e-9);
}

TEST(Amplitude, NormalizedForRandomParameters) {
  for (int n = 1; n <= 10; ++n) {
    const NqsState s = NqsState::random(n, 1.0, 10 + n);
    EXPECT_NEAR(amplitudes(s).squaredNorm(), 1.0, 1e-9);
    EXPECT_NEAR(to_state_vector(s).amplitudes().norm(), 1.0, 1e-9);
  }
}

TEST(NqsState, RandomIsSeededAndBounded) {
  const NqsState a = NqsState::random(3, 0.01, 5);
  const NqsState b = NqsState::random(3, 0.01, 5);
  EXPECT_EQ(a.flatten(), b.flatten());
  EXPECT_NE(a.flatten(), NqsState::random(3, 0.01, 6).flatten());
  EXPECT_LE(a.flatten().cwiseAbs().maxCoeff(), 0.01);
  EXPECT_EQ(a.lambda().n_hidden(), 3);
  EXPECT_EQ(a.with_parameters(a.flatten()).flatten(), a.flatten());
}

TEST(RotatedProbability, Examples) {
  const NqsState s = NqsState::random(3, 0.8, 21);
  for (std::uint32_t i = 0; i < 8; ++i) {
    EXPECT_NEAR(rotated_probability(s, BasisLabel("zzz"), Outcome(i, 3)), std::norm(amplitude(s, Outcome(i, 3))), 1e-12);
  }
  // Zero parameters on one qubit give |+> up to phase.
  const NqsState plus(RbmParams::zeros(1, 1), RbmParams::zeros(1, 1));
  EXPECT_NEAR(rotated_probability(plus, BasisLabel("x"), Outcome::parse("+")), 1.0, 1e-12);
}

TEST(RotatedProbability, MatchesDenseUnitary) {
  for (int n = 1; n <= 5; ++n) {
    const NqsState s = NqsState::random(n, 1.0, 30 + n);
    const Eigen::VectorXcd psi = amplitudes(s);
    for (const BasisLabel& b : generate_basis_set(n, BasisMode::kCompressed, n)) {
      const Eigen::VectorXcd rotated = dense_basis_unitary(b) * psi;
      double total = 0.0;
      for (std::uint32_t o = 0; o < (1U << n); ++o) {
        const double p = rotated_probability(s, b, Outcome(o, n));
        EXPECT_NEAR(p, std::norm(rotated[o]), 1e-9);
        total += p;
      }
      EXPECT_NEAR(total, 1.0, 1e-9);
    }
  }
}

TEST(RotatedProbability, GlobalPhaseInvariance) {
  const NqsState s = NqsState::random(3, 1.0, 41);
  const StateVector v = to_state_vector(s);
  const StateVector w = v.with_global_phase(std::polar(1.0, 1.234));
  const BasisLabel b("xyz");
  const auto pv = projector_probabilities(v, b);
  const auto pw = projector_probabilities(w, b);
  for (std::size_t i = 0; i < pv.size(); ++i) EXPECT_NEAR(pv[i], pw[i], 1e-14);
  const DensityMatrix rho = bell_mixture();
  const NqsState t = NqsState::random(2, 1.0, 42);
  const StateVector u = to_state_vector(t);
  EXPECT_NEAR(pure_fidelity(rho, u), pure_fidelity(rho, u.with_global_phase(Complex(0, 1))), 1e-14);
}

TEST(GibbsConditionals, Examples) {
  const RbmParams zero = RbmParams::zeros(3, 3);
  const Eigen::VectorXd s = spins_of(5, 3);
  for (double p : gibbs_conditional_hidden(zero, s)) EXPECT_DOUBLE_EQ(p, 0.5);
  for (double p : gibbs_conditional_visible(zero, s)) EXPECT_DOUBLE_EQ(p, 0.5);

  RbmParams sat = RbmParams::zeros(2, 2);
  sat.hidden_bias[1] = 50.0;
  sat.visible_bias[0] = 50.0;
  EXPECT_LE(std::abs(gibbs_conditional_hidden(sat, spins_of(0, 2))[1] - 1.0), 1e-20);
  EXPECT_LE(std::abs(gibbs_conditional_visible(sat, spins_of(0, 2))[0] - 1.0), 1e-20);
}

TEST(GibbsConditionals, MatchDirectBoltzmannRatios) {
  const RbmParams p = random_params(3, 4, 1.0, 50);
  auto joint = [&](const Eigen::VectorXd& s, const Eigen::VectorXd& h) {
    return std::exp(s.dot(p.weights * h) + p.visible_bias.dot(s) + p.hidden_bias.dot(h));
  };
  for (std::uint32_t si = 0; si < 8; ++si) {
    const Eigen::VectorXd s = spins_of(si, 3);
    const Eigen::VectorXd cond = gibbs_conditional_hidden(p, s);
    for (int j = 0; j < 4; ++j) {
      double up = 0.0;
      double all = 0.0;
      for (std::uint32_t hi = 0; hi < 16; ++hi) {
        const Eigen::VectorXd h = spins_of(hi, 4);
        const double w = joint(s, h);
        all += w;
        if (h[j] > 0) up += w;
      }
      EXPECT_NEAR(cond[j], up / all, 1e-12);
    }
  }
  for (std::uint32_t hi = 0; hi < 16; ++hi) {
    const Eigen::VectorXd h = spins_of(hi, 4);
    const Eigen::VectorXd cond = gibbs_conditional_visible(p, h);
    for (int i = 0; i < 3; ++i) {
      double up = 0.0;
      double all = 0.0;
      for (std::uint32_t si = 0; si < 8; ++si) {
        const Eigen::VectorXd s = spins_of(si, 3);
        const double w = joint(s, h);
        all += w;
        if (s[i] > 0) up += w;
      }
      EXPECT_NEAR(cond[i], up / all, 1e-12);
    }
  }
}

std::vector<double> histogram(const std::vector<Outcome>& samples, int n) {
  std::vector<double> h(1U << n, 0.0);
  for (const Outcome& o : samples) h[o.index()] += 1.0;
  for (double& x : h) x /= static_cast<double>(samples.size());
  return h;
}

double tv(const std::vector<double>& a, const Eigen::VectorXd& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[static_cast<Eigen::Index>(i)]);
  return 0.5 * d;
}

TEST(GibbsSample, ZeroParametersUniform) {
  const auto samples = gibbs_sample(RbmParams::zeros(3, 3), 100000, 10, 1, 1);
  EXPECT_LE(tv(histogram(samples, 3), Eigen::VectorXd::Constant(8, 0.125)), 0.02);
}

TEST(GibbsSample, BiasedSingleVisible) {
  RbmParams p = RbmParams::zeros(1, 1);
  p.visible_bias[0] = 3.0;
  const auto samples = gibbs_sample(p, 100000, 10, 1, 2);
  const double up = histogram(samples, 1)[0];
  EXPECT_NEAR(up, 1.0 / (1.0 + std::exp(-6.0)), 0.01);
}

TEST(GibbsSample, ConvergesToExactMarginal) {
  const RbmParams p = random_params(4, 4, 0.5, 60);
  const Eigen::VectorXd exact = (rbm_log_marginals(p).array() - log_partition(p)).exp();
  const auto samples = gibbs_sample(p, 1000000, 100, 5, 3);
  EXPECT_LE(tv(histogram(samples, 4), exact), 0.01);
}

TEST(GibbsSample, DeterministicPerSeed) {
  const RbmParams p = random_params(3, 3, 0.5, 61);
  const auto a = gibbs_sample(p, 500, 5, 2, 9);
  const auto b = gibbs_sample(p, 500, 5, 2, 9);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, gibbs_sample(p, 500, 5, 2, 10));
  EXPECT_THROW(gibbs_sample(p, 0, 5, 2, 9), std::invalid_argument);
}

TEST(Checkpoint, RoundTrip) {
  const NqsState s = NqsState::random(3, 0.3, 70);
  const io::Json j = io::Json::parse(io::dump(to_json(s, 70)));
  EXPECT_EQ(j.at("seed").get<std::uint64_t>(), 70U);
  const NqsState back = nqs_from_json(j);
  EXPECT_EQ(back.flatten(), s.flatten());
  io::Json bad = j;
  bad["n"] = 4;
  EXPECT_THROW(nqs_from_json(bad), std::exception);
}

}  // namespace
}  // namespace eigentomo
