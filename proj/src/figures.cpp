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


#include "eigentomo/figures.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "eigentomo/json_io.hpp"
#include "eigentomo/random.hpp"
#include "eigentomo/statistics.hpp"

namespace eigentomo::figures {

namespace {

const char* column_name(CostKind kind) {
  switch (kind) {
    case CostKind::kL1: return "L1";
    case CostKind::kL15: return "L15";
    case CostKind::kL2: return "L2";
    case CostKind::kKL1: return "KL1";
    case CostKind::kKL2: return "KL2";
  }
  return "?";
}

}  // namespace

std::string Fig3Data::to_csv() const {
  std::ostringstream out;
  out << "index,perturbation,fidelity,eps_F,p1b,eps_p1b";
  for (CostKind k : kFig3Costs) out << ',' << column_name(k);
  out << '\n';
  for (const auto& r : rows) {
    out << r.index << ',' << io::format_double(r.perturbation) << ',' << io::format_double(r.fidelity) << ','
        << io::format_double(r.eps_fidelity) << ',' << io::format_double(r.p1b) << ','
        << io::format_double(r.eps_p1b);
    for (double c : r.costs) out << ',' << io::format_double(c);
    out << '\n';
  }
  return out.str();
}

std::string Fig3Data::summary_csv() const {
  std::ostringstream out;
  out << "cost,spearman_vs_infidelity\n";
  for (std::size_t k = 0; k < kFig3Costs.size(); ++k) {
    out << column_name(kFig3Costs[k]) << ',' << io::format_double(spearman[k]) << '\n';
  }
  return out.str();
}

double Fig3Data::spearman_of(CostKind kind) const {
  for (std::size_t k = 0; k < kFig3Costs.size(); ++k) {
    if (kFig3Costs[k] == kind) return spearman[k];
  }
  throw std::invalid_argument("spearman_of: cost kind not tabulated");
}

Fig3Data fig3_grid(const DensityMatrix& rho, const MeasurementDataset& data, const Fig3Config& config) {
  if (config.n_perturbations < 1) throw std::invalid_argument("fig3_grid: n_perturbations must be >= 1");
  if (!(config.min_strength > 0.0 && config.max_strength >= config.min_strength)) {
    throw std::invalid_argument("fig3_grid: need 0 < min_strength <= max_strength");
  }
  const Spectrum s = eigendecompose(rho);
  const double p1 = s.eigenvalues[0];
  const StateVector& psi1 = s.eigenvectors[0];
  auto rng = random::make_engine(config.seed, 0xF163);
  std::uniform_real_distribution<double> log_strength(std::log(config.min_strength), std::log(config.max_strength));

  Fig3Data out;
  for (int i = 0; i <= config.n_perturbations; ++i) {
    const double strength = i == 0 ? 0.0 : std::exp(log_strength(rng));
    const StateVector phi = i == 0 ? psi1
                                   : StateVector::normalized(random::small_unitary(rho.dim(), strength, rng) *
                                                             psi1.amplitudes());
    Fig3Row row{};
    row.index = i;
    row.perturbation = strength;
    row.fidelity = i == 0 ? 1.0 : pure_fidelity(rho, phi) / p1;
    row.eps_fidelity = 6000.0 * (1.0 - row.fidelity);
    row.p1b = estimate_dominant_eigenvalue(data, phi, config.floor).value;
    row.eps_p1b = 10.0 * (p1 - row.p1b) / p1;
    for (std::size_t k = 0; k < kFig3Costs.size(); ++k) {
      CostSpec spec;
      spec.kind = kFig3Costs[k];
      spec.orth_weight = 0.0;
      row.costs[k] = cost_value(spec, phi, data);
    }
    out.rows.push_back(row);
  }

  std::vector<double> infidelity;
  for (const auto& r : out.rows) infidelity.push_back(1.0 - r.fidelity);
  for (std::size_t k = 0; k < kFig3Costs.size(); ++k) {
    std::vector<double> c;
    for (const auto& r : out.rows) c.push_back(r.costs[k]);
    out.spearman[k] = stats::spearman(c, infidelity);
  }
  return out;
}

std::string Fig4Data::entropy_csv() const {
  std::ostringstream out;
  out << "basis,entropy_mixed,entropy_pure\n";
  for (const auto& e : entropies) {
    out << e.basis.str() << ',' << io::format_double(e.entropy_mixed) << ',' << io::format_double(e.entropy_pure)
        << '\n';
  }
  return out.str();
}

std::string Fig4Data::probability_csv() const {
  std::ostringstream out;
  out << "basis,outcome,p_mixed,p_pure\n";
  for (const auto& p : probabilities) {
    out << p.basis.str() << ',' << p.outcome.str() << ',' << io::format_double(p.p_mixed) << ','
        << io::format_double(p.p_pure) << '\n';
  }
  return out.str();
}

double Fig4Data::fraction_pure_not_above() const {
  if (entropies.empty()) return 0.0;
  int count = 0;
  for (const auto& e : entropies) count += e.entropy_pure <= e.entropy_mixed ? 1 : 0;
  return static_cast<double>(count) / static_cast<double>(entropies.size());
}

Fig4Data fig4_data(const DensityMatrix& rho, const StateVector& psi, std::span<const BasisLabel> bases) {
  Fig4Data out;
  out.entropies = eigenstate_entropy_profile(rho, psi, bases);
  for (const auto& b : bases) {
    const auto pm = projector_probabilities(rho, b);
    const auto pp = projector_probabilities(psi, b);
    for (std::size_t o = 0; o < pm.size(); ++o) {
      out.probabilities.push_back(
          ProbabilityRow{b, Outcome(static_cast<std::uint32_t>(o), b.n_qubits()), pm[o], pp[o]});
    }
  }
  return out;
}

}  // namespace eigentomo::figures
