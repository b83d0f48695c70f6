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

#include "eigentomo/measurement.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "eigentomo/json_io.hpp"
#include "eigentomo/random.hpp"

namespace eigentomo {

namespace {

constexpr int kMaxBasisQubits = 16;

std::uint64_t pow3(int n) {
  std::uint64_t v = 1;
  for (int i = 0; i < n; ++i) v *= 3;
  return v;
}

BasisLabel label_from_index(std::uint64_t index, int n_qubits) {
  static constexpr char kAxes[3] = {'x', 'y', 'z'};
  std::string s(static_cast<std::size_t>(n_qubits), 'z');
  for (int q = n_qubits - 1; q >= 0; --q) {
    s[static_cast<std::size_t>(q)] = kAxes[index % 3];
    index /= 3;
  }
  return BasisLabel(std::move(s));
}

void require_qubits(int expected, int actual, const char* op) {
  if (expected != actual) {
    std::ostringstream os;
    os << op << ": qubit count mismatch " << expected << " vs " << actual;
    throw DimensionError(os.str());
  }
}

const char* mode_name(DatasetMode m) { return m == DatasetMode::kExact ? "exact" : "sampled"; }

}  // namespace

Eigen::Matrix2cd local_rotation(char axis) {
  const double h = 1.0 / std::numbers::sqrt2;
  const Complex i(0.0, 1.0);
  Eigen::Matrix2cd u;
  switch (axis) {
    case 'z':
      u << 1.0, 0.0, 0.0, 1.0;
      break;
    case 'x':
      u << h, h, h, -h;
      break;
    case 'y':
      u << h, -i * h, h, i * h;
      break;
    default:
      throw std::invalid_argument(std::string("local_rotation: invalid axis '") + axis + "'");
  }
  return u;
}

// ---------------------------------------------------------------------------
// BasisLabel / Outcome

BasisLabel::BasisLabel(std::string axes) : axes_(std::move(axes)) {
  if (axes_.empty()) throw std::invalid_argument("BasisLabel: empty label");
  for (char c : axes_) {
    if (c != 'x' && c != 'y' && c != 'z') {
      throw std::invalid_argument("BasisLabel: invalid axis in '" + axes_ + "'");
    }
  }
}

BasisLabel BasisLabel::all_z(int n_qubits) {
  return BasisLabel(std::string(static_cast<std::size_t>(n_qubits), 'z'));
}

bool BasisLabel::is_all_z() const {
  return std::all_of(axes_.begin(), axes_.end(), [](char c) { return c == 'z'; });
}

Outcome::Outcome(std::uint32_t index, int n_qubits) : index_(index), n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > 31) throw std::invalid_argument("Outcome: unsupported qubit count");
  if (index >> n_qubits) throw std::out_of_range("Outcome: index exceeds 2^n");
}

Outcome Outcome::parse(std::string_view signs) {
  std::uint32_t index = 0;
  for (char c : signs) {
    index <<= 1;
    if (c == '-') {
      index |= 1U;
    } else if (c != '+') {
      throw std::invalid_argument("Outcome: expected '+' or '-' in '" + std::string(signs) + "'");
    }
  }
  return Outcome(index, static_cast<int>(signs.size()));
}

Outcome Outcome::from_spins(std::span<const int> spins) {
  std::string s;
  for (int v : spins) s += v > 0 ? '+' : '-';
  return parse(s);
}

int Outcome::spin(int qubit) const { return spin_of(index_, qubit, n_qubits_); }

Eigen::VectorXd Outcome::spins() const {
  Eigen::VectorXd s(n_qubits_);
  for (int q = 0; q < n_qubits_; ++q) s[q] = spin(q);
  return s;
}

std::string Outcome::str() const {
  std::string s(static_cast<std::size_t>(n_qubits_), '+');
  for (int q = 0; q < n_qubits_; ++q) {
    if (spin(q) < 0) s[static_cast<std::size_t>(q)] = '-';
  }
  return s;
}

// ---------------------------------------------------------------------------
// Rotations

void rotate_vector_in_place(Eigen::Ref<Eigen::VectorXcd> v, const BasisLabel& basis, bool adjoint) {
  const int n = basis.n_qubits();
  if (v.size() != (Eigen::Index{1} << n)) throw DimensionError("rotate_vector: size is not 2^n");
  for (int q = 0; q < n; ++q) {
    const char axis = basis.axis(q);
    if (axis == 'z') continue;
    Eigen::Matrix2cd u = local_rotation(axis);
    if (adjoint) u.adjointInPlace();
    const Eigen::Index stride = Eigen::Index{1} << (n - 1 - q);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (i & stride) continue;
      const Complex a0 = v[i];
      const Complex a1 = v[i | stride];
      v[i] = u(0, 0) * a0 + u(0, 1) * a1;
      v[i | stride] = u(1, 0) * a0 + u(1, 1) * a1;
    }
  }
}

Eigen::VectorXcd rotate_vector(const Eigen::VectorXcd& v, const BasisLabel& basis, bool adjoint) {
  Eigen::VectorXcd out = v;
  rotate_vector_in_place(out, basis, adjoint);
  return out;
}

Eigen::MatrixXcd rotate_density(const Eigen::MatrixXcd& rho, const BasisLabel& basis) {
  Eigen::MatrixXcd a = rho;
  for (Eigen::Index c = 0; c < a.cols(); ++c) rotate_vector_in_place(a.col(c), basis);
  Eigen::MatrixXcd b = a.adjoint();
  for (Eigen::Index c = 0; c < b.cols(); ++c) rotate_vector_in_place(b.col(c), basis);
  return b.adjoint();
}

Eigen::MatrixXcd dense_basis_unitary(const BasisLabel& basis) {
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(1, 1);
  for (int q = 0; q < basis.n_qubits(); ++q) {
    const Eigen::Matrix2cd l = local_rotation(basis.axis(q));
    Eigen::MatrixXcd next(u.rows() * 2, u.cols() * 2);
    for (Eigen::Index r = 0; r < u.rows(); ++r) {
      for (Eigen::Index c = 0; c < u.cols(); ++c) next.block(2 * r, 2 * c, 2, 2) = u(r, c) * l;
    }
    u = std::move(next);
  }
  return u;
}

std::vector<double> projector_probabilities(const DensityMatrix& rho, const BasisLabel& basis) {
  require_qubits(rho.n_qubits(), basis.n_qubits(), "projector_probabilities");
  const Eigen::MatrixXcd rotated = rotate_density(rho.entries(), basis);
  std::vector<double> p(static_cast<std::size_t>(rho.dim()));
  for (Eigen::Index i = 0; i < rho.dim(); ++i) p[static_cast<std::size_t>(i)] = std::max(rotated(i, i).real(), 0.0);
  return p;
}

std::vector<double> projector_probabilities(const StateVector& psi, const BasisLabel& basis) {
  require_qubits(psi.n_qubits(), basis.n_qubits(), "projector_probabilities");
  const Eigen::VectorXcd rotated = rotate_vector(psi.amplitudes(), basis);
  std::vector<double> p(static_cast<std::size_t>(psi.dim()));
  for (Eigen::Index i = 0; i < psi.dim(); ++i) p[static_cast<std::size_t>(i)] = std::norm(rotated[i]);
  return p;
}

// ---------------------------------------------------------------------------
// Basis sets

std::size_t compressed_basis_count(int n_qubits) {
  const double target = 3.0 * n_qubits * std::pow(1.5, n_qubits);
  const auto rounded = static_cast<std::uint64_t>(std::llround(target));
  return static_cast<std::size_t>(std::min(pow3(n_qubits), rounded));
}

std::vector<BasisLabel> generate_basis_set(int n_qubits, BasisMode mode, std::uint64_t seed) {
  if (n_qubits < 1 || n_qubits > kMaxBasisQubits) {
    throw std::invalid_argument("generate_basis_set: n_qubits must be in [1, 16]");
  }
  const std::uint64_t total = pow3(n_qubits);
  std::vector<BasisLabel> out;
  if (mode == BasisMode::kFull) {
    out.reserve(total);
    for (std::uint64_t i = 0; i < total; ++i) out.push_back(label_from_index(i, n_qubits));
    return out;
  }
  const std::size_t count = compressed_basis_count(n_qubits);
  // The all-z label is the largest index; draw the rest from [0, total - 1).
  std::vector<std::uint64_t> pool(total - 1);
  std::iota(pool.begin(), pool.end(), std::uint64_t{0});
  std::vector<std::uint64_t> chosen;
  chosen.reserve(count);
  auto rng = random::make_engine(seed, 0xBA5E5);
  std::sample(pool.begin(), pool.end(), std::back_inserter(chosen), count - 1, rng);
  chosen.push_back(total - 1);
  std::sort(chosen.begin(), chosen.end());
  out.reserve(count);
  for (std::uint64_t i : chosen) out.push_back(label_from_index(i, n_qubits));
  return out;
}

// ---------------------------------------------------------------------------
// MeasurementDataset

MeasurementDataset::MeasurementDataset(int n_qubits, std::vector<MeasurementRecord> records,
                                       DatasetMode mode, std::optional<std::uint64_t> seed,
                                       double sum_tolerance)
    : n_qubits_(n_qubits), records_(std::move(records)), mode_(mode), seed_(seed) {
  if (n_qubits < 1) throw std::invalid_argument("MeasurementDataset: n_qubits must be positive");
  std::stable_sort(records_.begin(), records_.end(), [](const auto& a, const auto& b) {
    if (a.basis != b.basis) return a.basis < b.basis;
    return a.outcome.index() < b.outcome.index();
  });
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    require_qubits(n_qubits, r.basis.n_qubits(), "MeasurementDataset");
    require_qubits(n_qubits, r.outcome.n_qubits(), "MeasurementDataset");
    if (!(r.probability >= 0.0) || !std::isfinite(r.probability)) {
      throw std::invalid_argument("MeasurementDataset: negative or non-finite probability for " +
                                  r.basis.str() + "/" + r.outcome.str());
    }
    if (i > 0 && records_[i - 1].basis == r.basis && records_[i - 1].outcome == r.outcome) {
      throw std::invalid_argument("MeasurementDataset: duplicate record " + r.basis.str() + "/" +
                                  r.outcome.str());
    }
    if (groups_.empty() || groups_.back().basis != r.basis) {
      groups_.push_back(BasisGroup{r.basis, i, i + 1});
    } else {
      groups_.back().end = i + 1;
    }
  }
  for (const auto& g : groups_) {
    double sum = 0.0;
    for (std::size_t i = g.begin; i < g.end; ++i) sum += records_[i].probability;
    if (std::abs(sum - 1.0) > sum_tolerance) {
      std::ostringstream os;
      os << "MeasurementDataset: probabilities of basis " << g.basis.str() << " sum to " << sum;
      throw std::invalid_argument(os.str());
    }
  }
}

bool MeasurementDataset::has_shots() const {
  return !records_.empty() &&
         std::all_of(records_.begin(), records_.end(), [](const auto& r) { return r.shots.has_value(); });
}

std::vector<BasisLabel> MeasurementDataset::bases() const {
  std::vector<BasisLabel> out;
  out.reserve(groups_.size());
  for (const auto& g : groups_) out.push_back(g.basis);
  return out;
}

MeasurementDataset exact_dataset(const DensityMatrix& rho, std::span<const BasisLabel> bases) {
  const int n = rho.n_qubits();
  std::vector<MeasurementRecord> records;
  records.reserve(bases.size() * static_cast<std::size_t>(rho.dim()));
  for (const auto& b : bases) {
    const std::vector<double> p = projector_probabilities(rho, b);
    for (std::size_t o = 0; o < p.size(); ++o) {
      records.push_back({b, Outcome(static_cast<std::uint32_t>(o), n), p[o], std::nullopt});
    }
  }
  return MeasurementDataset(n, std::move(records), DatasetMode::kExact);
}

MeasurementDataset sample_dataset(const DensityMatrix& rho, std::span<const BasisLabel> bases,
                                  std::int64_t shots_per_basis, std::uint64_t seed) {
  if (shots_per_basis < 1) throw std::invalid_argument("sample_dataset: shots_per_basis must be >= 1");
  const int n = rho.n_qubits();
  std::vector<MeasurementRecord> records;
  records.reserve(bases.size() * static_cast<std::size_t>(rho.dim()));
  for (const auto& b : bases) {
    const std::vector<double> p = projector_probabilities(rho, b);
    // Stream keyed by the label so the result does not depend on basis order.
    std::uint64_t key = 0;
    for (char c : b.str()) key = key * 4 + static_cast<std::uint64_t>(c - 'x' + 1);
    auto rng = random::make_engine(seed, key);
    std::int64_t remaining = shots_per_basis;
    double mass = 1.0;
    for (std::size_t o = 0; o < p.size(); ++o) {
      std::int64_t count = 0;
      if (o + 1 == p.size()) {
        count = remaining;
      } else if (remaining > 0 && mass > 0.0) {
        const double q = std::clamp(p[o] / mass, 0.0, 1.0);
        std::binomial_distribution<std::int64_t> binom(remaining, q);
        count = binom(rng);
      }
      remaining -= count;
      mass -= p[o];
      records.push_back({b, Outcome(static_cast<std::uint32_t>(o), n),
                         static_cast<double>(count) / static_cast<double>(shots_per_basis), count});
    }
  }
  return MeasurementDataset(n, std::move(records), DatasetMode::kSampled, seed);
}

std::vector<double> predicted_probabilities(const StateVector& psi, const MeasurementDataset& data) {
  require_qubits(data.n_qubits(), psi.n_qubits(), "predicted_probabilities");
  std::vector<double> q(data.size());
  Eigen::VectorXcd rotated;
  for (const auto& g : data.groups()) {
    rotated = rotate_vector(psi.amplitudes(), g.basis);
    for (std::size_t i = g.begin; i < g.end; ++i) q[i] = std::norm(rotated[data.records()[i].outcome.index()]);
  }
  return q;
}

// ---------------------------------------------------------------------------
// Dataset files

void write_dataset(std::ostream& out, const MeasurementDataset& data) {
  out << "{\"n_qubits\":" << data.n_qubits() << ",\"mode\":\"" << mode_name(data.mode())
      << "\",\"seed\":";
  if (data.seed()) {
    out << *data.seed();
  } else {
    out << "null";
  }
  out << "}\n";
  for (const auto& r : data.records()) {
    out << "{\"basis\":\"" << r.basis.str() << "\",\"outcome\":\"" << r.outcome.str()
        << "\",\"p\":" << io::format_double(r.probability) << ",\"shots\":";
    if (r.shots) {
      out << *r.shots;
    } else {
      out << "null";
    }
    out << "}\n";
  }
}

MeasurementDataset read_dataset(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_line()) throw std::runtime_error("dataset: missing header line");
  int n_qubits = 0;
  DatasetMode mode = DatasetMode::kExact;
  std::optional<std::uint64_t> seed;
  std::vector<MeasurementRecord> records;
  try {
    const auto header = io::Json::parse(line);
    n_qubits = header.at("n_qubits").get<int>();
    const auto m = header.at("mode").get<std::string>();
    if (m == "sampled") {
      mode = DatasetMode::kSampled;
    } else if (m != "exact") {
      throw std::runtime_error("unknown mode '" + m + "'");
    }
    if (header.contains("seed") && !header.at("seed").is_null()) seed = header.at("seed").get<std::uint64_t>();
    while (next_line()) {
      const auto j = io::Json::parse(line);
      std::optional<std::int64_t> shots;
      if (j.contains("shots") && !j.at("shots").is_null()) shots = j.at("shots").get<std::int64_t>();
      records.push_back({BasisLabel(j.at("basis").get<std::string>()),
                         Outcome::parse(j.at("outcome").get<std::string>()), j.at("p").get<double>(),
                         shots});
    }
  } catch (const std::exception& e) {
    throw std::runtime_error("dataset line " + std::to_string(line_no) + ": " + e.what());
  }
  return MeasurementDataset(n_qubits, std::move(records), mode, seed);
}

void write_dataset_file(const std::string& path, const MeasurementDataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_dataset(out, data);
}

MeasurementDataset read_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_dataset(in);
}

// ---------------------------------------------------------------------------
// Synthetic states

StateVector w_state(int n_qubits) {
  if (n_qubits < 1) throw std::invalid_argument("w_state: n_qubits must be positive");
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  for (int q = 0; q < n_qubits; ++q) v[Eigen::Index{1} << (n_qubits - 1 - q)] = 1.0;
  return StateVector::normalized(std::move(v));
}

std::vector<StateVector> bell_states() {
  const double h = 1.0 / std::numbers::sqrt2;
  auto make = [h](int a, int b, double sign) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
    v[a] = h;
    v[b] = sign * h;
    return StateVector::normalized(std::move(v));
  };
  return {make(0, 3, 1.0), make(0, 3, -1.0), make(1, 2, 1.0), make(1, 2, -1.0)};
}

DensityMatrix bell_mixture() {
  const std::vector<double> w = {0.9, 0.09, 0.009, 0.001};
  return DensityMatrix::mixture(w, bell_states());
}

DensityMatrix make_w_mixture(int n_qubits, std::span<const double> spectrum, std::uint64_t seed,
                             double perturbation) {
  if (n_qubits < 1 || n_qubits > 12) throw std::invalid_argument("make_w_mixture: n_qubits must be in [1, 12]");
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  const auto k = static_cast<Eigen::Index>(spectrum.size());
  if (k == 0 || k > dim) throw std::invalid_argument("make_w_mixture: spectrum length must be in [1, 2^n]");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    const double p = spectrum[static_cast<std::size_t>(i)];
    if (!(p >= 0.0)) throw std::invalid_argument("make_w_mixture: negative spectrum entry");
    if (i > 0 && p > spectrum[static_cast<std::size_t>(i - 1)]) {
      throw std::invalid_argument("make_w_mixture: spectrum must be non-increasing");
    }
    sum += p;
  }
  if (sum > 1.0 + 1e-12) throw std::invalid_argument("make_w_mixture: spectrum sums above 1");
  const double rest = k < dim ? std::max(1.0 - sum, 0.0) / static_cast<double>(dim - k) : 0.0;
  if (k < dim && rest > spectrum.back() + 1e-12) {
    throw std::invalid_argument("make_w_mixture: remainder would exceed the last requested eigenvalue");
  }
  if (k == dim && std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("make_w_mixture: full spectrum must sum to 1");
  }

  Eigen::MatrixXcd basis = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::Index col = 0;
  basis.col(col++) = w_state(n_qubits).amplitudes();
  basis(0, col++) = 1.0;
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n_qubits));
  for (int f = 1; f < n_qubits; ++f) {
    for (int q = 0; q < n_qubits; ++q) {
      const double angle = 2.0 * std::numbers::pi * f * q / n_qubits;
      basis(Eigen::Index{1} << (n_qubits - 1 - q), col) = std::polar(inv_sqrt_n, angle);
    }
    ++col;
  }
  for (Eigen::Index idx = 1; idx < dim; ++idx) {
    if (std::popcount(static_cast<std::uint64_t>(idx)) >= 2) basis(idx, col++) = 1.0;
  }

  if (perturbation != 0.0) {
    auto rng = random::make_engine(seed, 0x57A7E);
    basis = random::small_unitary(dim, perturbation, rng) * basis;
  }
  Eigen::VectorXd weights = Eigen::VectorXd::Constant(dim, rest);
  for (Eigen::Index i = 0; i < k; ++i) weights[i] = spectrum[static_cast<std::size_t>(i)];
  if (k == dim) weights /= weights.sum();
  const Eigen::MatrixXcd rho = basis * weights.asDiagonal() * basis.adjoint();
  return DensityMatrix::normalized(rho);
}

}  // namespace eigentomo
