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

#include "eigentomo/quantum_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

namespace eigentomo {

namespace {

// Relative threshold below which an eigenvalue is treated as outside the
// support when forming a matrix square root. Eigensolver noise on unit-trace
// matrices is O(dim * eps) ~ 1e-15.
constexpr double kSupportThreshold = 1e-13;

std::string format_error(const char* what, double value) {
  std::ostringstream os;
  os << what << " (got " << value << ")";
  return os.str();
}

void require_same_dim(Eigen::Index a, Eigen::Index b, const char* op) {
  if (a != b) {
    std::ostringstream os;
    os << op << ": dimension mismatch " << a << " vs " << b;
    throw DimensionError(os.str());
  }
}

// Orders two phase-fixed vectors lexicographically over (re, im) pairs.
bool lexicographic_less(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
    if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
  }
  return false;
}

void fix_phase(Eigen::Ref<Eigen::VectorXcd> v) {
  Eigen::Index best = 0;
  double best_abs = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    // Near-ties resolve to the earliest index so the choice is stable.
    const double a = std::abs(v[i]);
    if (a > best_abs + 1e-14) {
      best_abs = a;
      best = i;
    }
  }
  if (best_abs <= 0.0) return;
  const Complex phase = std::conj(v[best]) / best_abs;
  v *= phase;
  v[best] = Complex(best_abs, 0.0);
}

struct SqrtFactor {
  Eigen::MatrixXcd basis;   // dim x rank, orthonormal columns spanning the support
  Eigen::VectorXd roots;    // square roots of the retained eigenvalues
};

SqrtFactor sqrt_factor(const HermitianEigen& eig) {
  const double top = std::max(eig.values.size() > 0 ? eig.values[0] : 0.0, 1.0);
  Eigen::Index rank = 0;
  while (rank < eig.values.size() && eig.values[rank] > kSupportThreshold * top) ++rank;
  SqrtFactor f;
  f.basis = eig.vectors.leftCols(rank);
  f.roots = eig.values.head(rank).cwiseSqrt();
  return f;
}

void require_psd_for_sqrt(const HermitianEigen& eig, const char* which) {
  if (eig.values.size() > 0 && eig.values[eig.values.size() - 1] < -tolerance::kSqrtClamp) {
    throw InvalidStateError(
        format_error((std::string("fidelity: ") + which + " has a negative eigenvalue").c_str(),
                     eig.values[eig.values.size() - 1]));
  }
}

}  // namespace

int qubits_for_dimension(Eigen::Index dim) {
  if (dim <= 0) return -1;
  int n = 0;
  Eigen::Index d = 1;
  while (d < dim) {
    d <<= 1;
    ++n;
  }
  return d == dim ? n : -1;
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(Eigen::VectorXcd amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw InvalidStateError("StateVector: empty amplitude vector");
  if (!amplitudes_.allFinite()) throw InvalidStateError("StateVector: non-finite amplitude");
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > tolerance::kNorm) {
    throw InvalidStateError(format_error("StateVector: norm differs from 1", norm));
  }
}

StateVector StateVector::normalized(Eigen::VectorXcd amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw InvalidStateError("StateVector::normalized: zero or non-finite vector");
  }
  amplitudes /= norm;
  return StateVector(std::move(amplitudes));
}

StateVector StateVector::basis_state(Eigen::Index dim, Eigen::Index index) {
  if (index < 0 || index >= dim) throw std::out_of_range("StateVector::basis_state: index out of range");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  v[index] = 1.0;
  return StateVector(std::move(v));
}

int StateVector::n_qubits() const {
  const int n = qubits_for_dimension(dim());
  if (n < 0) throw std::logic_error("StateVector: dimension is not a power of two");
  return n;
}

Eigen::MatrixXcd StateVector::projector() const { return amplitudes_ * amplitudes_.adjoint(); }

StateVector StateVector::with_global_phase(Complex phase) const {
  return StateVector::normalized(amplitudes_ * phase);
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(const Eigen::MatrixXcd& entries) {
  if (entries.rows() == 0 || entries.rows() != entries.cols()) {
    throw InvalidStateError("DensityMatrix: matrix must be square and non-empty");
  }
  if (!entries.allFinite()) throw InvalidStateError("DensityMatrix: non-finite entry");
  const double herm = hermiticity_error(entries);
  if (herm > tolerance::kHermitian) {
    throw InvalidStateError(format_error("DensityMatrix: not Hermitian", herm));
  }
  entries_ = 0.5 * (entries + entries.adjoint());
  const double trace = entries_.trace().real();
  if (std::abs(trace - 1.0) > tolerance::kTrace) {
    throw InvalidStateError(format_error("DensityMatrix: trace differs from 1", trace));
  }
  const Eigen::VectorXd eig = hermitian_eigenvalues(entries_);
  if (eig.minCoeff() < -tolerance::kPsdFloor) {
    throw InvalidStateError(format_error("DensityMatrix: negative eigenvalue", eig.minCoeff()));
  }
}

DensityMatrix DensityMatrix::normalized(const Eigen::MatrixXcd& entries) {
  Eigen::MatrixXcd h = 0.5 * (entries + entries.adjoint());
  const double trace = h.trace().real();
  if (!(std::abs(trace) > 0.0)) throw InvalidStateError("DensityMatrix::normalized: zero trace");
  return DensityMatrix(h / trace);
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) { return DensityMatrix(psi.projector()); }

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index dim) {
  return DensityMatrix(Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::mixture(std::span<const double> weights,
                                     std::span<const StateVector> states) {
  if (weights.size() != states.size() || states.empty()) {
    throw std::invalid_argument("DensityMatrix::mixture: weights and states must align");
  }
  const Eigen::Index dim = states.front().dim();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t i = 0; i < states.size(); ++i) {
    require_same_dim(dim, states[i].dim(), "DensityMatrix::mixture");
    if (weights[i] < 0.0) throw InvalidStateError("DensityMatrix::mixture: negative weight");
    m.noalias() += weights[i] * states[i].projector();
  }
  return DensityMatrix(m);
}

int DensityMatrix::n_qubits() const {
  const int n = qubits_for_dimension(dim());
  if (n < 0) throw std::logic_error("DensityMatrix: dimension is not a power of two");
  return n;
}

// ---------------------------------------------------------------------------
// Spectrum

double Spectrum::kappa(int r) const {
  if (r < 1 || r > eigenvalues.size()) throw std::out_of_range("Spectrum::kappa: rank out of range");
  return eigenvalues.head(r).sum();
}

Eigen::MatrixXcd Spectrum::reassemble() const {
  const Eigen::Index dim = eigenvalues.size();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    m.noalias() += eigenvalues[i] * eigenvectors[static_cast<std::size_t>(i)].projector();
  }
  return m;
}

// ---------------------------------------------------------------------------
// Linear algebra

double hermiticity_error(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& hermitian) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("hermitian_eigenvalues: solver failed");
  return solver.eigenvalues().reverse();
}

HermitianEigen hermitian_eigen(const Eigen::MatrixXcd& hermitian) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian);
  if (solver.info() != Eigen::Success) throw std::runtime_error("hermitian_eigen: solver failed");
  const Eigen::Index dim = hermitian.rows();

  HermitianEigen out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  for (Eigen::Index c = 0; c < dim; ++c) fix_phase(out.vectors.col(c));

  // Degenerate clusters: order members lexicographically.
  Eigen::Index start = 0;
  while (start < dim) {
    Eigen::Index end = start + 1;
    while (end < dim && out.values[end - 1] - out.values[end] < tolerance::kDegenerateGap) ++end;
    if (end - start > 1) {
      std::vector<Eigen::Index> order(static_cast<std::size_t>(end - start));
      std::iota(order.begin(), order.end(), start);
      std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return lexicographic_less(out.vectors.col(a), out.vectors.col(b));
      });
      const Eigen::MatrixXcd block = out.vectors.middleCols(start, end - start);
      const Eigen::VectorXd vals = out.values.segment(start, end - start);
      for (std::size_t k = 0; k < order.size(); ++k) {
        out.vectors.col(start + static_cast<Eigen::Index>(k)) = block.col(order[k] - start);
        out.values[start + static_cast<Eigen::Index>(k)] = vals[order[k] - start];
      }
    }
    start = end;
  }
  return out;
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho.dim(), sigma.dim(), "fidelity");
  const HermitianEigen eig_rho = hermitian_eigen(rho.entries());
  const HermitianEigen eig_sigma = hermitian_eigen(sigma.entries());
  require_psd_for_sqrt(eig_rho, "rho");
  require_psd_for_sqrt(eig_sigma, "sigma");

  // F is symmetric, so take the square root of whichever operand has the
  // smaller numerical support and restrict the inner matrix to that support.
  // This keeps pure and low-rank arguments exact instead of picking up
  // sqrt(eps) contributions from round-off eigenvalues.
  const SqrtFactor fr = sqrt_factor(eig_rho);
  const SqrtFactor fs = sqrt_factor(eig_sigma);
  const bool use_rho = fr.roots.size() < fs.roots.size();
  const SqrtFactor& root = use_rho ? fr : fs;
  const Eigen::MatrixXcd& other = use_rho ? sigma.entries() : rho.entries();

  const Eigen::MatrixXcd inner_raw = root.basis.adjoint() * other * root.basis;
  const Eigen::MatrixXcd inner =
      root.roots.asDiagonal() * inner_raw * root.roots.asDiagonal();
  const Eigen::VectorXd m = hermitian_eigenvalues(0.5 * (inner + inner.adjoint()));
  double trace_sqrt = 0.0;
  for (Eigen::Index i = 0; i < m.size(); ++i) trace_sqrt += std::sqrt(std::max(m[i], 0.0));
  return std::clamp(trace_sqrt * trace_sqrt, 0.0, 1.0);
}

double pure_fidelity(const DensityMatrix& rho, const StateVector& psi) {
  require_same_dim(rho.dim(), psi.dim(), "pure_fidelity");
  const Complex v = psi.amplitudes().dot(rho.entries() * psi.amplitudes());
  return std::clamp(v.real(), 0.0, 1.0);
}

double overlap(const StateVector& a, const StateVector& b) {
  require_same_dim(a.dim(), b.dim(), "overlap");
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

double trace_distance(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma) {
  require_same_dim(rho.rows(), sigma.rows(), "trace_distance");
  require_same_dim(rho.cols(), sigma.cols(), "trace_distance");
  const Eigen::MatrixXcd diff = rho - sigma;
  const Eigen::VectorXd eig = hermitian_eigenvalues(0.5 * (diff + diff.adjoint()));
  return 0.5 * eig.cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return trace_distance(rho.entries(), sigma.entries());
}

Spectrum eigendecompose(const DensityMatrix& rho) {
  const HermitianEigen eig = hermitian_eigen(rho.entries());
  Spectrum s;
  s.eigenvalues = eig.values;
  s.eigenvectors.reserve(static_cast<std::size_t>(eig.values.size()));
  for (Eigen::Index c = 0; c < eig.vectors.cols(); ++c) {
    s.eigenvectors.push_back(StateVector::normalized(eig.vectors.col(c)));
  }
  return s;
}

DensityMatrix optimal_rank_r(const DensityMatrix& rho, int r) {
  if (r < 1 || r > rho.dim()) throw std::out_of_range("optimal_rank_r: rank out of range");
  const Spectrum s = eigendecompose(rho);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(rho.dim(), rho.dim());
  double kappa = 0.0;
  for (int i = 0; i < r; ++i) {
    const double p = std::max(s.eigenvalues[i], 0.0);
    kappa += p;
    m.noalias() += p * s.eigenvectors[static_cast<std::size_t>(i)].projector();
  }
  return DensityMatrix(m / kappa);
}

}  // namespace eigentomo
