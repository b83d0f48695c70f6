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

#include "eigentomo/random.hpp"

#include <cmath>

#include <Eigen/QR>

namespace eigentomo::random {

Engine make_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Engine(seq);
}

Eigen::MatrixXcd complex_gaussian(Eigen::Index rows, Eigen::Index cols, Engine& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXcd g(rows, cols);
  // Column-major fill order is part of the reproducibility contract.
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = Complex(re, im);
    }
  }
  return g;
}

StateVector haar_state(Eigen::Index dim, Engine& rng) {
  return StateVector::normalized(complex_gaussian(dim, 1, rng).col(0));
}

Eigen::MatrixXcd haar_unitary(Eigen::Index dim, Engine& rng) {
  const Eigen::MatrixXcd g = complex_gaussian(dim, dim, rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(dim, dim);
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double a = std::abs(r(i, i));
    if (a > 0.0) q.col(i) *= r(i, i) / a;
  }
  return q;
}

DensityMatrix random_density_matrix(Eigen::Index dim, Engine& rng, Eigen::Index rank) {
  if (rank <= 0) rank = dim;
  const Eigen::MatrixXcd g = complex_gaussian(dim, rank, rng);
  return DensityMatrix::normalized(g * g.adjoint());
}

Eigen::MatrixXcd random_hermitian(Eigen::Index dim, Engine& rng) {
  const Eigen::MatrixXcd g = complex_gaussian(dim, dim, rng);
  return 0.5 * (g + g.adjoint());
}

Eigen::MatrixXcd unitary_exp(const Eigen::MatrixXcd& hermitian) {
  const HermitianEigen eig = hermitian_eigen(hermitian);
  Eigen::VectorXcd phases(eig.values.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) phases[i] = std::polar(1.0, eig.values[i]);
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

Eigen::MatrixXcd small_unitary(Eigen::Index dim, double strength, Engine& rng) {
  const Eigen::MatrixXcd h = random_hermitian(dim, rng) / std::sqrt(static_cast<double>(dim));
  return unitary_exp(strength * h);
}

Eigen::VectorXd simplex_point(Eigen::Index size, Engine& rng) {
  std::exponential_distribution<double> expo(1.0);
  Eigen::VectorXd x(size);
  for (Eigen::Index i = 0; i < size; ++i) x[i] = expo(rng);
  return x / x.sum();
}

}  // namespace eigentomo::random
