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

#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "eigentomo/quantum_core.hpp"

// Unitarily invariant random ensembles used by tests, the oracle suite and
// the synthetic-state generators. Every routine draws from the caller's
// engine, so a fixed seed gives a fixed sequence.
namespace eigentomo::random {

using Engine = std::mt19937_64;

/// Engine seeded from (seed, stream) so independent streams never collide.
Engine make_engine(std::uint64_t seed, std::uint64_t stream = 0);

Eigen::MatrixXcd complex_gaussian(Eigen::Index rows, Eigen::Index cols, Engine& rng);

/// Normalized complex Gaussian vector.
StateVector haar_state(Eigen::Index dim, Engine& rng);

/// Haar unitary from a QR decomposition with the R-diagonal phases removed.
Eigen::MatrixXcd haar_unitary(Eigen::Index dim, Engine& rng);

/// rho = G G^dagger / Tr(G G^dagger) with G a dim x rank complex Gaussian.
DensityMatrix random_density_matrix(Eigen::Index dim, Engine& rng, Eigen::Index rank = -1);

/// (G + G^dagger) / 2 with standard complex Gaussian G.
Eigen::MatrixXcd random_hermitian(Eigen::Index dim, Engine& rng);

/// exp(i * strength * H) with H = random_hermitian(dim) / sqrt(dim).
Eigen::MatrixXcd small_unitary(Eigen::Index dim, double strength, Engine& rng);

/// exp(i * H) for Hermitian H, via its eigendecomposition.
Eigen::MatrixXcd unitary_exp(const Eigen::MatrixXcd& hermitian);

/// Uniform point on the probability simplex with `size` entries.
Eigen::VectorXd simplex_point(Eigen::Index size, Engine& rng);

}  // namespace eigentomo::random
