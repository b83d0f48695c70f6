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

#include <filesystem>
#include <string>

#include <json.hpp>

#include "eigentomo/quantum_core.hpp"

namespace eigentomo::io {

using Json = nlohmann::ordered_json;

/// "%.17g"; non-finite values become "null".
std::string format_double(double x);

/// Compact serialization where every floating-point value is written with
/// 17 significant digits. Key order is insertion order.
std::string dump(const Json& value);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
void write_json_file(const std::filesystem::path& path, const Json& value);

// State files: {"n_qubits", "re", "im"} with 2-D arrays for density
// matrices and 1-D arrays for state vectors. n_qubits is null when the
// dimension is not a power of two; such files cannot be read back.
Json to_json(const DensityMatrix& rho);
Json to_json(const StateVector& psi);
DensityMatrix density_matrix_from_json(const Json& j);
StateVector state_vector_from_json(const Json& j);

}  // namespace eigentomo::io
