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

#include "eigentomo/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace eigentomo::io {

namespace {

void dump_into(const Json& v, std::string& out) {
  switch (v.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += Json(it.key()).dump();
        out += ':';
        dump_into(it.value(), out);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& e : v) {
        if (!first) out += ',';
        first = false;
        dump_into(e, out);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float:
      out += format_double(v.get<double>());
      break;
    default:
      out += v.dump();
  }
}

int checked_qubits(const Json& j, Eigen::Index dim) {
  const int n = j.at("n_qubits").get<int>();
  if (n < 0 || n > 30 || (Eigen::Index{1} << n) != dim) {
    throw std::runtime_error("state file: n_qubits does not match array size");
  }
  return n;
}

}  // namespace

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string dump(const Json& value) {
  std::string out;
  dump_into(value, out);
  return out;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_json_file(const std::filesystem::path& path, const Json& value) {
  write_text_file(path, dump(value) + "\n");
}

Json to_json(const DensityMatrix& rho) {
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index r = 0; r < rho.dim(); ++r) {
    Json row_re = Json::array();
    Json row_im = Json::array();
    for (Eigen::Index c = 0; c < rho.dim(); ++c) {
      row_re.push_back(rho.entries()(r, c).real());
      row_im.push_back(rho.entries()(r, c).imag());
    }
    re.push_back(std::move(row_re));
    im.push_back(std::move(row_im));
  }
  Json j;
  j["n_qubits"] = rho.is_qubit_register() ? Json(rho.n_qubits()) : Json(nullptr);
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j;
}

Json to_json(const StateVector& psi) {
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index i = 0; i < psi.dim(); ++i) {
    re.push_back(psi[i].real());
    im.push_back(psi[i].imag());
  }
  Json j;
  j["n_qubits"] = psi.is_qubit_register() ? Json(psi.n_qubits()) : Json(nullptr);
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j;
}

DensityMatrix density_matrix_from_json(const Json& j) {
  const Json& re = j.at("re");
  const Json& im = j.at("im");
  const auto dim = static_cast<Eigen::Index>(re.size());
  if (!re.is_array() || !im.is_array() || im.size() != re.size()) {
    throw std::runtime_error("state file: re/im must be equally sized arrays");
  }
  checked_qubits(j, dim);
  Eigen::MatrixXcd m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    const Json& rr = re.at(static_cast<std::size_t>(r));
    const Json& ir = im.at(static_cast<std::size_t>(r));
    if (!rr.is_array() || static_cast<Eigen::Index>(rr.size()) != dim ||
        static_cast<Eigen::Index>(ir.size()) != dim) {
      throw std::runtime_error("state file: density matrix rows must be square");
    }
    for (Eigen::Index c = 0; c < dim; ++c) {
      m(r, c) = Complex(rr[static_cast<std::size_t>(c)].get<double>(),
                        ir[static_cast<std::size_t>(c)].get<double>());
    }
  }
  return DensityMatrix(m);
}

StateVector state_vector_from_json(const Json& j) {
  const Json& re = j.at("re");
  const Json& im = j.at("im");
  if (!re.is_array() || !im.is_array() || im.size() != re.size()) {
    throw std::runtime_error("state file: re/im must be equally sized arrays");
  }
  const auto dim = static_cast<Eigen::Index>(re.size());
  checked_qubits(j, dim);
  Eigen::VectorXcd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    v[i] = Complex(re[static_cast<std::size_t>(i)].get<double>(),
                   im[static_cast<std::size_t>(i)].get<double>());
  }
  return StateVector(std::move(v));
}

}  // namespace eigentomo::io
