// Copyright 2026 The cvortho Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cvortho/serialization.hpp"

#include <fstream>

namespace cvortho {
namespace {

nlohmann::json pairs(const cplx* data, Eigen::Index count) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < count; ++i) {
    arr.push_back({data[i].real(), data[i].imag()});
  }
  return arr;
}

int read_dim(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("data")) {
    throw DataError("expected an object with 'dim' and 'data'");
  }
  if (!j["dim"].is_number_integer()) throw DataError("'dim' must be an integer");
  return j["dim"].get<int>();
}

cplx read_pair(const nlohmann::json& p) {
  if (!p.is_array() || p.size() != 2 || !p[0].is_number() ||
      !p[1].is_number()) {
    throw DataError("'data' entries must be [re, im] pairs");
  }
  return {p[0].get<double>(), p[1].get<double>()};
}

}  // namespace

nlohmann::json to_json(const StateVector& psi) {
  return {{"dim", psi.dim()}, {"data", pairs(psi.amps().data(), psi.dim())}};
}

nlohmann::json to_json(const DensityMatrix& rho) {
  const int n = rho.dim();
  nlohmann::json arr = nlohmann::json::array();
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      arr.push_back({rho(r, c).real(), rho(r, c).imag()});
    }
  }
  return {{"dim", n}, {"data", std::move(arr)}};
}

StateVector state_from_json(const nlohmann::json& j) {
  const int dim = read_dim(j);
  const auto& data = j["data"];
  if (!data.is_array() || static_cast<int>(data.size()) != dim) {
    throw DataError("state 'data' must hold exactly dim pairs");
  }
  Eigen::VectorXcd amps(dim);
  for (int i = 0; i < dim; ++i) amps(i) = read_pair(data[i]);
  return {std::move(amps), Truncation(dim)};
}

DensityMatrix density_from_json(const nlohmann::json& j) {
  const int dim = read_dim(j);
  const auto& data = j["data"];
  if (!data.is_array() || data.size() != std::size_t(dim) * dim) {
    throw DataError("density 'data' must hold dim*dim pairs");
  }
  Eigen::MatrixXcd m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) m(r, c) = read_pair(data[r * dim + c]);
  }
  return {std::move(m), Truncation(dim)};
}

void write_json_file(const std::filesystem::path& path,
                     const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace cvortho
