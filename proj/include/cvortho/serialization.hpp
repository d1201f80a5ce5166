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

// JSON form shared by states and density matrices:
//   {"dim": N, "data": [[re, im], ...]}
// with N amplitudes for a state and N*N row-major entries for a matrix.

#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>

#include "cvortho/fock.hpp"

namespace cvortho {

nlohmann::json to_json(const StateVector& psi);
nlohmann::json to_json(const DensityMatrix& rho);

/// The truncation tail tolerance is not serialized; the default is used.
StateVector state_from_json(const nlohmann::json& j);
DensityMatrix density_from_json(const nlohmann::json& j);

void write_json_file(const std::filesystem::path& path,
                     const nlohmann::json& j);
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace cvortho
