// Copyright 2026 The qcx Authors
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

#include <string>

#include <json.hpp>

#include "qcx/qcore.hpp"

namespace qcx {

using Json = nlohmann::json;

// Complex numbers are [re, im] pairs; matrices are arrays of rows (row-major).
Json to_json(const Vector& v);
Json to_json(const Matrix& m);
Json to_json(const SystemDescriptor& s);
Json to_json(const StateVector& s);
Json to_json(const UnitaryMatrix& u);

Vector vector_from_json(const Json& j);
Matrix matrix_from_json(const Json& j);
SystemDescriptor system_from_json(const Json& j);
StateVector state_from_json(const Json& j);
UnitaryMatrix unitary_from_json(const Json& j);

/// Fixed 17-significant-digit rendering used for every CSV float.
std::string format_real(double x);

}  // namespace qcx
