// Copyright 2026 The cfc-lab Authors
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

#ifndef CFC_JSON_IO_H_
#define CFC_JSON_IO_H_

#include <ostream>
#include <string>

#include "json.hpp"

namespace cfc {

// Serializes with object keys in sorted order and floats as %.17g.
// Non-finite floats become null.
std::string dump_json(const nlohmann::json& doc, int indent = 2);

// %.17g, or "nan"/"inf" spelled out for CSV use.
std::string format_double(double value);

// %.6g for human tables.
std::string format_short(double value);

}  // namespace cfc

#endif  // CFC_JSON_IO_H_
