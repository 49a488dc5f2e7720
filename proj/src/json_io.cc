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

#include "cfc/json_io.h"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace cfc {
namespace {

void write_string(std::ostringstream& out, const std::string& s) {
  // Reuse nlohmann's escaping.
  out << nlohmann::json(s).dump();
}

void write_value(std::ostringstream& out, const nlohmann::json& v, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent >= 0) {
      out << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
    }
  };
  switch (v.type()) {
    case nlohmann::json::value_t::object: {
      if (v.empty()) {
        out << "{}";
        return;
      }
      out << '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out << ',';
        first = false;
        newline(depth + 1);
        write_string(out, it.key());
        out << (indent >= 0 ? ": " : ":");
        write_value(out, it.value(), indent, depth + 1);
      }
      newline(depth);
      out << '}';
      return;
    }
    case nlohmann::json::value_t::array: {
      if (v.empty()) {
        out << "[]";
        return;
      }
      out << '[';
      bool first = true;
      for (const auto& item : v) {
        if (!first) out << ',';
        first = false;
        newline(depth + 1);
        write_value(out, item, indent, depth + 1);
      }
      newline(depth);
      out << ']';
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double d = v.get<double>();
      if (!std::isfinite(d)) {
        out << "null";
      } else {
        out << format_double(d);
      }
      return;
    }
    default:
      out << v.dump();
      return;
  }
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string format_short(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

std::string dump_json(const nlohmann::json& doc, int indent) {
  std::ostringstream out;
  write_value(out, doc, indent, 0);
  return out.str();
}

}  // namespace cfc
