// Copyright 2026 The lunadtn Authors
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

#include "lunadtn/core.hpp"

#include <charconv>
#include <cmath>
#include <limits>

namespace lunadtn {

ParseError::ParseError(const std::string& what, std::size_t line)
    : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
      line_(line) {}

double distance(const Position& a, const Position& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

void validate_message(const Message& m) {
  if (m.size == 0) throw ValidationError("message " + m.id + " has zero size");
  if (m.hops.empty() || m.hops.front() != m.from)
    throw ValidationError("message " + m.id + " path must start at its source");
  for (std::size_t i = 1; i < m.hops.size(); ++i) {
    if (m.hops[i] == m.hops[i - 1])
      throw ValidationError("message " + m.id + " repeats a hop consecutively");
  }
}

void validate_group(const GroupSpec& g) {
  std::string name(1, g.prefix);
  if (g.count < 1) throw ValidationError("group " + name + ": count must be >= 1");
  if (!(g.interfaceRange >= 0.0) || !std::isfinite(g.interfaceRange))
    throw ValidationError("group " + name + ": interfaceRange must be >= 0");
  if (!(g.interfaceBandwidth > 0.0) || !std::isfinite(g.interfaceBandwidth))
    throw ValidationError("group " + name + ": interfaceBandwidth must be > 0");
  if (g.prefix >= '0' && g.prefix <= '9')
    throw ValidationError("group prefix must not be a digit");
}

NodeId node_numeric_id(std::string_view name) {
  auto fail = [&] {
    return ParseError("malformed node name '" + std::string(name) + "'");
  };
  if (name.size() < 2) throw fail();
  if (name.front() >= '0' && name.front() <= '9') throw fail();
  std::string_view digits = name.substr(1);
  for (char c : digits) {
    if (c < '0' || c > '9') throw fail();
  }
  std::uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) throw fail();
  return NodeId{value};
}

std::string node_name(char prefix, NodeId id) {
  return std::string(1, prefix) + std::to_string(id.value);
}

std::int64_t epoch_of(SimTime creationTime, double epochDuration) {
  if (!(epochDuration > 0.0)) throw ValidationError("epochDuration must be > 0");
  return static_cast<std::int64_t>(std::floor(creationTime / epochDuration));
}

}  // namespace lunadtn
