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

#ifndef LUNADTN_CORE_HPP
#define LUNADTN_CORE_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace lunadtn {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input. `line()` is 1-based, 0 when not applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed input that violates a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent or missing configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Lookup of an entity that does not exist.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Tensor or model dimensions that do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Scenario-wide numeric host identifier, contiguous over 0..N-1.
struct NodeId {
  std::uint32_t value = 0;

  constexpr NodeId() = default;
  constexpr explicit NodeId(std::uint32_t v) : value(v) {}

  friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

/// Simulation time in seconds.
using SimTime = double;

/// Bytes.
using ByteCount = std::uint64_t;

struct Position {
  double x = 0.0;  // km
  double y = 0.0;  // km

  friend bool operator==(const Position&, const Position&) = default;
};

double distance(const Position& a, const Position& b);

/// A bundle and the path it has travelled so far.
struct Message {
  std::string id;
  NodeId from;
  NodeId to;
  ByteCount size = 0;
  SimTime creationTime = 0.0;
  std::optional<double> ttl;  // seconds
  std::vector<NodeId> hops;   // starts with `from`
  bool isResponse = false;
  // Creation sequence number, unique within one run.
  std::uint32_t serial = 0;

  std::size_t hop_count() const { return hops.empty() ? 0 : hops.size() - 1; }
};

/// Throws ValidationError unless the hop path and size invariants hold.
void validate_message(const Message& m);

struct StaticMobility {
  Position position;
};

struct TraceMobility {
  std::filesystem::path traceFile;
};

using MobilityBinding = std::variant<StaticMobility, TraceMobility>;

struct GroupSpec {
  char prefix = 'n';
  std::uint32_t count = 1;
  MobilityBinding mobility = StaticMobility{};
  double interfaceRange = 0.0;      // km
  double interfaceBandwidth = 1.0;  // bytes/s
};

void validate_group(const GroupSpec& g);

/// Aggregate message accounting for one run.
struct Counters {
  std::uint64_t created = 0;
  std::uint64_t started = 0;
  std::uint64_t relayed = 0;
  std::uint64_t dropped = 0;
  std::uint64_t delivered = 0;

  friend bool operator==(const Counters&, const Counters&) = default;
};

/// Parses the numeric part of a host name such as "o12" (prefix char + digits).
NodeId node_numeric_id(std::string_view name);

/// Inverse of node_numeric_id.
std::string node_name(char prefix, NodeId id);

/// floor(creationTime / epochDuration).
std::int64_t epoch_of(SimTime creationTime, double epochDuration);

}  // namespace lunadtn

template <>
struct std::hash<lunadtn::NodeId> {
  std::size_t operator()(lunadtn::NodeId id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};

#endif  // LUNADTN_CORE_HPP
