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

#ifndef LUNADTN_MOBILITY_HPP
#define LUNADTN_MOBILITY_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lunadtn/core.hpp"

namespace lunadtn {

struct Waypoint {
  SimTime time = 0.0;
  NodeId node;
  Position position;

  friend bool operator==(const Waypoint&, const Waypoint&) = default;
};

struct TraceHeader {
  double minTime = 0.0;
  double maxTime = 0.0;
  double minX = 0.0;
  double maxX = 0.0;
  double minY = 0.0;
  double maxY = 0.0;

  friend bool operator==(const TraceHeader&, const TraceHeader&) = default;
};

/// An immutable, validated set of waypoints sorted by (time, node).
class Trace {
 public:
  Trace() = default;

  /// Validates the invariants and throws ValidationError on violation.
  Trace(TraceHeader header, std::vector<Waypoint> waypoints);

  const TraceHeader& header() const { return header_; }
  const std::vector<Waypoint>& waypoints() const { return waypoints_; }

  bool has_node(NodeId node) const { return tracks_.contains(node); }
  std::vector<NodeId> nodes() const;

  /// The node's waypoints in time order; throws LookupError if absent.
  std::span<const Waypoint> track(NodeId node) const;

 private:
  TraceHeader header_;
  std::vector<Waypoint> waypoints_;
  std::map<NodeId, std::vector<Waypoint>> tracks_;
};

Trace parse_trace(std::string_view text);
Trace load_trace(const std::filesystem::path& file);
std::string format_trace(const Trace& trace);
void save_trace(const Trace& trace, const std::filesystem::path& file);

/// Linear interpolation inside a node's track, clamp-and-hold outside it.
Position position_at(const Trace& trace, NodeId node, SimTime t);
Position position_at(std::span<const Waypoint> track, SimTime t);

struct RawRecord {
  double time = 0.0;
  std::uint64_t id = 0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct ConversionParams {
  // Defaults to the earliest record time when unset.
  std::optional<double> datasetStartTime;
  double epochDuration = 3600.0;
  double targetWidth = 1242.0;
  double targetHeight = 1243.0;
  // Keep only the first K distinct source ids, in order of appearance.
  std::optional<std::size_t> maxNodes;
  // Retained ids are renumbered densely, ascending, starting here.
  std::uint32_t idOffset = 0;
};

struct ConvertedTrace {
  Trace trace;
  std::vector<std::int64_t> epochs;  // parallel to trace.waypoints()
};

/// Drops z, rescales the (x, y) bounding box onto the target rectangle and
/// rebases time on datasetStartTime.
ConvertedTrace convert_raw_dataset(std::span<const RawRecord> records,
                                   const ConversionParams& params);

/// Reads the raw CSV format: header `time,id,x,y,z` followed by rows.
std::vector<RawRecord> parse_raw_dataset(std::string_view text);
std::vector<RawRecord> load_raw_dataset(const std::filesystem::path& file);

struct OrbitSpec {
  Position center{621.0, 621.5};
  std::uint32_t orbiterCount = 130;
  double radiusMin = 200.0;
  double radiusMax = 560.0;
  double periodMin = 1800.0;
  double periodMax = 7200.0;
  std::uint32_t roverCount = 20;
  double surfaceRadius = 150.0;
  double duration = 1800.0;
  double sampleInterval = 10.0;
};

/// Circular orbit sample: center + r (cos(phase + 2 pi t / period), sin(...)).
Position orbit_position(const Position& center, double radius, double period,
                        double phase, SimTime t);

/// Rovers get ids 0..roverCount-1, orbiters follow. Deterministic per seed.
Trace gen_synthetic_orbits(const OrbitSpec& spec, std::uint64_t seed);

}  // namespace lunadtn

#endif  // LUNADTN_MOBILITY_HPP
