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

#include "lunadtn/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "lunadtn/rng.hpp"
#include "text.hpp"

namespace lunadtn {

namespace {

bool waypoint_less(const Waypoint& a, const Waypoint& b) {
  if (a.time != b.time) return a.time < b.time;
  return a.node < b.node;
}

std::string describe(const Waypoint& w) {
  return "waypoint (t=" + text::format_exact(w.time) + ", node " +
         std::to_string(w.node.value) + ")";
}

}  // namespace

Trace::Trace(TraceHeader header, std::vector<Waypoint> waypoints)
    : header_(header), waypoints_(std::move(waypoints)) {
  const auto& h = header_;
  for (double v : {h.minTime, h.maxTime, h.minX, h.maxX, h.minY, h.maxY}) {
    if (!std::isfinite(v)) throw ValidationError("trace header contains a non-finite value");
  }
  if (h.minTime > h.maxTime || h.minX > h.maxX || h.minY > h.maxY)
    throw ValidationError("trace header has inverted bounds");

  for (std::size_t i = 0; i < waypoints_.size(); ++i) {
    const Waypoint& w = waypoints_[i];
    if (!std::isfinite(w.time) || !std::isfinite(w.position.x) || !std::isfinite(w.position.y))
      throw ValidationError(describe(w) + " is not finite");
    if (w.time < h.minTime || w.time > h.maxTime)
      throw ValidationError(describe(w) + " lies outside the header time range");
    if (w.position.x < h.minX || w.position.x > h.maxX || w.position.y < h.minY ||
        w.position.y > h.maxY)
      throw ValidationError(describe(w) + " lies outside the header bounds");
    if (i > 0 && !waypoint_less(waypoints_[i - 1], w))
      throw ValidationError(describe(w) + " is out of order or duplicated");
    tracks_[w.node].push_back(w);
  }
}

std::vector<NodeId> Trace::nodes() const {
  std::vector<NodeId> out;
  out.reserve(tracks_.size());
  for (const auto& [id, _] : tracks_) out.push_back(id);
  return out;
}

std::span<const Waypoint> Trace::track(NodeId node) const {
  auto it = tracks_.find(node);
  if (it == tracks_.end())
    throw LookupError("node " + std::to_string(node.value) + " is not in the trace");
  return it->second;
}

Trace parse_trace(std::string_view content) {
  TraceHeader header;
  bool have_header = false;
  std::vector<Waypoint> waypoints;
  for (auto [n, raw] : text::lines(content)) {
    auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto f = text::split_ws(line);
    if (!have_header) {
      if (f.size() != 6) throw ParseError("trace header needs 6 fields", n);
      header = {text::parse_double(f[0], n, "minTime"), text::parse_double(f[1], n, "maxTime"),
                text::parse_double(f[2], n, "minX"),    text::parse_double(f[3], n, "maxX"),
                text::parse_double(f[4], n, "minY"),    text::parse_double(f[5], n, "maxY")};
      have_header = true;
      continue;
    }
    if (f.size() != 4) throw ParseError("waypoint needs 4 fields: time nodeId x y", n);
    waypoints.push_back({text::parse_double(f[0], n, "time"),
                         NodeId{text::parse_int<std::uint32_t>(f[1], n, "node id")},
                         {text::parse_double(f[2], n, "x"), text::parse_double(f[3], n, "y")}});
  }
  if (!have_header) throw ParseError("trace has no header line");
  return Trace(header, std::move(waypoints));
}

Trace load_trace(const std::filesystem::path& file) {
  return parse_trace(text::read_file(file));
}

std::string format_trace(const Trace& trace) {
  const auto& h = trace.header();
  std::string out;
  for (double v : {h.minTime, h.maxTime, h.minX, h.maxX, h.minY, h.maxY}) {
    if (!out.empty()) out += ' ';
    out += text::format_exact(v);
  }
  out += '\n';
  for (const auto& w : trace.waypoints()) {
    out += text::format_exact(w.time);
    out += ' ';
    out += std::to_string(w.node.value);
    out += ' ';
    out += text::format_exact(w.position.x);
    out += ' ';
    out += text::format_exact(w.position.y);
    out += '\n';
  }
  return out;
}

void save_trace(const Trace& trace, const std::filesystem::path& file) {
  text::write_file(file, format_trace(trace));
}

Position position_at(std::span<const Waypoint> track, SimTime t) {
  if (track.empty()) throw LookupError("empty track");
  if (t <= track.front().time) return track.front().position;
  if (t >= track.back().time) return track.back().position;
  auto hi = std::upper_bound(track.begin(), track.end(), t,
                             [](SimTime v, const Waypoint& w) { return v < w.time; });
  auto lo = hi - 1;
  const double span = hi->time - lo->time;
  const double f = (t - lo->time) / span;
  return {lo->position.x + f * (hi->position.x - lo->position.x),
          lo->position.y + f * (hi->position.y - lo->position.y)};
}

Position position_at(const Trace& trace, NodeId node, SimTime t) {
  return position_at(trace.track(node), t);
}

ConvertedTrace convert_raw_dataset(std::span<const RawRecord> records,
                                   const ConversionParams& params) {
  if (records.empty()) throw ValidationError("no records");
  if (!(params.epochDuration > 0.0)) throw ValidationError("epochDuration must be > 0");
  if (!(params.targetWidth > 0.0) || !(params.targetHeight > 0.0))
    throw ValidationError("target dimensions must be > 0");

  std::unordered_set<std::uint64_t> keep;
  std::vector<std::uint64_t> order;
  for (const auto& r : records) {
    if (keep.contains(r.id)) continue;
    if (params.maxNodes && keep.size() >= *params.maxNodes) continue;
    keep.insert(r.id);
    order.push_back(r.id);
  }
  std::sort(order.begin(), order.end());
  std::unordered_map<std::uint64_t, std::uint32_t> renumber;
  for (std::size_t i = 0; i < order.size(); ++i)
    renumber[order[i]] = params.idOffset + static_cast<std::uint32_t>(i);

  double t0 = params.datasetStartTime.value_or(records.front().time);
  if (!params.datasetStartTime) {
    for (const auto& r : records) t0 = std::min(t0, r.time);
  }
  double minX = INFINITY, maxX = -INFINITY, minY = INFINITY, maxY = -INFINITY;
  for (const auto& r : records) {
    if (!keep.contains(r.id)) continue;
    if (!std::isfinite(r.time) || !std::isfinite(r.x) || !std::isfinite(r.y))
      throw ValidationError("record for id " + std::to_string(r.id) + " is not finite");
    if (r.time < t0) throw ValidationError("record time precedes datasetStartTime");
    minX = std::min(minX, r.x);
    maxX = std::max(maxX, r.x);
    minY = std::min(minY, r.y);
    maxY = std::max(maxY, r.y);
  }
  if (!(maxX > minX)) throw ValidationError("degenerate bounding box on x axis");
  if (!(maxY > minY)) throw ValidationError("degenerate bounding box on y axis");

  struct Row {
    Waypoint w;
    std::int64_t epoch;
  };
  std::vector<Row> rows;
  rows.reserve(records.size());
  for (const auto& r : records) {
    if (!keep.contains(r.id)) continue;
    const double x = std::clamp((r.x - minX) / (maxX - minX) * params.targetWidth, 0.0,
                                params.targetWidth);
    const double y = std::clamp((r.y - minY) / (maxY - minY) * params.targetHeight, 0.0,
                                params.targetHeight);
    const double t = r.time - t0;
    rows.push_back({{t, NodeId{renumber.at(r.id)}, {x, y}}, epoch_of(t, params.epochDuration)});
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row& a, const Row& b) { return waypoint_less(a.w, b.w); });

  ConvertedTrace out;
  std::vector<Waypoint> waypoints;
  waypoints.reserve(rows.size());
  out.epochs.reserve(rows.size());
  for (const auto& row : rows) {
    waypoints.push_back(row.w);
    out.epochs.push_back(row.epoch);
  }
  TraceHeader header{waypoints.front().time, waypoints.back().time, 0.0,
                     params.targetWidth,     0.0,                   params.targetHeight};
  out.trace = Trace(header, std::move(waypoints));
  return out;
}

std::vector<RawRecord> parse_raw_dataset(std::string_view content) {
  std::vector<RawRecord> out;
  bool have_header = false;
  for (auto [n, raw] : text::lines(content)) {
    auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto f = text::split(line, ',');
    if (!have_header) {
      if (f.size() != 5 || f[0] != "time" || f[1] != "id" || f[2] != "x" || f[3] != "y" ||
          f[4] != "z")
        throw ParseError("raw dataset header must be 'time,id,x,y,z'", n);
      have_header = true;
      continue;
    }
    if (f.size() != 5) throw ParseError("raw record needs 5 fields", n);
    out.push_back({text::parse_double(f[0], n, "time"),
                   text::parse_int<std::uint64_t>(f[1], n, "id"),
                   text::parse_double(f[2], n, "x"), text::parse_double(f[3], n, "y"),
                   text::parse_double(f[4], n, "z")});
  }
  return out;
}

std::vector<RawRecord> load_raw_dataset(const std::filesystem::path& file) {
  return parse_raw_dataset(text::read_file(file));
}

Position orbit_position(const Position& center, double radius, double period, double phase,
                        SimTime t) {
  const double angle = phase + 2.0 * std::numbers::pi * t / period;
  return {center.x + radius * std::cos(angle), center.y + radius * std::sin(angle)};
}

Trace gen_synthetic_orbits(const OrbitSpec& spec, std::uint64_t seed) {
  if (!(spec.duration > 0.0)) throw ValidationError("duration must be > 0");
  if (!(spec.sampleInterval > 0.0)) throw ValidationError("sampleInterval must be > 0");
  if (spec.orbiterCount > 0) {
    if (!(spec.radiusMin > 0.0) || !(spec.radiusMax >= spec.radiusMin))
      throw ValidationError("orbit radius range must be positive and ordered");
    if (!(spec.periodMin > 0.0) || !(spec.periodMax >= spec.periodMin))
      throw ValidationError("orbit period range must be positive and ordered");
  }
  if (spec.roverCount > 0 && !(spec.surfaceRadius >= 0.0))
    throw ValidationError("surfaceRadius must be >= 0");

  Rng rng(seed);
  std::vector<Waypoint> waypoints;
  const double two_pi = 2.0 * std::numbers::pi;

  for (std::uint32_t i = 0; i < spec.roverCount; ++i) {
    const double angle = rng.uniform(0.0, two_pi);
    Position p{spec.center.x + spec.surfaceRadius * std::cos(angle),
               spec.center.y + spec.surfaceRadius * std::sin(angle)};
    waypoints.push_back({0.0, NodeId{i}, p});
    waypoints.push_back({spec.duration, NodeId{i}, p});
  }

  std::vector<double> times;
  for (std::uint64_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * spec.sampleInterval;
    if (t >= spec.duration) break;
    times.push_back(t);
  }
  times.push_back(spec.duration);

  for (std::uint32_t i = 0; i < spec.orbiterCount; ++i) {
    const double radius = rng.uniform(spec.radiusMin, spec.radiusMax);
    const double period = rng.uniform(spec.periodMin, spec.periodMax);
    const double phase = rng.uniform(0.0, two_pi);
    const NodeId id{spec.roverCount + i};
    for (double t : times)
      waypoints.push_back({t, id, orbit_position(spec.center, radius, period, phase, t)});
  }

  std::sort(waypoints.begin(), waypoints.end(), waypoint_less);
  TraceHeader header{0.0, spec.duration, spec.center.x, spec.center.x, spec.center.y,
                     spec.center.y};
  for (const auto& w : waypoints) {
    header.minX = std::min(header.minX, w.position.x);
    header.maxX = std::max(header.maxX, w.position.x);
    header.minY = std::min(header.minY, w.position.y);
    header.maxY = std::max(header.maxY, w.position.y);
  }
  return Trace(header, std::move(waypoints));
}

}  // namespace lunadtn
