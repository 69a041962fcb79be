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

#include "lunadtn/scenario.hpp"

#include <cmath>
#include <set>

#include "text.hpp"

namespace lunadtn {

std::string_view router_kind_name(RouterKind kind) {
  switch (kind) {
    case RouterKind::Epidemic: return "epidemic";
    case RouterKind::Prophet: return "prophet";
    case RouterKind::NeuraLuna: return "neuraluna";
  }
  return "unknown";
}

RouterKind parse_router_kind(std::string_view name) {
  if (name == "epidemic") return RouterKind::Epidemic;
  if (name == "prophet") return RouterKind::Prophet;
  if (name == "neuraluna") return RouterKind::NeuraLuna;
  throw ConfigError("unknown router '" + std::string(name) + "'");
}

std::uint32_t Scenario::node_count() const {
  std::uint32_t n = 0;
  for (const auto& g : groups) n += g.count;
  return n;
}

std::filesystem::path Scenario::resolve(const std::filesystem::path& p) const {
  if (p.empty() || p.is_absolute() || baseDir.empty()) return p;
  return baseDir / p;
}

ByteCount parse_byte_count(std::string_view s) {
  s = text::trim(s);
  double mult = 1.0;
  if (!s.empty()) {
    switch (s.back()) {
      case 'k': mult = 1e3; break;
      case 'M': mult = 1e6; break;
      case 'G': mult = 1e9; break;
      default: break;
    }
    if (mult != 1.0) s.remove_suffix(1);
  }
  double v = 0.0;
  if (!text::try_double(s, v) || !std::isfinite(v) || v < 0.0)
    throw ParseError("invalid byte quantity '" + std::string(s) + "'");
  return static_cast<ByteCount>(std::llround(v * mult));
}

void validate_scenario(const Scenario& s) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(std::string(name) + " must be > 0");
  };
  positive(s.worldWidth, "worldWidth");
  positive(s.worldHeight, "worldHeight");
  positive(s.duration, "duration");
  positive(s.msgInterval, "msgInterval");
  positive(s.epochDuration, "epochDuration");
  positive(s.stepInterval, "stepInterval");
  if (!(s.warmup >= 0.0)) throw ValidationError("warmup must be >= 0");
  if (s.bufferSize == 0) throw ValidationError("bufferSize must be > 0");
  if (s.msgSizeRange.first == 0 || s.msgSizeRange.first > s.msgSizeRange.second)
    throw ValidationError("msgSizeRange must satisfy 0 < min <= max");
  if (s.ttl && !(*s.ttl > 0.0)) throw ValidationError("ttl must be > 0");
  if (s.groups.empty()) throw ValidationError("scenario declares no groups");
  std::set<char> prefixes;
  for (const auto& g : s.groups) {
    validate_group(g);
    if (!prefixes.insert(g.prefix).second)
      throw ValidationError(std::string("duplicate group prefix '") + g.prefix + "'");
    if (const auto* st = std::get_if<StaticMobility>(&g.mobility)) {
      const auto& p = st->position;
      if (!(p.x >= 0.0 && p.x <= s.worldWidth && p.y >= 0.0 && p.y <= s.worldHeight))
        throw ValidationError(std::string("group ") + g.prefix + ": static position outside world");
    }
  }
  if (s.node_count() < 2) throw ValidationError("scenario needs at least 2 nodes");
  validate_prophet_params(s.router.prophet);
  if (s.router.kind == RouterKind::NeuraLuna) {
    if (!s.router.model && s.router.modelFile.empty())
      throw ConfigError("router neuraluna requires neuraluna.model");
    if (!(s.router.tolerance > 0.0)) throw ConfigError("neuraluna.tolerance must be > 0");
  }
}

namespace {

MobilityBinding parse_mobility(std::string_view v, std::size_t n) {
  auto f = text::split_ws(v);
  if (f.size() == 3 && f[0] == "static")
    return StaticMobility{{text::parse_double(f[1], n, "x"), text::parse_double(f[2], n, "y")}};
  if (f.size() >= 2 && f[0] == "trace") {
    auto path = text::trim(v.substr(v.find("trace") + 5));
    return TraceMobility{std::filesystem::path(std::string(path))};
  }
  throw ParseError("mobility must be 'static <x> <y>' or 'trace <file>'", n);
}

ByteCount bytes_at(std::string_view v, std::size_t n) {
  try {
    return parse_byte_count(v);
  } catch (const ParseError& e) {
    throw ParseError(e.what(), n);
  }
}

}  // namespace

Scenario parse_scenario(std::string_view content, const std::filesystem::path& baseDir) {
  Scenario s;
  s.baseDir = baseDir;
  GroupSpec* group = nullptr;
  std::set<std::string> seen;

  for (auto [n, raw] : text::lines(content)) {
    auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() != 9 || line.substr(1, 6) != "group.")
        throw ParseError("section must be [group.<prefix>] with a one-character prefix", n);
      GroupSpec g;
      g.prefix = line[7];
      s.groups.push_back(g);
      group = &s.groups.back();
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", n);
    const std::string key(text::trim(line.substr(0, eq)));
    const std::string_view value = text::trim(line.substr(eq + 1));
    if (value.empty()) throw ParseError("key '" + key + "' has no value", n);

    const std::string scoped = group ? std::string("group.") + group->prefix + "." + key : key;
    if (!seen.insert(scoped).second) throw ParseError("duplicate key '" + key + "'", n);

    if (group) {
      if (key == "count") group->count = text::parse_int<std::uint32_t>(value, n, "count");
      else if (key == "mobility") group->mobility = parse_mobility(value, n);
      else if (key == "interfaceRange") group->interfaceRange = text::parse_double(value, n, key);
      else if (key == "interfaceBandwidth") group->interfaceBandwidth = static_cast<double>(bytes_at(value, n));
      else throw ParseError("unknown group key '" + key + "'", n);
      continue;
    }

    if (key == "worldWidth") s.worldWidth = text::parse_double(value, n, key);
    else if (key == "worldHeight") s.worldHeight = text::parse_double(value, n, key);
    else if (key == "duration") s.duration = text::parse_double(value, n, key);
    else if (key == "warmup") s.warmup = text::parse_double(value, n, key);
    else if (key == "bufferSize") s.bufferSize = bytes_at(value, n);
    else if (key == "msgInterval") s.msgInterval = text::parse_double(value, n, key);
    else if (key == "msgSizeRange") {
      auto parts = text::split(value, ',');
      if (parts.size() != 2) throw ParseError("msgSizeRange must be 'min,max'", n);
      s.msgSizeRange = {bytes_at(parts[0], n), bytes_at(parts[1], n)};
    } else if (key == "ttl") {
      if (value == "none") s.ttl.reset();
      else s.ttl = text::parse_double(value, n, key);
    } else if (key == "router") {
      try {
        s.router.kind = parse_router_kind(value);
      } catch (const ConfigError& e) {
        throw ParseError(e.what(), n);
      }
    } else if (key == "epochDuration") s.epochDuration = text::parse_double(value, n, key);
    else if (key == "seed") s.seed = text::parse_int<std::uint64_t>(value, n, key);
    else if (key == "stepInterval") s.stepInterval = text::parse_double(value, n, key);
    else if (key == "prophet.pInit") s.router.prophet.pInit = text::parse_double(value, n, key);
    else if (key == "prophet.beta") s.router.prophet.beta = text::parse_double(value, n, key);
    else if (key == "prophet.gamma") s.router.prophet.gamma = text::parse_double(value, n, key);
    else if (key == "prophet.agingUnit") s.router.prophet.agingUnit = text::parse_double(value, n, key);
    else if (key == "neuraluna.model") s.router.modelFile = std::string(value);
    else if (key == "neuraluna.tolerance") s.router.tolerance = text::parse_double(value, n, key);
    else throw ParseError("unknown key '" + key + "'", n);
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& file) {
  auto content = text::read_file(file);
  return parse_scenario(content, file.parent_path());
}

}  // namespace lunadtn
