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

#ifndef LUNADTN_SCENARIO_HPP
#define LUNADTN_SCENARIO_HPP

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lunadtn/core.hpp"
#include "lunadtn/routing.hpp"

namespace lunadtn {

enum class RouterKind { Epidemic, Prophet, NeuraLuna };

std::string_view router_kind_name(RouterKind kind);
RouterKind parse_router_kind(std::string_view name);

struct RouterConfig {
  RouterKind kind = RouterKind::Prophet;
  ProphetParams prophet;
  std::filesystem::path modelFile;  // neuraluna only
  double tolerance = 5.0;
  // Takes precedence over modelFile when set.
  std::shared_ptr<const MlpModel> model;
};

/// Everything needed to run one simulation. Node ids are assigned group by
/// group in declaration order; the last node is the ground station that
/// every generated message is addressed to.
struct Scenario {
  double worldWidth = 1242.0;
  double worldHeight = 1243.0;
  double duration = 1800.0;
  double warmup = 0.0;
  std::vector<GroupSpec> groups;
  ByteCount bufferSize = 50'000'000;
  double msgInterval = 7.4;
  std::pair<ByteCount, ByteCount> msgSizeRange{500'000, 1'000'000};
  std::optional<double> ttl;
  RouterConfig router;
  double epochDuration = 3600.0;
  std::uint64_t seed = 1;
  double stepInterval = 0.1;
  // Relative trace and model paths resolve against this directory.
  std::filesystem::path baseDir;

  std::uint32_t node_count() const;
  std::filesystem::path resolve(const std::filesystem::path& p) const;
};

/// Throws ValidationError / ConfigError describing the first problem found.
void validate_scenario(const Scenario& s);

/// `key = value` lines, `#` comments, `[group.<prefix>]` sections.
Scenario parse_scenario(std::string_view text, const std::filesystem::path& baseDir = {});
Scenario load_scenario(const std::filesystem::path& file);

/// Byte quantities accept decimal suffixes k, M, G (1000-based), e.g. "50M".
ByteCount parse_byte_count(std::string_view s);

}  // namespace lunadtn

#endif  // LUNADTN_SCENARIO_HPP
