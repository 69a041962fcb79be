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

#ifndef LUNADTN_ENGINE_HPP
#define LUNADTN_ENGINE_HPP

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lunadtn/core.hpp"
#include "lunadtn/reports.hpp"
#include "lunadtn/routing.hpp"
#include "lunadtn/scenario.hpp"

namespace lunadtn {

/// Link rule: distance <= min(rangeA, rangeB), boundary inclusive.
bool in_contact(const Position& a, const Position& b, double rangeA, double rangeB);

/// All connected pairs (a < b), sorted. positions[i] and ranges[i] belong to NodeId i.
std::vector<std::pair<NodeId, NodeId>> detect_contacts(std::span<const Position> positions,
                                                       std::span<const double> ranges);

struct Contact {
  NodeId a;
  NodeId b;
  SimTime upTime = 0.0;
  std::optional<SimTime> downTime;
};

/// Hooks into a running simulation, mostly for testing and tracing.
class SimulationObserver {
 public:
  virtual ~SimulationObserver() = default;
  virtual void on_transfer_started(SimTime now, const NodeView& host, const NodeView& peer,
                                   const Message& message);
  /// Called when a contact goes down, and once at the end for open contacts.
  virtual void on_contact_closed(const Contact& contact);
};

struct RunResult {
  Counters counters;
  std::vector<DeliveryRecord> deliveries;  // first deliveries of counted messages
  std::vector<double> latencies;
  std::uint64_t contactCount = 0;

  std::string nn_trainer_report() const;
  std::string message_stats_report() const;
};

/// Runs the time-stepped simulation. Throws before the first step on any
/// configuration or trace problem.
RunResult run(const Scenario& scenario, SimulationObserver* observer = nullptr);

/// Writes `<dir>/<runName>_NNTrainerReport.txt` and
/// `<dir>/<runName>_MessageStatsReport.txt`.
void write_reports(const RunResult& result, const std::filesystem::path& dir,
                   const std::string& runName);

}  // namespace lunadtn

#endif  // LUNADTN_ENGINE_HPP
