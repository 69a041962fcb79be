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

#ifndef LUNADTN_REPORTS_HPP
#define LUNADTN_REPORTS_HPP

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lunadtn/core.hpp"

namespace lunadtn {

/// One first-delivery event, as written to the NN trainer report.
struct DeliveryRecord {
  SimTime creationTime = 0.0;
  std::string messageId;
  ByteCount size = 0;
  std::size_t hopCount = 0;
  double delay = 0.0;
  std::string from;
  std::string to;
  std::optional<double> ttl;
  bool isResponse = false;
  std::vector<std::string> path;

  friend bool operator==(const DeliveryRecord&, const DeliveryRecord&) = default;
};

void validate_delivery_record(const DeliveryRecord& rec);

/// `creationTime id size hops Y delay from to ttl|n/a Y|N a->b->c`, no newline.
/// Times use 4-decimal fixed point.
std::string write_nn_trainer_line(const DeliveryRecord& rec);

/// Inverse of write_nn_trainer_line. `lineNo` is only used in error messages.
DeliveryRecord parse_nn_trainer_line(std::string_view line, std::size_t lineNo = 0);

/// All records of a report body; blank lines and `#` comments are skipped.
std::vector<DeliveryRecord> parse_nn_trainer_report(std::string_view text);

/// `key: value` block: the five counters, delivery_ratio and latency_avg.
std::string write_message_stats(const Counters& counters, std::span<const double> latencies);

}  // namespace lunadtn

#endif  // LUNADTN_REPORTS_HPP
