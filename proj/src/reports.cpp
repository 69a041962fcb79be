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

#include "lunadtn/reports.hpp"

#include "text.hpp"

namespace lunadtn {

void validate_delivery_record(const DeliveryRecord& rec) {
  if (rec.path.size() < 2) throw ValidationError("delivery path needs at least 2 nodes");
  if (rec.hopCount != rec.path.size() - 1)
    throw ValidationError("hop count disagrees with path length");
  if (rec.path.front() != rec.from || rec.path.back() != rec.to)
    throw ValidationError("delivery path must run from source to destination");
  if (!(rec.delay >= 0.0)) throw ValidationError("delivery delay must be >= 0");
}

std::string write_nn_trainer_line(const DeliveryRecord& rec) {
  std::string out;
  out += text::format_fixed(rec.creationTime, 4);
  out += ' ';
  out += rec.messageId;
  out += ' ';
  out += std::to_string(rec.size);
  out += ' ';
  out += std::to_string(rec.hopCount);
  out += " Y ";
  out += text::format_fixed(rec.delay, 4);
  out += ' ';
  out += rec.from;
  out += ' ';
  out += rec.to;
  out += ' ';
  out += rec.ttl ? text::format_exact(*rec.ttl) : std::string("n/a");
  out += rec.isResponse ? " Y " : " N ";
  for (std::size_t i = 0; i < rec.path.size(); ++i) {
    if (i) out += "->";
    out += rec.path[i];
  }
  return out;
}

DeliveryRecord parse_nn_trainer_line(std::string_view line, std::size_t n) {
  auto f = text::split_ws(text::trim(line));
  if (f.size() != 11) throw ParseError("report line needs 11 fields", n);
  if (f[4] != "Y") throw ParseError("expected delivered flag 'Y'", n);
  if (f[9] != "Y" && f[9] != "N") throw ParseError("response flag must be Y or N", n);

  DeliveryRecord rec;
  rec.creationTime = text::parse_double(f[0], n, "creation time");
  rec.messageId = std::string(f[1]);
  rec.size = text::parse_int<ByteCount>(f[2], n, "size");
  rec.hopCount = text::parse_int<std::size_t>(f[3], n, "hop count");
  rec.delay = text::parse_double(f[5], n, "delay");
  rec.from = std::string(f[6]);
  rec.to = std::string(f[7]);
  if (f[8] != "n/a") rec.ttl = text::parse_double(f[8], n, "ttl");
  rec.isResponse = f[9] == "Y";

  std::string_view path = f[10];
  std::size_t start = 0;
  while (true) {
    auto pos = path.find("->", start);
    auto hop = path.substr(start, pos == std::string_view::npos ? pos : pos - start);
    if (hop.empty()) throw ParseError("empty hop in path", n);
    rec.path.emplace_back(hop);
    if (pos == std::string_view::npos) break;
    start = pos + 2;
  }
  try {
    validate_delivery_record(rec);
  } catch (const ValidationError& e) {
    throw ValidationError("line " + std::to_string(n) + ": " + e.what());
  }
  return rec;
}

std::vector<DeliveryRecord> parse_nn_trainer_report(std::string_view content) {
  std::vector<DeliveryRecord> out;
  for (auto [n, raw] : text::lines(content)) {
    auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    out.push_back(parse_nn_trainer_line(line, n));
  }
  return out;
}

std::string write_message_stats(const Counters& c, std::span<const double> latencies) {
  const double ratio =
      c.created == 0 ? 0.0 : static_cast<double>(c.delivered) / static_cast<double>(c.created);
  double latency = 0.0;
  if (!latencies.empty()) {
    for (double d : latencies) latency += d;
    latency /= static_cast<double>(latencies.size());
  }
  std::string out;
  out += "created: " + std::to_string(c.created) + "\n";
  out += "started: " + std::to_string(c.started) + "\n";
  out += "relayed: " + std::to_string(c.relayed) + "\n";
  out += "dropped: " + std::to_string(c.dropped) + "\n";
  out += "delivered: " + std::to_string(c.delivered) + "\n";
  out += "delivery_ratio: " + text::format_fixed(ratio, 6) + "\n";
  out += "latency_avg: " + text::format_fixed(latency, 4) + "\n";
  return out;
}

}  // namespace lunadtn
