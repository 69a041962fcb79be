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

#include "lunadtn/engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <unordered_map>

#include "lunadtn/mobility.hpp"
#include "lunadtn/rng.hpp"
#include "text.hpp"

namespace lunadtn {

bool in_contact(const Position& a, const Position& b, double rangeA, double rangeB) {
  const double r = std::min(rangeA, rangeB);
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy <= r * r;
}

std::vector<std::pair<NodeId, NodeId>> detect_contacts(std::span<const Position> positions,
                                                       std::span<const double> ranges) {
  if (positions.size() != ranges.size())
    throw ShapeError("detect_contacts: positions and ranges differ in length");
  std::vector<std::pair<NodeId, NodeId>> out;
  const auto n = static_cast<std::uint32_t>(positions.size());
  for (std::uint32_t a = 0; a < n; ++a) {
    for (std::uint32_t b = a + 1; b < n; ++b) {
      if (in_contact(positions[a], positions[b], ranges[a], ranges[b]))
        out.emplace_back(NodeId{a}, NodeId{b});
    }
  }
  return out;
}

void SimulationObserver::on_transfer_started(SimTime, const NodeView&, const NodeView&,
                                             const Message&) {}
void SimulationObserver::on_contact_closed(const Contact&) {}

std::string RunResult::nn_trainer_report() const {
  std::string out;
  for (const auto& rec : deliveries) {
    out += write_nn_trainer_line(rec);
    out += '\n';
  }
  return out;
}

std::string RunResult::message_stats_report() const {
  return write_message_stats(counters, latencies);
}

void write_reports(const RunResult& result, const std::filesystem::path& dir,
                   const std::string& runName) {
  std::filesystem::create_directories(dir);
  text::write_file(dir / (runName + "_NNTrainerReport.txt"), result.nn_trainer_report());
  text::write_file(dir / (runName + "_MessageStatsReport.txt"), result.message_stats_report());
}

namespace {

struct NodeState {
  NodeId id;
  char prefix = 'n';
  double range = 0.0;
  double bandwidth = 1.0;
  MessageStore store;
  std::unique_ptr<Router> router;
  std::optional<Position> fixed;
  std::span<const Waypoint> track;
  // Bumped whenever anything a router may look at changes.
  std::uint64_t version = 0;

  explicit NodeState(ByteCount capacity) : store(capacity) {}

  NodeView view() const { return {id, store, router->table()}; }
};

struct Transfer {
  std::uint32_t serial = 0;
  SimTime end = 0.0;
};

class Simulation {
 public:
  Simulation(const Scenario& scenario, SimulationObserver* observer)
      : sc_(scenario), observer_(observer), rng_(scenario.seed) {
    validate_scenario(sc_);
    build_nodes();
  }

  RunResult run();

 private:
  void build_nodes();
  std::unique_ptr<Router> make_router(NodeId id);

  std::uint64_t link_key(NodeId host, NodeId peer) const {
    return static_cast<std::uint64_t>(host.value) * nodes_.size() + peer.value;
  }
  bool counted(const Message& m) const { return m.creationTime >= sc_.warmup; }
  std::string label(NodeId id) const { return node_name(nodes_[id.value].prefix, id); }

  void update_contacts(SimTime t);
  void complete_transfers(SimTime t);
  void generate_messages(SimTime t, bool lastStep);
  void expire_messages(SimTime t);
  void start_transfers(SimTime t);

  void abort_outgoing(NodeId host, std::uint32_t serial);
  void drop(NodeState& node, const Message& m);
  void receive(NodeState& sender, NodeState& receiver, const Message& m, SimTime t);

  const Scenario& sc_;
  SimulationObserver* observer_;
  Rng rng_;
  std::map<std::string, Trace> traces_;
  std::shared_ptr<const MlpModel> model_;
  std::vector<NodeState> nodes_;
  std::vector<Position> positions_;
  std::vector<double> ranges_;

  std::vector<std::pair<NodeId, NodeId>> up_;  // sorted
  std::map<std::pair<NodeId, NodeId>, SimTime> upSince_;
  std::map<std::uint64_t, Transfer> active_;
  std::unordered_map<std::uint64_t, std::pair<std::uint64_t, std::uint64_t>> idleAt_;

  std::uint64_t nextMessage_ = 0;
  RunResult result_;
};

std::unique_ptr<Router> Simulation::make_router(NodeId id) {
  switch (sc_.router.kind) {
    case RouterKind::Epidemic: return std::make_unique<EpidemicRouter>();
    case RouterKind::Prophet: return std::make_unique<ProphetRouter>(id, sc_.router.prophet);
    case RouterKind::NeuraLuna:
      return std::make_unique<NeuraLunaRouter>(
          id, sc_.router.prophet, GateConfig{model_, sc_.router.tolerance, sc_.epochDuration});
  }
  throw ConfigError("unknown router kind");
}

void Simulation::build_nodes() {
  if (sc_.router.kind == RouterKind::NeuraLuna) {
    if (sc_.router.model) {
      model_ = sc_.router.model;
    } else {
      try {
        model_ = std::make_shared<const MlpModel>(load_model(sc_.resolve(sc_.router.modelFile)));
      } catch (const Error& e) {
        throw ConfigError("cannot load gate model: " + std::string(e.what()));
      }
    }
    if (model_->input_dim() != 4 || model_->output_dim() != 1)
      throw ConfigError("gate model must map 4 features to 1 output");
  }

  const std::uint32_t n = sc_.node_count();
  nodes_.reserve(n);
  std::uint32_t next = 0;
  for (const auto& g : sc_.groups) {
    const Trace* trace = nullptr;
    if (const auto* tm = std::get_if<TraceMobility>(&g.mobility)) {
      const auto path = sc_.resolve(tm->traceFile).string();
      auto it = traces_.find(path);
      if (it == traces_.end()) it = traces_.emplace(path, load_trace(path)).first;
      trace = &it->second;
    }
    for (std::uint32_t i = 0; i < g.count; ++i, ++next) {
      NodeState node(sc_.bufferSize);
      node.id = NodeId{next};
      node.prefix = g.prefix;
      node.range = g.interfaceRange;
      node.bandwidth = g.interfaceBandwidth;
      if (trace) {
        if (!trace->has_node(node.id))
          throw ValidationError("trace has no waypoints for node " + node_name(g.prefix, node.id));
        node.track = trace->track(node.id);
      } else {
        node.fixed = std::get<StaticMobility>(g.mobility).position;
      }
      node.router = make_router(node.id);
      nodes_.push_back(std::move(node));
    }
  }
  positions_.resize(n);
  ranges_.resize(n);
  for (const auto& node : nodes_) ranges_[node.id.value] = node.range;
}

void Simulation::abort_outgoing(NodeId host, std::uint32_t serial) {
  const std::uint64_t lo = link_key(host, NodeId{0});
  const std::uint64_t hi = lo + nodes_.size();
  for (auto it = active_.lower_bound(lo); it != active_.end() && it->first < hi;) {
    if (it->second.serial == serial) it = active_.erase(it);
    else ++it;
  }
}

void Simulation::drop(NodeState& node, const Message& m) {
  abort_outgoing(node.id, m.serial);
  if (counted(m)) ++result_.counters.dropped;
}

void Simulation::update_contacts(SimTime t) {
  for (const auto& node : nodes_) {
    positions_[node.id.value] =
        node.fixed ? *node.fixed : position_at(node.track, t);
  }
  auto now = detect_contacts(positions_, ranges_);

  std::vector<std::pair<NodeId, NodeId>> down, up;
  std::set_difference(up_.begin(), up_.end(), now.begin(), now.end(), std::back_inserter(down));
  std::set_difference(now.begin(), now.end(), up_.begin(), up_.end(), std::back_inserter(up));

  for (const auto& [a, b] : down) {
    active_.erase(link_key(a, b));
    active_.erase(link_key(b, a));
    idleAt_.erase(link_key(a, b));
    idleAt_.erase(link_key(b, a));
    auto it = upSince_.find({a, b});
    if (observer_) observer_->on_contact_closed({a, b, it->second, t});
    upSince_.erase(it);
  }
  for (const auto& [a, b] : up) {
    upSince_[{a, b}] = t;
    ++result_.contactCount;
    nodes_[a.value].router->on_contact_up(*nodes_[b.value].router, t);
    ++nodes_[a.value].version;
    ++nodes_[b.value].version;
  }
  up_ = std::move(now);
}

void Simulation::receive(NodeState& sender, NodeState& receiver, const Message& m, SimTime t) {
  if (counted(m)) ++result_.counters.relayed;

  if (m.to == receiver.id) {
    if (receiver.store.delivered.insert(m.serial).second) {
      ++receiver.version;
      if (counted(m)) {
        ++result_.counters.delivered;
        DeliveryRecord rec;
        rec.creationTime = m.creationTime;
        rec.messageId = m.id;
        rec.size = m.size;
        rec.hopCount = m.hops.size();
        rec.delay = t - m.creationTime;
        rec.from = label(m.from);
        rec.to = label(m.to);
        rec.ttl = m.ttl;
        rec.isResponse = m.isResponse;
        for (auto hop : m.hops) rec.path.push_back(label(hop));
        rec.path.push_back(label(receiver.id));
        result_.latencies.push_back(rec.delay);
        result_.deliveries.push_back(std::move(rec));
      }
    }
    return;
  }
  if (receiver.store.holds(m.serial)) return;  // a concurrent copy arrived first

  Message copy = m;
  copy.hops.push_back(receiver.id);
  auto room = make_room(receiver.store.buffer, copy.size);
  for (const auto& gone : room.dropped) drop(receiver, gone);
  if (!room.accepted) {
    drop(receiver, copy);
    return;
  }
  receiver.store.buffer.push(std::move(copy), t);
  ++receiver.version;
  (void)sender;
}

void Simulation::complete_transfers(SimTime t) {
  std::vector<std::pair<std::uint64_t, Transfer>> done;
  for (const auto& [key, tr] : active_) {
    if (tr.end <= t + 1e-9) done.emplace_back(key, tr);
  }
  const std::uint64_t n = nodes_.size();
  for (const auto& [key, tr] : done) {
    if (active_.erase(key) == 0) continue;  // aborted by an earlier completion
    auto& sender = nodes_[key / n];
    auto& receiver = nodes_[key % n];
    const Message* m = sender.store.buffer.find(tr.serial);
    if (!m) continue;
    receive(sender, receiver, *m, t);
  }
}

void Simulation::generate_messages(SimTime t, bool lastStep) {
  const std::uint32_t n = sc_.node_count();
  const NodeId station{n - 1};
  while (true) {
    const double at = static_cast<double>(nextMessage_) * sc_.msgInterval;
    if (at >= sc_.duration) return;
    if (at > t + 1e-9 && !lastStep) return;

    Message m;
    m.serial = static_cast<std::uint32_t>(nextMessage_);
    m.id = "M" + std::to_string(nextMessage_ + 1);
    m.from = NodeId{static_cast<std::uint32_t>(nextMessage_ % (n - 1))};
    m.to = station;
    m.size = rng_.uniform_int(sc_.msgSizeRange.first, sc_.msgSizeRange.second);
    m.creationTime = at;
    m.ttl = sc_.ttl;
    m.hops = {m.from};
    ++nextMessage_;

    if (counted(m)) ++result_.counters.created;
    auto& src = nodes_[m.from.value];
    auto room = make_room(src.store.buffer, m.size);
    for (const auto& gone : room.dropped) drop(src, gone);
    if (!room.accepted) {
      if (counted(m)) ++result_.counters.dropped;
      continue;
    }
    src.store.buffer.push(std::move(m), t);
    ++src.version;
  }
}

void Simulation::expire_messages(SimTime t) {
  if (!sc_.ttl) return;
  for (auto& node : nodes_) {
    std::vector<std::uint32_t> expired;
    for (const auto& e : node.store.buffer.entries()) {
      if (t - e.message.creationTime > *sc_.ttl) expired.push_back(e.message.serial);
    }
    for (auto serial : expired) {
      auto m = node.store.buffer.remove(serial);
      drop(node, *m);
      ++node.version;
    }
  }
}

void Simulation::start_transfers(SimTime t) {
  for (const auto& [a, b] : up_) {
    for (auto [h, p] : {std::pair{a, b}, std::pair{b, a}}) {
      const auto key = link_key(h, p);
      if (active_.contains(key)) continue;
      auto& host = nodes_[h.value];
      auto& peer = nodes_[p.value];
      const std::pair versions{host.version, peer.version};
      if (auto it = idleAt_.find(key); it != idleAt_.end() && it->second == versions) continue;

      const NodeView hv = host.view();
      const NodeView pv = peer.view();
      const Message* chosen = nullptr;
      for (const auto& intent : host.router->select(hv, pv)) {
        if (intent.message->to == p || intent.message->size <= peer.store.buffer.capacity()) {
          chosen = intent.message;
          break;
        }
      }
      if (!chosen) {
        idleAt_[key] = versions;
        continue;
      }
      const double rate = std::min(host.bandwidth, peer.bandwidth);
      active_[key] = {chosen->serial, t + static_cast<double>(chosen->size) / rate};
      if (counted(*chosen)) ++result_.counters.started;
      if (observer_) observer_->on_transfer_started(t, hv, pv, *chosen);
    }
  }
}

RunResult Simulation::run() {
  const double ratio = sc_.duration / sc_.stepInterval;
  const auto steps = static_cast<std::uint64_t>(std::ceil(ratio - 1e-9));
  for (std::uint64_t i = 0; i < steps; ++i) {
    const SimTime t = static_cast<double>(i) * sc_.stepInterval;
    update_contacts(t);
    complete_transfers(t);
    generate_messages(t, i + 1 == steps);
    expire_messages(t);
    start_transfers(t);
  }
  if (observer_) {
    for (const auto& [pair, since] : upSince_)
      observer_->on_contact_closed({pair.first, pair.second, since, std::nullopt});
  }
  return std::move(result_);
}

}  // namespace

RunResult run(const Scenario& scenario, SimulationObserver* observer) {
  Simulation sim(scenario, observer);
  return sim.run();
}

}  // namespace lunadtn
