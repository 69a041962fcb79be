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

#include "lunadtn/routing.hpp"

#include <algorithm>
#include <cmath>

namespace lunadtn {

void validate_prophet_params(const ProphetParams& p) {
  if (!(p.pInit > 0.0 && p.pInit <= 1.0)) throw ValidationError("prophet.pInit must lie in (0, 1]");
  if (!(p.beta >= 0.0 && p.beta <= 1.0)) throw ValidationError("prophet.beta must lie in [0, 1]");
  if (!(p.gamma > 0.0 && p.gamma <= 1.0)) throw ValidationError("prophet.gamma must lie in (0, 1]");
  if (!(p.agingUnit > 0.0) || !std::isfinite(p.agingUnit))
    throw ValidationError("prophet.agingUnit must be > 0");
}

double prophet_direct_update(double p, double pInit) {
  return std::clamp(p + (1.0 - p) * pInit, 0.0, 1.0);
}

double prophet_transitive_update(double pAC, double pAB, double pBC, double beta) {
  return std::clamp(pAC + (1.0 - pAC) * pAB * pBC * beta, 0.0, 1.0);
}

double prophet_age(double p, double gamma, double elapsed, double agingUnit) {
  if (elapsed <= 0.0) return p;
  return std::clamp(p * std::pow(gamma, elapsed / agingUnit), 0.0, p);
}

PredictabilityTable::PredictabilityTable(NodeId owner, ProphetParams params)
    : owner_(owner), params_(params) {
  validate_prophet_params(params_);
}

double PredictabilityTable::get(NodeId destination) const {
  auto it = entries_.find(destination);
  return it == entries_.end() ? 0.0 : it->second.p;
}

void PredictabilityTable::set(NodeId destination, double p, SimTime now) {
  entries_[destination] = {std::clamp(p, 0.0, 1.0), now};
}

void PredictabilityTable::age_to(SimTime now) {
  for (auto& [_, e] : entries_) {
    if (now > e.lastAged) {
      e.p = prophet_age(e.p, params_.gamma, now - e.lastAged, params_.agingUnit);
      e.lastAged = now;
    }
  }
}

void prophet_on_encounter(PredictabilityTable& a, PredictabilityTable& b, SimTime now) {
  if (a.owner() == b.owner()) throw ValidationError("a node cannot encounter itself");
  a.age_to(now);
  b.age_to(now);
  a.set(b.owner(), prophet_direct_update(a.get(b.owner()), a.params().pInit), now);
  b.set(a.owner(), prophet_direct_update(b.get(a.owner()), b.params().pInit), now);

  const auto snapA = a.entries();
  const auto snapB = b.entries();
  auto transit = [now](PredictabilityTable& self, NodeId peer,
                       const std::map<NodeId, PredictabilityTable::Entry>& peerEntries) {
    const double viaPeer = self.get(peer);
    for (const auto& [dest, e] : peerEntries) {
      if (dest == self.owner()) continue;
      self.set(dest,
               prophet_transitive_update(self.get(dest), viaPeer, e.p, self.params().beta), now);
    }
  };
  transit(a, b.owner(), snapB);
  transit(b, a.owner(), snapA);
}

namespace {

bool by_creation(const TransferIntent& x, const TransferIntent& y) {
  if (x.message->creationTime != y.message->creationTime)
    return x.message->creationTime < y.message->creationTime;
  return x.message->id < y.message->id;
}

}  // namespace

std::vector<TransferIntent> epidemic_select(const NodeView& host, const NodeView& peer) {
  std::vector<TransferIntent> out;
  for (const auto& e : host.store.buffer.entries()) {
    if (!peer.store.holds(e.message.serial)) out.push_back({&e.message, peer.id});
  }
  std::sort(out.begin(), out.end(), by_creation);
  return out;
}

std::vector<TransferIntent> prophet_select(const NodeView& host, const NodeView& peer) {
  if (!host.table || !peer.table) throw ConfigError("prophet_select needs predictability tables");
  std::vector<TransferIntent> direct;
  std::vector<std::pair<double, TransferIntent>> ranked;
  for (const auto& e : host.store.buffer.entries()) {
    const Message& m = e.message;
    if (peer.store.holds(m.serial)) continue;
    if (m.to == peer.id) {
      direct.push_back({&m, peer.id});
      continue;
    }
    const double pPeer = peer.table->get(m.to);
    if (pPeer > host.table->get(m.to)) ranked.push_back({pPeer, {&m, peer.id}});
  }
  std::sort(direct.begin(), direct.end(), by_creation);
  std::sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first > y.first;
    return by_creation(x.second, y.second);
  });
  for (const auto& [_, intent] : ranked) direct.push_back(intent);
  return direct;
}

bool neuraluna_gate(const MlpModel& model, std::int64_t epoch, NodeId from, NodeId to,
                    NodeId current, NodeId candidate, double tolerance) {
  if (model.input_dim() != 4 || model.output_dim() != 1)
    throw ConfigError("gate model must map 4 features to 1 output");
  const std::array<double, 4> x{static_cast<double>(epoch), static_cast<double>(from.value),
                                static_cast<double>(to.value), static_cast<double>(current.value)};
  const double y = mlp_forward(model, x)(0);
  const double c = candidate.value;
  return c > y - tolerance && c < y + tolerance;
}

std::size_t NeuralGate::KeyHash::operator()(const Key& k) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (auto v : k) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ull;
  return h;
}

NeuralGate::NeuralGate(GateConfig cfg) : cfg_(std::move(cfg)) {
  if (!cfg_.model) throw ConfigError("neural gate needs a model");
  if (cfg_.model->input_dim() != 4 || cfg_.model->output_dim() != 1)
    throw ConfigError("gate model must map 4 features to 1 output");
  if (!(cfg_.tolerance > 0.0)) throw ConfigError("gate tolerance must be > 0");
  if (!(cfg_.epochDuration > 0.0)) throw ConfigError("epochDuration must be > 0");
}

double NeuralGate::predict(const Message& m, NodeId current) const {
  const Key key{epoch_of(m.creationTime, cfg_.epochDuration), m.from.value, m.to.value,
                current.value};
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  const std::array<double, 4> x{static_cast<double>(key[0]), static_cast<double>(key[1]),
                                static_cast<double>(key[2]), static_cast<double>(key[3])};
  const double y = mlp_forward(*cfg_.model, x)(0);
  cache_.emplace(key, y);
  return y;
}

bool NeuralGate::accepts(const Message& m, NodeId current, NodeId candidate) const {
  const double y = predict(m, current);
  const double c = candidate.value;
  return c > y - cfg_.tolerance && c < y + cfg_.tolerance;
}

std::vector<TransferIntent> neuraluna_select(const NodeView& host, const NodeView& peer,
                                             const NeuralGate& gate) {
  auto intents = prophet_select(host, peer);
  std::erase_if(intents, [&](const TransferIntent& i) {
    if (i.message->to == peer.id) return false;
    return !gate.accepts(*i.message, host.id, peer.id);
  });
  return intents;
}

void Router::on_contact_up(Router&, SimTime) {}

std::vector<TransferIntent> EpidemicRouter::select(const NodeView& host,
                                                   const NodeView& peer) const {
  return epidemic_select(host, peer);
}

ProphetRouter::ProphetRouter(NodeId owner, ProphetParams params) : table_(owner, params) {}

void ProphetRouter::on_contact_up(Router& peer, SimTime now) {
  auto* other = dynamic_cast<ProphetRouter*>(&peer);
  if (!other) return;
  prophet_on_encounter(table_, other->table_, now);
}

std::vector<TransferIntent> ProphetRouter::select(const NodeView& host,
                                                  const NodeView& peer) const {
  return prophet_select(host, peer);
}

NeuraLunaRouter::NeuraLunaRouter(NodeId owner, ProphetParams params, GateConfig gate)
    : ProphetRouter(owner, params), gate_(std::move(gate)) {}

std::vector<TransferIntent> NeuraLunaRouter::select(const NodeView& host,
                                                    const NodeView& peer) const {
  return neuraluna_select(host, peer, gate_);
}

}  // namespace lunadtn
