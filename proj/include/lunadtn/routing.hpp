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

#ifndef LUNADTN_ROUTING_HPP
#define LUNADTN_ROUTING_HPP

#include <array>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lunadtn/buffer.hpp"
#include "lunadtn/core.hpp"
#include "lunadtn/training.hpp"

namespace lunadtn {

struct ProphetParams {
  double pInit = 0.75;
  double beta = 0.25;
  double gamma = 0.98;
  double agingUnit = 1.0;  // seconds per aging step

  friend bool operator==(const ProphetParams&, const ProphetParams&) = default;
};

void validate_prophet_params(const ProphetParams& p);

/// p + (1 - p) * pInit
double prophet_direct_update(double p, double pInit);

/// pAC + (1 - pAC) * pAB * pBC * beta
double prophet_transitive_update(double pAC, double pAB, double pBC, double beta);

/// p * gamma^(elapsed / agingUnit)
double prophet_age(double p, double gamma, double elapsed, double agingUnit);

/// A node's delivery predictabilities towards every destination it has
/// evidence for. Missing destinations read as 0.
class PredictabilityTable {
 public:
  struct Entry {
    double p = 0.0;
    SimTime lastAged = 0.0;

    friend bool operator==(const Entry&, const Entry&) = default;
  };

  explicit PredictabilityTable(NodeId owner, ProphetParams params = {});

  NodeId owner() const { return owner_; }
  const ProphetParams& params() const { return params_; }
  const std::map<NodeId, Entry>& entries() const { return entries_; }

  double get(NodeId destination) const;

  /// Stores p (clamped into [0, 1]) and stamps it as aged at `now`.
  void set(NodeId destination, double p, SimTime now);

  /// Ages every entry from its lastAged stamp to `now`.
  void age_to(SimTime now);

  friend bool operator==(const PredictabilityTable&, const PredictabilityTable&) = default;

 private:
  NodeId owner_;
  ProphetParams params_;
  std::map<NodeId, Entry> entries_;
};

/// Symmetric encounter update: age both tables to `now`, apply the direct
/// update towards each other, then the transitive update through the peer
/// using the peer's post-direct snapshot.
void prophet_on_encounter(PredictabilityTable& a, PredictabilityTable& b, SimTime now);

/// What a router may inspect about a node when choosing transfers.
struct NodeView {
  NodeId id;
  const MessageStore& store;
  const PredictabilityTable* table = nullptr;
};

struct TransferIntent {
  const Message* message = nullptr;
  NodeId peer;

  friend bool operator==(const TransferIntent&, const TransferIntent&) = default;
};

/// Every buffered message the peer lacks, by creation time then id.
std::vector<TransferIntent> epidemic_select(const NodeView& host, const NodeView& peer);

/// Messages addressed to the peer come first (creation time, id); then every
/// other message the peer lacks for which P_peer(dest) > P_host(dest),
/// by descending P_peer(dest), then creation time, then id.
/// Both views must carry tables.
std::vector<TransferIntent> prophet_select(const NodeView& host, const NodeView& peer);

/// True when `candidate` lies strictly within `tolerance` of the model's
/// regressed next hop for features [epoch, from, to, current].
bool neuraluna_gate(const MlpModel& model, std::int64_t epoch, NodeId from, NodeId to,
                    NodeId current, NodeId candidate, double tolerance);

struct GateConfig {
  std::shared_ptr<const MlpModel> model;
  double tolerance = 5.0;
  double epochDuration = 3600.0;
};

/// Memoizing wrapper around neuraluna_gate for one host.
class NeuralGate {
 public:
  explicit NeuralGate(GateConfig cfg);

  const GateConfig& config() const { return cfg_; }

  /// The regressed next-hop id for a message held by `current`.
  double predict(const Message& m, NodeId current) const;
  bool accepts(const Message& m, NodeId current, NodeId candidate) const;

 private:
  using Key = std::array<std::int64_t, 4>;
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
  };

  GateConfig cfg_;
  mutable std::unordered_map<Key, double, KeyHash> cache_;
};

/// prophet_select restricted to intents the gate accepts, order preserved.
/// Messages addressed to the peer itself bypass the gate.
std::vector<TransferIntent> neuraluna_select(const NodeView& host, const NodeView& peer,
                                             const NeuralGate& gate);

/// Per-node routing behaviour driven by the simulation loop.
class Router {
 public:
  virtual ~Router() = default;

  virtual std::string_view name() const = 0;

  /// Called once per new contact, for the pair.
  virtual void on_contact_up(Router& peer, SimTime now);

  /// Transfer choices for the contact host -> peer, most preferred first.
  virtual std::vector<TransferIntent> select(const NodeView& host, const NodeView& peer) const = 0;

  virtual const PredictabilityTable* table() const { return nullptr; }
};

class EpidemicRouter final : public Router {
 public:
  std::string_view name() const override { return "epidemic"; }
  std::vector<TransferIntent> select(const NodeView& host, const NodeView& peer) const override;
};

class ProphetRouter : public Router {
 public:
  ProphetRouter(NodeId owner, ProphetParams params);

  std::string_view name() const override { return "prophet"; }
  void on_contact_up(Router& peer, SimTime now) override;
  std::vector<TransferIntent> select(const NodeView& host, const NodeView& peer) const override;
  const PredictabilityTable* table() const override { return &table_; }

 private:
  PredictabilityTable table_;
};

class NeuraLunaRouter final : public ProphetRouter {
 public:
  NeuraLunaRouter(NodeId owner, ProphetParams params, GateConfig gate);

  std::string_view name() const override { return "neuraluna"; }
  std::vector<TransferIntent> select(const NodeView& host, const NodeView& peer) const override;
  const NeuralGate& gate() const { return gate_; }

 private:
  NeuralGate gate_;
};

}  // namespace lunadtn

#endif  // LUNADTN_ROUTING_HPP
