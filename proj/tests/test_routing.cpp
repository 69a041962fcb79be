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


#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>

#include "lunadtn/buffer.hpp"
#include "lunadtn/rng.hpp"
#include "lunadtn/routing.hpp"
#include "lunadtn/training.hpp"
#include "support.hpp"

using namespace lunadtn;
using support::message;

namespace {

// 0.98^10 by repeated multiplication.
double pow_by_hand(double base, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= base;
  return r;
}

MlpModel constant_model(double y) {
  return MlpModel({4, 1}, {Eigen::MatrixXd::Zero(1, 4)}, {Eigen::VectorXd::Constant(1, y)});
}

bool is_subsequence(const std::vector<TransferIntent>& sub, const std::vector<TransferIntent>& of) {
  std::size_t j = 0;
  for (const auto& x : sub) {
    while (j < of.size() && !(of[j] == x)) ++j;
    if (j == of.size()) return false;
    ++j;
  }
  return true;
}

std::vector<std::uint32_t> serials(const std::vector<TransferIntent>& intents) {
  std::vector<std::uint32_t> out;
  for (const auto& i : intents) out.push_back(i.message->serial);
  return out;
}

}  // namespace

TEST_CASE("prophet_direct_update") {
  CHECK(prophet_direct_update(0.0, 0.75) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(std::abs(prophet_direct_update(0.5, 0.75) - 0.875) < 1e-9);
  CHECK(prophet_direct_update(1.0, 0.75) == 1.0);
}

TEST_CASE("prophet_transitive_update") {
  CHECK(std::abs(prophet_transitive_update(0.0, 0.8, 0.9, 0.25) - 0.18) < 1e-9);
  CHECK(prophet_transitive_update(0.5, 0.0, 0.9, 0.25) == 0.5);
  CHECK(std::abs(prophet_transitive_update(0.5, 0.6, 0.5, 0.25) - 0.5375) < 1e-9);
}

TEST_CASE("prophet_age treats gamma as an exponent base") {
  CHECK(prophet_age(0.8, 0.98, 0.0, 1.0) == 0.8);
  CHECK(std::abs(prophet_age(0.8, 0.98, 10.0, 1.0) - 0.8 * pow_by_hand(0.98, 10)) < 1e-9);
  CHECK(std::abs(prophet_age(0.8, 0.98, 10.0, 1.0) - 0.6536582455100374) < 1e-9);
  CHECK(std::abs(prophet_age(0.5, 0.5, 1.0, 1.0) - 0.25) < 1e-12);
  CHECK(std::abs(prophet_age(0.5, 0.5, 60.0, 30.0) - 0.125) < 1e-12);
}

TEST_CASE("property: update formulas are monotone and stay in [0, 1]") {
  Rng rng(31);
  for (int i = 0; i < 5000; ++i) {
    double p1 = rng.uniform01(), p2 = rng.uniform01();
    if (p1 > p2) std::swap(p1, p2);
    const double pInit = rng.uniform01(), ab = rng.uniform01(), bc = rng.uniform01();
    const double beta = rng.uniform01(), gamma = rng.uniform(1e-3, 1.0);
    CHECK(prophet_direct_update(p1, pInit) <= prophet_direct_update(p2, pInit));
    CHECK(prophet_direct_update(p1, pInit) >= p1);
    CHECK(prophet_direct_update(p2, pInit) <= 1.0);
    CHECK(prophet_transitive_update(p1, ab, bc, beta) <= prophet_transitive_update(p2, ab, bc, beta));
    CHECK(prophet_transitive_update(p1, ab, bc, beta) >= p1);
    CHECK(prophet_transitive_update(p2, ab, bc, beta) <= 1.0);
    double e1 = rng.uniform(0.0, 100.0), e2 = rng.uniform(0.0, 100.0);
    if (e1 > e2) std::swap(e1, e2);
    CHECK(prophet_age(p2, gamma, e2, 1.0) <= prophet_age(p2, gamma, e1, 1.0));
    CHECK(prophet_age(p2, gamma, e1, 1.0) <= p2);
    CHECK(prophet_age(p2, gamma, e2, 1.0) >= 0.0);
  }
}

TEST_CASE("validate_prophet_params") {
  CHECK_NOTHROW(validate_prophet_params({}));
  CHECK_THROWS_AS(validate_prophet_params({.pInit = 0.0}), ValidationError);
  CHECK_THROWS_AS(validate_prophet_params({.beta = 1.5}), ValidationError);
  CHECK_THROWS_AS(validate_prophet_params({.gamma = 0.0}), ValidationError);
  CHECK_THROWS_AS(validate_prophet_params({.agingUnit = 0.0}), ValidationError);
}

TEST_CASE("PredictabilityTable reads missing entries as 0 and ages lazily") {
  PredictabilityTable t(NodeId{0}, {.gamma = 0.5, .agingUnit = 1.0});
  CHECK(t.get(NodeId{3}) == 0.0);
  t.set(NodeId{3}, 0.8, 10.0);
  t.age_to(12.0);
  CHECK(t.get(NodeId{3}) == doctest::Approx(0.2));
  CHECK(t.entries().at(NodeId{3}).lastAged == 12.0);
  t.age_to(11.0);  // never ages backwards
  CHECK(t.get(NodeId{3}) == doctest::Approx(0.2));
  t.set(NodeId{4}, 1.7, 12.0);
  CHECK(t.get(NodeId{4}) == 1.0);
}

TEST_CASE("prophet_on_encounter between empty tables") {
  PredictabilityTable a(NodeId{0}), b(NodeId{1});
  prophet_on_encounter(a, b, 5.0);
  REQUIRE(a.entries().size() == 1);
  REQUIRE(b.entries().size() == 1);
  CHECK(a.get(NodeId{1}) == doctest::Approx(0.75));
  CHECK(b.get(NodeId{0}) == doctest::Approx(0.75));
}

TEST_CASE("prophet_on_encounter composes direct then transitive updates") {
  PredictabilityTable a(NodeId{0}), b(NodeId{1});
  a.set(NodeId{2}, 0.9, 0.0);
  prophet_on_encounter(a, b, 0.0);
  CHECK(std::abs(b.get(NodeId{2}) - 0.16875) < 1e-12);
  CHECK(a.get(NodeId{2}) == doctest::Approx(0.9));
  // The owner never gains an entry for itself through the peer.
  CHECK_FALSE(b.entries().contains(NodeId{1}));
  CHECK_FALSE(a.entries().contains(NodeId{0}));
}

TEST_CASE("prophet_on_encounter re-encounter at the same instant does not age") {
  PredictabilityTable a(NodeId{0}), b(NodeId{1});
  prophet_on_encounter(a, b, 3.0);
  prophet_on_encounter(a, b, 3.0);
  CHECK(a.get(NodeId{1}) == doctest::Approx(prophet_direct_update(0.75, 0.75)));
  CHECK_THROWS_AS(prophet_on_encounter(a, a, 3.0), ValidationError);
}

TEST_CASE("prophet_on_encounter ages both tables first") {
  ProphetParams p{.gamma = 0.5, .agingUnit = 1.0};
  PredictabilityTable a(NodeId{0}, p), b(NodeId{1}, p);
  a.set(NodeId{1}, 0.8, 0.0);
  prophet_on_encounter(a, b, 1.0);
  CHECK(a.get(NodeId{1}) == doctest::Approx(0.4 + 0.6 * 0.75));
}

namespace {

PredictabilityTable random_table(Rng& rng, NodeId owner, int nodes, SimTime upTo) {
  PredictabilityTable t(owner, {.agingUnit = 5.0});
  for (int d = 0; d < nodes; ++d) {
    if (NodeId(d) == owner || rng.uniform01() < 0.4) continue;
    t.set(NodeId(d), rng.uniform01(), rng.uniform(0.0, upTo));
  }
  return t;
}

}  // namespace

TEST_CASE("property: prophet_on_encounter is symmetric in argument order") {
  Rng rng(37);
  for (int i = 0; i < 500; ++i) {
    auto a = random_table(rng, NodeId{0}, 8, 50.0);
    auto b = random_table(rng, NodeId{1}, 8, 50.0);
    auto a2 = a, b2 = b;
    const double now = rng.uniform(50.0, 100.0);
    prophet_on_encounter(a, b, now);
    prophet_on_encounter(b2, a2, now);
    CHECK(a == a2);
    CHECK(b == b2);
  }
}

TEST_CASE("property: predictabilities stay in [0, 1] under random operations") {
  Rng rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<PredictabilityTable> tables;
    for (std::uint32_t n = 0; n < 6; ++n)
      tables.emplace_back(NodeId{n}, ProphetParams{.pInit = rng.uniform(0.01, 1.0),
                                                   .beta = rng.uniform01(),
                                                   .gamma = rng.uniform(0.01, 1.0),
                                                   .agingUnit = rng.uniform(0.1, 10.0)});
    SimTime now = 0.0;
    for (int op = 0; op < 300; ++op) {
      now += rng.uniform(0.0, 5.0);
      const auto i = rng.uniform_int(0, 5), j = rng.uniform_int(0, 5);
      if (rng.uniform01() < 0.3 || i == j) {
        tables[i].age_to(now);
      } else {
        prophet_on_encounter(tables[i], tables[j], now);
      }
      for (const auto& t : tables) {
        for (const auto& [_, e] : t.entries()) {
          CHECK(e.p >= 0.0);
          CHECK(e.p <= 1.0);
        }
      }
    }
  }
}

TEST_CASE("epidemic_select floods every missing message in creation order") {
  MessageStore host(10'000), peer(10'000);
  host.buffer.push(message(2, 0, 9, 10, 5.0), 5.0);
  host.buffer.push(message(1, 0, 9, 10, 1.0), 6.0);
  NodeView hv{NodeId{0}, host, nullptr}, pv{NodeId{1}, peer, nullptr};
  CHECK(serials(epidemic_select(hv, pv)) == std::vector<std::uint32_t>{1, 2});
  for (auto& i : epidemic_select(hv, pv)) CHECK(i.peer == NodeId{1});

  peer.buffer.push(message(1, 0, 9, 10, 1.0), 0.0);
  peer.delivered.insert(2);
  CHECK(epidemic_select(hv, pv).empty());

  MessageStore empty(100);
  NodeView ev{NodeId{0}, empty, nullptr};
  CHECK(epidemic_select(ev, pv).empty());
}

TEST_CASE("epidemic_select breaks creation-time ties by id") {
  MessageStore host(10'000), peer(10'000);
  auto a = message(0, 0, 9, 10, 1.0);
  a.id = "Mb";
  auto b = message(1, 0, 9, 10, 1.0);
  b.id = "Ma";
  host.buffer.push(a, 0.0);
  host.buffer.push(b, 0.0);
  NodeView hv{NodeId{0}, host, nullptr}, pv{NodeId{1}, peer, nullptr};
  CHECK(serials(epidemic_select(hv, pv)) == std::vector<std::uint32_t>{1, 0});
}

TEST_CASE("property: repeated flooding converges to no intents") {
  Rng rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    MessageStore host(1'000'000), peer(1'000'000);
    for (std::uint32_t k = 0; k < 30; ++k) {
      const double t = static_cast<double>(k);
      if (rng.uniform01() < 0.6) host.buffer.push(message(k, 0, 9, 10, t), t);
      if (rng.uniform01() < 0.3) peer.buffer.push(message(k, 0, 9, 10, t), t);
    }
    NodeView hv{NodeId{0}, host, nullptr}, pv{NodeId{1}, peer, nullptr};
    auto intents = epidemic_select(hv, pv);
    for (const auto& i : intents) CHECK_FALSE(peer.holds(i.message->serial));
    std::size_t expected = 0;
    for (const auto& e : host.buffer.entries()) expected += !peer.holds(e.message.serial);
    CHECK(intents.size() == expected);
    for (const auto& i : intents) peer.delivered.insert(i.message->serial);
    CHECK(epidemic_select(hv, pv).empty());
  }
}

TEST_CASE("prophet_select forwards only on strictly higher peer predictability") {
  MessageStore host(10'000), peer(10'000);
  PredictabilityTable ht(NodeId{0}), pt(NodeId{1});
  host.buffer.push(message(1, 0, 7, 10, 1.0), 0.0);
  host.buffer.push(message(2, 0, 8, 10, 2.0), 0.0);
  host.buffer.push(message(3, 0, 9, 10, 3.0), 0.0);
  ht.set(NodeId{7}, 0.4, 0.0);
  pt.set(NodeId{7}, 0.6, 0.0);
  ht.set(NodeId{8}, 0.5, 0.0);
  pt.set(NodeId{8}, 0.5, 0.0);
  pt.set(NodeId{9}, 0.9, 0.0);
  NodeView hv{NodeId{0}, host, &ht}, pv{NodeId{1}, peer, &pt};
  CHECK(serials(prophet_select(hv, pv)) == std::vector<std::uint32_t>{3, 1});

  peer.buffer.push(message(3, 0, 9, 10, 3.0), 0.0);
  CHECK(serials(prophet_select(hv, pv)) == std::vector<std::uint32_t>{1});
}

TEST_CASE("prophet_select puts messages for the peer itself first") {
  MessageStore host(10'000), peer(10'000);
  PredictabilityTable ht(NodeId{0}), pt(NodeId{1});
  host.buffer.push(message(1, 0, 7, 10, 1.0), 0.0);
  host.buffer.push(message(2, 0, 1, 10, 2.0), 0.0);
  pt.set(NodeId{7}, 0.6, 0.0);
  NodeView hv{NodeId{0}, host, &ht}, pv{NodeId{1}, peer, &pt};
  CHECK(serials(prophet_select(hv, pv)) == std::vector<std::uint32_t>{2, 1});
  NodeView bare{NodeId{1}, peer, nullptr};
  CHECK_THROWS_AS(prophet_select(hv, bare), ConfigError);
}

TEST_CASE("neuraluna_gate uses strict bounds on both sides") {
  CHECK(neuraluna_gate(constant_model(7.3), 0, NodeId{0}, NodeId{9}, NodeId{0}, NodeId{5}, 5.0));
  CHECK(neuraluna_gate(constant_model(7.3), 0, NodeId{0}, NodeId{9}, NodeId{0}, NodeId{12}, 5.0));
  CHECK_FALSE(
      neuraluna_gate(constant_model(7.0), 0, NodeId{0}, NodeId{9}, NodeId{0}, NodeId{12}, 5.0));
  CHECK_FALSE(
      neuraluna_gate(constant_model(7.0), 0, NodeId{0}, NodeId{9}, NodeId{0}, NodeId{2}, 5.0));
  CHECK(neuraluna_gate(constant_model(10.0), 0, NodeId{0}, NodeId{9}, NodeId{0}, NodeId{10}, 1e-6));
}

TEST_CASE("neuraluna_gate feeds [epoch, from, to, current] to the model") {
  Eigen::MatrixXd w(1, 4);
  w << 1000.0, 100.0, 10.0, 1.0;
  MlpModel m({4, 1}, {w}, {Eigen::VectorXd::Zero(1)});
  // y = 1000*1 + 100*2 + 10*3 + 4 = 1234
  CHECK(neuraluna_gate(m, 1, NodeId{2}, NodeId{3}, NodeId{4}, NodeId{1234}, 0.5));
  CHECK_FALSE(neuraluna_gate(m, 1, NodeId{2}, NodeId{3}, NodeId{5}, NodeId{1234}, 0.5));
}

TEST_CASE("neuraluna_gate rejects models that are not 4 -> 1") {
  auto bad = MlpModel::zeros({3, 1});
  CHECK_THROWS_AS(neuraluna_gate(bad, 0, NodeId{0}, NodeId{1}, NodeId{0}, NodeId{1}, 5.0),
                  ConfigError);
  CHECK_THROWS_AS(NeuralGate({std::make_shared<MlpModel>(bad), 5.0, 3600.0}), ConfigError);
  CHECK_THROWS_AS(NeuralGate({nullptr, 5.0, 3600.0}), ConfigError);
  CHECK_THROWS_AS(NeuralGate({std::make_shared<MlpModel>(constant_model(1)), 0.0, 3600.0}),
                  ConfigError);
}

TEST_CASE("NeuralGate derives the epoch from the creation time") {
  Eigen::MatrixXd w(1, 4);
  w << 1.0, 0.0, 0.0, 0.0;
  auto model = std::make_shared<MlpModel>(MlpModel({4, 1}, {w}, {Eigen::VectorXd::Zero(1)}));
  NeuralGate gate({model, 0.5, 3600.0});
  auto m = message(0, 0, 9, 10, 12600.0);
  CHECK(gate.predict(m, NodeId{0}) == 3.0);
  CHECK(gate.accepts(m, NodeId{0}, NodeId{3}));
  CHECK_FALSE(gate.accepts(m, NodeId{0}, NodeId{4}));
  CHECK(gate.predict(m, NodeId{0}) == 3.0);  // cached
}

namespace {

struct GateFixture {
  MessageStore host{1'000'000}, peer{1'000'000};
  PredictabilityTable ht{NodeId{0}}, pt{NodeId{1}};
  NodeView hv{NodeId{0}, host, &ht};
  NodeView pv{NodeId{1}, peer, &pt};

  explicit GateFixture(Rng& rng) {
    for (std::uint32_t k = 0; k < 25; ++k) {
      const double t = static_cast<double>(k) * 100.0;
      const auto to = static_cast<std::uint32_t>(rng.uniform_int(1, 12));
      if (rng.uniform01() < 0.8) host.buffer.push(message(k, 0, to, 10, t), t);
      if (rng.uniform01() < 0.1) peer.delivered.insert(k);
    }
    for (std::uint32_t d = 2; d <= 12; ++d) {
      if (rng.uniform01() < 0.7) ht.set(NodeId{d}, rng.uniform01(), 0.0);
      if (rng.uniform01() < 0.7) pt.set(NodeId{d}, rng.uniform01(), 0.0);
    }
  }
};

}  // namespace

TEST_CASE("neuraluna_select with an accept-all gate equals prophet_select") {
  Rng rng(47);
  GateFixture f(rng);
  NeuralGate gate({std::make_shared<MlpModel>(constant_model(1.0)), 1e9, 3600.0});
  CHECK(neuraluna_select(f.hv, f.pv, gate) == prophet_select(f.hv, f.pv));
}

TEST_CASE("neuraluna_select with a reject-all gate keeps only deliveries to the peer") {
  Rng rng(53);
  GateFixture f(rng);
  NeuralGate gate({std::make_shared<MlpModel>(constant_model(1000.0)), 1.0, 3600.0});
  for (const auto& i : neuraluna_select(f.hv, f.pv, gate)) CHECK(i.message->to == f.pv.id);

  MessageStore noDirect(1'000);
  noDirect.buffer.push(message(0, 0, 5, 10, 0.0), 0.0);
  f.pt.set(NodeId{5}, 0.9, 0.0);
  NodeView hv{NodeId{0}, noDirect, &f.ht};
  REQUIRE_FALSE(prophet_select(hv, f.pv).empty());
  CHECK(neuraluna_select(hv, f.pv, gate).empty());
}

TEST_CASE("property: neuraluna_select is an ordered subsequence of prophet_select") {
  Rng rng(59);
  for (int trial = 0; trial < 200; ++trial) {
    GateFixture f(rng);
    auto model = std::make_shared<MlpModel>(MlpModel::random_uniform({4, 5, 1}, rng));
    model->bias(1)(0) = rng.uniform(-3.0, 3.0);
    NeuralGate gate({model, rng.uniform(0.2, 3.0), 1000.0});
    auto p = prophet_select(f.hv, f.pv);
    auto n = neuraluna_select(f.hv, f.pv, gate);
    CHECK(n.size() <= p.size());
    CHECK(is_subsequence(n, p));
  }
}

TEST_CASE("routers dispatch to their selection rules") {
  EpidemicRouter e;
  ProphetRouter a(NodeId{0}, {}), b(NodeId{1}, {});
  CHECK(e.name() == "epidemic");
  CHECK(a.name() == "prophet");
  CHECK(e.table() == nullptr);
  a.on_contact_up(b, 2.0);
  CHECK(a.table()->get(NodeId{1}) == doctest::Approx(0.75));
  CHECK(b.table()->get(NodeId{0}) == doctest::Approx(0.75));
  a.on_contact_up(e, 3.0);  // mixed routers do not exchange tables
  CHECK(a.table()->entries().size() == 1);

  NeuraLunaRouter n(NodeId{2}, {}, {std::make_shared<MlpModel>(constant_model(1.0)), 5.0, 3600.0});
  CHECK(n.name() == "neuraluna");
  n.on_contact_up(a, 4.0);
  CHECK(n.table()->get(NodeId{0}) == doctest::Approx(0.75));
}
