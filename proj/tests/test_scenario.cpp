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

#include "lunadtn/scenario.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace lunadtn;

namespace {

const char* kSmall = R"(# two groups
duration = 600
bufferSize = 2M
msgInterval = 30
msgSizeRange = 1k, 2k
ttl = 120
router = epidemic
seed = 9
stepInterval = 0.5
prophet.gamma = 0.9

[group.a]
count = 3
mobility = static 10 20
interfaceRange = 50
interfaceBandwidth = 10k

[group.g]
count = 1
mobility = trace sub dir/moves.trace
interfaceRange = 80
interfaceBandwidth = 1M
)";

}  // namespace

TEST_CASE("parse_scenario reads globals, groups and router settings") {
  Scenario s = parse_scenario(kSmall, "/base");
  CHECK(s.duration == 600.0);
  CHECK(s.bufferSize == 2'000'000);
  CHECK(s.msgInterval == 30.0);
  CHECK(s.msgSizeRange == std::pair<ByteCount, ByteCount>{1000, 2000});
  REQUIRE(s.ttl.has_value());
  CHECK(*s.ttl == 120.0);
  CHECK(s.router.kind == RouterKind::Epidemic);
  CHECK(s.seed == 9);
  CHECK(s.stepInterval == 0.5);
  CHECK(s.router.prophet.gamma == 0.9);
  CHECK(s.router.prophet.pInit == 0.75);
  REQUIRE(s.groups.size() == 2);
  CHECK(s.groups[0].prefix == 'a');
  CHECK(s.groups[0].count == 3);
  CHECK(std::get<StaticMobility>(s.groups[0].mobility).position == Position{10, 20});
  CHECK(s.groups[1].interfaceBandwidth == 1e6);
  CHECK(std::get<TraceMobility>(s.groups[1].mobility).traceFile == "sub dir/moves.trace");
  CHECK(s.node_count() == 4);
  CHECK(s.resolve("sub dir/moves.trace") == std::filesystem::path("/base/sub dir/moves.trace"));
  CHECK(s.resolve("/abs/x") == std::filesystem::path("/abs/x"));
  CHECK_NOTHROW(validate_scenario(s));
}

TEST_CASE("parse_scenario syntax errors carry line numbers") {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse_scenario(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("duration = 5\nbogus = 1\n") == 2);
  CHECK(line_of("duration = 5\nduration = 6\n") == 2);
  CHECK(line_of("duration\n") == 1);
  CHECK(line_of("duration =\n") == 1);
  CHECK(line_of("[group.ab]\n") == 1);
  CHECK(line_of("[group.a]\nspeed = 3\n") == 2);
  CHECK(line_of("[group.a]\nmobility = walk\n") == 2);
  CHECK(line_of("msgSizeRange = 5\n") == 1);
  CHECK(line_of("duration = soon\n") == 1);
  CHECK_THROWS_AS(parse_scenario("router = flood\n"), ParseError);
}

TEST_CASE("validate_scenario catches invalid configurations") {
  Scenario base = parse_scenario(kSmall);
  auto bad = base;
  bad.duration = 0;
  CHECK_THROWS_AS(validate_scenario(bad), ValidationError);
  bad = base;
  bad.bufferSize = 0;
  CHECK_THROWS_AS(validate_scenario(bad), ValidationError);
  bad = base;
  bad.msgSizeRange = {10, 5};
  CHECK_THROWS_AS(validate_scenario(bad), ValidationError);
  bad = base;
  bad.groups[1].prefix = 'a';
  CHECK_THROWS_AS(validate_scenario(bad), ValidationError);
  bad = base;
  bad.groups.resize(1);
  bad.groups[0].count = 1;
  CHECK_THROWS_AS(validate_scenario(bad), ValidationError);
  bad = base;
  bad.groups[0].interfaceBandwidth = 0;
  CHECK_THROWS_AS(validate_scenario(bad), ValidationError);
  bad = base;
  bad.router.kind = RouterKind::NeuraLuna;
  CHECK_THROWS_AS(validate_scenario(bad), ConfigError);
  bad.router.modelFile = "m.model";
  CHECK_NOTHROW(validate_scenario(bad));
  bad.router.tolerance = 0.0;
  CHECK_THROWS_AS(validate_scenario(bad), ConfigError);
  bad = base;
  bad.router.prophet.beta = 2.0;
  CHECK_THROWS_AS(validate_scenario(bad), ValidationError);
}

TEST_CASE("parse_byte_count uses decimal suffixes") {
  CHECK(parse_byte_count("50M") == 50'000'000);
  CHECK(parse_byte_count("100M") == 100'000'000);
  CHECK(parse_byte_count("500k") == 500'000);
  CHECK(parse_byte_count("1.5G") == 1'500'000'000);
  CHECK(parse_byte_count("123") == 123);
  CHECK_THROWS_AS(parse_byte_count("12Q"), ParseError);
  CHECK_THROWS_AS(parse_byte_count("-5"), ParseError);
  CHECK_THROWS_AS(parse_byte_count(""), ParseError);
}

TEST_CASE("router kinds round trip through their names") {
  for (auto k : {RouterKind::Epidemic, RouterKind::Prophet, RouterKind::NeuraLuna})
    CHECK(parse_router_kind(router_kind_name(k)) == k);
}

TEST_CASE("the bundled scenario has the expected shape") {
  Scenario s = load_scenario(oracle::bundled_scenario());
  CHECK(s.node_count() == 151);
  CHECK(s.duration == 1800.0);
  CHECK(s.bufferSize == 50'000'000);
  CHECK(s.msgInterval == 7.4);
  CHECK(s.groups.back().count == 1);
  CHECK_NOTHROW(validate_scenario(s));
  CHECK(std::filesystem::exists(
      s.resolve(std::get<TraceMobility>(s.groups[0].mobility).traceFile)));
}
