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

#ifndef LUNADTN_CLI_HPP
#define LUNADTN_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "lunadtn/core.hpp"
#include "lunadtn/scenario.hpp"

namespace lunadtn {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitValidation = 2, kExitRuntime = 3 };

/// Entry point shared by the `lunadtn` binary and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct CompareCell {
  RouterKind router = RouterKind::Prophet;
  ByteCount bufferSize = 0;
  Counters counters;
};

/// Runs routers x bufferSizes on copies of `base`, all with the same seed.
/// Cells are ordered router-major.
std::vector<CompareCell> run_compare(const Scenario& base, const std::vector<RouterKind>& routers,
                                     const std::vector<ByteCount>& bufferSizes,
                                     std::uint64_t seed);

/// One block per router, one column per buffer size, five metric rows.
std::string format_compare_table(const std::vector<CompareCell>& cells);

/// "50M", "1500k", "123" - the shortest exact decimal-suffix spelling.
std::string format_byte_count(ByteCount bytes);

}  // namespace lunadtn

#endif  // LUNADTN_CLI_HPP
