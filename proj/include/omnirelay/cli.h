// Copyright 2026 The Omnirelay Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OMNIRELAY_CLI_H_
#define OMNIRELAY_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "omnirelay/topology.h"

namespace omnirelay {

inline constexpr const char* kSchemaVersion = "1";

enum class Command { kAnalyze, kSimulate, kSweep, kBinDemo };
enum class OutputFormat { kCsv, kJson };

struct TopologySource {
  std::string file;  // takes precedence over the preset when set
  std::string preset = "regular-line";  // regular-line | line | ring | arc
  int n = 6;
  double d0 = 1.0;
  std::string gain = "pl:2";
  double power = 10.0;
  double noise = 1.0;
  std::vector<double> positions;  // line preset coordinates
  double radius = 0.0;            // arc preset; <= 0 picks the default
};

struct ExperimentConfig {
  Command command = Command::kAnalyze;
  TopologySource topology;
  std::optional<double> rate;  // unset: bisection ("auto")
  int blocks = 0;              // 0: 2n
  uint64_t seed = 1;
  int samples = 100;           // random rates for the regular-line check
  std::string out;             // empty: the output stream passed to run()
  OutputFormat format = OutputFormat::kCsv;
  std::vector<int> sweep_n;
  std::vector<std::string> sweep_gain;
  std::vector<int> sizes;      // bin-demo alphabets / simulate payload sizes

  // Throws kInvalidArgument on inconsistent settings.
  void validate() const;
};

// Parses argv. Throws Error(kParse) for malformed command lines.
ExperimentConfig parse_args(int argc, const char* const* argv);

// Structured-text topology:
//   nodes <n>
//   gain pl:<alpha> | exp:<gamma> | const
//   power <P>
//   noise <N>
//   pos <id> <x> [<y>]        (ids 1-based; either pos or dist rows)
//   dist <i> <j> <d>          (every unordered pair once)
//   hop <id> [<neighbor> ...] (optional explicit one-hop sets)
// '#' starts a comment. gain/power/noise fall back to `defaults`. Without
// hop rows a line-ordered topology gets two-sided neighbors along its
// distance ordering.
Topology parse_topology(const std::string& text, const TopologySource& defaults);
Topology load_topology(const TopologySource& source);

// Executes the command and writes its report. Returns the process exit code;
// failures print one line "error: code=<CODE> detail=<text>" to `err`.
int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

// parse_args + run, including --help handling.
int main_entry(int argc, const char* const* argv, std::ostream& out,
               std::ostream& err);

}  // namespace omnirelay

#endif  // OMNIRELAY_CLI_H_
