// Copyright 2026 The primesquare Authors
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "primesquare/error.hpp"

namespace primesquare {

// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitInvalidConfig = 1,
  kExitExhausted = 2,
  kExitSmallObstruction = 3,
  kExitResource = 4,
  kExitCheckFailed = 5,  // verify / diagcheck ran but the check did not hold
};

inline constexpr int kSchemaVersion = 1;

struct RunConfig {
  std::string subcommand;
  std::int64_t q0 = 5;
  std::int64_t max = 0;  // scan: largest q0; local: largest p
  std::int64_t w = 7;
  double shrink = 0.6;
  double support = 0.85;
  std::int64_t X = 128;
  double delta = 0.5;
  std::uint64_t budget = 100'000'000;
  std::string strategy = "lex";
  std::string weight = "theta";
  std::string star = "1";
  std::int64_t d = 1;
  std::int64_t Q = 100;
  std::string square;  // verify
  unsigned threads = 0;  // 0: hardware concurrency
  std::filesystem::path out = ".";
};

// Maps library errors to exit codes.
int exit_code_for(ErrorKind kind);

// Runs one subcommand, writes its CSV/JSON outputs and manifest.json into
// config.out, and prints a short summary to `log`.
int dispatch(const RunConfig& config, std::ostream& log);

// Parses argv into a RunConfig and dispatches it.
int run_cli(int argc, char** argv);

// Writes `contents` to `path` through a temporary file and a rename.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace primesquare
