/*
 * Copyright 2026 The dbl Authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <random>

namespace dbl {

// A seeded random stream. Every draw goes through uniform() so the number of
// engine calls per operation is fixed and documented.
class Stream {
 public:
  explicit Stream(std::uint64_t seed);
  Stream(std::uint64_t master_seed, std::uint64_t replication, std::uint64_t substream);

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  // Uniform on (0, 1].
  double uniform_pos() { return 1.0 - uniform(); }
  // Standard normal via Box-Muller; consumes exactly two uniforms.
  double normal();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// Sub-stream ids used by the simulator so that, for instance, changing the
// delay model leaves the covariate sequence untouched.
enum class Substream : std::uint64_t {
  kCovariates = 1,
  kNoise = 2,
  kDelays = 3,
  kSelection = 4,
  kDiagnostics = 5,
};

}  // namespace dbl
