// include/strongcrowd/rng.h

// Copyright 2026  The strongcrowd Authors

// See ../../COPYING for clarification regarding multiple authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef STRONGCROWD_RNG_H_
#define STRONGCROWD_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace strongcrowd {

// Seeded random stream.  The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; the mapping to doubles and bounded
// integers is done here rather than with the <random> distributions, whose
// algorithms differ between standard libraries.  Results are therefore
// identical on every platform for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent stream named by `label` under a parent seed.  Used to give
  // every stage, file, restart and (hit, worker) pair its own stream, so any
  // of them can be regenerated without replaying the others.
  static Rng Derive(std::uint64_t seed, std::string_view label);
  static std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view label);

  // Uniform in [0, 1).
  double Uniform();
  // Uniform in [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  bool Bernoulli(double p) { return Uniform() < p; }
  // Uniform integer in [0, n).  n must be positive.
  std::uint64_t Below(std::uint64_t n);

  std::uint64_t NextU64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// 64-bit FNV-1a; used for config fingerprints and stream labels.
std::uint64_t Fnv1a64(std::string_view data);

}  // namespace strongcrowd

#endif  // STRONGCROWD_RNG_H_
