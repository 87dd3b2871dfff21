// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace v2g {

/// Named random streams derived from one 64-bit seed. Each stream is an
/// independent mt19937_64 so adding draws to one never shifts another.
class RngStreams {
public:
  using Engine = std::mt19937_64;

  explicit RngStreams(std::uint64_t seed = 0)
      : seed_(seed), arrivals_(derive(seed, "arrivals")),
        specs_(derive(seed, "specs")), forecasts_(derive(seed, "forecasts")),
        loads_(derive(seed, "loads")), setpoint_(derive(seed, "setpoint")) {}

  std::uint64_t seed() const { return seed_; }

  Engine &arrivals() { return arrivals_; }
  Engine &specs() { return specs_; }
  Engine &forecasts() { return forecasts_; }
  Engine &loads() { return loads_; }
  Engine &setpoint() { return setpoint_; }

  /// splitmix64 finalizer over seed ^ fnv1a(name).
  static std::uint64_t derive(std::uint64_t seed, std::string_view name) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : name) {
      h ^= c;
      h *= 1099511628211ull;
    }
    std::uint64_t z = seed ^ h;
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

private:
  std::uint64_t seed_;
  Engine arrivals_;
  Engine specs_;
  Engine forecasts_;
  Engine loads_;
  Engine setpoint_;
};

/// Uniform double in [0, 1) from the top 53 bits; independent of the
/// standard library's distribution implementation.
inline double uniform01(std::mt19937_64 &g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

} // namespace v2g
