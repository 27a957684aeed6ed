#pragma once

#include <cstdint>
#include <random>

namespace closurium {

// Seeded generator with implementation-independent bounded draws, so that
// reports and fuzz runs reproduce byte-identically across platforms.
class rng {
public:
  explicit rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // uniform-ish draw in [0, n); n > 0
  std::uint64_t next(std::uint64_t n) { return gen_() % n; }

  // true with probability num/den
  bool chance(std::uint64_t num, std::uint64_t den) { return next(den) < num; }

private:
  std::mt19937_64 gen_;
};

} // namespace closurium
