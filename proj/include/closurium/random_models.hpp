#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "closurium/rng.hpp"
#include "closurium/spaces.hpp"

namespace closurium {

// Seeded quasi-discrete model: directed edges drawn independently with the
// given density (percent), atoms as fair random subsets.
inline point_model random_graph_model(std::uint64_t seed, std::size_t points,
                                      std::uint32_t density_percent,
                                      const std::vector<std::string>& atom_names = {"a", "b"}) {
  rng r(seed);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (std::size_t i = 0; i < points; ++i)
    for (std::size_t j = 0; j < points; ++j) {
      if (i == j) continue;
      if (r.chance(density_percent, 100))
        edges.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
    }
  point_model m;
  m.name = "random" + std::to_string(seed);
  m.space = point_space::make_graph(numbered_carrier(points), edges);
  const auto& alg = m.space.algebra();
  for (const auto& name : atom_names) m.atoms.emplace(name, alg.sample(r));
  return m;
}

// the 4-point frame with gamma: 0 -> {3}, 1 -> {2,3}, 2 -> {2}, 3 -> {3}
inline point_model four_point_frame(bool successor_closure) {
  point_model m;
  m.name = successor_closure ? "four-suc" : "four";
  m.space = point_space::make_kripke(numbered_carrier(4), {{3}, {2, 3}, {2}, {3}},
                                     successor_closure);
  m.atoms.emplace("a", m.space.algebra().from_names({"2", "3"}));
  return m;
}

// directed chain 0 -> 1 -> ... -> n-1
inline point_model chain_model(std::size_t n) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (std::size_t i = 0; i + 1 < n; ++i)
    edges.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i + 1));
  point_model m;
  m.name = "chain" + std::to_string(n);
  m.space = point_space::make_graph(numbered_carrier(n), edges);
  return m;
}

} // namespace closurium
