#pragma once

#include <vector>

#include "cbond/phy.hpp"

namespace cbond {

struct coloring_result {
  int n_colors = 0;
  std::vector<int> color;  // 0-based color per vertex

  std::vector<std::vector<int>> classes() const;  // vertices grouped by color
};

// Minimum proper coloring by branch and bound: deepen k until a backtracking
// search in vertex order succeeds, trying colors in ascending order, so the
// result is deterministic. Exponential in the worst case, hence the vertex
// cap; conflict groups here are tiny.
coloring_result exact_coloring(const std::vector<std::vector<bool>>& adj, int max_vertices = 24);

}  // namespace cbond
