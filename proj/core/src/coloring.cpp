#include "cbond/coloring.hpp"

#include <algorithm>
#include <string>

namespace cbond {

std::vector<std::vector<int>> coloring_result::classes() const {
  std::vector<std::vector<int>> out(n_colors);
  for (int v = 0; v < static_cast<int>(color.size()); ++v) out[color[v]].push_back(v);
  return out;
}

namespace {

bool colorable(const std::vector<std::vector<bool>>& adj, int k, int v, std::vector<int>& color) {
  if (v == static_cast<int>(adj.size())) return true;
  for (int c = 0; c < k; ++c) {
    bool ok = true;
    for (int u = 0; u < v; ++u)
      if (adj[v][u] && color[u] == c) {
        ok = false;
        break;
      }
    if (!ok) continue;
    color[v] = c;
    if (colorable(adj, k, v + 1, color)) return true;
  }
  color[v] = -1;
  return false;
}

// A greedily grown clique gives a cheap lower bound that prunes the
// deepening loop.
int greedy_clique_bound(const std::vector<std::vector<bool>>& adj) {
  const int n = static_cast<int>(adj.size());
  int best = n == 0 ? 0 : 1;
  for (int seed = 0; seed < n; ++seed) {
    std::vector<int> clique{seed};
    for (int v = 0; v < n; ++v) {
      if (v == seed) continue;
      bool joins = true;
      for (int u : clique)
        if (!adj[v][u]) {
          joins = false;
          break;
        }
      if (joins) clique.push_back(v);
    }
    best = std::max(best, static_cast<int>(clique.size()));
  }
  return best;
}

}  // namespace

coloring_result exact_coloring(const std::vector<std::vector<bool>>& adj, int max_vertices) {
  const int n = static_cast<int>(adj.size());
  if (n > max_vertices)
    throw model_error("exact coloring limited to " + std::to_string(max_vertices) + " vertices");
  coloring_result res;
  if (n == 0) return res;
  for (int k = greedy_clique_bound(adj); k <= n; ++k) {
    std::vector<int> color(n, -1);
    if (colorable(adj, k, 0, color)) {
      res.n_colors = k;
      res.color = std::move(color);
      return res;
    }
  }
  throw model_error("coloring search failed");  // unreachable: k = n always works
}

}  // namespace cbond
