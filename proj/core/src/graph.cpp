#include "srw/graph.hpp"

#include <algorithm>
#include <limits>

namespace srw::graph {

Adjacency from_column_pattern(const Eigen::MatrixXd& pattern) {
  const auto n = static_cast<std::size_t>(pattern.cols());
  Adjacency adj(n);
  for (Eigen::Index j = 0; j < pattern.cols(); ++j) {
    for (Eigen::Index i = 0; i < pattern.rows(); ++i) {
      if (pattern(i, j) > 0.0) adj[static_cast<std::size_t>(j)].push_back(static_cast<std::size_t>(i));
    }
  }
  return adj;
}

std::vector<std::size_t> strongly_connected_components(const Adjacency& adj,
                                                       std::size_t* component_count) {
  constexpr auto kUnvisited = std::numeric_limits<std::size_t>::max();
  const std::size_t n = adj.size();
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0), comp(n, kUnvisited);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  // (vertex, next edge position) frames replace recursion.
  std::vector<std::pair<std::size_t, std::size_t>> frames;
  std::size_t next_index = 0, next_comp = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    frames.emplace_back(root, 0);
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;

    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      if (pos < adj[v].size()) {
        const std::size_t w = adj[v][pos++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const std::size_t done = v;
      frames.pop_back();
      if (!frames.empty()) {
        const std::size_t parent = frames.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
      if (low[done] == index[done]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = next_comp;
        } while (w != done);
        ++next_comp;
      }
    }
  }
  if (component_count) *component_count = next_comp;
  return comp;
}

std::size_t terminal_component_count(const Adjacency& adj) {
  std::size_t count = 0;
  const auto comp = strongly_connected_components(adj, &count);
  std::vector<bool> has_exit(count, false);
  for (std::size_t v = 0; v < adj.size(); ++v) {
    for (std::size_t w : adj[v]) {
      if (comp[w] != comp[v]) has_exit[comp[v]] = true;
    }
  }
  return static_cast<std::size_t>(std::count(has_exit.begin(), has_exit.end(), false));
}

}  // namespace srw::graph
