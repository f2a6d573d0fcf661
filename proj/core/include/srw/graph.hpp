#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace srw::graph {

/// Directed graph as adjacency lists over vertices 0..n-1.
using Adjacency = std::vector<std::vector<std::size_t>>;

/// Edge j -> i for every entry (i, j) > 0 of a column-stochastic pattern.
Adjacency from_column_pattern(const Eigen::MatrixXd& pattern);

/// Strongly connected component id per vertex (Tarjan, iterative).
std::vector<std::size_t> strongly_connected_components(const Adjacency& adj,
                                                       std::size_t* component_count = nullptr);

/// Number of SCCs with no edge leaving them, i.e. the recurrent classes of
/// a Markov chain with this transition graph.
std::size_t terminal_component_count(const Adjacency& adj);

}  // namespace srw::graph

namespace srw::graph {

/// Recurrent classes of the chain with column-stochastic matrix M, counted
/// on the nonzero pattern of M.
inline std::size_t recurrent_class_count(const Eigen::MatrixXd& m) {
  return terminal_component_count(from_column_pattern(m));
}

}  // namespace srw::graph
