#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "srw/hypermatrix.hpp"
#include "srw/simulate.hpp"
#include "srw/stochastic_vector.hpp"

namespace srw::io {

// Hypermatrix text format:
//
//   srw-hypermatrix v1 order=<m> dim=<N>
//   <row 1 of the flattening: N^(m-1) probabilities>
//   ...
//   <row N>
//
// Probabilities are decimals or fractions like 2/3. Columns whose sum is
// within kStochasticTol of one are rescaled to sum to one.
TransitionHypermatrix read_hypermatrix(std::istream& in);
void write_hypermatrix(std::ostream& out, const TransitionHypermatrix& h);

// Trajectory text format: one trajectory per line, whitespace-separated
// 1-based states, X(0) first. Blank lines are skipped. With no `dim` the
// largest state seen sets the dimension of every trajectory.
std::vector<Trajectory> read_trajectories(std::istream& in,
                                          std::optional<std::size_t> dim = std::nullopt);
void write_trajectory(std::ostream& out, const Trajectory& t);

// A single line of N probabilities (teleportation and zeroth-order models).
StochasticVector read_vector(std::istream& in);
void write_vector(std::ostream& out, const StochasticVector& v);

// File wrappers; failure to open throws Error(IoError).
TransitionHypermatrix load_hypermatrix(const std::filesystem::path& path);
void save_hypermatrix(const std::filesystem::path& path, const TransitionHypermatrix& h);
std::vector<Trajectory> load_trajectories(const std::filesystem::path& path,
                                          std::optional<std::size_t> dim = std::nullopt);
StochasticVector load_vector(const std::filesystem::path& path);

}  // namespace srw::io
