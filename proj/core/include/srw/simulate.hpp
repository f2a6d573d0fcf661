#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "srw/hypermatrix.hpp"
#include "srw/random.hpp"
#include "srw/stochastic_vector.hpp"

namespace srw {

/// A state sequence X(0), X(1), ..., X(Q) over `dim` states.
///
/// States are 0-based in memory; the text format is 1-based.
struct Trajectory {
  std::size_t dim = 0;
  std::vector<std::size_t> states;

  /// Throws InvalidVector if empty or any state >= dim.
  void check() const;
  /// Q, the number of transitions.
  std::size_t transitions() const noexcept { return states.empty() ? 0 : states.size() - 1; }
};

/// Live state of a spacey random walk.
///
/// counts[k] = 1 + #{1 <= s <= n : X(s) = k}; X(0) does not count, so the
/// counts always sum to N + n.
class WalkState {
public:
  WalkState(std::size_t dim, std::size_t start, std::uint64_t seed);

  std::size_t current() const noexcept { return current_; }
  std::size_t step_count() const noexcept { return step_; }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
  /// w(n) = counts / (N + n).
  StochasticVector occupation() const;

  Rng& rng() noexcept { return rng_; }

  /// Records a move to `next` (updates counts and the step number).
  void advance(std::size_t next);

private:
  std::size_t current_;
  std::size_t step_ = 0;
  std::vector<std::uint64_t> counts_;
  Rng rng_;
};

/// One step of the walk. Draws the m-2 history states i.i.d. from w(n)
/// (slot 1 first), then X(n+1) from column (history, X(n)) of R. Returns
/// the drawn history tuple.
std::vector<std::size_t> step(const TransitionHypermatrix& h, WalkState& state);

struct SimulationResult {
  Trajectory trajectory;
  /// Row n is w(n); (Q + 1) x N, or empty when not recorded.
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> occupation;
  StochasticVector final_occupation = StochasticVector::uniform(1);
};

/// Q steps from X(0) = start. Deterministic in (h, start, steps, seed).
SimulationResult simulate(const TransitionHypermatrix& h, std::size_t start, std::size_t steps,
                          std::uint64_t seed, bool record_occupation = true);

/// Spacey random surfer: each step first flips a coin; with probability
/// 1 - alpha the walker teleports to a state drawn from v, otherwise it
/// takes an ordinary step. Same law as simulate(make_surfer(h, alpha, v)).
SimulationResult simulate_surfer(const TransitionHypermatrix& h, double alpha,
                                 const StochasticVector& v, std::size_t start, std::size_t steps,
                                 std::uint64_t seed, bool record_occupation = true);

}  // namespace srw
