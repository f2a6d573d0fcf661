#include "srw/simulate.hpp"

#include <sstream>

#include "srw/error.hpp"

namespace srw {

void Trajectory::check() const {
  if (states.empty()) throw Error(ErrorCode::InvalidVector, "empty trajectory");
  for (std::size_t s : states) {
    if (s >= dim) {
      std::ostringstream os;
      os << "state " << s + 1 << " outside 1.." << dim;
      throw Error(ErrorCode::InvalidVector, os.str());
    }
  }
}

WalkState::WalkState(std::size_t dim, std::size_t start, std::uint64_t seed)
    : current_(start), counts_(dim, 1), rng_(seed) {
  if (dim == 0) throw Error(ErrorCode::DimensionMismatch, "walk needs at least one state");
  if (start >= dim) throw Error(ErrorCode::IndexOutOfRange, "start state out of range");
}

StochasticVector WalkState::occupation() const {
  const double total = static_cast<double>(counts_.size() + step_);
  std::vector<double> w(counts_.size());
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = static_cast<double>(counts_[k]) / total;
  return StochasticVector::renormalized(std::move(w));
}

void WalkState::advance(std::size_t next) {
  ++counts_[next];
  ++step_;
  current_ = next;
}

namespace {

std::vector<std::size_t> draw_history(const TransitionHypermatrix& h, WalkState& state) {
  std::vector<std::size_t> history(h.order() - 2);
  const double total = static_cast<double>(h.dim() + state.step_count());
  const std::span<const std::uint64_t> counts(state.counts());
  for (auto& k : history) k = state.rng().categorical(counts, total);
  return history;
}

std::size_t draw_transition(const TransitionHypermatrix& h, WalkState& state,
                            std::span<const std::size_t> history) {
  const std::size_t kappa = h.history_index(history);
  const auto n = static_cast<Eigen::Index>(h.dim());
  const auto col = h.flattening().col(static_cast<Eigen::Index>(kappa) * n +
                                      static_cast<Eigen::Index>(state.current()));
  return state.rng().categorical(std::span<const double>(col.data(), h.dim()), col.sum());
}

void record_row(SimulationResult& out, std::size_t row, const WalkState& state) {
  const double total = static_cast<double>(state.counts().size() + state.step_count());
  for (std::size_t k = 0; k < state.counts().size(); ++k) {
    out.occupation(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(k)) =
        static_cast<double>(state.counts()[k]) / total;
  }
}

template <typename StepFn>
SimulationResult run(const TransitionHypermatrix& h, std::size_t start, std::size_t steps,
                     std::uint64_t seed, bool record_occupation, StepFn&& one_step) {
  WalkState state(h.dim(), start, seed);
  SimulationResult out;
  out.trajectory.dim = h.dim();
  out.trajectory.states.reserve(steps + 1);
  out.trajectory.states.push_back(start);
  if (record_occupation) {
    out.occupation.resize(static_cast<Eigen::Index>(steps + 1), static_cast<Eigen::Index>(h.dim()));
    record_row(out, 0, state);
  }
  for (std::size_t n = 1; n <= steps; ++n) {
    one_step(state);
    out.trajectory.states.push_back(state.current());
    if (record_occupation) record_row(out, n, state);
  }
  out.final_occupation = state.occupation();
  return out;
}

}  // namespace

std::vector<std::size_t> step(const TransitionHypermatrix& h, WalkState& state) {
  if (state.counts().size() != h.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "walk state and hypermatrix disagree on N");
  }
  auto history = draw_history(h, state);
  state.advance(draw_transition(h, state, history));
  return history;
}

SimulationResult simulate(const TransitionHypermatrix& h, std::size_t start, std::size_t steps,
                          std::uint64_t seed, bool record_occupation) {
  return run(h, start, steps, seed, record_occupation,
             [&](WalkState& state) { step(h, state); });
}

SimulationResult simulate_surfer(const TransitionHypermatrix& h, double alpha,
                                 const StochasticVector& v, std::size_t start, std::size_t steps,
                                 std::uint64_t seed, bool record_occupation) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorCode::InvalidAlpha, "alpha must lie in [0, 1]");
  if (v.size() != h.dim()) throw Error(ErrorCode::DimensionMismatch, "teleportation vector length");
  return run(h, start, steps, seed, record_occupation, [&](WalkState& state) {
    if (state.rng().uniform() < alpha) {
      step(h, state);
    } else {
      state.advance(state.rng().categorical(v.values(), 1.0));
    }
  });
}

}  // namespace srw
