#include "cli.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include <CLI11.hpp>

#include "srw/baselines.hpp"
#include "srw/dynamics.hpp"
#include "srw/error.hpp"
#include "srw/hypermatrix.hpp"
#include "srw/io.hpp"
#include "srw/learn.hpp"
#include "srw/random.hpp"
#include "srw/simulate.hpp"
#include "srw/two_state.hpp"

namespace srw::cli {

namespace {

constexpr std::uint64_t kDefaultSeed = 0;

// Thrown when --strict turns a non-converged solve into a failure.
struct NotConverged {};

// Writes to --out when given, otherwise to the command's stdout.
class Sink {
public:
  Sink(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error(ErrorCode::IoError, "cannot write " + path);
    }
    stream().precision(std::numeric_limits<double>::max_digits10);
  }
  std::ostream& stream() { return file_.is_open() ? file_ : fallback_; }
  void finish() {
    if (!file_.is_open()) return;
    file_.close();
    if (!file_) throw Error(ErrorCode::IoError, "write failed");
  }

private:
  std::ofstream file_;
  std::ostream& fallback_;
};

std::ostream& tsv_row(std::ostream& os, const StochasticVector& x) {
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "\t" : "") << x[i];
  return os;
}

void write_history(const std::string& path, const SolveReport& report) {
  if (path.empty()) return;
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::IoError, "cannot write " + path);
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << "iteration\tresidual\n";
  for (std::size_t n = 0; n < report.residual_history.size(); ++n) {
    os << n + 1 << '\t' << report.residual_history[n] << '\n';
  }
  if (!os) throw Error(ErrorCode::IoError, "write failed for " + path);
}

std::size_t max_state(std::span<const Trajectory> data) {
  std::size_t n = 0;
  for (const auto& t : data) n = std::max(n, t.dim);
  return n;
}

// Teleportation vector from --telep, or uniform.
StochasticVector teleport(const std::string& path, std::size_t dim) {
  if (path.empty()) return StochasticVector::uniform(dim);
  auto v = io::load_vector(path);
  if (v.size() != dim) {
    throw Error(ErrorCode::DimensionMismatch, "teleportation vector length does not match the hypermatrix");
  }
  return v;
}

struct Options {
  std::string input, out, telep, history, train, trace;
  std::uint64_t seed = kDefaultSeed;
  bool strict = false;
  // simulate
  std::size_t steps = 0, count = 1;
  std::optional<std::size_t> start;
  std::optional<double> alpha;
  // stationary
  std::string method = "auto";
  double tol = kDefaultSolveTol;
  std::size_t max_iters = kDefaultMaxIters;
  std::optional<double> step;
  // dynamics2, fixed-points
  std::size_t points = 401, starts = 16;
  // learn, evaluate
  std::optional<std::size_t> dim;
  bool random_init = false;
  std::vector<std::string> models;
};

int cmd_check(const Options& o, std::ostream& out, std::ostream& err) {
  try {
    const auto h = io::load_hypermatrix(o.input);
    out << "valid=true property_b=" << (check_property_b(h) ? "true" : "false") << '\n';
  } catch (const Error& e) {
    if (e.code() == ErrorCode::IoError) throw;
    out << "valid=false\n";
    err << "srw: " << e.what() << '\n';
    return kValidationError;
  }
  return kOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const auto h = io::load_hypermatrix(o.input);
  Sink sink(o.out, out);
  Rng streams(o.seed);
  for (std::size_t i = 0; i < o.count; ++i) {
    // A single trajectory uses the seed as given; further ones draw their
    // seeds from a stream seeded by it.
    const std::uint64_t seed = i == 0 ? o.seed : streams.engine()();
    std::size_t start = 0;
    if (o.start) {
      if (*o.start == 0 || *o.start > h.dim()) throw Error(ErrorCode::IndexOutOfRange, "--start outside 1..N");
      start = *o.start - 1;
    } else {
      start = std::min(h.dim() - 1, static_cast<std::size_t>(streams.uniform() * static_cast<double>(h.dim())));
    }
    const auto result = o.alpha ? simulate_surfer(h, *o.alpha, teleport(o.telep, h.dim()), start, o.steps, seed, false)
                                : simulate(h, start, o.steps, seed, false);
    io::write_trajectory(sink.stream(), result.trajectory);
  }
  sink.finish();
  return kOk;
}

int cmd_stationary(const Options& o, std::ostream& out, std::ostream& err) {
  auto h = io::load_hypermatrix(o.input);
  StochasticVector x0 = StochasticVector::uniform(h.dim());
  if (o.alpha) {
    x0 = teleport(o.telep, h.dim());
    h = make_surfer(h, *o.alpha, x0);
  }
  const double step = o.step.value_or(default_euler_step(h.order(), o.alpha));

  std::string used = o.method == "euler" ? "euler" : "power";
  SolveReport report = used == "euler" ? euler_integrate(h, x0, step, o.max_iters, o.tol)
                                       : tensor_power_method(h, x0, o.tol, o.max_iters);
  if (!report.converged && o.method == "auto") {
    err << "srw: power method did not converge; falling back to Euler\n";
    used = "euler";
    report = euler_integrate(h, x0, step, o.max_iters, o.tol);
  }

  Sink sink(o.out, out);
  tsv_row(sink.stream(), report.result) << '\n';
  sink.finish();
  write_history(o.history, report);

  if (!report.converged) {
    const double last = report.residual_history.empty() ? 0.0 : report.residual_history.back();
    err << "srw: " << used << " did not converge after " << report.iterations << " iterations (residual " << last
        << ")\n";
    if (o.strict) throw NotConverged{};
  }
  return kOk;
}

int cmd_dynamics2(const Options& o, std::ostream& out) {
  const auto h = io::load_hypermatrix(o.input);
  if (h.dim() != 2) throw Error(ErrorCode::Unsupported, "dynamics2 needs a two-state hypermatrix");
  if (o.points < 2) throw Error(ErrorCode::OutOfRange, "--points must be at least 2");
  Sink sink(o.out, out);
  auto& os = sink.stream();
  os << "x\tf\n";
  for (const auto& [x, f] : two_state::sample_forcing(h, o.points)) os << x << '\t' << f << '\n';
  os << "\nx\tstability\n";
  const auto eq = two_state::equilibria(h);
  if (eq.all_points) os << "all\t" << two_state::to_string(two_state::Stability::marginal) << '\n';
  for (const auto& p : eq.points) os << p.x << '\t' << two_state::to_string(p.stability) << '\n';
  sink.finish();
  return kOk;
}

int cmd_fixed_points(const Options& o, std::ostream& out) {
  const auto h = io::load_hypermatrix(o.input);
  const auto points = find_fixed_points(h, o.starts, o.tol, o.seed);
  Sink sink(o.out, out);
  auto& os = sink.stream();
  for (std::size_t i = 0; i < h.dim(); ++i) os << 'x' << i + 1 << '\t';
  os << "residual\n";
  for (const auto& x : points) {
    tsv_row(os, x) << '\t' << l1_distance(apply(h, x).values(), x.values()) << '\n';
  }
  sink.finish();
  return kOk;
}

int cmd_learn(const Options& o, std::ostream& out, std::ostream& err) {
  const auto data = io::load_trajectories(o.input, o.dim);
  FitConfig config;
  config.max_iters = o.max_iters;
  config.tol = o.tol;
  config.seed = o.seed;
  config.uniform_init = !o.random_init;
  const auto fit = fit_srw(data, *o.dim, config);
  io::save_hypermatrix(o.out, fit.hypermatrix);

  std::ostringstream trace;
  trace.precision(std::numeric_limits<double>::max_digits10);
  trace << "iteration\tnll\n";
  for (std::size_t t = 0; t < fit.nll_trace.size(); ++t) trace << t << '\t' << fit.nll_trace[t] << '\n';
  if (o.trace.empty()) {
    out << trace.str();
  } else {
    Sink sink(o.trace, out);
    sink.stream() << trace.str();
    sink.finish();
  }
  if (!fit.converged) {
    err << "srw: fit stopped after " << fit.iterations << " iterations without meeting --tol\n";
    if (o.strict) throw NotConverged{};
  }
  return kOk;
}

// One --models entry: a model name, optionally followed by ":path".
PredictiveModel load_model(const std::string& entry, std::size_t dim, const std::vector<Trajectory>* train) {
  const auto colon = entry.find(':');
  const auto kind = parse_model_kind(entry.substr(0, colon));
  if (colon == std::string::npos) {
    if (kind == ModelKind::true_srw) throw Error(ErrorCode::ParseError, "true_srw needs a hypermatrix file");
    if (train == nullptr) throw Error(ErrorCode::ParseError, "model '" + entry + "' has no file and no --train data");
    switch (kind) {
      case ModelKind::zeroth: return PredictiveModel::zeroth(fit_zeroth(*train, dim));
      case ModelKind::first: return PredictiveModel::first(fit_first(*train, dim));
      case ModelKind::second: return PredictiveModel::second(fit_second(*train, dim));
      default: return PredictiveModel::spacey(fit_srw(*train, dim).hypermatrix);
    }
  }
  const std::string path = entry.substr(colon + 1);
  if (kind == ModelKind::zeroth) return PredictiveModel::zeroth(io::load_vector(path));
  const auto h = io::load_hypermatrix(path);
  if (kind == ModelKind::first) {
    if (h.order() != 2) throw Error(ErrorCode::Unsupported, "a first-order model file has order=2");
    return PredictiveModel::first(h.flattening());
  }
  if (h.order() != 3) throw Error(ErrorCode::Unsupported, "second-order and spacey model files have order=3");
  return kind == ModelKind::second ? PredictiveModel::second(h) : PredictiveModel::spacey(h, kind);
}

int cmd_evaluate(const Options& o, std::ostream& out) {
  auto test = io::load_trajectories(o.input, o.dim);
  std::vector<Trajectory> train;
  if (!o.train.empty()) train = io::load_trajectories(o.train, o.dim);
  const std::size_t dim = o.dim.value_or(std::max(max_state(test), max_state(train)));
  for (auto& t : test) t.dim = dim;
  for (auto& t : train) t.dim = dim;

  std::vector<PredictiveModel> models;
  for (const auto& entry : o.models) models.push_back(load_model(entry, dim, o.train.empty() ? nullptr : &train));

  Sink sink(o.out, out);
  auto& os = sink.stream();
  os << "model\trmse\n";
  for (std::size_t i = 0; i < models.size(); ++i) {
    os << o.models[i].substr(0, o.models[i].find(':')) << '\t' << rmse(models[i], test) << '\n';
  }
  sink.finish();
  return kOk;
}

int cmd_pair_stationary(const Options& o, std::ostream& out) {
  const auto h = io::load_hypermatrix(o.input);
  const auto ps = pair_stationary(h);
  Sink sink(o.out, out);
  auto& os = sink.stream();
  os << "last\tprevious\tprobability\n";
  for (Eigen::Index i = 0; i < ps.pairs.rows(); ++i)
    for (Eigen::Index j = 0; j < ps.pairs.cols(); ++j) os << i + 1 << '\t' << j + 1 << '\t' << ps.pairs(i, j) << '\n';
  os << "\nstate\tmarginal\n";
  for (std::size_t i = 0; i < ps.marginal.size(); ++i) os << i + 1 << '\t' << ps.marginal[i] << '\n';
  sink.finish();
  return kOk;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Spacey random walks: simulation, stationary points, two-state dynamics and learning", "srw"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  auto input = [&](CLI::App* sub, const char* what) {
    sub->add_option("input", o.input, what)->required();
  };
  auto out_opt = [&](CLI::App* sub) { sub->add_option("--out", o.out, "Write data here instead of stdout"); };
  auto alpha_opts = [&](CLI::App* sub) {
    sub->add_option("--alpha", o.alpha, "Surfer follow probability");
    sub->add_option("--telep", o.telep, "Teleportation vector file (default uniform)");
  };

  auto* check = app.add_subcommand("check", "Validate a hypermatrix file and test Property B");
  input(check, "Hypermatrix file");

  auto* sim = app.add_subcommand("simulate", "Sample spacey random walk trajectories");
  input(sim, "Hypermatrix file");
  sim->add_option("--steps", o.steps, "Transitions per trajectory")->required();
  sim->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  sim->add_option("--start", o.start, "Start state, 1-based (default: drawn from the seed)");
  sim->add_option("--count", o.count, "Number of trajectories")->capture_default_str()->check(CLI::PositiveNumber);
  alpha_opts(sim);
  out_opt(sim);

  auto* stat = app.add_subcommand("stationary", "Solve for a spacey stationary vector");
  // --h is the Euler step here, so help is --help only.
  stat->set_help_flag("--help", "Print this help message and exit");
  input(stat, "Hypermatrix file");
  stat->add_option("--method", o.method, "power, euler or auto")
      ->capture_default_str()
      ->check(CLI::IsMember({"power", "euler", "auto"}));
  stat->add_option("--tol", o.tol, "Residual tolerance")->capture_default_str();
  stat->add_option("--max-iters", o.max_iters, "Iteration budget")->capture_default_str();
  stat->add_option("--h", o.step, "Euler step in (0, 1]");
  stat->add_option("--history", o.history, "Write the residual history TSV here");
  stat->add_flag("--strict", o.strict, "Exit with status 2 when the solver does not converge");
  alpha_opts(stat);
  out_opt(stat);

  auto* dyn = app.add_subcommand("dynamics2", "Sample f(x) and list equilibria of a two-state walk");
  input(dyn, "Two-state hypermatrix file");
  dyn->add_option("--points", o.points, "Grid points on [0, 1]")->capture_default_str();
  out_opt(dyn);

  auto* fixed = app.add_subcommand("fixed-points", "Multi-start search for solutions of x = R(x^(m-1))");
  input(fixed, "Hypermatrix file");
  fixed->add_option("--starts", o.starts, "Random starting points")->capture_default_str();
  fixed->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  fixed->add_option("--tol", o.tol, "Residual tolerance")->capture_default_str();
  out_opt(fixed);

  auto* learn = app.add_subcommand("learn", "Fit a spacey random walk by maximum likelihood");
  input(learn, "Trajectory file");
  learn->add_option("--dim", o.dim, "Number of states")->required();
  learn->add_option("--max-iters", o.max_iters, "Iteration budget");
  learn->add_option("--tol", o.tol, "Projected-gradient stopping threshold");
  learn->add_option("--seed", o.seed, "Seed for --random-init")->capture_default_str();
  learn->add_flag("--random-init", o.random_init, "Start from random columns instead of uniform ones");
  learn->add_option("--out", o.out, "Hypermatrix output file")->required();
  learn->add_option("--trace", o.trace, "Write the NLL trace TSV here instead of stdout");
  learn->add_flag("--strict", o.strict, "Exit with status 2 when the fit does not converge");

  auto* eval = app.add_subcommand("evaluate", "Test RMSE of predictive models");
  input(eval, "Test trajectory file");
  eval->add_option("--models", o.models, "name[:file] with name in zeroth, first, second, srw, true_srw")
      ->required()
      ->delimiter(',');
  eval->add_option("--train", o.train, "Training trajectories for models given without a file");
  eval->add_option("--dim", o.dim, "Number of states (default: largest state seen)");
  out_opt(eval);

  auto* pairs = app.add_subcommand("pair-stationary", "Stationary pair distribution of the second-order chain");
  input(pairs, "Order-3 hypermatrix file");
  out_opt(pairs);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidationError;
  }

  // Options shared by several subcommands keep the library defaults unless
  // given; learn has its own defaults.
  if (learn->parsed()) {
    const FitConfig defaults;
    if (learn->count("--max-iters") == 0) o.max_iters = defaults.max_iters;
    if (learn->count("--tol") == 0) o.tol = defaults.tol;
  }

  try {
    if (check->parsed()) return cmd_check(o, out, err);
    if (sim->parsed()) return cmd_simulate(o, out);
    if (stat->parsed()) return cmd_stationary(o, out, err);
    if (dyn->parsed()) return cmd_dynamics2(o, out);
    if (fixed->parsed()) return cmd_fixed_points(o, out);
    if (learn->parsed()) return cmd_learn(o, out, err);
    if (eval->parsed()) return cmd_evaluate(o, out);
    if (pairs->parsed()) return cmd_pair_stationary(o, out);
  } catch (const NotConverged&) {
    return kNotConverged;
  } catch (const Error& e) {
    err << "srw: " << e.what() << '\n';
    return e.code() == ErrorCode::IoError ? kIoError : kValidationError;
  } catch (const std::exception& e) {
    err << "srw: " << e.what() << '\n';
    return kIoError;
  }
  return kOk;
}

}  // namespace srw::cli
