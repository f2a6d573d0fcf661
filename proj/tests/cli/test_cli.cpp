#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "fixtures.hpp"
#include "srw/io.hpp"

using namespace srw;
namespace fs = std::filesystem;

namespace {

const fs::path kGolden = SRW_CLI_GOLDEN_DIR;

struct Result {
  int code;
  std::string out, err;
};

Result srw_run(std::initializer_list<std::string> args) {
  std::vector<std::string> argv{"srw"};
  argv.insert(argv.end(), args);
  std::ostringstream out, err;
  const int code = cli::run(argv, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Fresh scratch directory per test case.
class Scratch {
public:
  explicit Scratch(const std::string& name) : dir_(fs::temp_directory_path() / ("srw_cli_" + name)) {
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~Scratch() { fs::remove_all(dir_); }
  std::string operator/(const std::string& file) const { return (dir_ / file).string(); }

  std::string write(const std::string& file, const TransitionHypermatrix& h) const {
    const auto path = *this / file;
    io::save_hypermatrix(path, h);
    return path;
  }

private:
  fs::path dir_;
};

std::vector<double> numbers(const std::string& line) {
  std::istringstream in(line);
  return {std::istream_iterator<double>(in), std::istream_iterator<double>()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("check reports validity and Property B") {
  const auto nc = (kGolden / "nonconvergent.txt").string();
  const auto r = srw_run({"check", nc});
  CHECK(r.code == cli::kOk);
  CHECK(r.out == "valid=true property_b=true\n");

  Scratch s("check");
  {
    std::ofstream bad(s / "bad.txt");
    bad << "srw-hypermatrix v1 order=3 dim=2\n0.5 1 1 1\n0.2 0 0 0\n";
  }
  const auto invalid = srw_run({"check", s / "bad.txt"});
  CHECK(invalid.code == cli::kValidationError);
  CHECK(invalid.out == "valid=false\n");
  CHECK_FALSE(invalid.err.empty());

  // Identity panels: each state is closed on its own.
  const auto split = s.write("split.txt", TransitionHypermatrix::create(3, 2, fixtures::rows(2, 4, {1, 0, 1, 0, 0, 1, 0, 1})));
  CHECK(srw_run({"check", split}).out == "valid=true property_b=false\n");

  CHECK(srw_run({"check", s / "missing.txt"}).code == cli::kIoError);
}

TEST_CASE("stationary: power fails strictly, euler and auto find the golden ratio") {
  const auto nc = (kGolden / "nonconvergent.txt").string();
  CHECK(srw_run({"stationary", "--method", "power", nc, "--strict"}).code == cli::kNotConverged);
  const auto lax = srw_run({"stationary", "--method", "power", nc, "--max-iters", "100"});
  CHECK(lax.code == cli::kOk);
  CHECK_FALSE(lax.err.empty());

  for (const char* method : {"euler", "auto"}) {
    const auto r = srw_run({"stationary", "--method", method, nc, "--strict"});
    REQUIRE(r.code == cli::kOk);
    const auto x = numbers(r.out);
    REQUIRE(x.size() == 2);
    CHECK(std::abs(x[0] - fixtures::kGolden) <= 1e-8);
    CHECK(std::abs(x[0] + x[1] - 1.0) <= 1e-15);
  }
}

TEST_CASE("stationary writes a residual history and handles surfers") {
  Scratch s("stationary");
  const auto nc = (kGolden / "nonconvergent.txt").string();
  REQUIRE(srw_run({"stationary", "--method", "euler", nc, "--history", s / "h.tsv"}).code == cli::kOk);
  const auto hist = lines(slurp(s / "h.tsv"));
  REQUIRE(hist.size() >= 2);
  CHECK(hist[0] == "iteration\tresidual");
  CHECK(hist[1].rfind("1\t", 0) == 0);

  {
    std::ofstream v(s / "v.txt");
    v << "0.7 0.3\n";
  }
  const auto r = srw_run({"stationary", "--method", "power", nc, "--alpha", "0.4", "--telep", s / "v.txt",
                          "--strict", "--out", s / "x.txt"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.empty());
  CHECK(numbers(slurp(s / "x.txt")).size() == 2);
  CHECK(srw_run({"stationary", nc, "--h", "1.5", "--method", "euler"}).code == cli::kValidationError);
}

TEST_CASE("simulate matches the golden trajectories and reruns byte for byte") {
  const auto nc = (kGolden / "nonconvergent.txt").string();
  const auto r = srw_run({"simulate", nc, "--steps", "20", "--seed", "0", "--start", "1", "--count", "3"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out == slurp(kGolden / "simulate_seed0.txt"));

  const auto a = srw_run({"simulate", nc, "--steps", "500", "--seed", "9", "--count", "4", "--alpha", "0.5"});
  const auto b = srw_run({"simulate", nc, "--steps", "500", "--seed", "9", "--count", "4", "--alpha", "0.5"});
  CHECK(a.out == b.out);
  CHECK(a.out != srw_run({"simulate", nc, "--steps", "500", "--seed", "10", "--count", "4", "--alpha", "0.5"}).out);
  CHECK(srw_run({"simulate", nc, "--steps", "5", "--start", "3"}).code == cli::kValidationError);
}

TEST_CASE("simulate, learn, check and evaluate round-trip through files") {
  Scratch s("roundtrip");
  const auto r1 = s.write("r1.txt", fixtures::r1());
  {
    std::ofstream traj(s / "train.txt");
    traj << srw_run({"simulate", r1, "--steps", "200", "--seed", "4", "--count", "20"}).out;
  }
  const auto learned = srw_run({"learn", s / "train.txt", "--dim", "4", "--out", s / "fit.txt", "--strict"});
  REQUIRE(learned.code == cli::kOk);
  const auto trace = lines(learned.out);
  REQUIRE(trace.size() >= 2);
  CHECK(trace[0] == "iteration\tnll");
  CHECK(srw_run({"check", s / "fit.txt"}).code == cli::kOk);

  const auto again = srw_run({"learn", s / "train.txt", "--dim", "4", "--out", s / "fit2.txt"});
  CHECK(again.out == learned.out);
  CHECK(slurp(s / "fit.txt") == slurp(s / "fit2.txt"));

  const auto eval = srw_run({"evaluate", s / "train.txt", "--models",
                             "zeroth,first,second,srw:" + s / "fit.txt" + ",true_srw:" + r1, "--train",
                             s / "train.txt"});
  REQUIRE(eval.code == cli::kOk);
  const auto rows = lines(eval.out);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == "model\trmse");
  CHECK(rows[4].rfind("srw\t", 0) == 0);
  CHECK(rows[5].rfind("true_srw\t", 0) == 0);

  CHECK(srw_run({"evaluate", s / "train.txt", "--models", "srw"}).code == cli::kValidationError);
  CHECK(srw_run({"evaluate", s / "train.txt", "--models", "fourth", "--train", s / "train.txt"}).code ==
        cli::kValidationError);
}

TEST_CASE("dynamics2 samples f and lists the three equilibria of the order-4 example") {
  Scratch s("dynamics2");
  const auto h = s.write("h.txt", fixtures::three_equilibria());
  const auto r = srw_run({"dynamics2", h});
  REQUIRE(r.code == cli::kOk);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 1 + 401 + 1 + 1 + 3);
  CHECK(rows[0] == "x\tf");
  CHECK(rows[402].empty());
  CHECK(rows[403] == "x\tstability");
  const char* want[] = {"stable", "unstable", "stable"};
  for (int k = 0; k < 3; ++k) {
    const auto tab = rows[404 + k].find('\t');
    CHECK(std::abs(std::stod(rows[404 + k].substr(0, tab)) - fixtures::kThreeEquilibria[k]) <= 1e-8);
    CHECK(rows[404 + k].substr(tab + 1) == want[k]);
  }
  CHECK(srw_run({"dynamics2", s.write("r1.txt", fixtures::r1())}).code == cli::kValidationError);
}

TEST_CASE("fixed-points and pair-stationary tables") {
  Scratch s("tables");
  const auto r1 = s.write("r1.txt", fixtures::r1());
  const auto a = srw_run({"fixed-points", r1, "--starts", "8", "--seed", "3", "--tol", "1e-9"});
  REQUIRE(a.code == cli::kOk);
  CHECK(a.out == srw_run({"fixed-points", r1, "--starts", "8", "--seed", "3", "--tol", "1e-9"}).out);
  const auto rows = lines(a.out);
  CHECK(rows[0] == "x1\tx2\tx3\tx4\tresidual");
  CHECK(rows.size() >= 4);

  const auto p = srw_run({"pair-stationary", s.write("h.txt", fixtures::second_order_example())});
  REQUIRE(p.code == cli::kOk);
  const auto prow = lines(p.out);
  REQUIRE(prow.size() == 1 + 9 + 1 + 1 + 3);
  CHECK(prow[0] == "last\tprevious\tprobability");
  CHECK(prow[12].rfind("1\t", 0) == 0);
  CHECK(std::abs(std::stod(prow[12].substr(2)) - 30.0 / 101) <= 1e-12);
}

TEST_CASE("usage errors and help") {
  CHECK(srw_run({}).code == cli::kValidationError);
  CHECK(srw_run({"frobnicate"}).code == cli::kValidationError);
  CHECK(srw_run({"stationary", "--method", "newton", "x.txt"}).code == cli::kValidationError);
  const auto help = srw_run({"--help"});
  CHECK(help.code == cli::kOk);
  CHECK(help.out.find("pair-stationary") != std::string::npos);
}
