#include "srw/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "srw/error.hpp"

namespace srw::io {

namespace {

constexpr std::string_view kMagic = "srw-hypermatrix";

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

double parse_probability(const std::string& token) {
  const auto slash = token.find('/');
  auto parse_double = [&](std::string_view s) {
    // std::from_chars for double is available from GCC 11.
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) parse_error("bad number '" + token + "'");
    return v;
  };
  if (slash == std::string::npos) return parse_double(token);
  const double num = parse_double(std::string_view(token).substr(0, slash));
  const double den = parse_double(std::string_view(token).substr(slash + 1));
  if (den == 0.0) parse_error("zero denominator in '" + token + "'");
  return num / den;
}

std::size_t parse_key(const std::string& token, std::string_view key) {
  const std::string prefix = std::string(key) + "=";
  if (token.rfind(prefix, 0) != 0) parse_error("expected " + prefix + "<n>, got '" + token + "'");
  std::size_t v = 0;
  const char* first = token.data() + prefix.size();
  const char* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) parse_error("bad integer in '" + token + "'");
  return v;
}

bool next_content_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

std::vector<std::string> split(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> tokens;
  for (std::string t; ss >> t;) tokens.push_back(t);
  return tokens;
}

template <typename T>
T with_file(const std::filesystem::path& path, auto&& read) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return read(in);
}

}  // namespace

TransitionHypermatrix read_hypermatrix(std::istream& in) {
  std::string line;
  if (!next_content_line(in, line)) parse_error("missing hypermatrix header");
  const auto header = split(line);
  if (header.size() != 4 || header[0] != kMagic || header[1] != "v1") {
    parse_error("header must read 'srw-hypermatrix v1 order=<m> dim=<N>'");
  }
  const std::size_t order = parse_key(header[2], "order");
  const std::size_t dim = parse_key(header[3], "dim");
  if (order < 2 || dim < 1) throw Error(ErrorCode::ShapeMismatch, "order must be >= 2, dim >= 1");
  std::size_t width = 1;
  for (std::size_t t = 0; t + 1 < order; ++t) {
    if (width > kDefaultMaxEntries / dim) throw Error(ErrorCode::TooLarge, "flattening too large");
    width *= dim;
  }
  if (width > kDefaultMaxEntries / dim) throw Error(ErrorCode::TooLarge, "flattening too large");

  Eigen::MatrixXd r(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < dim; ++i) {
    if (!next_content_line(in, line)) parse_error("expected " + std::to_string(dim) + " rows");
    const auto tokens = split(line);
    if (tokens.size() != width) {
      std::ostringstream os;
      os << "row " << i + 1 << " has " << tokens.size() << " entries, expected " << width;
      throw Error(ErrorCode::ShapeMismatch, os.str());
    }
    for (std::size_t c = 0; c < width; ++c) {
      r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = parse_probability(tokens[c]);
    }
  }
  if (next_content_line(in, line)) parse_error("trailing content after hypermatrix rows");

  // Columns already stochastic up to summation round-off are left alone so
  // that written files read back bit for bit.
  const double roundoff = std::numeric_limits<double>::epsilon() * static_cast<double>(r.rows());
  for (Eigen::Index c = 0; c < r.cols(); ++c) {
    const double gap = std::abs(r.col(c).sum() - 1.0);
    if (gap > roundoff && gap <= kStochasticTol && (r.col(c).array() >= 0.0).all()) r.col(c) /= r.col(c).sum();
  }
  return TransitionHypermatrix::create(order, dim, std::move(r));
}

void write_hypermatrix(std::ostream& out, const TransitionHypermatrix& h) {
  out << kMagic << " v1 order=" << h.order() << " dim=" << h.dim() << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  const auto& r = h.flattening();
  for (Eigen::Index i = 0; i < r.rows(); ++i) {
    for (Eigen::Index c = 0; c < r.cols(); ++c) {
      if (c) out << ' ';
      out << r(i, c);
    }
    out << '\n';
  }
}

std::vector<Trajectory> read_trajectories(std::istream& in, std::optional<std::size_t> dim) {
  std::vector<Trajectory> out;
  std::string line;
  std::size_t line_no = 0, max_state = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = split(line);
    if (tokens.empty()) continue;
    Trajectory t;
    t.states.reserve(tokens.size());
    for (const auto& tok : tokens) {
      std::size_t s = 0;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), s);
      if (ec != std::errc() || ptr != tok.data() + tok.size() || s == 0) {
        parse_error("line " + std::to_string(line_no) + ": bad state '" + tok + "'");
      }
      if (dim && s > *dim) {
        parse_error("line " + std::to_string(line_no) + ": state " + tok + " exceeds dimension " +
                    std::to_string(*dim));
      }
      max_state = std::max(max_state, s);
      t.states.push_back(s - 1);
    }
    out.push_back(std::move(t));
  }
  const std::size_t n = dim.value_or(max_state);
  for (auto& t : out) t.dim = n;
  return out;
}

void write_trajectory(std::ostream& out, const Trajectory& t) {
  for (std::size_t q = 0; q < t.states.size(); ++q) {
    if (q) out << ' ';
    out << t.states[q] + 1;
  }
  out << '\n';
}

StochasticVector read_vector(std::istream& in) {
  std::string line;
  if (!next_content_line(in, line)) parse_error("missing probability vector");
  std::vector<double> v;
  for (const auto& tok : split(line)) v.push_back(parse_probability(tok));
  double sum = 0.0;
  for (double x : v) sum += x;
  if (!v.empty() && std::abs(sum - 1.0) <= kStochasticTol) {
    for (double& x : v) x /= sum;
  }
  return StochasticVector(std::move(v));
}

void write_vector(std::ostream& out, const StochasticVector& v) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out << ' ';
    out << v[i];
  }
  out << '\n';
}

TransitionHypermatrix load_hypermatrix(const std::filesystem::path& path) {
  return with_file<TransitionHypermatrix>(path, [](std::istream& in) { return read_hypermatrix(in); });
}

void save_hypermatrix(const std::filesystem::path& path, const TransitionHypermatrix& h) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  write_hypermatrix(out, h);
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

std::vector<Trajectory> load_trajectories(const std::filesystem::path& path,
                                          std::optional<std::size_t> dim) {
  return with_file<std::vector<Trajectory>>(path,
                                            [&](std::istream& in) { return read_trajectories(in, dim); });
}

StochasticVector load_vector(const std::filesystem::path& path) {
  return with_file<StochasticVector>(path, [](std::istream& in) { return read_vector(in); });
}

}  // namespace srw::io
