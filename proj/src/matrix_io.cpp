#include "oblique/matrix_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "oblique/errors.hpp"

namespace oblique {

namespace {

class TokenReader {
 public:
  explicit TokenReader(std::istream& in) : in_(in) {}

  std::string next(const char* what) {
    std::string token;
    while (true) {
      int c = in_.peek();
      if (c == EOF) break;
      if (c == '#') {
        std::string discard;
        std::getline(in_, discard);
        if (!token.empty()) break;
        continue;
      }
      in_.get();
      if (std::isspace(c)) {
        if (!token.empty()) break;
        continue;
      }
      token.push_back(static_cast<char>(c));
    }
    if (token.empty()) throw ConfigError(std::string("unexpected end of input reading ") + what);
    return token;
  }

  double real(const char* what) {
    const std::string t = next(what);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
      throw ConfigError("malformed number '" + t + "' reading " + what);
    }
    return v;
  }

  std::size_t count(const char* what) {
    const std::string t = next(what);
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || v == 0) {
      throw ConfigError("expected a positive integer for " + std::string(what) + ", got '" + t + "'");
    }
    return v;
  }

 private:
  std::istream& in_;
};

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general);
  (void)ec;
  return std::string(buf, ptr);
}

Matrix read_matrix(std::istream& in) {
  TokenReader r(in);
  const auto rows = static_cast<Eigen::Index>(r.count("matrix rows"));
  const auto cols = static_cast<Eigen::Index>(r.count("matrix cols"));
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = r.real("matrix entry");
  return m;
}

void write_matrix(std::ostream& out, const Matrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

TabularMDP read_mdp(std::istream& in) {
  TokenReader r(in);
  const std::size_t n_states = r.count("n_states");
  const std::size_t n_actions = r.count("n_actions");
  const double gamma = r.real("gamma");
  const auto n = static_cast<Eigen::Index>(n_states);
  std::vector<Matrix> kernels(n_actions, Matrix(n, n));
  for (Eigen::Index s = 0; s < n; ++s)
    for (std::size_t a = 0; a < n_actions; ++a)
      for (Eigen::Index s2 = 0; s2 < n; ++s2) kernels[a](s, s2) = r.real("transition entry");
  Matrix reward(n, static_cast<Eigen::Index>(n_actions));
  for (Eigen::Index s = 0; s < n; ++s)
    for (Eigen::Index a = 0; a < reward.cols(); ++a) reward(s, a) = r.real("reward entry");
  try {
    return TabularMDP(std::move(kernels), std::move(reward), gamma);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid MDP: ") + e.what());
  }
}

void write_mdp(std::ostream& out, const TabularMDP& mdp) {
  out << mdp.n_states() << ' ' << mdp.n_actions() << ' ' << format_double(mdp.gamma()) << '\n';
  for (std::size_t s = 0; s < mdp.n_states(); ++s) {
    for (std::size_t a = 0; a < mdp.n_actions(); ++a) {
      const auto row = mdp.kernel(a).row(static_cast<Eigen::Index>(s));
      for (Eigen::Index s2 = 0; s2 < row.size(); ++s2) {
        if (s2) out << ' ';
        out << format_double(row[s2]);
      }
      out << '\n';
    }
  }
  for (Eigen::Index s = 0; s < mdp.reward().rows(); ++s) {
    for (Eigen::Index a = 0; a < mdp.reward().cols(); ++a) {
      if (a) out << ' ';
      out << format_double(mdp.reward()(s, a));
    }
    out << '\n';
  }
}

Matrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return read_matrix(in);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

TabularMDP load_mdp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return read_mdp(in);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void save_matrix(const std::string& path, const Matrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  write_matrix(out, m);
  if (!out) throw IoError("write failed for " + path);
}

void save_mdp(const std::string& path, const TabularMDP& mdp) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  write_mdp(out, mdp);
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace oblique
