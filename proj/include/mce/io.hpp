/* Copyright 2026 The mce Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Text file formats.
//
// Trajectory file: a header line "M T S" followed by M lines of T+1
// space-separated state indices.
//
// Matrix / distribution file: a line "S" followed by S rows (matrix) or one
// row (distribution) of space-separated decimals printed with 17
// significant digits.
//
// Index list: one nonnegative integer per line.
//
// Model file: whitespace-separated tokens, '#' starts a comment.
//
//   target  <matrix block>
//   clean                              all chains follow the target
//   chain <count> <matrix block>       `count` chains with this P_m
//     [init stationary|uniform|point:<i>|weights <S decimals>]
//
// A matrix block is "S" followed by S*S decimals. Chains without an init
// line start from their own stationary law.

#pragma once

#include "mce/bounds.hpp"
#include "mce/core.hpp"
#include "mce/simulate.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace mce {

/// Malformed or unreadable input file.
class FormatError : public Error {
 public:
  using Error::Error;
};

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

// Token reader that skips '#' comments.
class Tokens {
 public:
  explicit Tokens(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      std::string tok;
      while (ls >> tok) toks_.push_back(tok);
    }
  }
  bool done() const { return pos_ >= toks_.size(); }
  const std::string& peek() const {
    if (done()) throw FormatError("unexpected end of input");
    return toks_[pos_];
  }
  std::string next() {
    const auto& t = peek();
    ++pos_;
    return t;
  }
  template <class Int>
  Int next_uint(const char* what) {
    const auto t = next();
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      if (!t.empty() && t[0] != '-') v = std::stoull(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != t.size()) throw FormatError(std::string("expected ") + what + ", got '" + t + "'");
    return static_cast<Int>(v);
  }
  double next_double(const char* what) {
    const auto t = next();
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != t.size()) throw FormatError(std::string("expected ") + what + ", got '" + t + "'");
    return v;
  }

 private:
  std::vector<std::string> toks_;
  std::size_t pos_ = 0;
};

inline Eigen::MatrixXd read_matrix_block(Tokens& tk) {
  const auto n = tk.next_uint<std::size_t>("state count");
  if (n == 0) throw FormatError("matrix with zero states");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = tk.next_double("matrix entry");
  return m;
}

inline void write_row(std::ostream& out, auto const& row) {
  bool first = true;
  for (double x : row) {
    if (!first) out << ' ';
    out << format_double(x);
    first = false;
  }
  out << '\n';
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Trajectories
// ---------------------------------------------------------------------------

inline void write_trajectory(std::ostream& out, const TrajectoryMatrix& x) {
  out << x.chain_count() << ' ' << x.horizon() << ' ' << x.state_count() << '\n';
  for (std::size_t m = 0; m < x.chain_count(); ++m) {
    const auto row = x.row(m);
    for (std::size_t t = 0; t < row.size(); ++t) {
      if (t) out << ' ';
      out << row[t];
    }
    out << '\n';
  }
}

inline TrajectoryMatrix read_trajectory(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("trajectory file is empty");
  std::istringstream head(line);
  long long m = 0, t = 0, s = 0;
  std::string extra;
  if (!(head >> m >> t >> s) || (head >> extra)) throw FormatError("trajectory header must be 'M T S'");
  if (m < 1 || t < 1 || s < 1) throw FormatError("trajectory header needs M, T, S >= 1");
  const auto width = static_cast<std::size_t>(t) + 1;
  std::vector<State> data;
  data.reserve(static_cast<std::size_t>(m) * width);
  for (long long row = 0; row < m; ++row) {
    if (!std::getline(in, line)) throw FormatError("trajectory file has fewer than M rows");
    std::istringstream ls(line);
    long long v = 0;
    std::size_t n = 0;
    while (ls >> v) {
      if (v < 0 || v >= s) throw FormatError("state " + std::to_string(v) + " outside [0, S)");
      data.push_back(static_cast<State>(v));
      ++n;
    }
    if (!ls.eof() || n != width)
      throw FormatError("trajectory row " + std::to_string(row) + " must hold T+1 integer states");
  }
  while (std::getline(in, line))
    if (line.find_first_not_of(" \t\r") != std::string::npos) throw FormatError("trailing data after M rows");
  return TrajectoryMatrix(static_cast<std::size_t>(m), static_cast<std::size_t>(t), static_cast<std::size_t>(s),
                          std::move(data));
}

// ---------------------------------------------------------------------------
// Matrices and distributions
// ---------------------------------------------------------------------------

inline void write_matrix(std::ostream& out, const StochasticMatrix& p) {
  out << p.size() << '\n';
  for (Eigen::Index i = 0; i < p.matrix().rows(); ++i) detail::write_row(out, p.matrix().row(i));
}

inline void write_distribution(std::ostream& out, const Distribution& d) {
  out << d.size() << '\n';
  detail::write_row(out, d.weights());
}

inline StochasticMatrix read_matrix(std::istream& in) {
  detail::Tokens tk(in);
  auto m = detail::read_matrix_block(tk);
  if (!tk.done()) throw FormatError("trailing data after matrix");
  return StochasticMatrix(std::move(m));
}

inline Distribution read_distribution(std::istream& in) {
  detail::Tokens tk(in);
  const auto n = tk.next_uint<std::size_t>("state count");
  std::vector<double> w(n);
  for (auto& x : w) x = tk.next_double("probability");
  if (!tk.done()) throw FormatError("trailing data after distribution");
  return Distribution(std::move(w));
}

inline std::vector<std::size_t> read_index_list(std::istream& in) {
  detail::Tokens tk(in);
  std::vector<std::size_t> out;
  while (!tk.done()) out.push_back(tk.next_uint<std::size_t>("row index"));
  return out;
}

inline void write_index_list(std::ostream& out, std::span<const std::size_t> idx) {
  for (auto i : idx) out << i << '\n';
}

// ---------------------------------------------------------------------------
// Model descriptions
// ---------------------------------------------------------------------------

struct ModelChainGroup {
  std::size_t count = 1;
  std::shared_ptr<const StochasticMatrix> transition;
  std::optional<InitPolicy> policy;          // nullopt with `weights` set
  std::optional<Distribution> weights;
};

struct ModelDescription {
  std::shared_ptr<const StochasticMatrix> target;
  bool clean = true;
  std::vector<ModelChainGroup> groups;

  /// Number of chains described, or nullopt for a clean model (any M).
  std::optional<std::size_t> chain_count() const {
    if (clean) return std::nullopt;
    std::size_t m = 0;
    for (const auto& g : groups) m += g.count;
    return m;
  }

  /// Per-chain models for an ensemble of `chains` rows.
  std::vector<ChainModel> expand(std::size_t chains) const {
    if (const auto m = chain_count(); m && *m != chains)
      throw DomainError("model file describes " + std::to_string(*m) + " chains, not " + std::to_string(chains));
    std::vector<ChainModel> out;
    if (clean) {
      const auto c = ChainModel::stationary_start(target);
      out.assign(chains, c);
      return out;
    }
    for (const auto& g : groups) {
      auto pi = stationary_distribution(*g.transition);
      auto mu = g.weights ? *g.weights : g.policy->resolve(*g.transition);
      for (std::size_t k = 0; k < g.count; ++k) out.push_back({g.transition, pi, mu, std::nullopt});
    }
    return out;
  }
};

inline ModelDescription read_model(std::istream& in) {
  detail::Tokens tk(in);
  ModelDescription d;
  bool saw_clean = false;
  while (!tk.done()) {
    const auto key = tk.next();
    if (key == "target") {
      if (d.target) throw FormatError("model file declares two targets");
      d.target = std::make_shared<const StochasticMatrix>(detail::read_matrix_block(tk));
    } else if (key == "clean") {
      saw_clean = true;
    } else if (key == "chain") {
      ModelChainGroup g;
      g.count = tk.next_uint<std::size_t>("chain count");
      if (g.count == 0) throw FormatError("chain group with zero chains");
      g.transition = std::make_shared<const StochasticMatrix>(detail::read_matrix_block(tk));
      g.policy = InitPolicy{};
      if (!tk.done() && tk.peek() == "init") {
        tk.next();
        const auto what = tk.next();
        if (what == "weights") {
          std::vector<double> w(g.transition->size());
          for (auto& x : w) x = tk.next_double("initial probability");
          g.weights = Distribution(std::move(w));
          g.policy.reset();
        } else {
          g.policy = InitPolicy::parse(what);
        }
      }
      d.groups.push_back(std::move(g));
    } else {
      throw FormatError("unknown model file keyword '" + key + "'");
    }
  }
  if (!d.target) throw FormatError("model file needs a target matrix");
  if (saw_clean && !d.groups.empty()) throw FormatError("model file mixes 'clean' with chain groups");
  d.clean = d.groups.empty();
  for (const auto& g : d.groups)
    if (g.transition->size() != d.target->size()) throw FormatError("chain matrix size differs from target");
  return d;
}

template <class Fn>
auto with_input_file(const std::string& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  return fn(in);
}

}  // namespace mce
