#pragma once

#include <array>
#include <cstdio>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "knapcone.hpp"

namespace knapcone::testing {

using Rng = std::mt19937_64;

inline std::int64_t uniform(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

/// Positive weights with gcd 1, n entries in [1, max_a].
inline std::vector<std::int64_t> random_weights(Rng& rng, std::size_t n, std::int64_t max_a) {
  for (;;) {
    std::vector<std::int64_t> a(n);
    for (auto& x : a) x = uniform(rng, 1, max_a);
    std::int64_t g = 0;
    for (auto x : a) g = std::gcd(g, x);
    if (g == 1) return a;
  }
}

inline IntMatrix random_int_matrix(Rng& rng, std::size_t r, std::size_t c, std::int64_t bound) {
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = BigInt(static_cast<long>(uniform(rng, -bound, bound)));
  return m;
}

inline Monomial mono(const std::vector<long>& v) { return Monomial::from_ints(v); }

inline CTTerm make_term(const std::vector<std::pair<std::vector<long>, long>>& num,
                        const std::vector<std::vector<long>>& factors) {
  CTTerm t;
  for (const auto& [e, c] : num) t.numerator.push(mono(e), Rational(c));
  t.numerator.normalize();
  for (const auto& f : factors) t.denominator.push_back({mono(f)});
  return t;
}

struct CliResult {
  int status = -1;
  std::string out;
};

/// Runs the command through the shell, capturing stdout (stderr goes to stdout when merge is set).
inline CliResult run_command(const std::string& cmd, bool merge = true) {
  CliResult r;
  std::string full = cmd + (merge ? " 2>&1" : " 2>/dev/null");
  FILE* p = popen(full.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
  int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

inline const std::vector<std::string> kLambdas{"l1", "l2", "l3", "l4"};

// The worked 4 x 5 example over (l1..l4), before slack variables are attached.
inline CoreProblem worked_unslacked() {
  const long A[4][5] = {{19, -8, -1, -10, 0}, {165, -30, -7, -72, 28}, {-99, 36, 5, 50, -4}, {57, -24, -3, -30, 0}};
  CTTerm t;
  t.numerator.push(mono({11, -33, -39, 33}), 1);
  t.numerator.push(mono({-4, -112, 32, -7}), 1);
  t.numerator.push(mono({-15, -358, 111, -45}), 1);
  t.numerator.normalize();
  for (int j = 0; j < 5; ++j) t.denominator.push_back({mono({A[0][j], A[1][j], A[2][j], A[3][j]})});
  return make_problem(VarOrder(kLambdas), {t}, kLambdas);
}

inline CoreProblem worked_example() { return attach_slack(worked_unslacked()); }

// Slack weights w and bound T such that every monomial of total slack degree <= deg is kept.
struct Grading {
  std::vector<Rational> w;
  std::int64_t T;
};

inline Grading slack_grading(const CoreProblem& p, std::int64_t deg, std::int64_t base = 11) {
  Grading g{std::vector<Rational>(p.order.size(), Rational(0)), 0};
  std::int64_t k = 0;
  for (auto z : p.slack_vars) g.w[z] = Rational(base + k++);
  g.T = deg * (base + k - 1);
  return g;
}

// Oracle equality between the constant term of the input and the expansion of the output.
inline bool oracle_equal(const CoreProblem& p, const TermSum& out, const Grading& g) {
  auto lhs = graded_expansion(p.E, g.w, g.T, p.lambda_vars, false);
  auto rhs = graded_expansion(out, g.w, g.T, {}, true);
  return lhs == rhs;
}

// Random slacked problem over (z_1..z_n, x, l_1..l_r).
inline CoreProblem random_problem(Rng& rng, std::size_t r, std::size_t n) {
  std::vector<std::string> names{"x"};
  std::vector<std::string> lams;
  for (std::size_t i = 1; i <= r; ++i) {
    names.push_back("l" + std::to_string(i));
    lams.push_back(names.back());
  }
  const std::size_t nv = names.size();
  CTTerm t;
  const std::int64_t monos = uniform(rng, 1, 2);
  for (std::int64_t k = 0; k < monos; ++k) {
    Monomial m(nv);
    m[0] = Rational(uniform(rng, 0, 2));
    for (std::size_t i = 1; i < nv; ++i) m[i] = Rational(uniform(rng, -4, 4));
    t.numerator.push(m, Rational(uniform(rng, -2, 3)));
  }
  t.numerator.normalize();
  if (t.numerator.empty()) t.numerator.push(Monomial(nv), 1);
  for (std::size_t j = 0; j < n; ++j) {
    Monomial u(nv);
    u[0] = Rational(uniform(rng, 0, 1));
    for (std::size_t i = 1; i < nv; ++i) u[i] = Rational(uniform(rng, -4, 4));
    t.denominator.push_back({u});
  }
  CoreProblem p{VarOrder(names), {t}, {}, {}};
  for (const auto& l : lams) p.lambda_vars.push_back(p.order.index_of(l));
  return attach_slack(p);
}

// Random A-operator input: underlined factor lam^{a} u_0 and two more factors, integer exponents.
inline CTTerm random_a_term(Rng& rng, std::int64_t max_a, std::size_t others = 2) {
  const std::size_t ny = others + 1, nv = 1 + ny;
  CTTerm t;
  Monomial num(nv);
  num[0] = Rational(uniform(rng, -20, 20));
  for (std::size_t i = 1; i < nv; ++i) num[i] = Rational(uniform(rng, -2, 2));
  t.numerator.push(num, Rational(uniform(rng, 1, 3)));
  for (;;) {
    t.denominator.clear();
    Label v;
    for (std::size_t j = 0; j <= others; ++j) {
      Monomial u(nv);
      const std::int64_t e = j == 0 ? uniform(rng, 1, max_a) : uniform(rng, -3 * max_a, 3 * max_a);
      u[0] = Rational(e);
      u[1 + j] = 1;
      v.push_back(e);
      t.denominator.push_back({u});
    }
    std::int64_t g = 0;
    for (auto x : v) g = std::gcd(g, x);
    if (g == 1) break;
  }
  t.numerator.normalize();
  t.underline = 0;
  return t;
}

inline std::vector<Rational> random_base(Rng& rng, std::size_t n) {
  std::vector<Rational> b;
  for (std::size_t i = 0; i < n; ++i) b.push_back(Rational(uniform(rng, 2, 7), uniform(rng, 1, 3)));
  return b;
}

// A point where the residue oracle is defined for t (no factor shares a root with the underlined one).
inline std::vector<Rational> generic_base(Rng& rng, const CTTerm& t) {
  for (;;) {
    auto b = random_base(rng, t.nvars() - 1);
    try {
      residue_a_operator(t, 0, b, 1);
      return b;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::CoincidentFactors) throw;
    }
  }
}

}  // namespace knapcone::testing
