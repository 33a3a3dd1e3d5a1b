#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "knapcone/decdenu/decdenu.hpp"
#include "knapcone/exact/smith.hpp"
#include "knapcone/lattice/lll.hpp"

namespace knapcone {

/// An Elliott rational function with designated elimination variables.
/// Exponent positions follow `order`; after slack injection the slack variables
/// come first, so they dominate the field order.
struct CoreProblem {
  VarOrder order;
  TermSum E;
  std::vector<std::size_t> lambda_vars;
  std::vector<std::size_t> slack_vars;

  /// Columns are the lam-exponents of the factors of the first (or only) summand.
  IntMatrix type_matrix() const {
    if (E.empty()) return IntMatrix();
    const auto& den = E[0].denominator;
    IntMatrix A(lambda_vars.size(), den.size());
    for (std::size_t j = 0; j < den.size(); ++j)
      for (std::size_t i = 0; i < lambda_vars.size(); ++i) {
        const Rational& e = den[j].u[lambda_vars[i]];
        if (!e.is_integer()) fail(ErrorCode::NonIntegerExponent, "type matrix entry " + e.str() + " is fractional");
        A(i, j) = e.num();
      }
    return A;
  }
};

inline CoreProblem make_problem(const VarOrder& order, TermSum E, const std::vector<std::string>& lambdas) {
  CoreProblem p{order, std::move(E), {}, {}};
  for (const auto& name : lambdas) p.lambda_vars.push_back(order.index_of(name));
  for (const auto& t : p.E) {
    for (const auto& [m, c] : t.numerator.terms())
      if (m.size() != order.size()) fail(ErrorCode::InvalidInput, "monomial length does not match variable order");
    for (const auto& f : t.denominator) {
      if (f.u.size() != order.size()) fail(ErrorCode::InvalidInput, "monomial length does not match variable order");
      if (f.u.is_one()) fail(ErrorCode::DegenerateFactor, "denominator factor 1 - 1");
    }
  }
  return p;
}

/// Gives every denominator factor its own slack variable z_j (exponent 1).
inline CoreProblem attach_slack(const CoreProblem& p) {
  if (!p.slack_vars.empty()) fail(ErrorCode::AlreadySlacked, "slack variables already attached");
  std::size_t nz = 0;
  for (const auto& t : p.E) nz += t.denominator.size();
  std::vector<std::string> names;
  for (std::size_t j = 1; j <= nz; ++j) {
    std::string z = "z" + std::to_string(j);
    while (p.order.find(z) || std::find(names.begin(), names.end(), z) != names.end()) z = "_" + z;
    names.push_back(z);
  }
  for (const auto& n : p.order.names()) names.push_back(n);
  CoreProblem q;
  q.order = VarOrder(names);
  for (std::size_t j = 0; j < nz; ++j) q.slack_vars.push_back(j);
  for (auto l : p.lambda_vars) q.lambda_vars.push_back(l + nz);
  auto widen = [&](const Monomial& m) {
    Monomial r(nz + m.size());
    for (std::size_t i = 0; i < m.size(); ++i) r[nz + i] = m[i];
    return r;
  };
  std::size_t z = 0;
  for (const auto& t : p.E) {
    CTTerm w;
    for (const auto& [m, c] : t.numerator.terms()) w.numerator.push(widen(m), c);
    w.numerator.normalize();
    for (const auto& f : t.denominator) {
      Monomial u = widen(f.u);
      u[z++] = 1;
      w.denominator.push_back({std::move(u)});
    }
    q.E.push_back(std::move(w));
  }
  return q;
}

struct TypeOptimization {
  SmithForm smith;
  RatMatrix W1;
  IntMatrix W2;
  IntMatrix reduced_type;  // A^L
  std::size_t rank = 0;
  std::size_t dropped_monomials = 0;
};

/// Rewrites the lam-block through SNF scaling and LLL so the type matrix becomes
/// a reduced basis. Numerator monomials that can no longer reach lam-degree zero
/// are removed. Requires a single summand.
inline CoreProblem optimize_type(const CoreProblem& p, TypeOptimization* info = nullptr) {
  if (p.E.size() != 1) fail(ErrorCode::InvalidInput, "type optimization needs a single summand");
  IntMatrix A = p.type_matrix();
  bool zero = true;
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) zero = zero && A(i, j) == 0;
  if (A.empty() || zero) fail(ErrorCode::ZeroType, "type matrix is zero");

  const std::size_t r = A.rows();
  TypeOptimization t;
  t.smith = smith_normal_form(A);
  const std::size_t s = t.smith.rank;
  t.rank = s;
  t.W1 = to_rational(t.smith.U);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < r; ++j) t.W1(i, j) /= Rational(t.smith.S(i, i));

  CTTerm term = apply_matrix_action(t.W1, p.E[0], p.lambda_vars);
  LaurentPoly kept;
  for (const auto& [m, c] : term.numerator.terms()) {
    bool ok = true;
    for (std::size_t i = 0; i < r && ok; ++i) {
      const Rational& e = m[p.lambda_vars[i]];
      ok = i < s ? e.is_integer() : e.is_zero();
    }
    if (ok)
      kept.push(m, c);
    else
      ++t.dropped_monomials;
  }
  kept.normalize();
  term.numerator = std::move(kept);

  IntMatrix top(s, A.cols());
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) top(i, j) = term.denominator[j].u[p.lambda_vars[i]].to_integer();
  ReducedBasis red = lll_reduce(top);
  t.W2 = IntMatrix::identity(r);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) t.W2(i, j) = red.transform(i, j);
  term = apply_matrix_action(to_rational(t.W2), term, p.lambda_vars);
  t.reduced_type = red.basis;

  CoreProblem q = p;
  q.E = {std::move(term)};
  if (info) *info = std::move(t);
  return q;
}

struct EliminationRound {
  std::size_t terms = 0;  // summands after this round
  TreeStats stats;        // accumulated over all a-operator calls of the round
};

struct EliminationReport {
  std::vector<std::string> eliminated;  // variable names per round when the order is global
  std::vector<EliminationRound> rounds;
  std::size_t final_terms = 0;
};

struct EliminationOptions {
  Strategy strategy = Strategy::Auto;
  CandidateRule rule = CandidateRule::SumNorm;
  /// Explicit elimination order (positions); empty means the per-summand heuristic.
  std::vector<std::size_t> order;
  /// Merge summands with identical denominators at the end.
  bool merge = true;
};

/// Heuristic choice of the next variable for one summand: fewest factors
/// containing it, then the largest absolute exponent, then the lowest position.
inline std::size_t choose_variable(const CTTerm& t, const std::vector<std::size_t>& candidates) {
  std::size_t best = candidates.front();
  std::size_t best_count = SIZE_MAX;
  Rational best_max = -1;
  for (auto v : candidates) {
    std::size_t count = 0;
    Rational mx = 0;
    for (const auto& f : t.denominator)
      if (!f.u[v].is_zero()) {
        ++count;
        mx = std::max(mx, abs(f.u[v]));
      }
    if (count < best_count || (count == best_count && mx > best_max)) {
      best = v;
      best_count = count;
      best_max = mx;
    }
  }
  return best;
}

/// CT in the variable at position lam of one summand, as a lam-free sum.
inline TermSum eliminate_variable(const CTTerm& t, std::size_t lam, Strategy strategy, TreeStats* stats = nullptr,
                                  CandidateRule rule = CandidateRule::SumNorm) {
  bool carries = false;
  for (const auto& f : t.denominator) carries = carries || !f.u[lam].is_zero();
  TermSum out;
  if (!carries) {
    CTTerm r{LaurentPoly(), t.denominator, std::nullopt};
    for (const auto& [m, c] : t.numerator.terms())
      if (m[lam].is_zero()) r.numerator.push(m, c);
    r.numerator.normalize();
    if (!r.numerator.empty()) out.push_back(std::move(r));
    return out;
  }
  // lam-positive form: every lam-carrying factor gets a positive exponent
  CTTerm pos = t;
  pos.underline.reset();
  for (auto& f : pos.denominator)
    if (f.u[lam].sign() < 0) {
      f.u = f.u.inverse();
      pos.numerator.shift(f.u);
      pos.numerator.scale(-1);
    }
  CTTerm low = pos, high = pos;  // numerator parts with lam-degree <= 0 and >= 1
  low.numerator = LaurentPoly();
  high.numerator = LaurentPoly();
  for (const auto& [m, c] : pos.numerator.terms()) {
    if (!m[lam].is_integer()) fail(ErrorCode::NonIntegerExponent, "numerator exponent " + m[lam].str() + " is fractional");
    (m[lam].sign() <= 0 ? low : high).numerator.push(m, c);
  }
  low.numerator.normalize();
  high.numerator.normalize();
  DecOptions opt;
  opt.strategy = strategy;
  opt.rule = rule;
  for (std::size_t k = 0; k < pos.denominator.size(); ++k) {
    if (pos.denominator[k].u[lam].is_zero()) continue;
    Comparison cmp = compare_to_one(pos.denominator[k].u);
    if (cmp == Comparison::One) fail(ErrorCode::DegenerateFactor, "denominator factor 1 - 1");
    const bool small = cmp == Comparison::Small;
    CTTerm src = small ? low : high;
    if (src.numerator.empty()) continue;
    src.underline = k;
    DecompOutput res = a_operator(src, lam, opt);
    if (stats) {
      stats->nl += res.stats.nl;
      stats->internal_nodes += res.stats.internal_nodes;
      stats->lll_nodes += res.stats.lll_nodes;
      stats->depth = std::max(stats->depth, res.stats.depth);
    }
    for (auto& r : res.terms) {
      if (!small) r.numerator.scale(-1);
      out.push_back(std::move(r));
    }
  }
  return out;
}

/// Eliminates every lam variable; the result is free of them.
inline std::pair<TermSum, EliminationReport> eliminate_all(const CoreProblem& p, const EliminationOptions& opt = {}) {
  EliminationReport rep;
  struct Pending {
    CTTerm t;
    std::vector<std::size_t> left;
  };
  std::vector<Pending> cur;
  for (const auto& t : p.E) cur.push_back({t, p.lambda_vars});
  if (!opt.order.empty()) {
    std::vector<std::size_t> a = opt.order, b = p.lambda_vars;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) fail(ErrorCode::InvalidInput, "elimination order must list each lam variable once");
  }
  for (std::size_t round = 0; round < p.lambda_vars.size(); ++round) {
    EliminationRound er;
    std::vector<Pending> next;
    for (auto& pd : cur) {
      std::size_t v = opt.order.empty() ? choose_variable(pd.t, pd.left) : opt.order[round];
      std::vector<std::size_t> left;
      for (auto x : pd.left)
        if (x != v) left.push_back(x);
      for (auto& r : eliminate_variable(pd.t, v, opt.strategy, &er.stats, opt.rule)) next.push_back({std::move(r), left});
    }
    cur = std::move(next);
    er.terms = cur.size();
    rep.rounds.push_back(er);
    if (!opt.order.empty()) rep.eliminated.push_back(p.order[opt.order[round]]);
  }
  TermSum out;
  for (auto& pd : cur) out.push_back(std::move(pd.t));
  out = opt.merge ? canonical_sum(out) : sorted_sum(out);
  rep.final_terms = out.size();
  return {std::move(out), std::move(rep)};
}

/// Sets every slack variable to 1.
inline TermSum substitute_slack_ones(const TermSum& terms, const std::vector<std::size_t>& slack) {
  TermSum out;
  for (const auto& t : terms) {
    CTTerm r;
    for (const auto& [m, c] : t.numerator.terms()) {
      Monomial mm = m;
      for (auto z : slack) mm[z] = 0;
      r.numerator.push(std::move(mm), c);
    }
    r.numerator.normalize();
    for (const auto& f : t.denominator) {
      Monomial u = f.u;
      for (auto z : slack) u[z] = 0;
      if (u.is_one()) fail(ErrorCode::SlackDegenerate, "factor becomes 1 - 1 at z = 1");
      r.denominator.push_back({std::move(u)});
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace knapcone
