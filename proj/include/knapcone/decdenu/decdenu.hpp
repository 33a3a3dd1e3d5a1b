#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "knapcone/elliott/encoding.hpp"
#include "knapcone/elliott/term.hpp"
#include "knapcone/exact/smith.hpp"
#include "knapcone/lattice/multiplier.hpp"

namespace knapcone {

struct DecNode {
  std::size_t s = 0;
  Label v;
  MultiplierChoice multiplier;
  bool is_lll_node = false;
  std::vector<DecNode> children;
};

struct TreeStats {
  std::uint64_t nl = 0;
  std::uint64_t depth = 0;
  std::uint64_t internal_nodes = 0;
  std::uint64_t lll_nodes = 0;
  friend bool operator==(const TreeStats&, const TreeStats&) = default;
};

/// Structural checks gathered while the tree is built.
struct InvariantReport {
  std::uint64_t nodes_checked = 0;
  std::uint64_t child_index_violations = 0;  // child index > floor(parent / 2)
  std::uint64_t gcd_violations = 0;          // gcd(v_s, v_j : j != s) != 1
  std::uint64_t depth_violations = 0;        // depth > floor(log2(root index))

  std::uint64_t total() const { return child_index_violations + gcd_violations + depth_violations; }
  InvariantReport& operator+=(const InvariantReport& o) {
    nodes_checked += o.nodes_checked;
    child_index_violations += o.child_index_violations;
    gcd_violations += o.gcd_violations;
    depth_violations += o.depth_violations;
    return *this;
  }
};

struct DecOptions {
  Strategy strategy = Strategy::Auto;
  CandidateRule rule = CandidateRule::SumNorm;
  bool check_coincident = true;
  bool build_tree = false;
  bool require_integral_leaves = true;
  /// When set, leaves are handed over here instead of being stored in the output.
  std::function<void(CTTerm&&)> leaf_sink;
};

struct DecompOutput {
  TermSum terms;
  TreeStats stats;
  InvariantReport invariants;
  std::optional<DecNode> tree;
};

inline std::uint64_t floor_log2(std::uint64_t x) {
  std::uint64_t r = 0;
  while (x >>= 1) ++r;
  return r;
}

/// Reduction modulo 1 - u_s lam^{a_s}: other factors get lam-exponents in [0, a_s/2]
/// (flipping when the negative remainder is closer), numerator lam-exponents land in [1, a_s].
/// Returns the reduced term and its lam-exponent label.
inline std::pair<CTTerm, Label> reduce_mod(const CTTerm& t, std::size_t s, std::size_t lam) {
  if (s >= t.denominator.size()) fail(ErrorCode::InvalidInput, "underline index out of range");
  const Monomial U = t.denominator[s].u;
  if (!U[lam].is_integer() || U[lam].sign() <= 0)
    fail(ErrorCode::NonIntegerExponent, "underlined factor needs a positive integer exponent");
  const BigInt a = U[lam].num();
  const std::int64_t ai = a.get_si();
  CTTerm out = t;
  Label label(t.denominator.size());
  label[s] = ai;
  Monomial shift_total(U.size());
  bool negate = false;
  for (std::size_t j = 0; j < out.denominator.size(); ++j) {
    if (j == s) continue;
    auto& u = out.denominator[j].u;
    if (!u[lam].is_integer()) fail(ErrorCode::NonIntegerExponent, "factor exponent " + u[lam].str() + " is fractional");
    const BigInt c = u[lam].num();
    BigInt r = floor_mod(c, a);
    BigInt q = floor_div(c, a);
    if (2 * r <= a) {
      if (q != 0) u.add_scaled(U, -Rational(q));
      label[j] = r.get_si();
    } else {
      u.add_scaled(U, -Rational(BigInt(q + 1)));
      u = u.inverse();
      shift_total += u;
      negate = !negate;
      label[j] = BigInt(a - r).get_si();
    }
  }
  auto& terms = out.numerator.mutable_terms();
  for (auto& [m, c] : terms) {
    m += shift_total;
    if (negate) c = -c;
    if (!m[lam].is_integer()) fail(ErrorCode::NonIntegerExponent, "numerator exponent " + m[lam].str() + " is fractional");
    BigInt q = floor_div(m[lam].num() - 1, a);
    if (q != 0) m.add_scaled(U, -Rational(q));
  }
  out.numerator.normalize();
  out.underline = s;
  return {std::move(out), std::move(label)};
}

namespace detail {

class DecDenuRun {
 public:
  DecDenuRun(std::size_t lam, const DecOptions& opt, std::int64_t root_index)
      : lam_(lam), opt_(opt), depth_bound_(floor_log2(static_cast<std::uint64_t>(root_index))) {}

  DecompOutput run(const CTTerm& root) {
    if (!root.underline) fail(ErrorCode::InvalidInput, "a-operator needs an underlined factor");
    DecNode* node = nullptr;
    if (opt_.build_tree) {
      out_.tree.emplace();
      node = &*out_.tree;
    }
    out_.stats.depth = visit(root, *root.underline, 0, node);
    return std::move(out_);
  }

 private:
  Label label_of(const CTTerm& t) const {
    Label v(t.denominator.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
      const Rational& e = t.denominator[j].u[lam_];
      if (!e.is_integer()) fail(ErrorCode::NonIntegerExponent, "factor exponent " + e.str() + " is fractional");
      v[j] = e.to_int64();
    }
    return v;
  }

  void check_node(std::size_t s, const Label& v) {
    ++out_.invariants.nodes_checked;
    std::int64_t g = 0;
    for (std::size_t j = 0; j < v.size(); ++j)
      if (j != s) g = std::gcd(g, v[j]);
    if (std::gcd(g, v[s]) != 1) ++out_.invariants.gcd_violations;
  }

  void emit_leaf(CTTerm t) {
    if (opt_.require_integral_leaves) {
      for (const auto& [m, c] : t.numerator.terms())
        if (!m.is_integral()) fail(ErrorCode::NonIntegerLeaf, "leaf numerator has a fractional exponent");
      for (const auto& f : t.denominator)
        if (!f.u.is_integral()) fail(ErrorCode::NonIntegerLeaf, "leaf factor has a fractional exponent");
    }
    for (const auto& f : t.denominator)
      if (f.u.is_one()) fail(ErrorCode::DegenerateFactor, "leaf factor collapsed to 1 - 1");
    t.underline.reset();
    ++out_.stats.nl;
    if (t.numerator.empty()) return;
    if (opt_.leaf_sink)
      opt_.leaf_sink(std::move(t));
    else
      out_.terms.push_back(std::move(t));
  }

  // Returns the depth of the subtree rooted here.
  std::uint64_t visit(const CTTerm& F, std::size_t s, std::uint64_t depth, DecNode* node) {
    const Label v = label_of(F);
    if (v[s] < 1) fail(ErrorCode::InvalidLabel, "underlined factor needs a positive exponent");
    if (depth > depth_bound_) ++out_.invariants.depth_violations;
    check_node(s, v);
    if (node) {
      node->s = s;
      node->v = v;
    }

    if (v[s] == 1) {
      // lam = u_s^{-1}: every monomial M becomes M - e_M * U_s.
      const Monomial U = F.denominator[s].u;
      CTTerm leaf;
      for (const auto& [m, c] : F.numerator.terms()) {
        Monomial mm = m;
        mm.add_scaled(U, -mm[lam_]);
        leaf.numerator.push(std::move(mm), c);
      }
      leaf.numerator.normalize();
      for (std::size_t j = 0; j < F.denominator.size(); ++j) {
        if (j == s) continue;
        Monomial u = F.denominator[j].u;
        u.add_scaled(U, -u[lam_]);
        leaf.denominator.push_back({std::move(u)});
      }
      emit_leaf(std::move(leaf));
      return depth;
    }

    ++out_.stats.internal_nodes;
    MultiplierChoice choice = select_multiplier(s, v, opt_.strategy, opt_.rule);
    if (choice.is_lll_suggested) ++out_.stats.lll_nodes;
    if (node) {
      node->multiplier = choice;
      node->is_lll_node = choice.is_lll_suggested;
    }

    CTTerm G = gamma_transform(F, s, choice.m, lam_);
    auto [Fb, b] = reduce_mod(G, s, lam_);

    if (opt_.check_coincident) {
      for (std::size_t i = 0; i < b.size(); ++i) {
        if (b[i] == 0) continue;
        for (std::size_t j = i + 1; j < b.size(); ++j)
          if (b[j] == b[i] && Fb.denominator[i].u == Fb.denominator[j].u)
            fail(ErrorCode::CoincidentFactors, "two denominator factors coincide after reduction");
      }
    }

    bool any_child = false;
    std::uint64_t deepest = depth;
    Fb.numerator.scale(-1);
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (j == s || b[j] == 0) continue;
      any_child = true;
      if (2 * b[j] > v[s]) ++out_.invariants.child_index_violations;
      DecNode* child = nullptr;
      if (node) child = &node->children.emplace_back();
      Fb.underline = j;
      deepest = std::max(deepest, visit(Fb, j, depth + 1, child));
    }
    if (!any_child) {
      // Every other factor is lam-free: only numerator monomials of degree a_s
      // contribute, through lam^{a_s} = u_s^{-1}.
      Fb.numerator.scale(-1);
      const Monomial U = Fb.denominator[s].u;
      CTTerm leaf;
      for (const auto& [m, c] : Fb.numerator.terms()) {
        if (m[lam_] != Rational(v[s])) continue;
        leaf.numerator.push(m - U, c);
      }
      leaf.numerator.normalize();
      for (std::size_t j = 0; j < Fb.denominator.size(); ++j)
        if (j != s) leaf.denominator.push_back(Fb.denominator[j]);
      emit_leaf(std::move(leaf));
    }
    return deepest;
  }

  std::size_t lam_;
  DecOptions opt_;
  std::uint64_t depth_bound_;
  DecompOutput out_;
};

}  // namespace detail

/// A-operator of the underlined factor with respect to the variable at position lam.
/// Output terms are free of that variable (its exponent is zero everywhere).
inline DecompOutput a_operator(const CTTerm& t, std::size_t lam, const DecOptions& opt = {}) {
  if (!t.underline || *t.underline >= t.denominator.size())
    fail(ErrorCode::InvalidInput, "a-operator needs an underlined factor");
  const Rational& a = t.denominator[*t.underline].u[lam];
  if (!a.is_integer() || a.sign() <= 0)
    fail(ErrorCode::InvalidLabel, "underlined factor needs a positive integer exponent");
  detail::DecDenuRun run(lam, opt, a.to_int64());
  return run.run(t);
}

inline DecompOutput a_operator(const CTTerm& t, std::size_t lam, Strategy strategy) {
  DecOptions opt;
  opt.strategy = strategy;
  return a_operator(t, lam, opt);
}

inline std::int64_t gcd_of(const std::vector<std::int64_t>& a) {
  std::int64_t g = 0;
  for (auto x : a) g = std::gcd(g, x);
  return g;
}

/// Variables lam, y1..yn for the denumerant function.
inline VarOrder knapsack_order(std::size_t n, bool with_tag = false) {
  std::vector<std::string> names{"lambda"};
  for (std::size_t i = 1; i <= n; ++i) names.push_back("y" + std::to_string(i));
  if (with_tag) names.push_back("w");
  return VarOrder(names);
}

/// lam^{-a0} * sum_{i<count} w^i lam^{-i} / prod (1 - lam^{a_j} y_j), factor s underlined.
/// With count == 0 there is no tag variable and the numerator is lam^{-a0}.
inline CTTerm knapsack_term(const BigInt& a0, const std::vector<std::int64_t>& a, std::size_t s,
                            std::size_t count = 0) {
  const std::size_t n = a.size();
  const std::size_t nv = 1 + n + (count ? 1 : 0);
  CTTerm t;
  for (std::size_t j = 0; j < n; ++j) {
    Monomial u(nv);
    u[0] = Rational(static_cast<long>(a[j]));
    u[1 + j] = 1;
    t.denominator.push_back({std::move(u)});
  }
  if (count == 0) {
    Monomial m(nv);
    m[0] = -Rational(a0);
    t.numerator = LaurentPoly::monomial(std::move(m));
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      Monomial m(nv);
      m[0] = -Rational(BigInt(a0 + static_cast<unsigned long>(i)));
      m[nv - 1] = Rational(static_cast<long>(i));
      t.numerator.push(std::move(m), 1);
    }
    t.numerator.normalize();
  }
  t.underline = s;
  return t;
}

inline void validate_knapsack(const std::vector<std::int64_t>& a, std::size_t s) {
  if (a.empty()) fail(ErrorCode::InvalidInput, "empty weight vector");
  for (auto x : a)
    if (x < 1) fail(ErrorCode::InvalidInput, "weights must be positive");
  if (gcd_of(a) != 1) fail(ErrorCode::GcdNotOne, "gcd of the weights must be 1");
  if (s >= a.size()) fail(ErrorCode::InvalidInput, "index out of range");
}

inline Monomial drop_position(const Monomial& m, std::size_t pos) {
  Monomial r(m.size() - 1);
  for (std::size_t i = 0, k = 0; i < m.size(); ++i)
    if (i != pos) r[k++] = m[i];
  return r;
}

inline CTTerm drop_position(const CTTerm& t, std::size_t pos) {
  CTTerm r;
  for (const auto& [m, c] : t.numerator.terms()) r.numerator.push(drop_position(m, pos), c);
  r.numerator.normalize();
  for (const auto& f : t.denominator) r.denominator.push_back({drop_position(f.u, pos)});
  return r;
}

/// DecDenu on the denumerant function with factor s (zero-based) underlined.
/// Output terms live over y1..yn (and the tag w when count > 0).
inline DecompOutput decompose_knapsack(const BigInt& a0, const std::vector<std::int64_t>& a, std::size_t s,
                                       const DecOptions& opt = {}, std::size_t count = 0) {
  validate_knapsack(a, s);
  if (a0 < 0) fail(ErrorCode::InvalidInput, "a0 must be nonnegative");
  DecompOutput out = a_operator(knapsack_term(a0, a, s, count), 0, opt);
  for (auto& t : out.terms) t = drop_position(t, 0);
  return out;
}

inline DecompOutput decompose_knapsack(const BigInt& a0, const std::vector<std::int64_t>& a, std::size_t s,
                                       Strategy strategy) {
  DecOptions opt;
  opt.strategy = strategy;
  return decompose_knapsack(a0, a, s, opt);
}

inline TreeStats tree_stats(const DecNode& root) {
  TreeStats st;
  struct Walk {
    TreeStats& st;
    void operator()(const DecNode& n, std::uint64_t d) {
      st.depth = std::max(st.depth, d);
      if (n.children.empty()) {
        ++st.nl;
        return;
      }
      ++st.internal_nodes;
      if (n.is_lll_node) ++st.lll_nodes;
      for (const auto& c : n.children) (*this)(c, d + 1);
    }
  };
  Walk{st}(root, 0);
  return st;
}

/// Checks a leaf term over the positions `vars`: integral exponents and a
/// unimodular denominator cone (maximal minor gcd 1). Returns an empty string when fine.
inline std::string leaf_defect(const CTTerm& t, const std::vector<std::size_t>& vars) {
  for (const auto& [m, c] : t.numerator.terms())
    if (!m.is_integral()) return "fractional numerator exponent";
  if (t.denominator.empty()) return "";
  IntMatrix A(t.denominator.size(), vars.size());
  for (std::size_t i = 0; i < t.denominator.size(); ++i) {
    if (!t.denominator[i].u.is_integral()) return "fractional factor exponent";
    for (std::size_t j = 0; j < vars.size(); ++j) A(i, j) = t.denominator[i].u[vars[j]].num();
  }
  try {
    if (maximal_minor_gcd(A) != 1) return "denominator cone is not unimodular";
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

/// Tree statistics from labels alone (no terms). Subtrees are memoized up to
/// permutation of the non-underlined entries, except for the order-dependent
/// bezout3 strategy.
class LabelTreeWalker {
 public:
  explicit LabelTreeWalker(Strategy strategy, CandidateRule rule = CandidateRule::SumNorm)
      : strategy_(strategy), rule_(rule) {}

  TreeStats stats(std::size_t s, const Label& v) {
    if (s >= v.size() || v[s] < 1) fail(ErrorCode::InvalidLabel, "underlined entry must be positive");
    root_bound_ = floor_log2(static_cast<std::uint64_t>(v[s]));
    return visit(s, v);
  }

  const InvariantReport& invariants() const { return inv_; }

 private:
  TreeStats visit(std::size_t s, const Label& v) {
    if (v[s] == 1) return TreeStats{1, 0, 0, 0};
    Label key;
    const bool memo = strategy_ != Strategy::Bezout3;
    if (memo) {
      key.push_back(v[s]);
      for (std::size_t j = 0; j < v.size(); ++j)
        if (j != s) {
          auto r = signed_remainder_abs(v[j], v[s]);
          if (r) key.push_back(r);
        }
      std::sort(key.begin() + 1, key.end());
      if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    }
    ++inv_.nodes_checked;
    std::int64_t g = 0;
    for (std::size_t j = 0; j < v.size(); ++j)
      if (j != s) g = std::gcd(g, v[j]);
    if (std::gcd(g, v[s]) != 1) ++inv_.gcd_violations;

    MultiplierChoice c = select_multiplier(s, v, strategy_, rule_);
    Label b(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) b[j] = j == s ? v[s] : mul_mod_abs(c.m, v[j], v[s]);
    TreeStats st{0, 0, 1, c.is_lll_suggested ? 1u : 0u};
    bool any = false;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (j == s || b[j] == 0) continue;
      any = true;
      if (2 * b[j] > v[s]) ++inv_.child_index_violations;
      TreeStats ch = visit(j, b);
      st.nl += ch.nl;
      st.internal_nodes += ch.internal_nodes;
      st.lll_nodes += ch.lll_nodes;
      st.depth = std::max(st.depth, ch.depth + 1);
    }
    if (!any) st.nl += 1;
    if (memo) memo_[key] = st;
    return st;
  }

  Strategy strategy_;
  CandidateRule rule_;
  std::uint64_t root_bound_ = 0;
  InvariantReport inv_;
  std::map<Label, TreeStats> memo_;
};

/// Tree statistics of the denumerant cone with index a_s.
inline TreeStats knapsack_tree_stats(const std::vector<std::int64_t>& a, std::size_t s, Strategy strategy,
                                     InvariantReport* inv = nullptr, CandidateRule rule = CandidateRule::SumNorm) {
  validate_knapsack(a, s);
  LabelTreeWalker w(strategy, rule);
  TreeStats st = w.stats(s, a);
  if (inv) {
    *inv = w.invariants();
    if (st.depth > floor_log2(static_cast<std::uint64_t>(a[s]))) ++inv->depth_violations;
  }
  return st;
}

}  // namespace knapcone
