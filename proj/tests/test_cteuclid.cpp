#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace knapcone;
using namespace knapcone::testing;

namespace {

bool slack_distinct(const TermSum& terms, const std::vector<std::size_t>& slack) {
  for (const auto& t : terms)
    for (std::size_t i = 0; i < t.denominator.size(); ++i)
      for (std::size_t j = i + 1; j < t.denominator.size(); ++j) {
        bool same = true;
        for (auto z : slack) same = same && t.denominator[i].u[z] == t.denominator[j].u[z];
        if (same) return false;
      }
  return true;
}

}  // namespace

TEST_CASE("slack variables") {
  CoreProblem one = make_problem(VarOrder({"l"}), {make_term({{{0}, 1}}, {{2}})}, {"l"});
  CoreProblem s1 = attach_slack(one);
  CHECK(s1.slack_vars.size() == 1);
  CHECK(s1.order.names() == std::vector<std::string>{"z1", "l"});
  CHECK(s1.E[0].denominator[0].u == mono({1, 2}));
  CHECK_THROWS_AS(attach_slack(s1), Error);
  try {
    attach_slack(s1);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AlreadySlacked);
  }

  CoreProblem w = worked_example();
  CHECK(w.order.names() == std::vector<std::string>{"z1", "z2", "z3", "z4", "z5", "l1", "l2", "l3", "l4"});
  CHECK(w.slack_vars == std::vector<std::size_t>{0, 1, 2, 3, 4});
  CHECK(w.lambda_vars == std::vector<std::size_t>{5, 6, 7, 8});

  // a name clash with an existing z1 is avoided
  CoreProblem clash = make_problem(VarOrder({"z1", "l"}), {make_term({{{0, 0}, 1}}, {{1, 1}})}, {"l"});
  CHECK(attach_slack(clash).order.names() == std::vector<std::string>{"_z1", "z1", "l"});
}

TEST_CASE("type optimization on the worked example") {
  CoreProblem p = worked_example();
  TypeOptimization info;
  CoreProblem q = optimize_type(p, &info);
  CHECK(info.rank == 3);
  CHECK(info.smith.invariant_factors() == std::vector<BigInt>{1, 2, 4});
  CHECK(info.smith.U * p.type_matrix() * info.smith.V == info.smith.S);
  CHECK(info.dropped_monomials == 2);

  // A^L and the transformed function agree with the reference form under lam_i -> 1/lam_i
  const IntMatrix reference{{-1, -1, 0, 0, -1}, {0, 0, -1, -1, -1}, {2, -1, 0, -1, 0}};
  IntMatrix negated = reference;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 5; ++j) negated(i, j) = -negated(i, j);
  CHECK(info.reduced_type == negated);

  // order (z1..z5, l1..l4)
  CTTerm display;
  display.numerator.push(mono({0, 0, 0, 0, 0, 4, 6, 1, 0}), 1);
  display.denominator = {{mono({1, 0, 0, 0, 0, -1, 0, 2, 0})},
                         {mono({0, 1, 0, 0, 0, -1, 0, -1, 0})},
                         {mono({0, 0, 1, 0, 0, 0, -1, 0, 0})},
                         {mono({0, 0, 0, 1, 0, 0, -1, -1, 0})},
                         {mono({0, 0, 0, 0, 1, -1, -1, 0, 0})}};
  RatMatrix inv = RatMatrix::identity(4);
  for (std::size_t i = 0; i < 4; ++i) inv(i, i) = -1;
  CHECK(q.E[0] == apply_matrix_action(inv, display, q.lambda_vars));

  // integral, full rank, determinant factor 1, unit row gcds
  IntMatrix AL = info.reduced_type;
  CHECK(rank(AL) == 3);
  CHECK(maximal_minor_gcd(AL) == 1);
  for (std::size_t i = 0; i < AL.rows(); ++i) {
    BigInt g = 0;
    for (std::size_t j = 0; j < AL.cols(); ++j) g = gcd(g, AL(i, j));
    CHECK(g == 1);
  }
}

TEST_CASE("type optimization on an identity type") {
  // order (z1, z2, l1, l2); type is the identity
  CTTerm t = make_term({{{0, 0, 1, -1}, 1}}, {{1, 0, 1, 0}, {0, 1, 0, 1}});
  CoreProblem p{VarOrder({"z1", "z2", "l1", "l2"}), {t}, {2, 3}, {0, 1}};
  TypeOptimization info;
  CoreProblem q = optimize_type(p, &info);
  CHECK(info.smith.invariant_factors() == std::vector<BigInt>{1, 1});
  CHECK(::abs(determinant(info.reduced_type)) == 1);
  CHECK(q.E[0].numerator.size() == 1);
  auto g = slack_grading(p, 5);
  CHECK(graded_expansion(p.E, g.w, g.T, p.lambda_vars) == graded_expansion(q.E, g.w, g.T, q.lambda_vars));

  CoreProblem zero{VarOrder({"z1", "l1"}), {make_term({{{0, 0}, 1}}, {{1, 0}})}, {1}, {0}};
  CHECK_THROWS_AS(optimize_type(zero), Error);
  CoreProblem two = p;
  two.E.push_back(t);
  CHECK_THROWS_AS(optimize_type(two), Error);
}

TEST_CASE("type optimization preserves the constant term on random 3 x 4 types") {
  Rng rng(79);
  int done = 0;
  while (done < 12) {
    CoreProblem p = random_problem(rng, 3, 4);
    if (p.type_matrix().rows() && rank(p.type_matrix()) == 0) continue;
    ++done;
    CoreProblem q = optimize_type(p);
    auto g = slack_grading(p, 5);
    CHECK(graded_expansion(p.E, g.w, g.T, p.lambda_vars) == graded_expansion(q.E, g.w, g.T, q.lambda_vars));
  }
}

TEST_CASE("elimination of a single geometric series") {
  // CT_l 1/(1 - z l y) = 1
  CoreProblem p = attach_slack(make_problem(VarOrder({"l", "y"}), {make_term({{{0, 0}, 1}}, {{1, 1}})}, {"l"}));
  auto [out, rep] = eliminate_all(p);
  REQUIRE(out.size() == 1);
  CHECK(out[0].denominator.empty());
  CHECK(out[0].numerator == LaurentPoly::monomial(Monomial(3)));
  CHECK(rep.final_terms == 1);
}

TEST_CASE("worked example pipeline") {
  CoreProblem p = worked_example();
  CoreProblem q = optimize_type(p);
  const auto g = slack_grading(p, 16);

  EliminationOptions eo;
  eo.merge = false;
  auto [unmerged, rep] = eliminate_all(q, eo);
  CHECK(unmerged.size() <= 23);
  CHECK(rep.final_terms == unmerged.size());
  CHECK(rep.rounds.size() == 4);
  CHECK(oracle_equal(p, unmerged, g));
  CHECK(slack_distinct(unmerged, p.slack_vars));

  auto [merged, rep2] = eliminate_all(q);
  CHECK(merged.size() <= unmerged.size());
  CHECK(oracle_equal(p, merged, g));

  // every explicit elimination order agrees with the oracle
  std::vector<std::size_t> order = q.lambda_vars;
  do {
    EliminationOptions o;
    o.order = order;
    auto [res, r] = eliminate_all(q, o);
    CHECK(oracle_equal(p, res, g));
    CHECK(r.eliminated.size() == 4);
  } while (std::next_permutation(order.begin(), order.end()));
}

TEST_CASE("worked example without type optimization") {
  CoreProblem p = worked_example();
  const auto g = slack_grading(p, 16);
  for (auto strategy : {Strategy::Auto, Strategy::AlwaysOne}) {
    EliminationOptions eo;
    eo.strategy = strategy;
    eo.merge = false;
    auto [out, rep] = eliminate_all(p, eo);
    CHECK(oracle_equal(p, out, g));
  }
}

TEST_CASE("worked example reaches the reference optimized term count" * doctest::may_fail()) {
  EliminationOptions eo;
  eo.merge = false;
  auto [out, rep] = eliminate_all(optimize_type(worked_example()), eo);
  CHECK(out.size() == 9);
}

TEST_CASE("worked example reaches the reference baseline term count" * doctest::may_fail()) {
  EliminationOptions eo;
  eo.strategy = Strategy::AlwaysOne;
  eo.merge = false;
  auto [out, rep] = eliminate_all(worked_example(), eo);
  CHECK(out.size() == 23);
}

TEST_CASE("random pipeline instances") {
  Rng rng(83);
  for (int it = 0; it < 40; ++it) {
    const std::size_t r = static_cast<std::size_t>(uniform(rng, 1, 2));
    const std::size_t n = static_cast<std::size_t>(uniform(rng, 1, 4));
    CoreProblem p = random_problem(rng, r, n);
    const auto g = slack_grading(p, 4);
    for (auto strategy : {Strategy::Auto, Strategy::AlwaysOne}) {
      EliminationOptions eo;
      eo.strategy = strategy;
      auto [out, rep] = eliminate_all(p, eo);
      CHECK(oracle_equal(p, out, g));
      CHECK(slack_distinct(out, p.slack_vars));
      for (const auto& t : out)
        for (auto l : p.lambda_vars) {
          for (const auto& [m, c] : t.numerator.terms()) CHECK(m[l].is_zero());
          for (const auto& f : t.denominator) CHECK(f.u[l].is_zero());
        }
      bool nonzero_type = false;
      IntMatrix A = p.type_matrix();
      for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j) nonzero_type = nonzero_type || A(i, j) != 0;
      if (nonzero_type) {
        auto [opt_out, opt_rep] = eliminate_all(optimize_type(p), eo);
        CHECK(oracle_equal(p, opt_out, g));
      }
    }
    if (r == 2) {
      // both elimination orders
      for (auto order : {std::vector<std::size_t>{p.lambda_vars[0], p.lambda_vars[1]},
                         std::vector<std::size_t>{p.lambda_vars[1], p.lambda_vars[0]}}) {
        EliminationOptions eo;
        eo.order = order;
        auto [out, rep] = eliminate_all(p, eo);
        CHECK(oracle_equal(p, out, g));
      }
    }
  }
}

TEST_CASE("variable choice heuristic") {
  // order (z1, z2, z3, a, b): a sits in one factor, b in two
  CTTerm t = make_term({{{0, 0, 0, 0, 0}, 1}}, {{1, 0, 0, 1, 1}, {0, 1, 0, 0, 3}, {0, 0, 1, 0, 0}});
  CHECK(choose_variable(t, {3, 4}) == 3);
  CTTerm u = make_term({{{0, 0, 0, 0, 0}, 1}}, {{1, 0, 0, 1, 0}, {0, 1, 0, 0, 3}, {0, 0, 1, 0, 0}});
  CHECK(choose_variable(u, {3, 4}) == 4);
  CHECK(choose_variable(u, {4, 3}) == 4);
}

TEST_CASE("eliminating a variable absent from the denominator") {
  CTTerm t = make_term({{{0, 0, 1}, 2}, {{0, 1, 0}, 3}}, {{1, 1, 0}});
  auto out = eliminate_variable(t, 2, Strategy::Auto);
  REQUIRE(out.size() == 1);
  CHECK(out[0].numerator == LaurentPoly::monomial(mono({0, 1, 0}), 3));
}

TEST_CASE("setting slack variables to one") {
  // order (z1, z2, x1, x2)
  TermSum plain{make_term({{{2, 1, 1, 0}, 1}}, {{0, 0, 1, 1}})};
  auto r1 = substitute_slack_ones(plain, {0, 1});
  CHECK(r1[0].numerator == LaurentPoly::monomial(mono({0, 0, 1, 0})));
  CHECK(r1[0].denominator == plain[0].denominator);

  auto r2 = substitute_slack_ones({make_term({{{0, 0, 0, 0}, 1}}, {{1, 0, 1, 0}})}, {0, 1});
  CHECK(r2[0].denominator[0].u == mono({0, 0, 1, 0}));

  CHECK_THROWS_AS(substitute_slack_ones({make_term({{{0, 0, 0, 0}, 1}}, {{1, 0, 0, 0}})}, {0, 1}), Error);
  try {
    substitute_slack_ones({make_term({{{0, 0, 0, 0}, 1}}, {{1, 0, 0, 0}})}, {0, 1});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SlackDegenerate);
  }
}
