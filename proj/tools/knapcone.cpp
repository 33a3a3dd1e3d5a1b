// knapcone: denumerant cone decomposition, counting, constant terms, suites.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "knapcone.hpp"

using namespace knapcone;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitClaimFailed = 3;

bool is_validation_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidInput:
    case ErrorCode::GcdNotOne:
    case ErrorCode::InvalidLabel:
    case ErrorCode::OutOfRange:
    case ErrorCode::AlreadySlacked:
    case ErrorCode::ZeroType:
    case ErrorCode::SlackDegenerate:
    case ErrorCode::NonProperFactor:
      return true;
    default:
      return false;
  }
}

std::vector<std::int64_t> parse_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || v < 1)
      fail(ErrorCode::InvalidInput, "field 'a': '" + item + "' is not a positive integer");
    out.push_back(v);
  }
  if (out.empty()) fail(ErrorCode::InvalidInput, "field 'a': empty list");
  return out;
}

BigInt parse_big(const std::string& text, const std::string& field) {
  BigInt z;
  if (text.empty() || z.set_str(text, 10) != 0) fail(ErrorCode::InvalidInput, "field '" + field + "': not an integer");
  return z;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::InvalidInput, "cannot write '" + path + "'");
  out << text;
}

struct Common {
  std::string strategy = "auto";
  std::string rule = "sum";
  std::uint64_t seed = 1;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--strategy", c.strategy, "auto | always-one | lll-only | bezout3");
  cmd->add_option("--rule", c.rule, "LLL candidate ranking: sum | max");
  cmd->add_option("--seed", c.seed, "direction seed (KNAPCONE_SEED overrides)");
}

std::uint64_t effective_seed(std::uint64_t seed) {
  if (const char* env = std::getenv("KNAPCONE_SEED")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') fail(ErrorCode::InvalidInput, "KNAPCONE_SEED is not an unsigned integer");
    return v;
  }
  return seed;
}

EvalOptions eval_options(const Common& c) {
  EvalOptions eo;
  eo.strategy = parse_strategy(c.strategy);
  eo.rule = parse_candidate_rule(c.rule);
  eo.seed = effective_seed(c.seed);
  return eo;
}

struct SuiteEntry {
  SuiteInstance inst;
  BigInt frobenius;
  bool has_frobenius = false;
};

std::vector<SuiteEntry> load_suite(const std::string& source) {
  std::vector<SuiteEntry> out;
  if (source.rfind("builtin:", 0) == 0) {
    for (auto& s : builtin_suite(source.substr(8))) {
      SuiteEntry e{s, 0, s.frobenius.has_value()};
      if (s.frobenius) e.frobenius = BigInt(static_cast<long>(*s.frobenius));
      out.push_back(std::move(e));
    }
  } else {
    std::stringstream ss(source);
    std::string path;
    while (std::getline(ss, path, ',')) {
      InstanceFile f = load_instance(path);
      SuiteEntry e;
      e.inst.name = f.name.empty() ? path : f.name;
      e.inst.a = f.a;
      e.has_frobenius = f.frobenius.has_value();
      if (f.frobenius) e.frobenius = *f.frobenius;
      out.push_back(std::move(e));
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.inst.name < y.inst.name; });
  return out;
}

int cmd_decompose(const std::string& file, std::int64_t index, const Common& c, const std::string& out_path,
                  bool stats_only) {
  InstanceFile inst = load_instance(file);
  if (index < 1 || static_cast<std::size_t>(index) > inst.a.size())
    fail(ErrorCode::InvalidInput, "field 'index': must lie in 1.." + std::to_string(inst.a.size()));
  DecOptions opt;
  opt.strategy = parse_strategy(c.strategy);
  opt.rule = parse_candidate_rule(c.rule);
  DecompOutput res = decompose_knapsack(inst.a0, inst.a, static_cast<std::size_t>(index - 1), opt);
  if (res.invariants.total() != 0) fail(ErrorCode::NonIntegerLeaf, "structural invariant violated");
  json j;
  j["format"] = kJsonFormat;
  j["instance"] = inst.name;
  j["a0"] = to_string(inst.a0);
  j["a"] = inst.a;
  j["index"] = index;
  j["strategy"] = std::string(to_string(opt.strategy));
  json vars = json::array();
  for (std::size_t i = 1; i <= inst.a.size(); ++i) vars.push_back("y" + std::to_string(i));
  j["variables"] = vars;
  j["stats"] = stats_json(res.stats);
  j["terms"] = terms_json(sorted_sum(res.terms));
  write_output(out_path, dump_json(j));
  if (stats_only && !(out_path.empty() || out_path == "-")) std::cout << dump_json(j["stats"]);
  return kExitOk;
}

int cmd_count(const std::string& a0_text, const std::string& a_text, const std::string& file, const Common& c) {
  BigInt a0;
  std::vector<std::int64_t> a;
  if (!file.empty()) {
    InstanceFile inst = load_instance(file);
    a0 = inst.a0;
    a = inst.a;
  } else {
    if (a_text.empty()) fail(ErrorCode::InvalidInput, "field 'a': missing");
    a0 = parse_big(a0_text.empty() ? "0" : a0_text, "a0");
    a = parse_list(a_text);
  }
  std::cout << to_string(denumerant(a0, a, eval_options(c))) << "\n";
  return kExitOk;
}

int cmd_ct(const std::string& file, const Common& c, const std::string& out_path, bool no_optimize, bool slack,
           bool slack_ones) {
  CoreProblem p = parse_ct_problem(detail::parse_json_text(read_text_file(file), file));
  if (slack) p = attach_slack(p);
  TypeOptimization info;
  bool optimized = false;
  if (!no_optimize && p.E.size() == 1) {
    p = optimize_type(p, &info);
    optimized = true;
  }
  EliminationOptions eo;
  eo.strategy = parse_strategy(c.strategy);
  eo.rule = parse_candidate_rule(c.rule);
  auto [terms, rep] = eliminate_all(p, eo);
  if (slack_ones) terms = substitute_slack_ones(terms, p.slack_vars);
  json j;
  j["format"] = kJsonFormat;
  j["variables"] = p.order.names();
  json lam = json::array();
  for (auto l : p.lambda_vars) lam.push_back(p.order[l]);
  j["lambda"] = lam;
  json sl = json::array();
  for (auto z : p.slack_vars) sl.push_back(p.order[z]);
  j["slack"] = sl;
  json r;
  r["optimized"] = optimized;
  if (optimized) {
    json d = json::array();
    for (const auto& x : info.smith.invariant_factors()) d.push_back(to_string(x));
    r["invariant_factors"] = d;
    r["dropped_monomials"] = info.dropped_monomials;
  }
  json rounds = json::array();
  for (const auto& er : rep.rounds) rounds.push_back(json{{"terms", er.terms}, {"stats", stats_json(er.stats)}});
  r["rounds"] = rounds;
  r["final_terms"] = rep.final_terms;
  j["report"] = r;
  j["terms"] = terms_json(terms);
  write_output(out_path, dump_json(j));
  return kExitOk;
}

int cmd_frobenius(const std::string& suite, std::size_t range, std::size_t max_n, const Common& c) {
  auto entries = load_suite(suite);
  EvalOptions eo = eval_options(c);
  bool all = true;
  for (const auto& e : entries) {
    if (!e.has_frobenius) {
      std::cout << e.inst.name << " SKIP no-claim\n";
      continue;
    }
    if (max_n && e.inst.a.size() > max_n) {
      std::cout << e.inst.name << " SKIP n=" << e.inst.a.size() << "\n";
      continue;
    }
    FrobeniusReport rep = frobenius_check(e.inst.a, e.frobenius, range, eo);
    std::cout << e.inst.name << (rep.holds ? " PASS" : " FAIL") << " F=" << to_string(e.frobenius)
              << " d(F)=" << to_string(rep.d_at_f()) << " min_d(F+1..F+" << range
              << ")=" << to_string(rep.min_after()) << "\n";
    all = all && rep.holds;
  }
  return all ? kExitOk : kExitClaimFailed;
}

int cmd_bench(const std::string& suite, const Common& c, const std::string& out_path, bool timing) {
  auto entries = load_suite(suite);
  const Strategy strategy = parse_strategy(c.strategy);
  const CandidateRule rule = parse_candidate_rule(c.rule);
  std::ostringstream csv;
  csv << "instance,strategy,nl,depth,internal,lll_nodes,ms\n";
  for (const auto& e : entries) {
    auto t0 = std::chrono::steady_clock::now();
    TreeStats total;
    const std::size_t n = e.inst.a.size();
    for (std::size_t s = 0; s < n; ++s) {
      if (e.inst.single_index && s != *e.inst.single_index) continue;
      InvariantReport inv;
      TreeStats st = knapsack_tree_stats(e.inst.a, s, strategy, &inv, rule);
      if (inv.total() != 0) fail(ErrorCode::NonIntegerLeaf, e.inst.name + ": structural invariant violated");
      total.nl += st.nl;
      total.internal_nodes += st.internal_nodes;
      total.lll_nodes += st.lll_nodes;
      total.depth = std::max(total.depth, st.depth);
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    csv << e.inst.name << "," << to_string(strategy) << "," << total.nl << "," << total.depth << ","
        << total.internal_nodes << "," << total.lll_nodes << "," << (timing ? ms : 0) << "\n";
  }
  write_output(out_path, csv.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"knapcone: denumerant cones, knapsack counting and constant terms"};
  app.require_subcommand(1);
  Common common;

  auto* dec = app.add_subcommand("decompose", "decompose one denumerant cone into unimodular terms");
  std::string dec_file, out_path;
  std::int64_t index = 1;
  bool stats_only = false;
  dec->add_option("instance", dec_file, "instance JSON file")->required();
  dec->add_option("--index", index, "underlined factor, 1-based");
  dec->add_option("--out", out_path, "output JSON file (default stdout)");
  dec->add_flag("--stats", stats_only, "also print the tree statistics when writing to a file");
  add_common(dec, common);

  auto* cnt = app.add_subcommand("count", "print the denumerant d(a0; a)");
  std::string a0_text, a_text, cnt_file;
  cnt->add_option("--a0", a0_text, "right-hand side");
  cnt->add_option("--a", a_text, "comma-separated weights");
  cnt->add_option("--instance", cnt_file, "instance JSON file instead of --a0/--a");
  add_common(cnt, common);

  auto* ct = app.add_subcommand("ct", "constant term of an Elliott rational function");
  std::string ct_file;
  bool no_optimize = false, slack = false, slack_ones = false;
  ct->add_option("problem", ct_file, "problem JSON file")->required();
  ct->add_option("--out", out_path, "output JSON file (default stdout)");
  ct->add_flag("--no-optimize", no_optimize, "skip the type-matrix reduction");
  ct->add_flag("--attach-slack", slack, "give every factor a slack variable first");
  ct->add_flag("--slack-ones", slack_ones, "set the slack variables to 1 in the result");
  add_common(ct, common);

  auto* fro = app.add_subcommand("frobenius", "verify claimed Frobenius numbers over a suite");
  std::string fro_suite;
  std::size_t range = 100, max_n = 8;
  bool slow = false;
  fro->add_option("--suite", fro_suite, "builtin:cuww | builtin:prob | comma-separated instance files")->required();
  fro->add_option("--range", range, "check d(F + i) >= 1 for i = 1..range");
  fro->add_option("--max-n", max_n, "skip instances with more weights (0 = no limit)");
  fro->add_flag("--slow", slow, "include every instance regardless of size");
  add_common(fro, common);

  auto* ben = app.add_subcommand("bench", "leaf-count benchmark as CSV");
  std::string ben_suite;
  bool no_timing = false;
  ben->add_option("--suite", ben_suite, "builtin:cuww | builtin:prob | builtin:random-table1 | files")->required();
  ben->add_option("--out", out_path, "output CSV file (default stdout)");
  ben->add_flag("--no-timing", no_timing, "write 0 in the ms column for reproducible output");
  add_common(ben, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*dec) return cmd_decompose(dec_file, index, common, out_path, stats_only);
    if (*cnt) return cmd_count(a0_text, a_text, cnt_file, common);
    if (*ct) return cmd_ct(ct_file, common, out_path, no_optimize, slack, slack_ones);
    if (*fro) return cmd_frobenius(fro_suite, range, slow ? 0 : max_n, common);
    if (*ben) return cmd_bench(ben_suite, common, out_path, !no_timing);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_validation_error(e.code()) ? kExitInvalid : kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}
