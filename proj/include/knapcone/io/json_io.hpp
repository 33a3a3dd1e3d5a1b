#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "knapcone/cteuclid/cteuclid.hpp"
#include "knapcone/decdenu/decdenu.hpp"

namespace knapcone {

using json = nlohmann::ordered_json;

inline constexpr int kJsonFormat = 1;

struct InstanceFile {
  std::string name;
  BigInt a0 = 0;
  std::vector<std::int64_t> a;
  std::optional<BigInt> frobenius;
};

namespace detail {

[[noreturn]] inline void field_error(const std::string& field, const std::string& msg) {
  fail(ErrorCode::InvalidInput, "field '" + field + "': " + msg);
}

inline BigInt json_bigint(const json& v, const std::string& field) {
  if (v.is_number_integer()) return BigInt(v.dump());
  if (v.is_string()) {
    BigInt z;
    const std::string s = v.get<std::string>();
    if (s.empty() || z.set_str(s, 10) != 0) field_error(field, "'" + s + "' is not an integer");
    return z;
  }
  field_error(field, "expected an integer");
}

inline Rational json_rational(const json& v, const std::string& field) {
  if (v.is_number_integer()) return Rational(json_bigint(v, field));
  if (v.is_string()) {
    try {
      return Rational::parse(v.get<std::string>());
    } catch (const Error&) {
      field_error(field, "'" + v.get<std::string>() + "' is not a rational number");
    }
  }
  field_error(field, "expected an integer or a rational string");
}

inline json rational_json(const Rational& r) {
  if (r.is_integer() && r.is_small()) return r.small_num();
  return r.str();
}

inline json monomial_json(const Monomial& m) {
  json a = json::array();
  for (const auto& e : m.e) a.push_back(rational_json(e));
  return a;
}

inline Monomial monomial_from(const json& v, std::size_t nv, const std::string& field) {
  if (!v.is_array()) field_error(field, "expected an exponent array");
  if (v.size() != nv) field_error(field, "expected " + std::to_string(nv) + " exponents, got " + std::to_string(v.size()));
  Monomial m(nv);
  for (std::size_t i = 0; i < nv; ++i) m[i] = json_rational(v[i], field + "[" + std::to_string(i) + "]");
  return m;
}

inline json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::InvalidInput, origin + ": malformed JSON: " + e.what());
  }
}

}  // namespace detail

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::InvalidInput, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline InstanceFile parse_instance(const json& j) {
  if (!j.is_object()) detail::field_error("<root>", "expected an object");
  if (j.contains("format") && j["format"] != kJsonFormat) detail::field_error("format", "unsupported version");
  InstanceFile inst;
  if (j.contains("name")) {
    if (!j["name"].is_string()) detail::field_error("name", "expected a string");
    inst.name = j["name"].get<std::string>();
  }
  if (!j.contains("a")) detail::field_error("a", "missing");
  if (!j["a"].is_array() || j["a"].empty()) detail::field_error("a", "expected a nonempty array of positive integers");
  for (std::size_t i = 0; i < j["a"].size(); ++i) {
    const std::string f = "a[" + std::to_string(i) + "]";
    BigInt v = detail::json_bigint(j["a"][i], f);
    if (v < 1 || !v.fits_slong_p()) detail::field_error(f, "expected a positive 64-bit integer");
    inst.a.push_back(v.get_si());
  }
  inst.a0 = j.contains("a0") ? detail::json_bigint(j["a0"], "a0") : BigInt(0);
  if (inst.a0 < 0) detail::field_error("a0", "must be nonnegative");
  if (j.contains("frobenius")) inst.frobenius = detail::json_bigint(j["frobenius"], "frobenius");
  std::int64_t g = 0;
  for (auto x : inst.a) g = std::gcd(g, x);
  if (g != 1) fail(ErrorCode::GcdNotOne, "field 'a': gcd of the entries is " + std::to_string(g));
  return inst;
}

inline InstanceFile load_instance(const std::string& path) {
  return parse_instance(detail::parse_json_text(read_text_file(path), path));
}

inline json stats_json(const TreeStats& st) {
  return json{{"nl", st.nl}, {"depth", st.depth}, {"internal_nodes", st.internal_nodes}, {"lll_nodes", st.lll_nodes}};
}

inline json terms_json(const TermSum& terms) {
  json arr = json::array();
  for (const auto& t : terms) {
    json num = json::array();
    for (const auto& [m, c] : t.numerator.terms())
      num.push_back(json{{"coeff", detail::rational_json(c)}, {"exponents", detail::monomial_json(m)}});
    json den = json::array();
    for (const auto& f : t.denominator) den.push_back(detail::monomial_json(f.u));
    arr.push_back(json{{"numerator", num}, {"denominator", den}});
  }
  return arr;
}

inline TermSum terms_from_json(const json& arr, std::size_t nv, const std::string& field = "terms") {
  if (!arr.is_array()) detail::field_error(field, "expected an array of terms");
  TermSum out;
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const std::string f = field + "[" + std::to_string(k) + "]";
    const json& t = arr[k];
    if (!t.is_object() || !t.contains("numerator") || !t["numerator"].is_array())
      detail::field_error(f + ".numerator", "expected an array of monomials");
    CTTerm term;
    for (std::size_t i = 0; i < t["numerator"].size(); ++i) {
      const json& m = t["numerator"][i];
      const std::string fm = f + ".numerator[" + std::to_string(i) + "]";
      if (!m.is_object() || !m.contains("exponents")) detail::field_error(fm + ".exponents", "missing");
      Rational c = m.contains("coeff") ? detail::json_rational(m["coeff"], fm + ".coeff") : Rational(1);
      term.numerator.push(detail::monomial_from(m["exponents"], nv, fm + ".exponents"), c);
    }
    term.numerator.normalize();
    if (t.contains("denominator")) {
      if (!t["denominator"].is_array()) detail::field_error(f + ".denominator", "expected an array of exponent arrays");
      for (std::size_t i = 0; i < t["denominator"].size(); ++i)
        term.denominator.push_back(
            {detail::monomial_from(t["denominator"][i], nv, f + ".denominator[" + std::to_string(i) + "]")});
    }
    out.push_back(std::move(term));
  }
  return out;
}

/// Constant-term problem file: variables, lambda list, optional slack list,
/// and either `terms` or a single `numerator` / `factors` pair.
inline CoreProblem parse_ct_problem(const json& j) {
  if (!j.is_object()) detail::field_error("<root>", "expected an object");
  if (j.contains("format") && j["format"] != kJsonFormat) detail::field_error("format", "unsupported version");
  auto names = [&](const char* key, bool required) {
    std::vector<std::string> v;
    if (!j.contains(key)) {
      if (required) detail::field_error(key, "missing");
      return v;
    }
    if (!j[key].is_array()) detail::field_error(key, "expected an array of names");
    for (const auto& x : j[key]) {
      if (!x.is_string()) detail::field_error(key, "expected an array of names");
      v.push_back(x.get<std::string>());
    }
    return v;
  };
  const auto vars = names("variables", true);
  const auto lams = names("lambda", true);
  const auto slack = names("slack", false);
  VarOrder order;
  try {
    order = VarOrder(vars);
  } catch (const Error& e) {
    detail::field_error("variables", e.what());
  }
  TermSum E;
  if (j.contains("terms")) {
    E = terms_from_json(j["terms"], order.size());
  } else {
    json t = json::object();
    if (!j.contains("numerator")) detail::field_error("numerator", "missing");
    if (!j.contains("factors")) detail::field_error("factors", "missing");
    t["numerator"] = j["numerator"];
    t["denominator"] = j["factors"];
    E = terms_from_json(json::array({t}), order.size(), "problem");
  }
  for (const auto& l : lams)
    if (!order.find(l)) detail::field_error("lambda", "unknown variable '" + l + "'");
  CoreProblem p = make_problem(order, std::move(E), lams);
  for (const auto& z : slack) {
    if (!order.find(z)) detail::field_error("slack", "unknown variable '" + z + "'");
    p.slack_vars.push_back(order.index_of(z));
  }
  return p;
}

inline std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

}  // namespace knapcone
