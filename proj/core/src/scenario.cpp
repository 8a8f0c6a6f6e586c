#include "symindex/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace symindex {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ParseError(path + ": " + what); }

void allow_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) fail(path, "expected an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) fail(path, "unknown key \"" + it.key() + "\"");
}

const json& require(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing key \"") + key + "\"");
  return *it;
}

Integer read_integer(const json& v, const std::string& path) {
  if (v.is_number_integer()) return v.is_number_unsigned() ? Integer(v.get<unsigned long>()) : Integer(v.get<long>());
  if (v.is_string()) {
    Integer z;
    if (z.set_str(v.get<std::string>(), 10) == 0) return z;
  }
  fail(path, "expected an integer");
}

std::int64_t read_int64(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<std::int64_t>();
}

Rational read_rational(const json& v, const std::string& path) {
  try {
    if (v.is_array()) {
      if (v.size() != 2) fail(path, "a rational is [numerator, denominator]");
      Integer p = read_integer(v[0], path + "[0]");
      Integer q = read_integer(v[1], path + "[1]");
      if (q == 0) fail(path, "zero denominator");
      return make_rational(p, q);
    }
    if (v.is_number_integer()) return Rational(read_integer(v, path));
    if (v.is_string()) return parse_rational(v.get<std::string>());
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
  fail(path, "expected a rational ([p, q], integer, or string)");
}

ExactAngle read_angle(const json& v, const std::string& path) {
  if (!v.is_object()) fail(path, "expected an angle object");
  try {
    if (v.contains("rational")) {
      allow_keys(v, path, {"rational"});
      return ExactAngle::rational(read_rational(v["rational"], path + ".rational"));
    }
    if (v.contains("quadratic")) {
      allow_keys(v, path, {"quadratic"});
      const json& q = v["quadratic"];
      if (!q.is_array() || q.size() != 4) fail(path + ".quadratic", "expected [a, b, c, d]");
      const std::string p = path + ".quadratic";
      return ExactAngle::quadratic(read_integer(q[0], p + "[0]"), read_integer(q[1], p + "[1]"),
                                   read_integer(q[2], p + "[2]"), read_integer(q[3], p + "[3]"));
    }
    if (v.contains("decimal")) {
      allow_keys(v, path, {"decimal", "error"});
      Rational approx = read_rational(v["decimal"], path + ".decimal");
      Rational error = read_rational(require(v, path, "error"), path + ".error");
      return ExactAngle::enclosed(approx, error);
    }
  } catch (const ParseError&) {
    throw;
  } catch (const InvalidInput& e) {
    fail(path, e.what());
  }
  fail(path, "angle must have one of \"rational\", \"quadratic\", \"decimal\"");
}

BasicForm read_block(const json& v, const std::string& path) {
  if (!v.is_object() || v.size() != 1) fail(path, "a block is an object with exactly one of n1, r, n2, hyp");
  try {
    if (v.contains("n1")) {
      const json& a = v["n1"];
      if (!a.is_array() || a.size() != 2) fail(path + ".n1", "expected [lambda, b]");
      return make_n1(static_cast<int>(read_int64(a[0], path + ".n1[0]")),
                     static_cast<int>(read_int64(a[1], path + ".n1[1]")));
    }
    if (v.contains("r")) return make_rotation(read_angle(v["r"], path + ".r"));
    if (v.contains("n2")) {
      const json& b = v["n2"];
      allow_keys(b, path + ".n2", {"angle", "trivial"});
      const json& t = require(b, path + ".n2", "trivial");
      if (!t.is_boolean()) fail(path + ".n2.trivial", "expected a boolean");
      return make_n2(read_angle(require(b, path + ".n2", "angle"), path + ".n2.angle"), t.get<bool>());
    }
    if (v.contains("hyp")) {
      allow_keys(v["hyp"], path + ".hyp", {});
      return make_hyperbolic();
    }
  } catch (const ParseError&) {
    throw;
  } catch (const InvalidInput& e) {
    fail(path, e.what());
  }
  fail(path, "unknown block kind \"" + v.begin().key() + "\"");
}

PathSeed read_seed(const json& v, int n, const std::string& path) {
  allow_keys(v, path, {"i1", "nu1", "blocks"});
  const std::int64_t i1 = read_int64(require(v, path, "i1"), path + ".i1");
  const std::int64_t nu1 = read_int64(require(v, path, "nu1"), path + ".nu1");
  if (nu1 < 0) fail(path + ".nu1", "nullity must be non-negative");
  const json& blocks = require(v, path, "blocks");
  if (!blocks.is_array()) fail(path + ".blocks", "expected an array");
  std::vector<BasicForm> forms;
  for (std::size_t j = 0; j < blocks.size(); ++j)
    forms.push_back(read_block(blocks[j], path + ".blocks[" + std::to_string(j) + "]"));
  try {
    return PathSeed(i1, static_cast<int>(nu1), Decomposition(n, std::move(forms)));
  } catch (const InvalidInput& e) {
    fail(path, e.what());
  }
}

// Converts a byte offset into a 1-based (line, column).
std::pair<std::size_t, std::size_t> locate(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

}  // namespace

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : InvalidInput(line ? "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message
                        : message),
      line_(line),
      column_(column) {}

Scenario parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    auto [line, column] = locate(text, e.byte > 0 ? e.byte - 1 : 0);
    std::string what = e.what();
    auto pos = what.find("syntax error");
    throw ParseError(pos == std::string::npos ? what : what.substr(pos), line, column);
  }

  allow_keys(doc, "$", {"version", "system", "seeds", "options"});
  if (read_int64(require(doc, "$", "version"), "$.version") != 1) fail("$.version", "only version 1 is supported");

  Scenario out;
  const json& sys = require(doc, "$", "system");
  allow_keys(sys, "$.system", {"n", "lambda", "pinching_asserted"});
  const std::int64_t n = read_int64(require(sys, "$.system", "n"), "$.system.n");
  if (n < 2 || n > 1000) fail("$.system.n", "n must be in [2, 1000]");
  out.system.n = static_cast<int>(n);
  if (sys.contains("lambda")) out.system.reversibility_lambda = read_rational(sys["lambda"], "$.system.lambda");
  if (sys.contains("pinching_asserted")) {
    if (!sys["pinching_asserted"].is_boolean()) fail("$.system.pinching_asserted", "expected a boolean");
    out.system.pinching_asserted = sys["pinching_asserted"].get<bool>();
  }

  const json& seeds = require(doc, "$", "seeds");
  if (!seeds.is_array() || seeds.empty()) fail("$.seeds", "expected a non-empty array");
  for (std::size_t k = 0; k < seeds.size(); ++k)
    out.system.seeds.push_back(read_seed(seeds[k], out.system.n, "$.seeds[" + std::to_string(k) + "]"));

  if (doc.contains("options")) {
    const json& o = doc["options"];
    allow_keys(o, "$.options", {"delta", "n_max", "limit", "m_max", "budget"});
    auto positive = [&](const char* key) -> std::optional<std::int64_t> {
      if (!o.contains(key)) return std::nullopt;
      std::int64_t v = read_int64(o[key], std::string("$.options.") + key);
      if (v < 1) fail(std::string("$.options.") + key, "must be positive");
      return v;
    };
    if (o.contains("delta")) out.options.delta = read_rational(o["delta"], "$.options.delta");
    out.options.n_max = positive("n_max");
    out.options.limit = positive("limit");
    out.options.m_max = positive("m_max");
    if (auto b = positive("budget")) out.options.budget = static_cast<int>(*b);
  }

  try {
    validate_system(out.system, out.options.budget.value_or(refinement_budget()));
  } catch (const InvalidInput& e) {
    fail("$.system", e.what());
  }
  return out;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace symindex
