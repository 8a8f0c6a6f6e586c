#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "symindex/analysis.hpp"
#include "symindex/errors.hpp"

namespace symindex {

// Malformed scenario text. line/column are 1-based; 0 when the problem is
// semantic rather than syntactic (the message then names the JSON path).
class ParseError : public InvalidInput {
 public:
  ParseError(const std::string& message, std::size_t line = 0, std::size_t column = 0);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct ScenarioOptions {
  std::optional<Rational> delta;
  std::optional<std::int64_t> n_max;
  std::optional<std::int64_t> limit;
  std::optional<std::int64_t> m_max;
  std::optional<int> budget;
};

struct Scenario {
  GeodesicSystem system;
  ScenarioOptions options;
};

// {
//   "version": 1,
//   "system": {"n": 3, "lambda": [1, 1], "pinching_asserted": true},
//   "seeds": [{"i1": 2, "nu1": 2, "blocks": [{"n1": [1, 0]}, {"r": {"quadratic": [-1, 1, 2, 5]}}]}],
//   "options": {"delta": [1, 20], "n_max": 100000, "limit": 3, "m_max": 20, "budget": 64}
// }
//
// Angles: {"rational": [p, q]}, {"quadratic": [a, b, c, d]} for (a + b sqrt d) / c,
// or {"decimal": "0.618", "error": "1e-10"}. Blocks: {"n1": [lambda, b]},
// {"r": angle}, {"n2": {"angle": angle, "trivial": bool}}, {"hyp": {}}.
// Rationals may be [p, q], an integer, or a string such as "1/20" or "0.05".
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace symindex
