#pragma once

#include <Eigen/Dense>

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "symindex/analysis.hpp"

namespace symindex {

enum class Format { text, json };

// Text output is for people: aligned tables, every evaluated relation with
// both sides. JSON output is canonical and round-trips through the parse_*
// functions: rationals as [num, den], enclosures as {"approx", "error"}
// decimal strings.

std::string emit_rows(std::span<const IterationRow> rows, Format format);
std::vector<IterationRow> parse_rows(std::string_view json);

std::string emit_mean_index(const Interval& mean, Format format);
Interval parse_mean_index(std::string_view json);

std::string emit_tuples(std::span<const JumpTuple> tuples, Format format);
std::vector<JumpTuple> parse_tuples(std::string_view json);

std::string emit_delta(const DeltaReport& report, Format format);
DeltaReport parse_delta(std::string_view json);

std::string emit_analysis(const AnalysisReport& report, Format format);
AnalysisReport parse_analysis(std::string_view json);

std::string emit_matrix(const Eigen::MatrixXd& matrix, Format format);

}  // namespace symindex
