#include "symindex/report.hpp"

#include <cstdio>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "symindex/errors.hpp"

namespace symindex {

namespace {

using Json = nlohmann::ordered_json;

Json integer_json(const Integer& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

Integer integer_from(const Json& v) {
  if (v.is_number_integer()) return Integer(v.get<long>());
  if (v.is_string()) return Integer(v.get<std::string>());
  throw InvalidInput("expected an integer in report JSON");
}

Json rational_json(const Rational& r) { return Json::array({integer_json(r.get_num()), integer_json(r.get_den())}); }

Rational rational_from(const Json& v) {
  if (!v.is_array() || v.size() != 2) throw InvalidInput("expected [numerator, denominator] in report JSON");
  return make_rational(integer_from(v[0]), integer_from(v[1]));
}

Json interval_json(const Interval& x) {
  if (x.exact()) return rational_json(x.lo);
  Json j;
  j["approx"] = format_exact(x.midpoint());
  j["error"] = format_exact(x.width() / 2);
  return j;
}

Interval interval_from(const Json& v) {
  if (v.is_array()) return Interval(rational_from(v));
  const Rational mid = parse_rational(v.at("approx").get<std::string>());
  const Rational err = parse_rational(v.at("error").get<std::string>());
  return {mid - err, mid + err};
}

std::string show(const Interval& x) { return x.exact() ? format_exact(x.lo) : format_interval(x); }

Json row_json(const IterationRow& r) { return {{"m", r.m}, {"index", r.index}, {"nullity", r.nullity}}; }

Json condition_json(const ConditionRecord& c) {
  return {{"name", c.name},         {"relation", c.relation}, {"lhs", interval_json(c.lhs)},
          {"rhs", interval_json(c.rhs)}, {"pass", c.pass},         {"detail", c.detail}};
}

ConditionRecord condition_from(const Json& j) {
  return {j.at("name").get<std::string>(),  j.at("relation").get<std::string>(), interval_from(j.at("lhs")),
          interval_from(j.at("rhs")),       j.at("pass").get<bool>(),            j.at("detail").get<std::string>()};
}

Json tuple_json(const JumpTuple& t) {
  Json paths = Json::array();
  for (const PathVerification& p : t.per_path) {
    Json conds = Json::array();
    for (const ConditionRecord& c : p.conditions) conds.push_back(condition_json(c));
    paths.push_back({{"conditions", conds}});
  }
  return {{"N", t.N},         {"m", t.m}, {"chi", t.chi}, {"period", t.period}, {"delta", rational_json(t.delta)},
          {"per_path", paths}};
}

JumpTuple tuple_from(const Json& j) {
  JumpTuple t;
  t.N = j.at("N").get<std::int64_t>();
  t.m = j.at("m").get<std::vector<std::int64_t>>();
  t.chi = j.at("chi").get<std::vector<int>>();
  t.period = j.at("period").get<std::int64_t>();
  t.delta = rational_from(j.at("delta"));
  for (const Json& p : j.at("per_path")) {
    PathVerification v;
    for (const Json& c : p.at("conditions")) v.conditions.push_back(condition_from(c));
    t.per_path.push_back(std::move(v));
  }
  return t;
}

Json delta_json(const DeltaReport& d) {
  return {{"delta_k", d.delta_k},
          {"delta_k_prime", d.delta_k_prime},
          {"c_k", d.c_k},
          {"s_plus", d.s_plus},
          {"prime_measured", d.prime_measured}};
}

DeltaReport delta_from(const Json& j) {
  DeltaReport d;
  d.delta_k = j.at("delta_k").get<std::int64_t>();
  d.delta_k_prime = j.at("delta_k_prime").get<std::int64_t>();
  d.c_k = j.at("c_k").get<std::int64_t>();
  d.s_plus = j.at("s_plus").get<std::int64_t>();
  d.prime_measured = j.at("prime_measured").get<bool>();
  return d;
}

Json peak_json(const PeakRecord& c) {
  Json terms = Json::array();
  for (const ConstraintTerm& t : c.terms) terms.push_back({{"name", t.name}, {"coefficient", t.coefficient}, {"value", t.value}});
  return {{"seed", c.seed},
          {"N", c.N},
          {"m", c.m},
          {"index_even", c.index_even},
          {"index_even_direct", c.index_even_direct},
          {"nullity_even", c.nullity_even},
          {"nullity_even_direct", c.nullity_even_direct},
          {"peak_excess", c.peak_excess},
          {"dimension", c.dimension},
          {"terms", terms},
          {"delta", delta_json(c.delta)},
          {"elliptic_height", c.elliptic_height},
          {"elliptic", c.elliptic},
          {"irrational_rotation_count", c.irrational_rotation_count},
          {"rational_branch", c.rational_branch}};
}

PeakRecord peak_from(const Json& j) {
  PeakRecord c;
  c.seed = j.at("seed").get<std::size_t>();
  c.N = j.at("N").get<std::int64_t>();
  c.m = j.at("m").get<std::int64_t>();
  c.index_even = j.at("index_even").get<std::int64_t>();
  c.index_even_direct = j.at("index_even_direct").get<std::int64_t>();
  c.nullity_even = j.at("nullity_even").get<std::int64_t>();
  c.nullity_even_direct = j.at("nullity_even_direct").get<std::int64_t>();
  c.peak_excess = j.at("peak_excess").get<std::int64_t>();
  c.dimension = j.at("dimension").get<std::int64_t>();
  for (const Json& t : j.at("terms"))
    c.terms.push_back({t.at("name").get<std::string>(), t.at("coefficient").get<std::int64_t>(),
                       t.at("value").get<std::int64_t>()});
  c.delta = delta_from(j.at("delta"));
  c.elliptic_height = j.at("elliptic_height").get<int>();
  c.elliptic = j.at("elliptic").get<bool>();
  c.irrational_rotation_count = j.at("irrational_rotation_count").get<std::int64_t>();
  c.rational_branch = j.at("rational_branch").get<bool>();
  return c;
}

Json peaks_json(const PeakSearch& p) {
  return {{"excess", p.excess},
          {"candidates", p.candidates},
          {"fcg_contradiction", p.fcg_contradiction},
          {"morse_constant", rational_json(p.morse_constant)}};
}

PeakSearch peaks_from(const Json& j) {
  PeakSearch p;
  p.excess = j.at("excess").get<std::vector<std::int64_t>>();
  p.candidates = j.at("candidates").get<std::vector<std::size_t>>();
  p.fcg_contradiction = j.at("fcg_contradiction").get<bool>();
  p.morse_constant = rational_from(j.at("morse_constant"));
  return p;
}

Json second_json(const SecondGeodesic& s) {
  return {{"excess", s.excess},
          {"first_excess", s.first_excess},
          {"first_bound_holds", s.first_bound_holds},
          {"second", s.second ? Json(*s.second) : Json(nullptr)},
          {"fcg_contradiction", s.fcg_contradiction}};
}

SecondGeodesic second_from(const Json& j) {
  SecondGeodesic s;
  s.excess = j.at("excess").get<std::vector<std::int64_t>>();
  s.first_excess = j.at("first_excess").get<std::int64_t>();
  s.first_bound_holds = j.at("first_bound_holds").get<bool>();
  if (!j.at("second").is_null()) s.second = j.at("second").get<std::size_t>();
  s.fcg_contradiction = j.at("fcg_contradiction").get<bool>();
  return s;
}

template <class T, class F>
Json optional_json(const std::optional<T>& v, F f) {
  return v ? f(*v) : Json(nullptr);
}

template <class F>
auto parse_with(std::string_view text, F f) {
  try {
    return f(Json::parse(text.begin(), text.end()));
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("malformed report JSON: ") + e.what());
  }
}

std::string pass_mark(bool pass) { return pass ? "[pass]" : "[FAIL]"; }

void tuple_text(std::ostringstream& out, const JumpTuple& t, const std::string& indent) {
  out << indent << "N = " << t.N << ", M = " << t.period << ", delta = " << format_exact(t.delta)
      << (t.verified() ? "" : "  (NOT VERIFIED)") << "\n";
  for (std::size_t k = 0; k < t.m.size(); ++k) {
    out << indent << "  path " << k + 1 << ": m = " << t.m[k] << ", chi = " << t.chi[k] << "\n";
    if (k >= t.per_path.size()) continue;
    for (const ConditionRecord& c : t.per_path[k].conditions) {
      out << indent << "    " << pass_mark(c.pass) << " " << std::left << std::setw(22) << c.name << std::right
          << show(c.lhs) << " " << c.relation << " " << show(c.rhs);
      if (!c.detail.empty()) out << "  (" << c.detail << ")";
      out << "\n";
    }
  }
}

void peak_text(std::ostringstream& out, const PeakRecord& c) {
  out << "  c_" << c.seed + 1 << " at N = " << c.N << ", m = " << c.m << "\n";
  out << "    i(2m) = 2N - S+ - C + 2 Delta = " << 2 * c.N << " - " << c.delta.s_plus << " - " << c.delta.c_k
      << " + 2*" << c.delta.delta_k << " = " << c.index_even << "; iteration formula gives " << c.index_even_direct
      << "\n";
    out << "    nu(2m) = " << c.nullity_even << "; iteration formula gives " << c.nullity_even_direct << "\n";
  out << "    i + nu - 2N = " << c.peak_excess << ", n - 1 = " << c.dimension << "\n";
  out << "    vanishing summands:";
  for (const ConstraintTerm& t : c.terms) out << " " << t.coefficient << "*(" << t.name << ") = " << t.coefficient * t.value << ";";
  out << "\n";
  out << "    Delta = " << c.delta.delta_k << ", Delta' = " << c.delta.delta_k_prime
      << (c.delta.prime_measured ? " (measured)" : " (complement)") << "\n";
  out << "    elliptic height " << c.elliptic_height << (c.elliptic ? " (elliptic)" : " (not elliptic)")
      << ", irrational rotation count r - r' = " << c.irrational_rotation_count << "\n";
}

}  // namespace

std::string emit_rows(std::span<const IterationRow> rows, Format format) {
  if (format == Format::json) {
    Json j = Json::array();
    for (const IterationRow& r : rows) j.push_back(row_json(r));
    return Json{{"rows", j}}.dump(2) + "\n";
  }
  std::size_t wm = 1, wi = 4, wn = 5;
  for (const IterationRow& r : rows) {
    wm = std::max(wm, std::to_string(r.m).size());
    wi = std::max(wi, std::to_string(r.index).size());
    wn = std::max(wn, std::to_string(r.nullity).size());
  }
  std::ostringstream out;
  out << std::setw(static_cast<int>(wm)) << "m" << "  " << std::setw(static_cast<int>(wi)) << "i(m)" << "  "
      << std::setw(static_cast<int>(wn)) << "nu(m)" << "\n";
  for (const IterationRow& r : rows)
    out << std::setw(static_cast<int>(wm)) << r.m << "  " << std::setw(static_cast<int>(wi)) << r.index << "  "
        << std::setw(static_cast<int>(wn)) << r.nullity << "\n";
  return out.str();
}

std::vector<IterationRow> parse_rows(std::string_view text) {
  return parse_with(text, [](const Json& j) {
    std::vector<IterationRow> rows;
    for (const Json& r : j.at("rows"))
      rows.push_back({r.at("m").get<std::int64_t>(), r.at("index").get<std::int64_t>(),
                      r.at("nullity").get<std::int64_t>()});
    return rows;
  });
}

std::string emit_mean_index(const Interval& mean, Format format) {
  if (format == Format::json) return Json{{"mean_index", interval_json(mean)}}.dump(2) + "\n";
  if (mean.exact()) return "mean index = " + format_exact(mean.lo) + "\n";
  return "mean index in " + format_interval(mean, 20) + " (width " + format_decimal(mean.width(), 30) + ")\n";
}

Interval parse_mean_index(std::string_view text) {
  return parse_with(text, [](const Json& j) { return interval_from(j.at("mean_index")); });
}

std::string emit_tuples(std::span<const JumpTuple> tuples, Format format) {
  if (format == Format::json) {
    Json j = Json::array();
    for (const JumpTuple& t : tuples) j.push_back(tuple_json(t));
    return Json{{"tuples", j}}.dump(2) + "\n";
  }
  std::ostringstream out;
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    out << "tuple " << i + 1 << ":\n";
    tuple_text(out, tuples[i], "  ");
  }
  return out.str();
}

std::vector<JumpTuple> parse_tuples(std::string_view text) {
  return parse_with(text, [](const Json& j) {
    std::vector<JumpTuple> out;
    for (const Json& t : j.at("tuples")) out.push_back(tuple_from(t));
    return out;
  });
}

std::string emit_delta(const DeltaReport& d, Format format) {
  if (format == Format::json) return Json{{"delta", delta_json(d)}}.dump(2) + "\n";
  std::ostringstream out;
  out << "Delta = " << d.delta_k << ", Delta' = " << d.delta_k_prime
      << (d.prime_measured ? " (measured)" : " (complement)") << ", C = " << d.c_k << ", S+(1) = " << d.s_plus
      << "\n";
  return out.str();
}

DeltaReport parse_delta(std::string_view text) {
  return parse_with(text, [](const Json& j) { return delta_from(j.at("delta")); });
}

std::string emit_analysis(const AnalysisReport& r, Format format) {
  if (format == Format::json) {
    Json pinching = Json::array();
    for (const PinchingCheck& p : r.pinching) pinching.push_back({{"index_bound", p.index_bound}, {"mean_bound", p.mean_bound}});
    Json peak_records = Json::array();
    for (const PeakRecord& c : r.peak_records) peak_records.push_back(peak_json(c));
    Json j = {{"n", r.n},
              {"q", r.q},
              {"pinching", pinching},
              {"betti_constant", rational_json(r.betti)},
              {"tuple", optional_json(r.tuple, tuple_json)},
              {"peaks", peaks_json(r.peaks)},
              {"peak_records", peak_records},
              {"tuples_without_peak", r.tuples_without_peak},
              {"second_tuple", optional_json(r.second_tuple, tuple_json)},
              {"second", optional_json(r.second, second_json)},
              {"second_peak_record", optional_json(r.second_peak_record, peak_json)},
              {"complementary_without_peak", r.complementary_without_peak},
              {"fcg_contradiction", r.fcg_contradiction},
              {"rational_branch", r.rational_branch},
              {"flag_reason", r.flag_reason},
              {"success", r.success()}};
    return Json{{"analysis", j}}.dump(2) + "\n";
  }

  std::ostringstream out;
  out << "system: n = " << r.n << ", q = " << r.q << ", B(n,1) = " << format_exact(r.betti) << "\n";
  for (std::size_t k = 0; k < r.pinching.size(); ++k)
    out << "  c_" << k + 1 << ": " << pass_mark(r.pinching[k].index_bound) << " i(c) >= n - 1  "
        << pass_mark(r.pinching[k].mean_bound) << " mean index > n - 1\n";
  if (r.tuple) {
    out << "jump tuple (" << r.tuples_without_peak << " earlier tuples without a peak):\n";
    tuple_text(out, *r.tuple, "  ");
    out << "peak check, i(2m_k) + nu(2m_k) - 2N vs n - 1 = " << r.n - 1 << ":";
    for (std::size_t k = 0; k < r.peaks.excess.size(); ++k) out << " c_" << k + 1 << " -> " << r.peaks.excess[k] << ";";
    out << "\n  Morse constant 2N B(n,1) = " << format_exact(r.peaks.morse_constant) << "\n";
  }
  if (!r.peak_records.empty()) {
    out << "peak geodesics:\n";
    for (const PeakRecord& c : r.peak_records) peak_text(out, c);
  }
  if (r.second_tuple) {
    out << "complementary tuple (" << r.complementary_without_peak << " earlier without a second peak):\n";
    tuple_text(out, *r.second_tuple, "  ");
  }
  if (r.second) {
    out << "second peak check:";
    for (std::size_t k = 0; k < r.second->excess.size(); ++k) out << " c_" << k + 1 << " -> " << r.second->excess[k] << ";";
    out << "\n  first geodesic: " << r.second->first_excess << " <= n - 2 = " << r.n - 2 << " "
        << pass_mark(r.second->first_bound_holds) << "\n";
  }
  if (r.second_peak_record) {
    out << "second peak geodesic:\n";
    peak_text(out, *r.second_peak_record);
  }
  if (r.success()) {
    out << "result: two elliptic closed geodesics with irrational rotation eigenvalues (c_" << r.peak_records.front().seed + 1
        << ", c_" << r.second_peak_record->seed + 1 << ")\n";
  } else {
    out << "result: flag raised" << (r.fcg_contradiction ? " (contradicts finiteness)" : "")
        << (r.rational_branch ? " (rational branch)" : "") << ": " << r.flag_reason << "\n";
  }
  return out.str();
}

AnalysisReport parse_analysis(std::string_view text) {
  return parse_with(text, [](const Json& root) {
    const Json& j = root.at("analysis");
    AnalysisReport r;
    r.n = j.at("n").get<int>();
    r.q = j.at("q").get<std::size_t>();
    for (const Json& p : j.at("pinching")) r.pinching.push_back({p.at("index_bound").get<bool>(), p.at("mean_bound").get<bool>()});
    r.betti = rational_from(j.at("betti_constant"));
    if (!j.at("tuple").is_null()) r.tuple = tuple_from(j.at("tuple"));
    r.peaks = peaks_from(j.at("peaks"));
    for (const Json& c : j.at("peak_records")) r.peak_records.push_back(peak_from(c));
    r.tuples_without_peak = j.at("tuples_without_peak").get<std::size_t>();
    if (!j.at("second_tuple").is_null()) r.second_tuple = tuple_from(j.at("second_tuple"));
    if (!j.at("second").is_null()) r.second = second_from(j.at("second"));
    if (!j.at("second_peak_record").is_null()) r.second_peak_record = peak_from(j.at("second_peak_record"));
    r.complementary_without_peak = j.at("complementary_without_peak").get<std::size_t>();
    r.fcg_contradiction = j.at("fcg_contradiction").get<bool>();
    r.rational_branch = j.at("rational_branch").get<bool>();
    r.flag_reason = j.at("flag_reason").get<std::string>();
    return r;
  });
}

std::string emit_matrix(const Eigen::MatrixXd& matrix, Format format) {
  if (format == Format::json) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
      Json row = Json::array();
      for (Eigen::Index j = 0; j < matrix.cols(); ++j) row.push_back(matrix(i, j));
      rows.push_back(row);
    }
    return Json{{"matrix", rows}}.dump(2) + "\n";
  }
  std::ostringstream out;
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      char buf[32];
      double v = matrix(i, j);
      std::snprintf(buf, sizeof buf, "%12.8f", v == 0.0 ? 0.0 : v);
      out << buf;
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace symindex
