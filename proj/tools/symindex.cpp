#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "symindex/report.hpp"
#include "symindex/scenario.hpp"

using namespace symindex;

namespace {

enum Exit { kOk = 0, kError = 1, kContradiction = 2, kUndecidable = 3, kVerifyFailed = 4 };

struct Globals {
  int budget = -1;
  int workers = 0;
  std::string format = "text";
  bool progress = false;
};

int env_int(const char* name, int fallback, int least) {
  const char* v = std::getenv(name);
  if (!v || !*v) return fallback;
  std::size_t used = 0;
  int x = 0;
  try {
    x = std::stoi(v, &used);
  } catch (...) {
    used = 0;
  }
  if (used == 0 || v[used] != '\0' || x < least)
    throw InvalidInput(std::string(name) + " must be an integer >= " + std::to_string(least));
  return x;
}

Format format_of(const Globals& g) { return g.format == "json" ? Format::json : Format::text; }

// Command line beats the scenario file, which beats the environment.
int effective_budget(const Globals& g, const Scenario& s) {
  if (g.budget >= 0) return g.budget;
  if (s.options.budget) return *s.options.budget;
  return env_int("SYMINDEX_BUDGET", refinement_budget(), 0);
}

const PathSeed& pick_seed(const Scenario& s, std::size_t index) {
  if (index < 1 || index > s.system.seeds.size())
    throw InvalidInput("--index must be in [1, " + std::to_string(s.system.seeds.size()) + "]");
  return s.system.seeds[index - 1];
}

JumpSearchOptions search_options(const Globals& g, const Scenario& s, const std::string& delta, std::int64_t n_max,
                                 std::int64_t limit) {
  JumpSearchOptions o;
  if (!delta.empty())
    o.delta = parse_rational(delta);
  else if (s.options.delta)
    o.delta = *s.options.delta;
  if (n_max > 0)
    o.n_max = n_max;
  else if (s.options.n_max)
    o.n_max = *s.options.n_max;
  if (limit > 0)
    o.limit = static_cast<std::size_t>(limit);
  else if (s.options.limit)
    o.limit = static_cast<std::size_t>(*s.options.limit);
  o.workers = g.workers > 0 ? g.workers : env_int("SYMINDEX_WORKERS", 1, 1);
  o.budget = refinement_budget();
  if (g.progress) {
    o.progress = [](std::int64_t at, std::int64_t end, std::size_t found) {
      std::cerr << "scanned N <= " << at << " of " << end << ", " << found << " tuple(s)\n";
    };
  }
  return o;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Index iteration and common index jump analysis for symplectic paths"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--budget", g.budget, "Refinement budget for irrational angles (env SYMINDEX_BUDGET)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--workers", g.workers, "Worker threads for the jump scan (env SYMINDEX_WORKERS)")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_flag("--progress", g.progress, "Report scan progress on stderr");

  std::string file, delta, tuples_file;
  std::size_t index = 1;
  std::int64_t m_max = 0, n_max = 0, limit = 0, complement_of = 0;
  std::size_t max_tuples = 64;
  double precision = 1e-12;

  auto* iterate = app.add_subcommand("iterate", "Table of i(m), nu(m) for m = 1..m_max");
  iterate->add_option("--seed", file, "Scenario file")->required()->check(CLI::ExistingFile);
  iterate->add_option("--index", index, "Seed to use (1-based)");
  iterate->add_option("--m-max", m_max, "Largest iterate")->check(CLI::NonNegativeNumber);

  auto* mean = app.add_subcommand("mean-index", "Mean index of a seed");
  mean->add_option("--seed", file, "Scenario file")->required()->check(CLI::ExistingFile);
  mean->add_option("--index", index, "Seed to use (1-based)");

  auto* jump = app.add_subcommand("jump", "Search for common index jump tuples");
  jump->add_option("--seeds", file, "Scenario file")->required()->check(CLI::ExistingFile);
  jump->add_option("--delta", delta, "Closeness threshold, a rational in (0, 1/2)");
  jump->add_option("--n-max", n_max, "Largest N scanned")->check(CLI::PositiveNumber);
  jump->add_option("--limit", limit, "Number of tuples")->check(CLI::PositiveNumber);
  jump->add_option("--complement-of", complement_of, "Find tuples complementary to the one at this N")
      ->check(CLI::PositiveNumber);

  auto* analyze_cmd = app.add_subcommand("analyze", "Run the two-geodesic analysis");
  analyze_cmd->add_option("--system", file, "Scenario file")->required()->check(CLI::ExistingFile);
  analyze_cmd->add_option("--delta", delta, "Closeness threshold");
  analyze_cmd->add_option("--n-max", n_max, "Largest N scanned")->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--max-tuples", max_tuples, "Tuples examined per stage")->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify", "Re-check jump tuples from a JSON file");
  verify->add_option("--seeds", file, "Scenario file")->required()->check(CLI::ExistingFile);
  verify->add_option("--tuples", tuples_file, "JSON output of `jump --format json`")
      ->required()
      ->check(CLI::ExistingFile);

  auto* realize_cmd = app.add_subcommand("realize", "A symplectic matrix with the seed's normal form");
  realize_cmd->add_option("--seed", file, "Scenario file")->required()->check(CLI::ExistingFile);
  realize_cmd->add_option("--index", index, "Seed to use (1-based)");
  realize_cmd->add_option("--precision", precision, "Angle precision")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kError;
  }

  try {
    Scenario s = load_scenario(file);
    set_refinement_budget(effective_budget(g, s));
    const Format fmt = format_of(g);

    if (*iterate) {
      const std::int64_t mm = m_max > 0 ? m_max : s.options.m_max.value_or(10);
      std::vector<IterationRow> rows =
          iteration_table(pick_seed(s, index), mm, g.workers > 0 ? g.workers : env_int("SYMINDEX_WORKERS", 1, 1));
      std::cout << emit_rows(rows, fmt);
      return kOk;
    }
    if (*mean) {
      const PathSeed& seed = pick_seed(s, index);
      Interval m = mean_index(seed, 0);
      if (!m.exact()) m = mean_index(seed, std::min(refinement_budget(), 8));
      std::cout << emit_mean_index(m, fmt);
      return kOk;
    }
    if (*jump) {
      JumpSearchOptions o = search_options(g, s, delta, n_max, limit);
      std::span<const PathSeed> seeds(s.system.seeds);
      std::vector<JumpTuple> found;
      if (complement_of > 0) {
        JumpSearchOptions probe = o;
        probe.n_min = probe.n_max = complement_of;
        probe.limit = 1;
        JumpTuple first = find_jump_tuples(seeds, probe).front();
        found = find_complementary_tuples(seeds, first, o);
      } else {
        found = find_jump_tuples(seeds, o);
      }
      std::cout << emit_tuples(found, fmt);
      return kOk;
    }
    if (*analyze_cmd) {
      AnalysisOptions o;
      o.search = search_options(g, s, delta, n_max, 0);
      o.max_tuples = max_tuples;
      AnalysisReport r = analyze(s.system, o);
      std::cout << emit_analysis(r, fmt);
      return r.success() ? kOk : kContradiction;
    }
    if (*verify) {
      std::vector<JumpTuple> tuples = parse_tuples(read_file(tuples_file));
      bool all = true;
      for (JumpTuple& t : tuples) {
        t.per_path = verify_tuple(t, s.system.seeds, refinement_budget());
        all = all && t.verified();
      }
      std::cout << emit_tuples(tuples, fmt);
      return all ? kOk : kVerifyFailed;
    }
    if (*realize_cmd) {
      std::cout << emit_matrix(realize(pick_seed(s, index).decomposition(), precision), fmt);
      return kOk;
    }
  } catch (const Undecidable& e) {
    std::cerr << "undecidable: " << e.what() << "\n";
    return kUndecidable;
  } catch (const NoTupleFound& e) {
    std::cerr << "no tuple: " << e.what() << "\n";
    return kError;
  } catch (const ConstraintViolation& e) {
    std::cerr << "constraint violation: " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
