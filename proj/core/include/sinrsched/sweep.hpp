#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sinrsched/distsim.hpp"
#include "sinrsched/generators.hpp"

namespace sinrsched {

enum class SweepFamily { Gadget, AppendixB, Random };

std::string to_string(SweepFamily family);

// A grid of instance sizes crossed with simulation seeds. Every (point, seed)
// pair runs exactly once; per-run seeds are derived by hashing
// (master_seed, point label, seed index) so results do not depend on
// execution order or worker count.
struct SweepSpec {
  SweepFamily family = SweepFamily::Gadget;
  std::vector<int> n_values;
  double alpha = 2.0;

  // Appendix-B family knobs; unset means auto-chosen per point.
  std::optional<double> appendix_c;
  std::optional<double> appendix_epsilon;

  // Random family geometry; n and seed are overridden per point (the
  // instance seed is derived from random_base.seed and n, so each point
  // simulates one fixed instance under varying protocol seeds).
  RandomEuclideanSpec random_base;

  int seeds = 10;  // runs per point, >= 1
  uint64_t master_seed = 0;
  // Base simulation config; seed is overridden per run, and
  // n_estimate == 0 means "use the instance's link count" (floored at 2).
  SimConfig sim;
  int jobs = 1;  // worker budget; results are identical for any value >= 1

  // Compute measures (Lambda, first-fit T) once per point and add them to
  // the summary. Exact within size guards, otherwise sampled/greedy.
  bool with_measures = false;

  std::string out_prefix;    // when nonempty: write <prefix>_raw.csv etc.
  bool keep_traces = false;  // when writing files, also dump per-run traces
};

struct SweepRun {
  int n = 0;
  int seed_index = 0;
  uint64_t run_seed = 0;
  int64_t completion_slot = 0;
  bool truncated = false;
  bool failed = false;    // generation or simulation error; see `error`
  std::string error;
};

struct SweepPointSummary {
  int n = 0;
  int runs = 0;     // rows attempted (== spec.seeds)
  int ok_runs = 0;  // rows that produced a completion slot
  double mean = 0.0;
  double median = 0.0;
  int64_t min = 0;
  int64_t max = 0;
  double stderr_mean = 0.0;  // sample stddev / sqrt(ok_runs); 0 for one run
  int truncated_count = 0;

  // Gadget family only: pooled slot-to-slot survival of active gadgets
  // (an active gadget "survives" a slot when neither of its links succeeds)
  // and the mean number of active gadgets per slot index.
  int64_t survival_events = 0;
  int64_t survival_stayed = 0;
  double survival_freq = 0.0;
  std::vector<double> mean_active;

  std::optional<double> lambda;
  std::optional<int> t_first_fit;
};

struct SweepResult {
  SweepFamily family = SweepFamily::Gadget;
  double alpha = 2.0;
  bool with_measures = false;
  std::vector<SweepRun> runs;           // ordered by (point, seed index)
  std::vector<SweepPointSummary> points;
  // Least-squares slope of mean completion slot against log2(n), over points
  // with at least one successful run; unset unless two distinct sizes exist.
  std::optional<double> slope_vs_log2n;
};

// Runs the whole grid (concurrently when spec.jobs > 1) and, when
// spec.out_prefix is set, writes <prefix>_raw.csv and <prefix>_summary.csv.
// Per-run failures are recorded in their rows; throws only on an invalid
// spec. Callers decide exit semantics from ok-run counts.
SweepResult run_sweep(const SweepSpec& spec);

// CSV renderings (also what run_sweep writes); documented in FORMATS.md.
std::string sweep_raw_csv(const SweepResult& result);
std::string sweep_summary_csv(const SweepResult& result);

}  // namespace sinrsched
