#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sinrsched/instance.hpp"

// Scheduling-complexity measures of an instance:
//  - T: minimum number of feasible slots covering all links (exact subset
//    DP for small n, first-fit upper bound otherwise);
//  - average affectance  Abar = max_R a_R(R)/|R|  over subsets (capped);
//  - Lambda = max_R (1/4) * (ceil(|R|/4)-th smallest incoming affectance
//    a_R(l) over l in R), the quantity that governs how aggressively a
//    transmission probability can be chosen.
// Exact variants enumerate all subsets and carry hard size guards; the
// heuristics (first-fit, greedy peeling, random sampling) apply at any size.

namespace sinrsched {

struct Schedule {
  std::vector<std::vector<int>> slots;  // link ids per slot
};

struct SchedulingResult {
  int t = 0;
  Schedule schedule;
};

struct ValueWitness {
  double value = 0.0;
  std::vector<int> witness;  // link ids, ascending
};

constexpr int kMaxExactScheduling = 15;
constexpr int kMaxExactAvgAffectance = 20;
constexpr int kMaxExactLambda = 18;

// Exact scheduling number via subset DP over feasible parts. O(3^n).
SchedulingResult scheduling_number_exact(const Instance& inst);

// First-fit: longest link first into the first slot that stays feasible.
Schedule schedule_first_fit(const Instance& inst);

// True iff slots are disjoint, cover every link, and each passes is_feasible.
bool validate_schedule(const Instance& inst, const Schedule& schedule);

enum class AvgMode { Exact, Peeling };

// max over subsets R of a_R(R)/|R| (capped affectance). Exact mode
// enumerates all subsets (n <= 20); Peeling greedily deletes the link with
// the smallest in+out affectance and keeps the best prefix value.
ValueWitness max_avg_affectance(const Instance& inst, AvgMode mode);

// Exact Lambda over all nonempty subsets (n <= 18).
ValueWitness lambda_exact(const Instance& inst);

// Sampled lower bound: random subsets with per-sample inclusion probability
// drawn from {1/4, 1/2, 1}, plus the full set. Deterministic in seed.
double lambda_sampled(const Instance& inst, int samples, std::uint64_t seed);

namespace detail {
ValueWitness lambda_sampled_witness(const Instance& inst, int samples, std::uint64_t seed);
// t_R for one subset given by link indices.
double lambda_term(const Instance& inst, const std::vector<int>& subset_idx);
}  // namespace detail

struct MeasureOptions {
  bool want_t = true;
  bool want_avg = true;
  bool want_lambda = true;
  // Fall back to heuristics instead of failing when a size guard trips.
  bool allow_heuristic = false;
  int lambda_samples = 256;
  std::uint64_t seed = 0;
};

struct MeasureReport {
  std::optional<int> t_exact;
  std::optional<int> t_first_fit;
  std::optional<ValueWitness> avg_affectance;
  std::string avg_method;  // "exact" | "peeling"
  std::optional<ValueWitness> lambda;
  std::string lambda_method;  // "exact" | "sampled"
};

// Computes the requested measures, falling back per MeasureOptions; throws
// Error(TooLarge) when an exact variant is requested beyond its guard and
// heuristics are not allowed.
MeasureReport compute_measures(const Instance& inst, const MeasureOptions& options);

std::string measure_report_to_json(const MeasureReport& report);

}  // namespace sinrsched
