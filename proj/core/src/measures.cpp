#include "sinrsched/measures.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "sinrsched/affectance.hpp"
#include "sinrsched/error.hpp"
#include "sinrsched/rng.hpp"

namespace sinrsched {

namespace {

// Flat capped / uncapped affectance tables, row = source index.
std::vector<double> capped_table(const Instance& inst) {
  const int n = inst.link_count();
  std::vector<double> t(static_cast<size_t>(n) * static_cast<size_t>(n));
  for (int w = 0; w < n; ++w)
    for (int v = 0; v < n; ++v)
      t[static_cast<size_t>(w) * static_cast<size_t>(n) + static_cast<size_t>(v)] =
          inst.affectance_capped_idx(w, v);
  return t;
}

std::vector<int> mask_to_ids(const Instance& inst, std::uint32_t mask) {
  std::vector<int> ids;
  for (int i = 0; mask; ++i, mask >>= 1)
    if (mask & 1u) ids.push_back(inst.link_id(i));
  std::sort(ids.begin(), ids.end());
  return ids;
}

void guard_size(int n, int limit, const char* what) {
  if (n > limit)
    throw Error(ErrorKind::TooLarge, std::string(what) + " supports at most " +
                                         std::to_string(limit) + " links, got " +
                                         std::to_string(n));
}

}  // namespace

SchedulingResult scheduling_number_exact(const Instance& inst) {
  const int n = inst.link_count();
  guard_size(n, kMaxExactScheduling, "scheduling_number_exact");
  if (n == 0) return {};

  const std::uint32_t full = (1u << n) - 1u;
  std::vector<char> feasible(full + 1, 0);
  feasible[0] = 1;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    bool ok = true;
    for (int v = 0; v < n && ok; ++v) {
      if (!(mask & (1u << v))) continue;
      double s = 0.0;
      for (int w = 0; w < n; ++w)
        if (mask & (1u << w)) s += inst.affectance_uncapped_idx(w, v);
      ok = s <= 1.0 + kFeasTol;
    }
    feasible[mask] = ok;
  }

  constexpr int kInf = std::numeric_limits<int>::max() / 2;
  std::vector<int> dp(full + 1, kInf);
  std::vector<std::uint32_t> pick(full + 1, 0);
  dp[0] = 0;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const std::uint32_t lb = mask & (~mask + 1u);  // some slot must take this link
    for (std::uint32_t sub = mask; sub; sub = (sub - 1u) & mask) {
      if (!(sub & lb) || !feasible[sub]) continue;
      if (dp[mask ^ sub] + 1 < dp[mask]) {
        dp[mask] = dp[mask ^ sub] + 1;
        pick[mask] = sub;
      }
    }
  }

  SchedulingResult result;
  result.t = dp[full];
  for (std::uint32_t mask = full; mask;) {
    const std::uint32_t sub = pick[mask];
    result.schedule.slots.push_back(mask_to_ids(inst, sub));
    mask ^= sub;
  }
  return result;
}

Schedule schedule_first_fit(const Instance& inst) {
  const int n = inst.link_count();
  std::vector<int> order(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (inst.length(a) != inst.length(b)) return inst.length(a) > inst.length(b);
    return inst.link_id(a) < inst.link_id(b);
  });

  struct Slot {
    std::vector<int> members;
    std::vector<double> in_sums;  // uncapped a_slot(v) per member
  };
  std::vector<Slot> slots;
  for (int x : order) {
    bool placed = false;
    for (auto& slot : slots) {
      double in_x = 0.0;
      for (int m : slot.members) in_x += inst.affectance_uncapped_idx(m, x);
      if (in_x > 1.0 + kFeasTol) continue;
      bool fits = true;
      for (size_t i = 0; i < slot.members.size() && fits; ++i)
        fits = slot.in_sums[i] + inst.affectance_uncapped_idx(x, slot.members[i]) <=
               1.0 + kFeasTol;
      if (!fits) continue;
      for (size_t i = 0; i < slot.members.size(); ++i)
        slot.in_sums[i] += inst.affectance_uncapped_idx(x, slot.members[i]);
      slot.members.push_back(x);
      slot.in_sums.push_back(in_x);
      placed = true;
      break;
    }
    if (!placed) slots.push_back(Slot{{x}, {0.0}});
  }

  Schedule schedule;
  for (auto& slot : slots) {
    auto ids = detail::indices_to_ids(inst, slot.members);
    std::sort(ids.begin(), ids.end());
    schedule.slots.push_back(std::move(ids));
  }
  return schedule;
}

bool validate_schedule(const Instance& inst, const Schedule& schedule) {
  std::vector<int> seen;
  for (const auto& slot : schedule.slots) {
    if (!is_feasible(inst, slot)) return false;
    for (int id : slot) seen.push_back(id);
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) return false;
  if (static_cast<int>(seen.size()) != inst.link_count()) return false;
  for (int id : seen)
    if (inst.try_index_of_link(id) < 0) return false;
  return true;
}

ValueWitness max_avg_affectance(const Instance& inst, AvgMode mode) {
  const int n = inst.link_count();
  if (n == 0) return {};
  const auto ac = capped_table(inst);
  const size_t sn = static_cast<size_t>(n);

  if (mode == AvgMode::Exact) {
    guard_size(n, kMaxExactAvgAffectance, "max_avg_affectance (exact)");
    const std::uint32_t full = (n == 32) ? 0xffffffffu : (1u << n) - 1u;
    std::vector<double> total(static_cast<size_t>(full) + 1, 0.0);
    ValueWitness best;
    std::uint32_t best_mask = 0;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      const int b = std::countr_zero(mask);
      const std::uint32_t rest = mask & (mask - 1u);
      double add = 0.0;
      for (std::uint32_t m = rest; m;) {
        const int w = std::countr_zero(m);
        m &= m - 1u;
        add += ac[static_cast<size_t>(b) * sn + static_cast<size_t>(w)] +
               ac[static_cast<size_t>(w) * sn + static_cast<size_t>(b)];
      }
      total[mask] = total[rest] + add;
      const double value = total[mask] / std::popcount(mask);
      if (value > best.value || best_mask == 0) {
        best.value = value;
        best_mask = mask;
      }
    }
    best.witness = mask_to_ids(inst, best_mask);
    return best;
  }

  // Greedy peeling: repeatedly drop the member with the smallest in+out
  // affectance; keep the best average seen along the way.
  std::vector<int> cur(sn);
  for (int i = 0; i < n; ++i) cur[static_cast<size_t>(i)] = i;
  ValueWitness best;
  bool have_best = false;
  while (!cur.empty()) {
    const size_t k = cur.size();
    std::vector<double> in(k, 0.0), out(k, 0.0);
    for (size_t i = 0; i < k; ++i)
      for (size_t j = 0; j < k; ++j) {
        in[i] += ac[static_cast<size_t>(cur[j]) * sn + static_cast<size_t>(cur[i])];
        out[i] += ac[static_cast<size_t>(cur[i]) * sn + static_cast<size_t>(cur[j])];
      }
    double total = 0.0;
    for (size_t i = 0; i < k; ++i) total += in[i];
    const double value = total / static_cast<double>(k);
    if (!have_best || value > best.value) {
      have_best = true;
      best.value = value;
      best.witness = detail::indices_to_ids(inst, cur);
      std::sort(best.witness.begin(), best.witness.end());
    }
    size_t drop = 0;
    for (size_t i = 1; i < k; ++i) {
      const double di = in[i] + out[i], dd = in[drop] + out[drop];
      if (di < dd || (di == dd && inst.link_id(cur[i]) < inst.link_id(cur[drop]))) drop = i;
    }
    cur.erase(cur.begin() + static_cast<std::ptrdiff_t>(drop));
  }
  return best;
}

namespace detail {

double lambda_term(const Instance& inst, const std::vector<int>& subset_idx) {
  const size_t k = subset_idx.size();
  if (k == 0) return 0.0;
  std::vector<double> in_sums(k, 0.0);
  for (size_t i = 0; i < k; ++i) {
    double s = 0.0;
    for (size_t j = 0; j < k; ++j) s += inst.affectance_capped_idx(subset_idx[j], subset_idx[i]);
    in_sums[i] = s;
  }
  const size_t rank = (k + 3) / 4;  // ceil(k/4)-th smallest
  std::nth_element(in_sums.begin(), in_sums.begin() + static_cast<std::ptrdiff_t>(rank - 1),
                   in_sums.end());
  return 0.25 * in_sums[rank - 1];
}

ValueWitness lambda_sampled_witness(const Instance& inst, int samples, std::uint64_t seed) {
  if (samples < 0) throw Error(ErrorKind::BadParams, "samples must be >= 0");
  const int n = inst.link_count();
  if (n == 0) return {};
  ValueWitness best;

  std::vector<int> subset;
  auto consider = [&](const std::vector<int>& idx) {
    const double t = lambda_term(inst, idx);
    if (t > best.value || best.witness.empty()) {
      best.value = t;
      best.witness = detail::indices_to_ids(inst, idx);
      std::sort(best.witness.begin(), best.witness.end());
    }
  };

  std::vector<int> all(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) all[static_cast<size_t>(i)] = i;
  consider(all);  // the full set is always inspected

  auto rng = make_rng(mix_seed(seed, fnv1a64("lambda_sampled")));
  constexpr double kProbs[3] = {0.25, 0.5, 1.0};
  for (int s = 0; s < samples; ++s) {
    const double p = kProbs[rng() % 3];
    subset.clear();
    for (int i = 0; i < n; ++i)
      if (uniform01(rng) < p) subset.push_back(i);
    if (!subset.empty()) consider(subset);
  }
  return best;
}

}  // namespace detail

ValueWitness lambda_exact(const Instance& inst) {
  const int n = inst.link_count();
  guard_size(n, kMaxExactLambda, "lambda_exact");
  if (n == 0) return {};
  const auto ac = capped_table(inst);
  const size_t sn = static_cast<size_t>(n);
  const std::uint32_t full = (1u << n) - 1u;

  std::vector<int> members(sn);
  std::vector<double> in_sums(sn);
  ValueWitness best;
  std::uint32_t best_mask = 0;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    int k = 0;
    for (std::uint32_t m = mask; m;) {
      members[static_cast<size_t>(k++)] = std::countr_zero(m);
      m &= m - 1u;
    }
    for (int i = 0; i < k; ++i) {
      double s = 0.0;
      const int v = members[static_cast<size_t>(i)];
      for (int j = 0; j < k; ++j)
        s += ac[static_cast<size_t>(members[static_cast<size_t>(j)]) * sn +
                static_cast<size_t>(v)];
      in_sums[static_cast<size_t>(i)] = s;
    }
    const int rank = (k + 3) / 4;
    std::nth_element(in_sums.begin(), in_sums.begin() + (rank - 1), in_sums.begin() + k);
    const double t = 0.25 * in_sums[static_cast<size_t>(rank - 1)];
    if (t > best.value || best_mask == 0) {
      best.value = t;
      best_mask = mask;
    }
  }
  best.witness = mask_to_ids(inst, best_mask);
  return best;
}

double lambda_sampled(const Instance& inst, int samples, std::uint64_t seed) {
  return detail::lambda_sampled_witness(inst, samples, seed).value;
}

MeasureReport compute_measures(const Instance& inst, const MeasureOptions& options) {
  MeasureReport report;
  const int n = inst.link_count();
  if (options.want_t) {
    report.t_first_fit = static_cast<int>(schedule_first_fit(inst).slots.size());
    if (n <= kMaxExactScheduling)
      report.t_exact = scheduling_number_exact(inst).t;
    else if (!options.allow_heuristic)
      guard_size(n, kMaxExactScheduling, "scheduling_number_exact");
  }
  if (options.want_avg) {
    if (n <= kMaxExactAvgAffectance) {
      report.avg_affectance = max_avg_affectance(inst, AvgMode::Exact);
      report.avg_method = "exact";
    } else if (options.allow_heuristic) {
      report.avg_affectance = max_avg_affectance(inst, AvgMode::Peeling);
      report.avg_method = "peeling";
    } else {
      guard_size(n, kMaxExactAvgAffectance, "max_avg_affectance (exact)");
    }
  }
  if (options.want_lambda) {
    if (n <= kMaxExactLambda) {
      report.lambda = lambda_exact(inst);
      report.lambda_method = "exact";
    } else if (options.allow_heuristic) {
      report.lambda = detail::lambda_sampled_witness(inst, options.lambda_samples, options.seed);
      report.lambda_method = "sampled";
    } else {
      guard_size(n, kMaxExactLambda, "lambda_exact");
    }
  }
  return report;
}

std::string measure_report_to_json(const MeasureReport& report) {
  nlohmann::json j;
  if (report.t_exact || report.t_first_fit) {
    nlohmann::json t;
    if (report.t_exact) t["exact"] = *report.t_exact;
    if (report.t_first_fit) t["first_fit"] = *report.t_first_fit;
    j["T"] = t;
  }
  if (report.avg_affectance) {
    j["avg_affectance"] = {{"value", report.avg_affectance->value},
                           {"method", report.avg_method},
                           {"witness", report.avg_affectance->witness}};
  }
  if (report.lambda) {
    j["lambda"] = {{"value", report.lambda->value},
                   {"method", report.lambda_method},
                   {"witness", report.lambda->witness}};
  }
  return j.dump(2) + "\n";
}

}  // namespace sinrsched
