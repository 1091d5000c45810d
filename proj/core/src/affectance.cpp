#include "sinrsched/affectance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sinrsched/error.hpp"

namespace sinrsched {

namespace detail {

std::vector<int> ids_to_indices(const Instance& inst, const std::vector<int>& ids) {
  std::vector<int> idx;
  idx.reserve(ids.size());
  for (int id : ids) idx.push_back(inst.index_of_link(id));
  return idx;
}

std::vector<int> indices_to_ids(const Instance& inst, const std::vector<int>& idx) {
  std::vector<int> ids;
  ids.reserve(idx.size());
  for (int i : idx) ids.push_back(inst.link_id(i));
  return ids;
}

double in_sum_uncapped(const Instance& inst, const std::vector<int>& set_idx, int v_idx) {
  double s = 0.0;
  for (int w : set_idx) s += inst.affectance_uncapped_idx(w, v_idx);
  return s;
}

}  // namespace detail

double affectance(const Instance& inst, int w_id, int v_id, bool capped) {
  const int w = inst.index_of_link(w_id);
  const int v = inst.index_of_link(v_id);
  return capped ? inst.affectance_capped_idx(w, v) : inst.affectance_uncapped_idx(w, v);
}

AffectanceSums affectance_sums(const Instance& inst, const std::vector<int>& set_ids, int v_id,
                               bool capped) {
  const int v = inst.index_of_link(v_id);
  AffectanceSums sums;
  for (int w_id : set_ids) {
    const int w = inst.index_of_link(w_id);
    if (capped) {
      sums.in_sum += inst.affectance_capped_idx(w, v);
      sums.out_sum += inst.affectance_capped_idx(v, w);
    } else {
      sums.in_sum += inst.affectance_uncapped_idx(w, v);
      sums.out_sum += inst.affectance_uncapped_idx(v, w);
    }
  }
  return sums;
}

double set_affectance(const Instance& inst, const std::vector<int>& source_ids,
                      const std::vector<int>& target_ids, bool capped) {
  const auto src = detail::ids_to_indices(inst, source_ids);
  const auto tgt = detail::ids_to_indices(inst, target_ids);
  double total = 0.0;
  for (int w : src)
    for (int v : tgt)
      total += capped ? inst.affectance_capped_idx(w, v) : inst.affectance_uncapped_idx(w, v);
  return total;
}

double sinr(const Instance& inst, int v_id, const std::vector<int>& set_ids) {
  const int v = inst.index_of_link(v_id);
  const double alpha = inst.params().alpha;
  double interference = 0.0;
  for (int w_id : set_ids) {
    const int w = inst.index_of_link(w_id);
    if (w == v) continue;
    interference += inst.power(w) / std::pow(inst.link_distance_idx(w, v), alpha);
  }
  const double denom = interference + inst.params().noise;
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  return inst.signal(v) / denom;
}

bool is_feasible(const Instance& inst, const std::vector<int>& set_ids) {
  return is_delta_signal(inst, set_ids, 1.0);
}

bool is_delta_signal(const Instance& inst, const std::vector<int>& set_ids, double delta) {
  if (!(delta >= 1.0))
    throw Error(ErrorKind::BadParams, "delta must be >= 1");
  const auto idx = detail::ids_to_indices(inst, set_ids);
  const double bound = 1.0 / delta + kFeasTol;
  for (int v : idx)
    if (detail::in_sum_uncapped(inst, idx, v) > bound) return false;
  return true;
}

std::vector<std::vector<int>> partition_delta_signal(const Instance& inst,
                                                     const std::vector<int>& set_ids,
                                                     double delta) {
  if (!(delta >= 1.0))
    throw Error(ErrorKind::BadParams, "delta must be >= 1");
  if (!is_feasible(inst, set_ids))
    throw Error(ErrorKind::InfeasibleInput, "cannot partition an infeasible set");
  if (set_ids.empty()) return {};

  // Longest first; ties broken by id so the result is deterministic.
  auto order = detail::ids_to_indices(inst, set_ids);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (inst.length(a) != inst.length(b)) return inst.length(a) > inst.length(b);
    return inst.link_id(a) < inst.link_id(b);
  });

  const double bound = 1.0 / delta + kFeasTol;
  struct Part {
    std::vector<int> members;  // link indices
    std::vector<double> in_sums;
  };
  std::vector<Part> parts;
  for (int x : order) {
    bool placed = false;
    for (auto& part : parts) {
      double in_x = 0.0;
      for (int m : part.members) in_x += inst.affectance_uncapped_idx(m, x);
      if (in_x > bound) continue;
      bool fits = true;
      for (size_t i = 0; i < part.members.size(); ++i) {
        if (part.in_sums[i] + inst.affectance_uncapped_idx(x, part.members[i]) > bound) {
          fits = false;
          break;
        }
      }
      if (!fits) continue;
      for (size_t i = 0; i < part.members.size(); ++i)
        part.in_sums[i] += inst.affectance_uncapped_idx(x, part.members[i]);
      part.members.push_back(x);
      part.in_sums.push_back(in_x);
      placed = true;
      break;
    }
    if (!placed) parts.push_back(Part{{x}, {0.0}});
  }

  std::vector<std::vector<int>> out;
  out.reserve(parts.size());
  for (auto& part : parts) out.push_back(detail::indices_to_ids(inst, part.members));
  return out;
}

Instance dual_instance(const Instance& inst) {
  if (inst.directionality() != Directionality::Unidirectional)
    throw Error(ErrorKind::BadParams, "dual instance requires a unidirectional instance");
  const int n = inst.link_count();
  const double alpha = inst.params().alpha;

  double gamma = 1.0;
  if (inst.params().noise > 0.0) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
      worst = std::max(worst, inst.power(i) * inst.power(i) / std::pow(inst.length(i), alpha));
    gamma = worst * (1.0 + 1e-9);
  }

  std::vector<Link> flipped;
  flipped.reserve(static_cast<size_t>(n));
  std::map<int, double> dual_power;
  for (int i = 0; i < n; ++i) {
    const Link& l = inst.links()[static_cast<size_t>(i)];
    flipped.push_back(Link{l.id, l.receiver, l.sender});
    const double p = gamma * std::pow(inst.length(i), alpha) / inst.power(i);
    dual_power[l.id] = p;
    // gamma >= P_u^2/l_u^alpha makes P*_u >= P_u > beta*N*l^alpha; the
    // instance constructor re-checks, so a failure here is a logic bug.
    if (!(p > inst.params().beta * inst.params().noise * std::pow(inst.length(i), alpha)))
      throw Error(ErrorKind::InfeasibleLink,
                  "dual power for link " + std::to_string(l.id) + " is not viable");
  }

  Instance out(inst.metric(), std::move(flipped), inst.params(),
               PowerAssignment::table(std::move(dual_power)), Directionality::Unidirectional,
               inst.gadgets());
  return out;
}

PowerValidation validate_power(const Instance& inst) {
  constexpr double kRatioTol = 1e-12;
  PowerValidation v;
  const int n = inst.link_count();
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (inst.length(a) < inst.length(b)) continue;
      // length(a) >= length(b)
      if (inst.power(a) < inst.power(b) * (1.0 - kRatioTol)) v.length_monotone = false;
      if (inst.signal(a) > inst.signal(b) * (1.0 + kRatioTol)) v.sub_linear = false;
    }
  }
  return v;
}

}  // namespace sinrsched
