#pragma once

#include <vector>

#include "sinrsched/instance.hpp"

// Affectance algebra over an Instance.
//
// The affectance of link w on link v is
//     a_w(v) = min{1, c_v * (P_w/P_v) * (l_v/d_wv)^alpha},
// with c_v = beta / (1 - beta*N*l_v^alpha/P_v) and a_v(v) = 0. Summed over a
// set S it measures how much interference v absorbs (a_S(v)) or causes
// (a_v(S)). The SINR condition "v succeeds under transmit set S" is
// algebraically the same as the UNCAPPED sum a_S(v) <= 1, which is what
// is_feasible evaluates; capped sums are what the scheduling measures use.

namespace sinrsched {

// a_w(v); capped clamps each term at 1. Self-affectance is 0.
double affectance(const Instance& inst, int w_id, int v_id, bool capped = true);

struct AffectanceSums {
  double in_sum = 0.0;   // a_S(v): interference v receives from S
  double out_sum = 0.0;  // a_v(S): interference v inflicts on S
};
AffectanceSums affectance_sums(const Instance& inst, const std::vector<int>& set_ids, int v_id,
                               bool capped = true);

// a_R(S) = sum over sources in R, targets in S.
double set_affectance(const Instance& inst, const std::vector<int>& source_ids,
                      const std::vector<int>& target_ids, bool capped = true);

// Signal-to-interference-plus-noise ratio of v against concurrent set S
// (v's own entry, when present, is excluded); +infinity when the
// denominator is zero.
double sinr(const Instance& inst, int v_id, const std::vector<int>& set_ids);

// Every link of S meets the SINR threshold when S transmits together,
// evaluated as uncapped a_S(v) <= 1 (+kFeasTol) for every v in S.
bool is_feasible(const Instance& inst, const std::vector<int>& set_ids);

// Stronger margin: uncapped a_S(v) <= 1/delta for every v (delta >= 1;
// delta = 1 coincides with is_feasible).
bool is_delta_signal(const Instance& inst, const std::vector<int>& set_ids, double delta);

// Greedy first-fit partition of a feasible set into delta-signal parts,
// processing links in order of decreasing length. Throws
// Error(InfeasibleInput) when the input set itself is not feasible.
std::vector<std::vector<int>> partition_delta_signal(const Instance& inst,
                                                     const std::vector<int>& set_ids,
                                                     double delta);

// Reverse instance: every link flipped (receiver acknowledges sender) with
// dual power P*_u = gamma * l_u^alpha / P_u. gamma = 1 when N = 0;
// otherwise gamma = max_u(P_u^2 / l_u^alpha) * (1+1e-9), which keeps every
// dual link viable and every dual affectance constant c*_u <= c_u.
Instance dual_instance(const Instance& inst);

struct PowerValidation {
  bool length_monotone = true;  // l_v >= l_w implies P_v >= P_w
  bool sub_linear = true;       // l_v >= l_w implies P_v/l_v^alpha <= P_w/l_w^alpha
};
PowerValidation validate_power(const Instance& inst);

namespace detail {
// Index-based variants used by the measures / simulator hot paths.
double in_sum_uncapped(const Instance& inst, const std::vector<int>& set_idx, int v_idx);
std::vector<int> ids_to_indices(const Instance& inst, const std::vector<int>& ids);
std::vector<int> indices_to_ids(const Instance& inst, const std::vector<int>& idx);
}  // namespace detail

}  // namespace sinrsched
