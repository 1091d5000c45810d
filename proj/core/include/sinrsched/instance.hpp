#pragma once

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "sinrsched/metric.hpp"

namespace sinrsched {

// Absolute tolerance for threshold comparisons against 1 (feasibility,
// delta-signal checks) and similar unit-scale quantities.
constexpr double kFeasTol = 1e-9;

// Directed communication request: sender node -> receiver node.
struct Link {
  int id = 0;
  std::string sender;
  std::string receiver;
};

struct SINRParams {
  double alpha = 2.0;  // path-loss exponent, > 0
  double beta = 1.0;   // SINR threshold, >= 1
  double noise = 0.0;  // ambient noise N, >= 0
};

enum class Directionality {
  Unidirectional,  // interference travels sender -> receiver only
  Bidirectional,   // both endpoints transmit (e.g. ack traffic): worst-case
                   // 4-way distance between links
};

class PowerAssignment {
 public:
  enum class Kind { Uniform, Linear, Table };

  static PowerAssignment uniform(double power);
  // Linear in l^alpha: P_v = kappa * l_v^alpha.
  static PowerAssignment linear(double kappa);
  static PowerAssignment table(std::map<int, double> power_by_link);

  Kind kind() const { return kind_; }
  double uniform_power() const { return value_; }
  double linear_coefficient() const { return value_; }
  const std::map<int, double>& table_powers() const { return table_; }

  double power_for(int link_id, double length, double alpha) const;

 private:
  Kind kind_ = Kind::Uniform;
  double value_ = 1.0;
  std::map<int, double> table_;
};

// A set of links over a metric, with SINR parameters and transmit powers.
// Construction validates everything the rest of the library relies on:
// node ids resolve, link lengths are positive, every pairwise link distance
// is positive, powers are positive and strong enough to overcome noise
// (P_v > beta*N*l_v^alpha, so the affectance constant c_v is finite).
// Pairwise distances and uncapped affectances are precomputed.
class Instance {
 public:
  Instance(Metric metric, std::vector<Link> links, SINRParams params, PowerAssignment power,
           Directionality directionality = Directionality::Unidirectional,
           std::vector<std::array<int, 2>> gadgets = {});

  int link_count() const { return static_cast<int>(links_.size()); }
  const std::vector<Link>& links() const { return links_; }
  int index_of_link(int link_id) const;       // throws Error(UnknownLink)
  int try_index_of_link(int link_id) const;   // -1 when absent
  int link_id(int idx) const { return links_[static_cast<size_t>(idx)].id; }

  const Metric& metric() const { return *metric_; }
  const std::shared_ptr<const Metric>& metric_ptr() const { return metric_; }
  const SINRParams& params() const { return params_; }
  const PowerAssignment& power_assignment() const { return power_; }
  Directionality directionality() const { return directionality_; }

  // Optional pairing of links into identical-link gadgets (generator
  // metadata; empty for plain instances).
  const std::vector<std::array<int, 2>>& gadgets() const { return gadgets_; }

  double length(int idx) const { return len_[static_cast<size_t>(idx)]; }
  double power(int idx) const { return pow_[static_cast<size_t>(idx)]; }
  // c_v = beta / (1 - beta*N*l_v^alpha / P_v); equals beta when N = 0.
  double affectance_constant(int idx) const { return cconst_[static_cast<size_t>(idx)]; }
  // Received signal strength P_v / l_v^alpha.
  double signal(int idx) const { return signal_[static_cast<size_t>(idx)]; }

  // d_wv: the distance interference from link w travels to v's receiver.
  // Unidirectional: d(s_w, r_v). Bidirectional: min over all four
  // endpoint pairings. Index variant is a precomputed lookup.
  double link_distance_idx(int w, int v) const {
    return dist_[static_cast<size_t>(w) * links_.size() + static_cast<size_t>(v)];
  }
  double link_distance(int w_id, int v_id) const;

  // Affectance of source link w on target link v; 0 on the diagonal.
  double affectance_uncapped_idx(int w, int v) const {
    return aff_[static_cast<size_t>(w) * links_.size() + static_cast<size_t>(v)];
  }
  double affectance_capped_idx(int w, int v) const {
    const double a = affectance_uncapped_idx(w, v);
    return a < 1.0 ? a : 1.0;
  }

  // Sub-instance over a subset of link ids; keeps metric, params, power and
  // any gadget pairs whose links both survive.
  Instance restricted_to(const std::vector<int>& link_ids) const;

 private:
  std::shared_ptr<const Metric> metric_;
  std::vector<Link> links_;
  SINRParams params_;
  PowerAssignment power_;
  Directionality directionality_ = Directionality::Unidirectional;
  std::vector<std::array<int, 2>> gadgets_;

  std::map<int, int> id_index_;
  std::vector<int> sender_idx_, receiver_idx_;
  std::vector<double> len_, pow_, cconst_, signal_;
  std::vector<double> dist_;  // link-to-link, row = source
  std::vector<double> aff_;   // uncapped affectance, row = source
};

}  // namespace sinrsched
