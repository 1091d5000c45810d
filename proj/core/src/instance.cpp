#include "sinrsched/instance.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "sinrsched/error.hpp"

namespace sinrsched {

PowerAssignment PowerAssignment::uniform(double power) {
  if (!(power > 0.0) || !std::isfinite(power))
    throw Error(ErrorKind::BadParams, "uniform power must be positive");
  PowerAssignment p;
  p.kind_ = Kind::Uniform;
  p.value_ = power;
  return p;
}

PowerAssignment PowerAssignment::linear(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw Error(ErrorKind::BadParams, "linear power coefficient must be positive");
  PowerAssignment p;
  p.kind_ = Kind::Linear;
  p.value_ = kappa;
  return p;
}

PowerAssignment PowerAssignment::table(std::map<int, double> power_by_link) {
  for (const auto& [id, v] : power_by_link)
    if (!(v > 0.0) || !std::isfinite(v))
      throw Error(ErrorKind::BadParams,
                  "table power for link " + std::to_string(id) + " must be positive");
  PowerAssignment p;
  p.kind_ = Kind::Table;
  p.table_ = std::move(power_by_link);
  return p;
}

double PowerAssignment::power_for(int link_id, double length, double alpha) const {
  switch (kind_) {
    case Kind::Uniform:
      return value_;
    case Kind::Linear:
      return value_ * std::pow(length, alpha);
    case Kind::Table: {
      auto it = table_.find(link_id);
      if (it == table_.end())
        throw Error(ErrorKind::BadParams,
                    "power table has no entry for link " + std::to_string(link_id));
      return it->second;
    }
  }
  return value_;
}

Instance::Instance(Metric metric, std::vector<Link> links, SINRParams params,
                   PowerAssignment power, Directionality directionality,
                   std::vector<std::array<int, 2>> gadgets)
    : metric_(std::make_shared<Metric>(std::move(metric))),
      links_(std::move(links)),
      params_(params),
      power_(std::move(power)),
      directionality_(directionality),
      gadgets_(std::move(gadgets)) {
  if (!(params_.alpha > 0.0) || !std::isfinite(params_.alpha))
    throw Error(ErrorKind::BadParams, "alpha must be positive");
  if (!(params_.beta >= 1.0) || !std::isfinite(params_.beta))
    throw Error(ErrorKind::BadParams, "beta must be >= 1");
  if (!(params_.noise >= 0.0) || !std::isfinite(params_.noise))
    throw Error(ErrorKind::BadParams, "noise must be >= 0");

  const size_t n = links_.size();
  sender_idx_.resize(n);
  receiver_idx_.resize(n);
  len_.resize(n);
  pow_.resize(n);
  cconst_.resize(n);
  signal_.resize(n);

  for (size_t i = 0; i < n; ++i) {
    const Link& l = links_[i];
    auto [it, inserted] = id_index_.emplace(l.id, static_cast<int>(i));
    (void)it;
    if (!inserted)
      throw Error(ErrorKind::BadParams, "duplicate link id " + std::to_string(l.id));
    sender_idx_[i] = metric_->index_of(l.sender);
    receiver_idx_[i] = metric_->index_of(l.receiver);
    len_[i] = metric_->distance(sender_idx_[i], receiver_idx_[i]);
    if (!(len_[i] > 0.0))
      throw Error(ErrorKind::DegenerateDistance,
                  "link " + std::to_string(l.id) + " has zero length");
    pow_[i] = power_.power_for(l.id, len_[i], params_.alpha);
    signal_[i] = pow_[i] / std::pow(len_[i], params_.alpha);
    // Viability against noise: need P_v > beta*N*l^alpha, i.e. the link can
    // meet the SINR threshold even with zero interference.
    const double noise_floor = params_.beta * params_.noise * std::pow(len_[i], params_.alpha);
    if (!(pow_[i] > noise_floor))
      throw Error(ErrorKind::InfeasibleLink,
                  "link " + std::to_string(l.id) +
                      " cannot overcome noise: P <= beta*N*l^alpha");
    cconst_[i] = params_.beta / (1.0 - noise_floor / pow_[i]);
  }

  for (const auto& g : gadgets_)
    for (int id : g)
      if (id_index_.find(id) == id_index_.end())
        throw Error(ErrorKind::MetadataMissing,
                    "gadget metadata names unknown link " + std::to_string(id));

  // Pairwise link distances; the diagonal stores the link's own length.
  dist_.assign(n * n, 0.0);
  aff_.assign(n * n, 0.0);
  const bool bidir = directionality_ == Directionality::Bidirectional;
  for (size_t w = 0; w < n; ++w) {
    for (size_t v = 0; v < n; ++v) {
      if (w == v) {
        dist_[w * n + v] = len_[v];
        continue;
      }
      double d = metric_->distance(sender_idx_[w], receiver_idx_[v]);
      if (bidir) {
        d = std::min(d, metric_->distance(sender_idx_[w], sender_idx_[v]));
        d = std::min(d, metric_->distance(receiver_idx_[w], receiver_idx_[v]));
        d = std::min(d, metric_->distance(receiver_idx_[w], sender_idx_[v]));
      }
      if (!(d > 0.0))
        throw Error(ErrorKind::DegenerateDistance,
                    "links " + std::to_string(links_[w].id) + " and " +
                        std::to_string(links_[v].id) + " are at distance 0");
      dist_[w * n + v] = d;
    }
  }
  for (size_t w = 0; w < n; ++w)
    for (size_t v = 0; v < n; ++v) {
      if (w == v) continue;
      aff_[w * n + v] = cconst_[v] * (pow_[w] / pow_[v]) *
                        std::pow(len_[v] / dist_[w * n + v], params_.alpha);
    }
}

int Instance::try_index_of_link(int link_id) const {
  auto it = id_index_.find(link_id);
  return it == id_index_.end() ? -1 : it->second;
}

int Instance::index_of_link(int link_id) const {
  const int idx = try_index_of_link(link_id);
  if (idx < 0) throw Error(ErrorKind::UnknownLink, "unknown link id " + std::to_string(link_id));
  return idx;
}

double Instance::link_distance(int w_id, int v_id) const {
  return link_distance_idx(index_of_link(w_id), index_of_link(v_id));
}

Instance Instance::restricted_to(const std::vector<int>& link_ids) const {
  std::vector<Link> kept;
  kept.reserve(link_ids.size());
  for (int id : link_ids) kept.push_back(links_[static_cast<size_t>(index_of_link(id))]);
  std::vector<std::array<int, 2>> kept_gadgets;
  for (const auto& g : gadgets_) {
    const bool a = std::find(link_ids.begin(), link_ids.end(), g[0]) != link_ids.end();
    const bool b = std::find(link_ids.begin(), link_ids.end(), g[1]) != link_ids.end();
    if (a && b) kept_gadgets.push_back(g);
  }
  Instance out(*metric_, std::move(kept), params_, power_, directionality_,
               std::move(kept_gadgets));
  out.metric_ = metric_;  // share the (immutable) metric storage
  return out;
}

}  // namespace sinrsched
