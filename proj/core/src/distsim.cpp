#include "sinrsched/distsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <random>

#include "sinrsched/affectance.hpp"
#include "sinrsched/error.hpp"
#include "sinrsched/rng.hpp"

namespace sinrsched {

double phase_probability(int k) { return std::ldexp(1.0, -(k + 2)); }

std::int64_t phase_length(int k, double c3, int n_estimate) {
  const double slots = std::ceil(8.0 * c3 * std::log(static_cast<double>(n_estimate)) /
                                 phase_probability(k));
  if (slots >= static_cast<double>(std::numeric_limits<std::int64_t>::max()))
    return std::numeric_limits<std::int64_t>::max();
  return static_cast<std::int64_t>(slots);
}

namespace {

// Everything a sender is allowed to consult when deciding to transmit:
// its own protocol counters and its own RNG stream.
struct Agent {
  int phase = 0;
  std::int64_t slot_in_phase = 0;
  bool done = false;
  bool awaiting_ack = false;
  std::mt19937_64 rng;
};

bool agent_decides_to_transmit(Agent& a) {
  return uniform01(a.rng) < phase_probability(a.phase);
}

void advance_phase_clock(Agent& a, double c3, int n_estimate) {
  if (++a.slot_in_phase >= phase_length(a.phase, c3, n_estimate)) {
    ++a.phase;
    a.slot_in_phase = 0;
  }
}

void validate_config(const Instance& inst, const SimConfig& cfg) {
  if (!(cfg.c3 > 0.0) || !std::isfinite(cfg.c3))
    throw Error(ErrorKind::ConfigInvalid, "c3 must be positive");
  if (cfg.n_estimate < 2)
    throw Error(ErrorKind::ConfigInvalid, "n_estimate must be >= 2");
  const std::int64_t first_phase = phase_length(0, cfg.c3, cfg.n_estimate) *
                                   (cfg.ack_model == AckModel::ExplicitAck ? 2 : 1);
  if (cfg.max_slots < first_phase)
    throw Error(ErrorKind::ConfigInvalid,
                "max_slots must cover at least one full phase (" +
                    std::to_string(first_phase) + " slots)");
  if (cfg.ack_model == AckModel::ExplicitAck &&
      inst.directionality() != Directionality::Unidirectional)
    throw Error(ErrorKind::ConfigInvalid, "ExplicitAck requires a unidirectional instance");
}

// Delivered subset of `tx` (link indices) when they transmit simultaneously.
std::vector<int> delivered(const Instance& inst, const std::vector<int>& tx) {
  std::vector<int> ok;
  for (int v : tx) {
    double in_sum = 0.0;
    for (int w : tx) in_sum += inst.affectance_uncapped_idx(w, v);
    if (in_sum <= 1.0 + kFeasTol) ok.push_back(v);
  }
  return ok;
}

std::vector<int> sorted_ids(const Instance& inst, const std::vector<int>& idx) {
  std::vector<int> ids;
  ids.reserve(idx.size());
  for (int i : idx) ids.push_back(inst.link_id(i));
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace

SimTrace run_distributed(const Instance& inst, const SimConfig& cfg) {
  validate_config(inst, cfg);
  const int n = inst.link_count();
  const bool explicit_ack = cfg.ack_model == AckModel::ExplicitAck;

  // Ack traffic runs on the reversed links with dual power.
  std::unique_ptr<Instance> dual;
  if (explicit_ack) dual = std::make_unique<Instance>(dual_instance(inst));

  std::vector<Agent> agents(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    agents[static_cast<size_t>(i)].rng =
        std::mt19937_64(mix_seed(cfg.seed, static_cast<std::uint64_t>(
                                               static_cast<std::int64_t>(inst.link_id(i)))));

  SimTrace trace;
  trace.ack_model = cfg.ack_model;
  trace.links.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) trace.links[static_cast<size_t>(i)].id = inst.link_id(i);

  int remaining = n;
  std::vector<int> tx;
  for (std::int64_t t = 0; t < cfg.max_slots && remaining > 0; ++t) {
    SlotRecord rec;
    rec.slot = t;
    const bool ack_slot = explicit_ack && (t % 2 == 1);
    rec.is_ack_slot = ack_slot;

    tx.clear();
    if (!ack_slot) {
      for (int i = 0; i < n; ++i) {
        Agent& a = agents[static_cast<size_t>(i)];
        if (a.done || a.awaiting_ack) continue;
        if (agent_decides_to_transmit(a)) tx.push_back(i);
      }
      const auto ok = delivered(inst, tx);
      for (int v : ok) {
        Agent& a = agents[static_cast<size_t>(v)];
        LinkOutcome& out = trace.links[static_cast<size_t>(v)];
        out.data_success_slot = t;
        if (explicit_ack) {
          a.awaiting_ack = true;
        } else {
          a.done = true;
          out.done = true;
          out.completion = t + 1;
          --remaining;
        }
      }
      // Phase clocks tick for senders still in the data loop; frozen and
      // finished senders stay put.
      for (int i = 0; i < n; ++i) {
        Agent& a = agents[static_cast<size_t>(i)];
        if (!a.done && !a.awaiting_ack) advance_phase_clock(a, cfg.c3, cfg.n_estimate);
      }
      rec.transmitters = sorted_ids(inst, tx);
      rec.successes = sorted_ids(inst, ok);
    } else {
      // Receivers with a pending ack retransmit it deterministically.
      for (int i = 0; i < n; ++i)
        if (agents[static_cast<size_t>(i)].awaiting_ack) tx.push_back(i);
      const auto ok = delivered(*dual, tx);
      for (int v : ok) {
        Agent& a = agents[static_cast<size_t>(v)];
        a.awaiting_ack = false;
        a.done = true;
        LinkOutcome& out = trace.links[static_cast<size_t>(v)];
        out.done = true;
        out.ack_success_slot = t;
        out.completion = t + 1;
        --remaining;
      }
      rec.transmitters = sorted_ids(inst, tx);
      rec.ack_successes = sorted_ids(inst, ok);
    }
    trace.slots.push_back(std::move(rec));
  }

  trace.truncated = remaining > 0;
  if (trace.truncated) {
    trace.completion_slot = cfg.max_slots;
  } else {
    std::int64_t last = 0;
    for (const auto& l : trace.links) last = std::max(last, l.completion);
    trace.completion_slot = last;
  }
  return trace;
}

RateStats per_slot_success_rate(const Instance& inst, double q, long trials,
                                std::uint64_t seed) {
  if (!(q >= 0.0) || !(q <= 1.0))
    throw Error(ErrorKind::BadParams, "q must lie in [0, 1]");
  if (trials < 1) throw Error(ErrorKind::BadParams, "trials must be >= 1");
  const int n = inst.link_count();

  double mean = 0.0, m2 = 0.0;
  std::vector<int> tx;
  for (long trial = 0; trial < trials; ++trial) {
    auto rng = std::mt19937_64(mix_seed(seed, static_cast<std::uint64_t>(trial)));
    tx.clear();
    for (int i = 0; i < n; ++i)
      if (uniform01(rng) < q) tx.push_back(i);
    const double x = static_cast<double>(delivered(inst, tx).size());
    const double delta = x - mean;
    mean += delta / static_cast<double>(trial + 1);
    m2 += delta * (x - mean);
  }

  RateStats stats;
  stats.trials = trials;
  stats.mean = mean;
  stats.stddev = trials > 1 ? std::sqrt(m2 / static_cast<double>(trials - 1)) : 0.0;
  stats.sem = stats.stddev / std::sqrt(static_cast<double>(trials));
  return stats;
}

std::vector<std::pair<std::int64_t, int>> active_gadget_curve(
    const SimTrace& trace, const std::vector<std::array<int, 2>>& gadgets) {
  if (gadgets.empty())
    throw Error(ErrorKind::MetadataMissing, "instance carries no gadget metadata");

  std::map<int, std::int64_t> first_success;
  for (const auto& rec : trace.slots)
    for (int id : rec.successes)
      first_success.emplace(id, rec.slot);  // emplace keeps the earliest slot

  constexpr std::int64_t kNever = std::numeric_limits<std::int64_t>::max();
  std::vector<std::int64_t> resolved;
  resolved.reserve(gadgets.size());
  for (const auto& g : gadgets) {
    std::int64_t r = kNever;
    for (int id : g) {
      auto it = first_success.find(id);
      if (it != first_success.end()) r = std::min(r, it->second);
    }
    resolved.push_back(r);
  }

  const std::int64_t end = static_cast<std::int64_t>(trace.slots.size());
  std::vector<std::pair<std::int64_t, int>> curve;
  curve.reserve(static_cast<size_t>(end) + 1);
  for (std::int64_t t = 0; t <= end; ++t) {
    int active = 0;
    for (std::int64_t r : resolved)
      if (r >= t) ++active;  // no success in slots [0, t-1]
    curve.emplace_back(t, active);
  }
  return curve;
}

}  // namespace sinrsched
