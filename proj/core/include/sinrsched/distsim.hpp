#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "sinrsched/instance.hpp"

// Slot-synchronous simulator for the distributed scheduling protocol: every
// unfinished sender transmits i.i.d. with probability q_k = 1/(4*2^k),
// runs ceil(8*c3*ln(n_estimate)/q_k) slots in phase k, then halves q. A
// transmission is delivered when its link meets the SINR threshold against
// the set of simultaneous transmitters.
//
// Feedback models:
//  - FreeAck: the sender learns the outcome of its own slot for free.
//  - ExplicitAck: slots alternate data/ack (first slot carries data). A
//    delivered data packet makes the receiver acknowledge on the reversed
//    (dual-power) link in every following ack slot until the ack itself is
//    delivered; the sender freezes (no data, phase clock paused) while the
//    ack is pending. Phase lengths count data slots only.
//
// Agents are structurally identical state machines; a transmit decision is
// a pure function of (own state, own RNG stream), never of the topology.

namespace sinrsched {

enum class AckModel { FreeAck, ExplicitAck };

struct SimConfig {
  double c3 = 1.0;               // phase-length constant
  int n_estimate = 2;            // rough network size fed to ln(); >= 2
  std::int64_t max_slots = 100000;
  AckModel ack_model = AckModel::FreeAck;
  std::uint64_t seed = 0;
};

struct SlotRecord {
  std::int64_t slot = 0;
  bool is_ack_slot = false;        // ExplicitAck: odd-index slots
  std::vector<int> transmitters;   // link ids, ascending
  std::vector<int> successes;      // delivered data transmissions
  std::vector<int> ack_successes;  // delivered acks (ExplicitAck)
};

struct LinkOutcome {
  int id = 0;
  bool done = false;
  std::int64_t data_success_slot = -1;  // slot index of the delivered data packet
  std::int64_t ack_success_slot = -1;   // slot index of the delivered ack (ExplicitAck)
  std::int64_t completion = -1;         // slots elapsed when the sender stopped
};

struct SimTrace {
  AckModel ack_model = AckModel::FreeAck;
  std::vector<SlotRecord> slots;
  std::vector<LinkOutcome> links;     // instance link order
  std::int64_t completion_slot = 0;   // slots elapsed until the last sender stopped
  bool truncated = false;             // hit max_slots with unfinished links
};

double phase_probability(int k);
std::int64_t phase_length(int k, double c3, int n_estimate);

// Runs the protocol; throws Error(ConfigInvalid) on bad configs (ExplicitAck
// additionally requires a unidirectional instance). A run that exhausts
// max_slots returns a truncated trace rather than failing.
SimTrace run_distributed(const Instance& inst, const SimConfig& config);

struct RateStats {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation of per-trial successes
  double sem = 0.0;     // standard error of the mean
  long trials = 0;
};

// Monte-Carlo estimate of E[#delivered] when every link transmits i.i.d.
// with probability q for one slot.
RateStats per_slot_success_rate(const Instance& inst, double q, long trials, std::uint64_t seed);

// a(t) = number of gadgets with no delivered data packet in slots [0, t-1],
// for t = 0..trace length. Requires gadget metadata (Error(MetadataMissing)).
std::vector<std::pair<std::int64_t, int>> active_gadget_curve(
    const SimTrace& trace, const std::vector<std::array<int, 2>>& gadgets);

}  // namespace sinrsched
