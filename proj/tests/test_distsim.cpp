#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "sinrsched/affectance.hpp"
#include "sinrsched/distsim.hpp"
#include "sinrsched/error.hpp"
#include "sinrsched/generators.hpp"
#include "sinrsched/instance_io.hpp"

using namespace sinrsched;

namespace {

Instance single_link_instance(uint64_t seed) {
  RandomEuclideanSpec spec;
  spec.n = 1;
  spec.seed = seed;
  return gen_random_euclidean(spec);
}

bool contains(const std::vector<int>& v, int x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

// Ground truth for one slot: a transmission is delivered iff the uncapped
// incoming affectance from the other transmitters stays within the budget.
std::vector<int> delivered_oracle(const Instance& inst, const std::vector<int>& tx_ids) {
  std::vector<int> ok;
  for (int v : tx_ids)
    if (affectance_sums(inst, tx_ids, v, false).in_sum <= 1.0 + 1e-9) ok.push_back(v);
  return ok;
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::BadParams;
}

}  // namespace

TEST_CASE("phase schedule arithmetic") {
  CHECK(phase_probability(0) == 0.25);
  CHECK(phase_probability(1) == 0.125);
  CHECK(phase_probability(3) == doctest::Approx(1.0 / 32.0));

  // ceil(8 * c3 * ln(n_estimate) / q_k)
  CHECK(phase_length(0, 1.0, 2) == 23);
  CHECK(phase_length(1, 1.0, 2) == 45);
  CHECK(phase_length(2, 2.5, 16) == 888);

  // each phase is about twice the previous one
  for (int k = 0; k < 6; ++k) {
    const double ratio = static_cast<double>(phase_length(k + 1, 1.0, 64)) /
                         static_cast<double>(phase_length(k, 1.0, 64));
    CHECK(ratio == doctest::Approx(2.0).epsilon(0.01));
  }
}

TEST_CASE("config validation") {
  const Instance inst = gen_gadget(2, 2.0);
  SimConfig cfg;

  auto run_with = [&](auto mutate, const Instance& target) {
    SimConfig c = cfg;
    mutate(c);
    return kind_of([&] { run_distributed(target, c); });
  };

  CHECK(run_with([](SimConfig& c) { c.c3 = 0.0; }, inst) == ErrorKind::ConfigInvalid);
  CHECK(run_with([](SimConfig& c) { c.c3 = -1.0; }, inst) == ErrorKind::ConfigInvalid);
  CHECK(run_with([](SimConfig& c) { c.c3 = std::nan(""); }, inst) == ErrorKind::ConfigInvalid);
  CHECK(run_with([](SimConfig& c) { c.n_estimate = 1; }, inst) == ErrorKind::ConfigInvalid);
  // max_slots has to cover the first phase: 23 data slots here, twice that
  // (46) when every other slot is an ack slot.
  CHECK(run_with([](SimConfig& c) { c.max_slots = 22; }, inst) == ErrorKind::ConfigInvalid);
  CHECK(run_with(
            [](SimConfig& c) {
              c.ack_model = AckModel::ExplicitAck;
              c.max_slots = 45;
            },
            inst) == ErrorKind::ConfigInvalid);

  RandomEuclideanSpec bi;
  bi.n = 2;
  bi.seed = 3;
  bi.directionality = Directionality::Bidirectional;
  const Instance bidir = gen_random_euclidean(bi);
  CHECK(run_with([](SimConfig& c) { c.ack_model = AckModel::ExplicitAck; }, bidir) ==
        ErrorKind::ConfigInvalid);
  // FreeAck is fine on bidirectional instances
  CHECK(run_distributed(bidir, cfg).links.size() == 2);
}

TEST_CASE("single link completes and the trace is consistent") {
  const Instance inst = single_link_instance(11);
  SimConfig cfg;
  cfg.seed = 1;
  const SimTrace trace = run_distributed(inst, cfg);

  REQUIRE(trace.links.size() == 1);
  const LinkOutcome& out = trace.links[0];
  CHECK_FALSE(trace.truncated);
  CHECK(out.done);
  CHECK(out.data_success_slot >= 0);
  CHECK(out.completion == out.data_success_slot + 1);
  CHECK(trace.completion_slot == out.completion);
  // the simulator stops right after the last sender finishes
  CHECK(static_cast<std::int64_t>(trace.slots.size()) == trace.completion_slot);

  // a lone transmitter succeeds the first time it talks
  for (const auto& rec : trace.slots) {
    if (rec.transmitters.empty()) continue;
    CHECK(rec.slot == out.data_success_slot);
    CHECK(rec.successes == rec.transmitters);
  }
}

TEST_CASE("per-slot outcomes match the interference oracle") {
  const Instance inst = gen_gadget(4, 2.0);
  SimConfig cfg;
  cfg.seed = 99;
  cfg.n_estimate = 8;
  const SimTrace trace = run_distributed(inst, cfg);
  CHECK_FALSE(trace.truncated);

  for (const auto& rec : trace.slots) {
    CHECK(std::is_sorted(rec.transmitters.begin(), rec.transmitters.end()));
    CHECK(rec.successes == delivered_oracle(inst, rec.transmitters));
    for (int id : rec.successes) CHECK(contains(rec.transmitters, id));

    // in this family a link gets through exactly when its partner is silent
    for (const auto& g : inst.gadgets()) {
      const bool ta = contains(rec.transmitters, g[0]);
      const bool tb = contains(rec.transmitters, g[1]);
      CHECK(contains(rec.successes, g[0]) == (ta && !tb));
      CHECK(contains(rec.successes, g[1]) == (tb && !ta));
    }
  }
}

TEST_CASE("traces are deterministic in the seed") {
  const Instance inst = gen_gadget(3, 2.0);
  SimConfig cfg;
  cfg.seed = 5;
  cfg.n_estimate = 6;
  const std::string a = trace_to_json(run_distributed(inst, cfg), cfg);
  const std::string b = trace_to_json(run_distributed(inst, cfg), cfg);
  CHECK(a == b);

  cfg.seed = 6;
  const std::string c = trace_to_json(run_distributed(inst, cfg), cfg);
  CHECK(a != c);
}

TEST_CASE("transmit decisions depend only on the agent itself") {
  // Same link ids and seed in two different networks: the slot-0 decisions
  // of the shared agents coincide because each consults only its own stream.
  SimConfig cfg;
  cfg.seed = 12;
  const SimTrace small = run_distributed(gen_gadget(2, 2.0), cfg);
  const SimTrace large = run_distributed(gen_gadget(4, 2.0), cfg);

  std::vector<int> large_restricted;
  for (int id : large.slots[0].transmitters)
    if (id < 4) large_restricted.push_back(id);
  CHECK(small.slots[0].transmitters == large_restricted);
}

TEST_CASE("slot-0 statistics over many seeds") {
  // phase 0 sends with q = 1/4; shrink the phase so each run is 2 slots
  const Instance inst = gen_gadget(2, 2.0);
  SimConfig cfg;
  cfg.c3 = 0.05;
  cfg.max_slots = 2;

  const int runs = 10000;
  int tx0 = 0;
  int table[2][2] = {{0, 0}, {0, 0}};
  int survived = 0;
  for (int s = 0; s < runs; ++s) {
    cfg.seed = static_cast<uint64_t>(s);
    const SimTrace trace = run_distributed(inst, cfg);
    const auto& rec = trace.slots[0];
    const bool a = contains(rec.transmitters, 0);
    const bool b = contains(rec.transmitters, 1);
    tx0 += a ? 1 : 0;
    ++table[a ? 1 : 0][b ? 1 : 0];
    const bool resolved = contains(rec.successes, 0) || contains(rec.successes, 1);
    survived += resolved ? 0 : 1;
  }

  // binomial(10^4, 1/4): 3 sigma is about 130
  CHECK(std::abs(tx0 - 2500) <= 130);

  // Pearson chi-square for independence of the two agents' decisions,
  // 1 dof, rejection threshold at p = 0.01
  const double row0 = table[0][0] + table[0][1], row1 = table[1][0] + table[1][1];
  const double col0 = table[0][0] + table[1][0], col1 = table[0][1] + table[1][1];
  double chi2 = 0.0;
  const double obs[2][2] = {{double(table[0][0]), double(table[0][1])},
                            {double(table[1][0]), double(table[1][1])}};
  const double rows[2] = {row0, row1}, cols[2] = {col0, col1};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double expect = rows[i] * cols[j] / runs;
      chi2 += (obs[i][j] - expect) * (obs[i][j] - expect) / expect;
    }
  CHECK(chi2 < 6.635);

  // a gadget survives a slot unless exactly one member talks:
  // q^2 + (1-q)^2 + ... = 1 - 2q(1-q) = 5/8 at q = 1/4; 3 sigma ~ 0.015
  const double survival = static_cast<double>(survived) / runs;
  CHECK(std::abs(survival - 0.625) <= 0.015);
}

TEST_CASE("explicit ack flow") {
  const Instance inst = gen_gadget(8, 2.0);
  SimConfig cfg;
  cfg.ack_model = AckModel::ExplicitAck;
  cfg.n_estimate = 16;
  cfg.seed = 7;
  const SimTrace trace = run_distributed(inst, cfg);

  CHECK_FALSE(trace.truncated);
  CHECK(trace.ack_model == AckModel::ExplicitAck);
  CHECK(static_cast<std::int64_t>(trace.slots.size()) == trace.completion_slot);

  for (const auto& rec : trace.slots) {
    CHECK(rec.is_ack_slot == (rec.slot % 2 == 1));
    if (rec.is_ack_slot)
      CHECK(rec.successes.empty());
    else
      CHECK(rec.ack_successes.empty());
  }

  for (const auto& out : trace.links) {
    CHECK(out.done);
    CHECK(out.data_success_slot % 2 == 0);
    CHECK(out.ack_success_slot % 2 == 1);
    CHECK(out.ack_success_slot > out.data_success_slot);
    CHECK(out.completion == out.ack_success_slot + 1);

    // frozen while the ack is pending: quiet in data slots, acking in every
    // ack slot of the window
    for (const auto& rec : trace.slots) {
      if (rec.slot <= out.data_success_slot || rec.slot > out.ack_success_slot) continue;
      if (rec.is_ack_slot)
        CHECK(contains(rec.transmitters, out.id));
      else
        CHECK_FALSE(contains(rec.transmitters, out.id));
    }
  }
}

TEST_CASE("truncation") {
  SimConfig cfg;
  cfg.c3 = 0.05;  // phase 0 shrinks to 2 slots
  cfg.max_slots = 2;
  bool found = false;
  for (uint64_t s = 0; s < 100 && !found; ++s) {
    cfg.seed = s;
    const Instance inst = single_link_instance(17);
    const SimTrace trace = run_distributed(inst, cfg);
    if (!trace.truncated) continue;
    found = true;
    CHECK(trace.completion_slot == 2);
    CHECK(trace.slots.size() == 2);
    CHECK_FALSE(trace.links[0].done);
    CHECK(trace.links[0].completion == -1);
    CHECK(trace.links[0].data_success_slot == -1);
  }
  CHECK(found);
}

TEST_CASE("per-slot success rate") {
  const Instance one = single_link_instance(23);
  CHECK(kind_of([&] { per_slot_success_rate(one, -0.1, 10, 0); }) == ErrorKind::BadParams);
  CHECK(kind_of([&] { per_slot_success_rate(one, 1.5, 10, 0); }) == ErrorKind::BadParams);
  CHECK(kind_of([&] { per_slot_success_rate(one, 0.5, 0, 0); }) == ErrorKind::BadParams);

  const RateStats silent = per_slot_success_rate(one, 0.0, 50, 1);
  CHECK(silent.mean == 0.0);
  CHECK(silent.stddev == 0.0);
  CHECK(silent.trials == 50);

  const RateStats always = per_slot_success_rate(one, 1.0, 50, 1);
  CHECK(always.mean == 1.0);
  CHECK(always.stddev == 0.0);

  // 8 gadgets, each delivering iff exactly one member talks: E = 16 * 3/16 = 3
  const Instance inst = gen_gadget(8, 2.0);
  const RateStats stats = per_slot_success_rate(inst, 0.25, 4000, 42);
  CHECK(stats.mean == doctest::Approx(3.0).epsilon(0.05));
  CHECK(stats.sem > 0.0);
  CHECK(per_slot_success_rate(inst, 0.25, 4000, 42).mean == stats.mean);
}

TEST_CASE("active gadget curve") {
  const Instance inst = gen_gadget(4, 2.0);
  SimConfig cfg;
  cfg.seed = 3;
  cfg.n_estimate = 8;
  const SimTrace trace = run_distributed(inst, cfg);
  const auto curve = active_gadget_curve(trace, inst.gadgets());

  REQUIRE(curve.size() == trace.slots.size() + 1);
  CHECK(curve.front() == std::pair<std::int64_t, int>{0, 4});
  CHECK(curve.back().second == 0);

  // independent recomputation from the slot records
  for (size_t t = 0; t < curve.size(); ++t) {
    CHECK(curve[t].first == static_cast<std::int64_t>(t));
    int active = 0;
    for (const auto& g : inst.gadgets()) {
      bool resolved = false;
      for (size_t s = 0; s < t; ++s)
        if (contains(trace.slots[s].successes, g[0]) ||
            contains(trace.slots[s].successes, g[1]))
          resolved = true;
      if (!resolved) ++active;
    }
    CHECK(curve[t].second == active);
    if (t > 0) CHECK(curve[t].second <= curve[t - 1].second);
  }

  CHECK(kind_of([&] { active_gadget_curve(trace, {}); }) == ErrorKind::MetadataMissing);
}
