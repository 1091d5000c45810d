#pragma once

#include <cstdint>
#include <optional>

#include "sinrsched/instance.hpp"

// Instance families used throughout the tests and experiments.

namespace sinrsched {

// n identical-link pairs on a line (alpha > 1, beta = 2, N = 0, uniform
// power): gadget i in 1..n has both unit-length links' senders at 2*n*i and
// receivers at 2*n*i + 1. Within a gadget each link blocks the other
// (affectance 2 > 1), while all cross-gadget interference stays below the
// threshold, so exactly one link per gadget can succeed per slot and the
// scheduling number is 2. Gadget pairing is attached as metadata.
Instance gen_gadget(int n_gadgets, double alpha);

// Hub-and-spokes tree family: links l_0..l_n with lengths (i+1)^(1/alpha),
// receiver r_i on its own branch at distance c*(i+1)^(2/alpha) from the hub
// (= sender of l_0) and sender s_i just beyond it, plus an epsilon-scaled
// copy of the whole set attached at distance epsilon from the hub. Each
// copy acts as a hub-side observer: its affectance onto L sums a harmonic
// series, (1/c^alpha) * sum_i 1/(i+1), while the instance still schedules
// in two slots. beta = 1, N = 0, uniform power.
struct AppendixBResult {
  Instance instance;
  double c = 0.0;
  double epsilon = 0.0;
};

// When c is not given, binary-searches the smallest c (to 1e-3) making L
// feasible and multiplies it by 1.1. epsilon defaults to 1/(n^2*c), shrunk
// further if needed so every copy sender sits closer to the hub than any
// receiver of L (d(sender', r_i) <= 2*d_0i).
AppendixBResult gen_appendix_b(int n, double alpha, std::optional<double> c = std::nullopt,
                               std::optional<double> epsilon = std::nullopt);

struct RandomEuclideanSpec {
  int n = 1;
  double area_side = 10.0;
  double min_length = 0.5;
  double max_length = 2.0;
  SINRParams params;
  PowerAssignment power = PowerAssignment::uniform(1.0);
  Directionality directionality = Directionality::Unidirectional;
  std::uint64_t seed = 0;
};

// Senders uniform in the square, receivers at a uniform direction and
// uniform length in [min_length, max_length]. Draws violating the instance
// invariants (noise viability, degenerate distances) are rejected and
// redrawn; more than 10^4 rejections aborts with Error(GenerationFailed).
Instance gen_random_euclidean(const RandomEuclideanSpec& spec);

}  // namespace sinrsched
