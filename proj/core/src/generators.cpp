#include "sinrsched/generators.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "sinrsched/error.hpp"
#include "sinrsched/rng.hpp"

namespace sinrsched {

Instance gen_gadget(int n_gadgets, double alpha) {
  if (n_gadgets < 2) throw Error(ErrorKind::BadParams, "gadget family needs n >= 2");
  if (!(alpha > 1.0)) throw Error(ErrorKind::BadParams, "gadget family needs alpha > 1");

  std::vector<std::pair<std::string, std::vector<double>>> points;
  std::vector<Link> links;
  std::vector<std::array<int, 2>> gadgets;
  points.reserve(static_cast<size_t>(n_gadgets) * 4);
  links.reserve(static_cast<size_t>(n_gadgets) * 2);
  for (int i = 1; i <= n_gadgets; ++i) {
    const double sx = 2.0 * n_gadgets * i;
    const double rx = sx + 1.0;
    const std::string tag = "g" + std::to_string(i);
    points.push_back({tag + "sa", {sx}});
    points.push_back({tag + "ra", {rx}});
    points.push_back({tag + "sb", {sx}});
    points.push_back({tag + "rb", {rx}});
    const int a = 2 * (i - 1), b = a + 1;
    links.push_back(Link{a, tag + "sa", tag + "ra"});
    links.push_back(Link{b, tag + "sb", tag + "rb"});
    gadgets.push_back({a, b});
  }
  return Instance(Metric::euclidean(1, std::move(points)), std::move(links),
                  SINRParams{alpha, 2.0, 0.0}, PowerAssignment::uniform(1.0),
                  Directionality::Unidirectional, std::move(gadgets));
}

namespace {

// Branch depths for the tree family, indexable without building the metric
// (used by the feasibility search for c).
struct TreeShape {
  std::vector<double> len;            // l_i = (i+1)^(1/alpha)
  std::vector<double> receiver_depth; // r_i distance from hub
  std::vector<double> sender_depth;   // s_i distance from hub

  TreeShape(int n, double alpha, double c) {
    len.resize(static_cast<size_t>(n) + 1);
    receiver_depth.resize(static_cast<size_t>(n) + 1);
    sender_depth.resize(static_cast<size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
      len[static_cast<size_t>(i)] = std::pow(i + 1.0, 1.0 / alpha);
      if (i == 0) {
        receiver_depth[0] = 1.0;  // l_0 = 1, sender is the hub itself
        sender_depth[0] = 0.0;
      } else {
        receiver_depth[static_cast<size_t>(i)] = c * std::pow(i + 1.0, 2.0 / alpha);
        sender_depth[static_cast<size_t>(i)] =
            receiver_depth[static_cast<size_t>(i)] + len[static_cast<size_t>(i)];
      }
    }
  }

  // Uncapped in-sum a_L(i) for the base copy alone (beta = 1, N = 0,
  // uniform power => affectance is (l_i/d_ki)^alpha; branches meet only at
  // the hub, so d_ki = sender_depth[k] + receiver_depth[i] for k != i).
  double in_sum(int i, double alpha) const {
    double s = 0.0;
    const int n = static_cast<int>(len.size()) - 1;
    for (int k = 0; k <= n; ++k) {
      if (k == i) continue;
      const double d = sender_depth[static_cast<size_t>(k)] +
                       receiver_depth[static_cast<size_t>(i)];
      s += std::pow(len[static_cast<size_t>(i)] / d, alpha);
    }
    return s;
  }

  double worst_in_sum(double alpha) const {
    double worst = 0.0;
    for (int i = 0; i < static_cast<int>(len.size()); ++i)
      worst = std::max(worst, in_sum(i, alpha));
    return worst;
  }
};

}  // namespace

AppendixBResult gen_appendix_b(int n, double alpha, std::optional<double> c_opt,
                               std::optional<double> eps_opt) {
  if (n < 2) throw Error(ErrorKind::BadParams, "tree family needs n >= 2");
  if (!(alpha > 1.0)) throw Error(ErrorKind::BadParams, "tree family needs alpha > 1");
  if (c_opt && !(*c_opt > 0.0)) throw Error(ErrorKind::BadParams, "c must be positive");
  if (eps_opt && !(*eps_opt > 0.0)) throw Error(ErrorKind::BadParams, "epsilon must be positive");

  double c;
  if (c_opt) {
    c = *c_opt;
  } else {
    auto feasible = [&](double cand) {
      return TreeShape(n, alpha, cand).worst_in_sum(alpha) <= 1.0 + kFeasTol;
    };
    double lo = 1e-3, hi = 1.0;
    int doublings = 0;
    while (!feasible(hi)) {
      hi *= 2.0;
      if (++doublings > 64)
        throw Error(ErrorKind::GenerationFailed, "no feasible c found for the tree family");
    }
    if (feasible(lo)) {
      hi = lo;
    } else {
      while (hi - lo > 1e-3) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? hi : lo) = mid;
      }
    }
    c = hi * 1.1;
  }

  const TreeShape shape(n, alpha, c);
  const double min_receiver_depth =
      *std::min_element(shape.receiver_depth.begin(), shape.receiver_depth.end());
  double max_depth = 1.0;  // r0 sits at depth 1
  for (double v : shape.sender_depth) max_depth = std::max(max_depth, v);

  double epsilon = eps_opt ? *eps_opt : 1.0 / (static_cast<double>(n) * n * c);
  // Every copy node must sit closer to the hub than any receiver of L;
  // that in particular gives d(sender', r_i) <= 2*d_0i for all pairs.
  int halvings = 0;
  while (epsilon * (1.0 + max_depth) >= min_receiver_depth) {
    epsilon *= 0.5;
    if (++halvings > 200)
      throw Error(ErrorKind::GenerationFailed, "could not place the scaled copy near the hub");
  }

  // Nodes: (id, depth, branch). Branch -1 is the hub itself; branches 0..n
  // carry r_i (and s_i for i >= 1); branch n+1 is the whole copy, with its
  // own sub-branch structure mirrored via branch ids n+2+i.
  struct Node {
    std::string id;
    double depth;
    int branch;
    bool in_copy;
  };
  std::vector<Node> nodes;
  nodes.push_back({"h", 0.0, -1, false});
  nodes.push_back({"r0", 1.0, 0, false});
  for (int i = 1; i <= n; ++i) {
    nodes.push_back({"r" + std::to_string(i), shape.receiver_depth[static_cast<size_t>(i)], i,
                     false});
    nodes.push_back({"s" + std::to_string(i), shape.sender_depth[static_cast<size_t>(i)], i,
                     false});
  }
  nodes.push_back({"ch", epsilon, -1, true});
  nodes.push_back({"cr0", epsilon * (1.0 + 1.0), 0, true});
  for (int i = 1; i <= n; ++i) {
    nodes.push_back({"cr" + std::to_string(i),
                     epsilon * (1.0 + shape.receiver_depth[static_cast<size_t>(i)]), i, true});
    nodes.push_back({"cs" + std::to_string(i),
                     epsilon * (1.0 + shape.sender_depth[static_cast<size_t>(i)]), i, true});
  }

  const size_t m = nodes.size();
  std::vector<std::string> ids(m);
  std::vector<std::vector<double>> d(m, std::vector<double>(m, 0.0));
  for (size_t a = 0; a < m; ++a) ids[a] = nodes[a].id;
  for (size_t a = 0; a < m; ++a) {
    for (size_t b = a + 1; b < m; ++b) {
      const Node& x = nodes[a];
      const Node& y = nodes[b];
      double dist;
      if (x.in_copy == y.in_copy) {
        if (x.branch == y.branch && x.branch != -1) {
          dist = std::fabs(x.depth - y.depth);
        } else if (x.in_copy) {
          // paths meet at the copy's hub, epsilon below the main hub
          dist = (x.depth - epsilon) + (y.depth - epsilon);
        } else {
          dist = x.depth + y.depth;
        }
      } else {
        dist = x.depth + y.depth;  // paths meet at the main hub
      }
      d[a][b] = d[b][a] = dist;
    }
  }

  std::vector<Link> links;
  links.reserve(2 * (static_cast<size_t>(n) + 1));
  links.push_back(Link{0, "h", "r0"});
  for (int i = 1; i <= n; ++i)
    links.push_back(Link{i, "s" + std::to_string(i), "r" + std::to_string(i)});
  links.push_back(Link{n + 1, "ch", "cr0"});
  for (int i = 1; i <= n; ++i)
    links.push_back(Link{n + 1 + i, "cs" + std::to_string(i), "cr" + std::to_string(i)});

  Instance inst(Metric::matrix(std::move(ids), std::move(d)), std::move(links),
                SINRParams{alpha, 1.0, 0.0}, PowerAssignment::uniform(1.0));
  return AppendixBResult{std::move(inst), c, epsilon};
}

Instance gen_random_euclidean(const RandomEuclideanSpec& spec) {
  if (spec.n < 1) throw Error(ErrorKind::BadParams, "need n >= 1 links");
  if (!(spec.area_side > 0.0)) throw Error(ErrorKind::BadParams, "area_side must be positive");
  if (!(spec.min_length > 0.0) || !(spec.min_length <= spec.max_length) ||
      !(spec.max_length < spec.area_side))
    throw Error(ErrorKind::BadParams, "need 0 < min_length <= max_length < area_side");

  auto rng = make_rng(mix_seed(spec.seed, fnv1a64("random_euclidean")));
  const double two_pi = 2.0 * std::acos(-1.0);

  struct P {
    double x, y;
  };
  std::vector<P> senders, receivers;
  senders.reserve(static_cast<size_t>(spec.n));
  receivers.reserve(static_cast<size_t>(spec.n));

  int rejections = 0;
  const bool bidir = spec.directionality == Directionality::Bidirectional;
  while (static_cast<int>(senders.size()) < spec.n) {
    const P s{spec.area_side * uniform01(rng), spec.area_side * uniform01(rng)};
    const double theta = two_pi * uniform01(rng);
    const double len = spec.min_length + (spec.max_length - spec.min_length) * uniform01(rng);
    const P r{s.x + len * std::cos(theta), s.y + len * std::sin(theta)};

    bool ok = true;
    const int id = static_cast<int>(senders.size());
    const double p = spec.power.power_for(id, len, spec.params.alpha);
    if (!(p > spec.params.beta * spec.params.noise * std::pow(len, spec.params.alpha)))
      ok = false;  // link could never clear the threshold even alone
    for (size_t j = 0; ok && j < senders.size(); ++j) {
      // exact coincidences would make a pairwise link distance degenerate
      auto same = [](const P& a, const P& b) { return a.x == b.x && a.y == b.y; };
      if (same(s, receivers[j]) || same(senders[j], r)) ok = false;
      if (bidir && (same(s, senders[j]) || same(r, receivers[j]))) ok = false;
    }
    if (!ok) {
      if (++rejections > 10000)
        throw Error(ErrorKind::GenerationFailed,
                    "rejected 10^4 link draws; parameters leave no room for valid links");
      continue;
    }
    senders.push_back(s);
    receivers.push_back(r);
  }

  std::vector<std::pair<std::string, std::vector<double>>> points;
  std::vector<Link> links;
  points.reserve(2 * static_cast<size_t>(spec.n));
  links.reserve(static_cast<size_t>(spec.n));
  for (int i = 0; i < spec.n; ++i) {
    const std::string si = "s" + std::to_string(i), ri = "r" + std::to_string(i);
    points.push_back({si, {senders[static_cast<size_t>(i)].x, senders[static_cast<size_t>(i)].y}});
    points.push_back({ri, {receivers[static_cast<size_t>(i)].x, receivers[static_cast<size_t>(i)].y}});
    links.push_back(Link{i, si, ri});
  }
  return Instance(Metric::euclidean(2, std::move(points)), std::move(links), spec.params,
                  spec.power, spec.directionality);
}

}  // namespace sinrsched
