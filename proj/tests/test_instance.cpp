#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "sinrsched/error.hpp"
#include "sinrsched/instance.hpp"

using namespace sinrsched;

namespace {

// Hand-built copy of the 2-gadget line layout: two identical unit links per
// gadget, senders of gadget i at 2*n*i, receivers at 2*n*i + 1 (n = 2).
Instance two_gadget_line(Directionality dir = Directionality::Unidirectional) {
  Metric m = Metric::euclidean(1, {{"s1a", {4.0}},
                                   {"s1b", {4.0}},
                                   {"r1a", {5.0}},
                                   {"r1b", {5.0}},
                                   {"s2a", {8.0}},
                                   {"s2b", {8.0}},
                                   {"r2a", {9.0}},
                                   {"r2b", {9.0}}});
  std::vector<Link> links = {{0, "s1a", "r1a"},
                             {1, "s1b", "r1b"},
                             {2, "s2a", "r2a"},
                             {3, "s2b", "r2b"}};
  return Instance(std::move(m), std::move(links), {2.0, 2.0, 0.0}, PowerAssignment::uniform(1.0),
                  dir, {{0, 1}, {2, 3}});
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::BadParams;
}

}  // namespace

TEST_CASE("derived link parameters") {
  Metric m = Metric::euclidean(1, {{"a", {0.0}}, {"b", {2.0}}, {"c", {10.0}}, {"d", {11.0}}});
  Instance inst(std::move(m), {{7, "a", "b"}, {9, "c", "d"}}, {2.0, 1.0, 0.0},
                PowerAssignment::uniform(3.0));
  CHECK(inst.link_count() == 2);
  CHECK(inst.index_of_link(7) == 0);
  CHECK(inst.index_of_link(9) == 1);
  CHECK(inst.try_index_of_link(8) == -1);
  CHECK_THROWS_AS(inst.index_of_link(8), Error);

  CHECK(inst.length(0) == doctest::Approx(2.0));
  CHECK(inst.length(1) == doctest::Approx(1.0));
  CHECK(inst.power(0) == 3.0);
  // signal strength P / l^alpha
  CHECK(inst.signal(0) == doctest::Approx(3.0 / 4.0));
  CHECK(inst.signal(1) == doctest::Approx(3.0));
  // N = 0: the affectance constant collapses to beta
  CHECK(inst.affectance_constant(0) == doctest::Approx(1.0));
}

TEST_CASE("affectance constant with ambient noise") {
  // c_v = beta / (1 - beta*N*l^alpha / P); l=1, alpha=2, beta=1, N=0.25, P=1 -> 4/3
  Metric m = Metric::euclidean(1, {{"a", {0.0}}, {"b", {1.0}}});
  Instance inst(std::move(m), {{0, "a", "b"}}, {2.0, 1.0, 0.25}, PowerAssignment::uniform(1.0));
  CHECK(inst.affectance_constant(0) == doctest::Approx(4.0 / 3.0));
  CHECK(inst.affectance_constant(0) >= inst.params().beta);
}

TEST_CASE("power assignment variants") {
  Metric m = Metric::euclidean(1, {{"a", {0.0}}, {"b", {2.0}}, {"c", {10.0}}, {"d", {11.0}}});
  const std::vector<Link> links = {{0, "a", "b"}, {1, "c", "d"}};
  const SINRParams params{3.0, 1.0, 0.0};

  SUBCASE("linear: P = kappa * l^alpha") {
    Instance inst(m, links, params, PowerAssignment::linear(0.5));
    CHECK(inst.power(0) == doctest::Approx(0.5 * std::pow(2.0, 3.0)));
    CHECK(inst.power(1) == doctest::Approx(0.5));
    // signal strength is the same for every link under linear power
    CHECK(inst.signal(0) == doctest::Approx(inst.signal(1)));
  }
  SUBCASE("table powers by link id") {
    Instance inst(m, links, params, PowerAssignment::table({{0, 2.0}, {1, 5.0}}));
    CHECK(inst.power(0) == 2.0);
    CHECK(inst.power(1) == 5.0);
  }
  SUBCASE("missing table entry") {
    CHECK(kind_of([&] {
            Instance inst(m, links, params, PowerAssignment::table({{0, 2.0}}));
          }) == ErrorKind::BadParams);
  }
  SUBCASE("nonpositive powers are rejected at the factory") {
    CHECK_THROWS_AS(PowerAssignment::uniform(0.0), Error);
    CHECK_THROWS_AS(PowerAssignment::linear(-1.0), Error);
    CHECK_THROWS_AS(PowerAssignment::table({{0, 0.0}}), Error);
  }
}

TEST_CASE("link distances on the gadget line") {
  const Instance inst = two_gadget_line();
  // same gadget: d(s_w, r_v) = 1
  CHECK(inst.link_distance(0, 1) == doctest::Approx(1.0));
  CHECK(inst.link_distance(1, 0) == doctest::Approx(1.0));
  // across gadgets: sender at 8 to receiver at 5
  CHECK(inst.link_distance(2, 0) == doctest::Approx(3.0));
  // and the reverse direction: sender at 4 to receiver at 9
  CHECK(inst.link_distance(0, 2) == doctest::Approx(5.0));
  // diagonal of the table carries the link length
  CHECK(inst.link_distance_idx(0, 0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(inst.link_distance(0, 42), Error);
}

TEST_CASE("bidirectional distance takes the closest endpoint pairing") {
  Metric m = Metric::euclidean(1, {{"s0", {0.0}}, {"r0", {1.0}}, {"s1", {10.0}}, {"r1", {9.0}}});
  const std::vector<Link> links = {{0, "s0", "r0"}, {1, "s1", "r1"}};
  Instance uni(m, links, {2.0, 1.0, 0.0}, PowerAssignment::uniform(1.0));
  Instance bi(m, links, {2.0, 1.0, 0.0}, PowerAssignment::uniform(1.0),
              Directionality::Bidirectional);
  // unidirectional: d(s_1, r_0) = 9; bidirectional: receivers are closest (8)
  CHECK(uni.link_distance(1, 0) == doctest::Approx(9.0));
  CHECK(bi.link_distance(1, 0) == doctest::Approx(8.0));
  CHECK(bi.link_distance(0, 1) == doctest::Approx(8.0));
}

TEST_CASE("construction failures") {
  Metric line = Metric::euclidean(1, {{"a", {0.0}}, {"b", {1.0}}, {"c", {2.0}}});

  SUBCASE("zero-length link") {
    CHECK(kind_of([&] {
            Instance inst(line, {{0, "a", "a"}}, {2.0, 1.0, 0.0}, PowerAssignment::uniform(1.0));
          }) == ErrorKind::DegenerateDistance);
  }
  SUBCASE("sender of one link on the receiver of another") {
    CHECK(kind_of([&] {
            Instance inst(line, {{0, "a", "b"}, {1, "b", "c"}}, {2.0, 1.0, 0.0},
                          PowerAssignment::uniform(1.0));
          }) == ErrorKind::DegenerateDistance);
  }
  SUBCASE("bidirectional links sharing a sender point") {
    CHECK(kind_of([&] {
            Instance inst(line, {{0, "a", "b"}, {1, "a", "c"}}, {2.0, 1.0, 0.0},
                          PowerAssignment::uniform(1.0), Directionality::Bidirectional);
          }) == ErrorKind::DegenerateDistance);
  }
  SUBCASE("unknown node id") {
    CHECK(kind_of([&] {
            Instance inst(line, {{0, "a", "zz"}}, {2.0, 1.0, 0.0}, PowerAssignment::uniform(1.0));
          }) == ErrorKind::UnknownLink);
  }
  SUBCASE("duplicate link ids") {
    Metric m = Metric::euclidean(1, {{"a", {0.0}}, {"b", {1.0}}, {"c", {5.0}}, {"d", {6.0}}});
    CHECK(kind_of([&] {
            Instance inst(std::move(m), {{3, "a", "b"}, {3, "c", "d"}}, {2.0, 1.0, 0.0},
                          PowerAssignment::uniform(1.0));
          }) == ErrorKind::BadParams);
  }
  SUBCASE("parameter domain") {
    auto mk = [&](SINRParams p) {
      Instance inst(line, {{0, "a", "b"}}, p, PowerAssignment::uniform(1.0));
    };
    CHECK(kind_of([&] { mk({0.0, 1.0, 0.0}); }) == ErrorKind::BadParams);   // alpha
    CHECK(kind_of([&] { mk({2.0, 0.5, 0.0}); }) == ErrorKind::BadParams);   // beta
    CHECK(kind_of([&] { mk({2.0, 1.0, -1.0}); }) == ErrorKind::BadParams);  // noise
  }
  SUBCASE("noise strong enough to drown a link") {
    // P > beta*N*l^alpha required: here beta*N*l^alpha = 2*0.5*1 = 1 = P.
    CHECK(kind_of([&] {
            Instance inst(line, {{0, "a", "b"}}, {2.0, 2.0, 0.5}, PowerAssignment::uniform(1.0));
          }) == ErrorKind::InfeasibleLink);
    // slightly stronger power is accepted
    Instance ok(line, {{0, "a", "b"}}, {2.0, 2.0, 0.5}, PowerAssignment::uniform(1.001));
    CHECK(ok.link_count() == 1);
  }
  SUBCASE("gadget metadata referencing an absent link") {
    Metric m = Metric::euclidean(1, {{"a", {0.0}}, {"b", {1.0}}, {"c", {5.0}}, {"d", {6.0}}});
    CHECK(kind_of([&] {
            Instance inst(std::move(m), {{0, "a", "b"}, {1, "c", "d"}}, {2.0, 1.0, 0.0},
                          PowerAssignment::uniform(1.0), Directionality::Unidirectional,
                          {{0, 99}});
          }) == ErrorKind::MetadataMissing);
  }
}

TEST_CASE("precomputed affectance table matches the formula") {
  const Instance inst = two_gadget_line();
  const double alpha = inst.params().alpha;
  for (int w = 0; w < inst.link_count(); ++w) {
    for (int v = 0; v < inst.link_count(); ++v) {
      if (w == v) {
        CHECK(inst.affectance_uncapped_idx(w, v) == 0.0);
        continue;
      }
      const double raw = inst.affectance_constant(v) * (inst.power(w) / inst.power(v)) *
                         std::pow(inst.length(v) / inst.link_distance_idx(w, v), alpha);
      CHECK(inst.affectance_uncapped_idx(w, v) == doctest::Approx(raw));
      CHECK(inst.affectance_capped_idx(w, v) == doctest::Approx(std::min(1.0, raw)));
    }
  }
  // partner affectance inside one gadget: uncapped 2, capped 1
  CHECK(inst.affectance_uncapped_idx(0, 1) == doctest::Approx(2.0));
  CHECK(inst.affectance_capped_idx(0, 1) == doctest::Approx(1.0));
}

TEST_CASE("restriction to a subset of links") {
  const Instance inst = two_gadget_line();
  const Instance sub = inst.restricted_to({0, 1});
  CHECK(sub.link_count() == 2);
  CHECK(sub.gadgets() == std::vector<std::array<int, 2>>{{0, 1}});
  CHECK(sub.link_distance(0, 1) == doctest::Approx(inst.link_distance(0, 1)));
  CHECK(sub.length(0) == doctest::Approx(inst.length(0)));

  // dropping one link of a gadget drops the pair from the metadata
  const Instance mixed = inst.restricted_to({0, 2, 3});
  CHECK(mixed.link_count() == 3);
  CHECK(mixed.gadgets() == std::vector<std::array<int, 2>>{{2, 3}});

  CHECK_THROWS_AS(inst.restricted_to({0, 42}), Error);
}
