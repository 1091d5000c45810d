#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "sinrsched/distsim.hpp"
#include "sinrsched/error.hpp"
#include "sinrsched/generators.hpp"
#include "sinrsched/instance_io.hpp"
#include "sinrsched/rng.hpp"

using namespace sinrsched;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::BadParams;
}

std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  FAIL("expected an error");
  return "";
}

void check_same_instance(const Instance& a, const Instance& b) {
  REQUIRE(a.link_count() == b.link_count());
  for (int i = 0; i < a.link_count(); ++i) {
    CHECK(a.links()[static_cast<size_t>(i)].id == b.links()[static_cast<size_t>(i)].id);
    CHECK(a.links()[static_cast<size_t>(i)].sender == b.links()[static_cast<size_t>(i)].sender);
    CHECK(a.links()[static_cast<size_t>(i)].receiver ==
          b.links()[static_cast<size_t>(i)].receiver);
    CHECK(a.length(i) == b.length(i));
    CHECK(a.power(i) == b.power(i));
  }
  CHECK(a.params().alpha == b.params().alpha);
  CHECK(a.params().beta == b.params().beta);
  CHECK(a.params().noise == b.params().noise);
  CHECK(a.directionality() == b.directionality());
  CHECK(a.gadgets() == b.gadgets());
  REQUIRE(a.metric().node_count() == b.metric().node_count());
  for (int i = 0; i < a.metric().node_count(); ++i)
    for (int k = 0; k < a.metric().node_count(); ++k)
      CHECK(a.metric().distance(i, k) ==
            b.metric().distance(b.metric().index_of(a.metric().node_id(i)),
                                b.metric().index_of(a.metric().node_id(k))));
}

std::filesystem::path temp_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "sinrsched_test_io";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("instances round-trip losslessly") {
  RandomEuclideanSpec spec;
  spec.n = 6;
  spec.seed = 2024;
  spec.params.alpha = 2.5;
  spec.params.beta = 1.5;
  spec.params.noise = 0.01;
  spec.power = PowerAssignment::linear(0.7);

  const Instance cases[] = {
      gen_gadget(4, 2.0),                      // 1-D euclidean + gadget metadata
      gen_appendix_b(4, 2.0).instance,         // explicit distance matrix
      gen_random_euclidean(spec),              // 2-D euclidean, linear power
  };
  for (const Instance& inst : cases) {
    const std::string text = instance_to_json(inst);
    const Instance back = instance_from_json(text);
    check_same_instance(inst, back);
    // serializing the parsed instance reproduces the file byte for byte
    CHECK(instance_to_json(back) == text);
  }

  // table powers keep their per-link values
  const Instance gadget = gen_gadget(2, 2.0);
  std::map<int, double> table;
  for (const auto& l : gadget.links()) table[l.id] = 1.0 + 0.125 * l.id;
  const Instance tabled(Metric(gadget.metric()), gadget.links(), gadget.params(),
                        PowerAssignment::table(std::move(table)),
                        gadget.directionality(), gadget.gadgets());
  const Instance back = instance_from_json(instance_to_json(tabled));
  check_same_instance(tabled, back);
  CHECK(back.power_assignment().kind() == PowerAssignment::Kind::Table);
}

TEST_CASE("file save and load") {
  const auto path = temp_dir() / "roundtrip.json";
  const Instance inst = gen_gadget(3, 2.0);
  save_instance(inst, path);
  check_same_instance(inst, load_instance(path));
  std::filesystem::remove(path);
}

TEST_CASE("parse failures name the offending field") {
  const std::string text = instance_to_json(gen_gadget(2, 2.0));

  auto drop = [&](const std::initializer_list<const char*>& keys) {
    nlohmann::json j = nlohmann::json::parse(text);
    nlohmann::json* cur = &j;
    auto it = keys.begin();
    for (size_t i = 0; i + 1 < keys.size(); ++i, ++it) cur = &(*cur)[*it];
    cur->erase(*it);
    return j.dump();
  };

  CHECK(kind_of([&] { instance_from_json(drop({"params", "alpha"})); }) ==
        ErrorKind::ParseError);
  CHECK(message_of([&] { instance_from_json(drop({"params", "alpha"})); })
            .find("params.alpha") != std::string::npos);
  CHECK(message_of([&] { instance_from_json(drop({"links"})); }).find("links") !=
        std::string::npos);
  CHECK(kind_of([&] { instance_from_json(drop({"metric"})); }) == ErrorKind::ParseError);
  CHECK(kind_of([&] { instance_from_json(drop({"directionality"})); }) ==
        ErrorKind::ParseError);

  // per-link context
  {
    nlohmann::json j = nlohmann::json::parse(text);
    j["links"][0].erase("s");
    CHECK(message_of([&] { instance_from_json(j.dump()); }).find("links[0].s") !=
          std::string::npos);
  }
  // unusable power spec
  {
    nlohmann::json j = nlohmann::json::parse(text);
    j["power"] = nlohmann::json::object();
    CHECK(kind_of([&] { instance_from_json(j.dump()); }) == ErrorKind::ParseError);
    j["power"] = {{"table", {{"x", 1.0}}}};
    CHECK(message_of([&] { instance_from_json(j.dump()); }).find("x") != std::string::npos);
  }
  // malformed values
  {
    nlohmann::json j = nlohmann::json::parse(text);
    j["directionality"] = "sideways";
    CHECK(kind_of([&] { instance_from_json(j.dump()); }) == ErrorKind::ParseError);
    j = nlohmann::json::parse(text);
    j["gadgets"] = {{0}};
    CHECK(kind_of([&] { instance_from_json(j.dump()); }) == ErrorKind::ParseError);
  }

  CHECK(kind_of([] { instance_from_json("["); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { instance_from_json("[]"); }) == ErrorKind::ParseError);
}

TEST_CASE("schema marker") {
  const std::string text = instance_to_json(gen_gadget(2, 2.0));
  nlohmann::json j = nlohmann::json::parse(text);

  j["schema"] = "sinr-instance/0";
  CHECK(kind_of([&] { instance_from_json(j.dump()); }) == ErrorKind::SchemaVersionMismatch);

  j.erase("schema");  // files without the marker are accepted
  check_same_instance(gen_gadget(2, 2.0), instance_from_json(j.dump()));
}

TEST_CASE("semantic failures keep their specific kinds") {
  // triangle inequality violated in an explicit matrix
  const std::string bad_matrix = R"({
    "metric": {"matrix": {"ids": ["a", "b", "c"],
                          "d": [[0, 1, 5], [1, 0, 2], [5, 2, 0]]}},
    "links": [{"id": 0, "s": "a", "r": "b"}],
    "params": {"alpha": 2, "beta": 1, "noise": 0},
    "power": {"uniform": 1},
    "directionality": "uni"
  })";
  CHECK(kind_of([&] { instance_from_json(bad_matrix); }) == ErrorKind::MetricInvalid);

  // zero-length link
  const std::string degenerate = R"({
    "metric": {"euclidean": {"dim": 1, "points": {"a": [0], "b": [0]}}},
    "links": [{"id": 0, "s": "a", "r": "b"}],
    "params": {"alpha": 2, "beta": 1, "noise": 0},
    "power": {"uniform": 1},
    "directionality": "uni"
  })";
  CHECK(kind_of([&] { instance_from_json(degenerate); }) == ErrorKind::DegenerateDistance);

  // duplicate link ids
  const std::string duplicate = R"({
    "metric": {"euclidean": {"dim": 1, "points": {"a": [0], "b": [1], "c": [5]}}},
    "links": [{"id": 0, "s": "a", "r": "b"}, {"id": 0, "s": "c", "r": "b"}],
    "params": {"alpha": 2, "beta": 1, "noise": 0},
    "power": {"uniform": 1},
    "directionality": "uni"
  })";
  CHECK(kind_of([&] { instance_from_json(duplicate); }) == ErrorKind::BadParams);
}

TEST_CASE("schedule files") {
  const Schedule s{{{0, 2}, {1, 3}}};
  const Schedule back = schedule_from_json(schedule_to_json(s));
  CHECK(back.slots == s.slots);

  const auto path = temp_dir() / "schedule.json";
  write_text_file(path, schedule_to_json(s));
  CHECK(load_schedule(path).slots == s.slots);
  std::filesystem::remove(path);

  CHECK(kind_of([] { schedule_from_json("{}"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { schedule_from_json(R"({"slots": [1]})"); }) == ErrorKind::ParseError);
}

TEST_CASE("trace serialization") {
  const Instance inst = gen_gadget(2, 2.0);
  SimConfig cfg;
  cfg.seed = 4;

  SUBCASE("json, free ack") {
    const SimTrace trace = run_distributed(inst, cfg);
    const auto j = nlohmann::json::parse(trace_to_json(trace, cfg));
    CHECK(j.at("ack_model") == "free");
    CHECK(j.at("completion_slot").get<std::int64_t>() == trace.completion_slot);
    CHECK(j.at("truncated").get<bool>() == trace.truncated);
    CHECK(j.at("config").at("seed").get<std::uint64_t>() == cfg.seed);
    CHECK(j.at("config").at("max_slots").get<std::int64_t>() == cfg.max_slots);
    REQUIRE(j.at("slots").size() == trace.slots.size());
    const auto& first = j.at("slots").at(0);
    CHECK(first.at("slot").get<int>() == 0);
    CHECK(first.contains("tx"));
    CHECK(first.contains("ok"));
    CHECK_FALSE(first.contains("ack"));
    for (const auto& l : j.at("links")) {
      CHECK(l.contains("id"));
      CHECK(l.contains("done"));
      CHECK(l.contains("completion"));
      CHECK(l.contains("data_slot"));
      CHECK_FALSE(l.contains("ack_slot"));
    }
  }

  SUBCASE("json, explicit ack") {
    cfg.ack_model = AckModel::ExplicitAck;
    const SimTrace trace = run_distributed(inst, cfg);
    const auto j = nlohmann::json::parse(trace_to_json(trace, cfg));
    CHECK(j.at("ack_model") == "explicit");
    CHECK(j.at("slots").at(0).contains("ok"));
    CHECK(j.at("slots").at(1).at("ack").get<bool>() == true);
    CHECK(j.at("slots").at(1).contains("ack_ok"));
    for (const auto& l : j.at("links")) CHECK(l.contains("ack_slot"));
  }

  SUBCASE("csv") {
    cfg.ack_model = AckModel::ExplicitAck;
    const SimTrace trace = run_distributed(inst, cfg);
    const std::string csv = trace_to_csv(trace);
    REQUIRE(csv.rfind("slot,kind,transmitters,successes,ack_successes\n", 0) == 0);
    size_t lines = 0;
    for (char ch : csv)
      if (ch == '\n') ++lines;
    CHECK(lines == trace.slots.size() + 1);
    CHECK(csv.find("\n0,data,") != std::string::npos);
    CHECK(csv.find("\n1,ack,") != std::string::npos);
  }
}

TEST_CASE("format_double round-trips") {
  auto rng = make_rng(77);
  std::vector<double> values = {0.0,   1.0,        0.29, 293.0 / 225.0, 1e-9, 1.0 / 3.0,
                                1e300, 6.02214e23, 2.0,  -17.5};
  for (int i = 0; i < 100; ++i)
    values.push_back((uniform01(rng) - 0.5) * std::ldexp(1.0, i % 120 - 60));
  for (double v : values) {
    const std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(format_double(2.0) == "2");
}

TEST_CASE("text file helpers") {
  const auto path = temp_dir() / "blob.txt";
  write_text_file(path, "two\nlines\n");
  CHECK(read_text_file(path) == "two\nlines\n");
  std::filesystem::remove(path);

  CHECK(kind_of([&] { read_text_file(temp_dir() / "does-not-exist.txt"); }) ==
        ErrorKind::ParseError);
  CHECK(kind_of([] { write_text_file("/nonexistent-dir-xyz/f.json", "x"); }) ==
        ErrorKind::ParseError);
}
