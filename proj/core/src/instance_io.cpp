#include "sinrsched/instance_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sinrsched/error.hpp"

namespace sinrsched {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& msg) { throw Error(ErrorKind::ParseError, msg); }

const json& need(const json& j, const char* field, const std::string& ctx) {
  auto it = j.find(field);
  if (it == j.end()) parse_fail("missing field " + ctx + field);
  return *it;
}

double need_number(const json& j, const char* field, const std::string& ctx) {
  const json& v = need(j, field, ctx);
  if (!v.is_number()) parse_fail("field " + ctx + field + " must be a number");
  return v.get<double>();
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    parse_fail(e.what());
  }
}

}  // namespace

std::string instance_to_json(const Instance& inst) {
  json j;
  j["schema"] = kInstanceSchema;

  const Metric& m = inst.metric();
  if (m.is_euclidean()) {
    json points = json::object();
    for (int i = 0; i < m.node_count(); ++i) {
      json xs = json::array();
      for (int k = 0; k < m.dim(); ++k) xs.push_back(m.coords(i)[k]);
      points[m.node_id(i)] = xs;
    }
    j["metric"] = {{"euclidean", {{"dim", m.dim()}, {"points", points}}}};
  } else {
    json rows = json::array();
    for (int i = 0; i < m.node_count(); ++i) {
      json row = json::array();
      for (int k = 0; k < m.node_count(); ++k) row.push_back(m.distance(i, k));
      rows.push_back(row);
    }
    j["metric"] = {{"matrix", {{"ids", m.node_ids()}, {"d", rows}}}};
  }

  json links = json::array();
  for (const Link& l : inst.links())
    links.push_back({{"id", l.id}, {"s", l.sender}, {"r", l.receiver}});
  j["links"] = links;

  j["params"] = {{"alpha", inst.params().alpha},
                 {"beta", inst.params().beta},
                 {"noise", inst.params().noise}};

  const PowerAssignment& p = inst.power_assignment();
  switch (p.kind()) {
    case PowerAssignment::Kind::Uniform:
      j["power"] = {{"uniform", p.uniform_power()}};
      break;
    case PowerAssignment::Kind::Linear:
      j["power"] = {{"linear", p.linear_coefficient()}};
      break;
    case PowerAssignment::Kind::Table: {
      json table = json::object();
      for (const auto& [id, v] : p.table_powers()) table[std::to_string(id)] = v;
      j["power"] = {{"table", table}};
      break;
    }
  }

  j["directionality"] =
      inst.directionality() == Directionality::Unidirectional ? "uni" : "bi";

  if (!inst.gadgets().empty()) {
    json gs = json::array();
    for (const auto& g : inst.gadgets()) gs.push_back({g[0], g[1]});
    j["gadgets"] = gs;
  }

  return j.dump(2) + "\n";
}

Instance instance_from_json(const std::string& text) {
  const json j = parse_document(text);
  if (!j.is_object()) parse_fail("top-level document must be an object");

  if (auto it = j.find("schema"); it != j.end()) {
    if (!it->is_string() || it->get<std::string>() != kInstanceSchema)
      throw Error(ErrorKind::SchemaVersionMismatch,
                  "expected schema '" + std::string(kInstanceSchema) + "'");
  }

  const json& jm = need(j, "metric", "");
  Metric metric = [&]() -> Metric {
    if (auto e = jm.find("euclidean"); e != jm.end()) {
      const int dim = static_cast<int>(need_number(*e, "dim", "metric.euclidean."));
      const json& pts = need(*e, "points", "metric.euclidean.");
      if (!pts.is_object()) parse_fail("metric.euclidean.points must be an object");
      std::vector<std::pair<std::string, std::vector<double>>> points;
      points.reserve(pts.size());
      for (auto it = pts.begin(); it != pts.end(); ++it) {
        if (!it.value().is_array())
          parse_fail("coordinates of node '" + it.key() + "' must be an array");
        points.push_back({it.key(), it.value().get<std::vector<double>>()});
      }
      return Metric::euclidean(dim, std::move(points));
    }
    if (auto e = jm.find("matrix"); e != jm.end()) {
      const json& ids = need(*e, "ids", "metric.matrix.");
      const json& rows = need(*e, "d", "metric.matrix.");
      if (!ids.is_array()) parse_fail("metric.matrix.ids must be an array");
      if (!rows.is_array()) parse_fail("metric.matrix.d must be an array of rows");
      return Metric::matrix(ids.get<std::vector<std::string>>(),
                            rows.get<std::vector<std::vector<double>>>());
    }
    parse_fail("metric must contain either 'euclidean' or 'matrix'");
  }();

  const json& jl = need(j, "links", "");
  if (!jl.is_array()) parse_fail("links must be an array");
  std::vector<Link> links;
  links.reserve(jl.size());
  for (size_t i = 0; i < jl.size(); ++i) {
    const std::string ctx = "links[" + std::to_string(i) + "].";
    const json& e = jl[i];
    if (!e.is_object()) parse_fail(ctx + " must be an object");
    Link l;
    l.id = static_cast<int>(need_number(e, "id", ctx));
    const json& s = need(e, "s", ctx);
    const json& r = need(e, "r", ctx);
    if (!s.is_string() || !r.is_string()) parse_fail(ctx + "s and " + ctx + "r must be strings");
    l.sender = s.get<std::string>();
    l.receiver = r.get<std::string>();
    links.push_back(std::move(l));
  }

  const json& jp = need(j, "params", "");
  SINRParams params;
  params.alpha = need_number(jp, "alpha", "params.");
  params.beta = need_number(jp, "beta", "params.");
  params.noise = need_number(jp, "noise", "params.");

  const json& jpow = need(j, "power", "");
  PowerAssignment power = [&]() -> PowerAssignment {
    if (auto e = jpow.find("uniform"); e != jpow.end())
      return PowerAssignment::uniform(e->get<double>());
    if (auto e = jpow.find("linear"); e != jpow.end())
      return PowerAssignment::linear(e->get<double>());
    if (auto e = jpow.find("table"); e != jpow.end()) {
      if (!e->is_object()) parse_fail("power.table must be an object");
      std::map<int, double> table;
      for (auto it = e->begin(); it != e->end(); ++it) {
        try {
          table[std::stoi(it.key())] = it.value().get<double>();
        } catch (const std::exception&) {
          parse_fail("power.table key '" + it.key() + "' is not a link id");
        }
      }
      return PowerAssignment::table(std::move(table));
    }
    parse_fail("power must contain 'uniform', 'linear' or 'table'");
  }();

  const json& jd = need(j, "directionality", "");
  if (!jd.is_string()) parse_fail("directionality must be a string");
  const std::string dir = jd.get<std::string>();
  Directionality directionality;
  if (dir == "uni")
    directionality = Directionality::Unidirectional;
  else if (dir == "bi")
    directionality = Directionality::Bidirectional;
  else
    parse_fail("directionality must be 'uni' or 'bi'");

  std::vector<std::array<int, 2>> gadgets;
  if (auto it = j.find("gadgets"); it != j.end()) {
    if (!it->is_array()) parse_fail("gadgets must be an array of link-id pairs");
    for (const auto& g : *it) {
      if (!g.is_array() || g.size() != 2) parse_fail("gadgets entries must be pairs");
      gadgets.push_back({g[0].get<int>(), g[1].get<int>()});
    }
  }

  return Instance(std::move(metric), std::move(links), params, std::move(power), directionality,
                  std::move(gadgets));
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
  write_text_file(path, instance_to_json(inst));
}

Instance load_instance(const std::filesystem::path& path) {
  return instance_from_json(read_text_file(path));
}

std::string schedule_to_json(const Schedule& schedule) {
  json j;
  j["slots"] = schedule.slots;
  return j.dump(2) + "\n";
}

Schedule schedule_from_json(const std::string& text) {
  const json j = parse_document(text);
  const json& slots = need(j, "slots", "");
  if (!slots.is_array()) parse_fail("slots must be an array of link-id arrays");
  Schedule s;
  try {
    s.slots = slots.get<std::vector<std::vector<int>>>();
  } catch (const json::exception&) {
    parse_fail("slots must be an array of link-id arrays");
  }
  return s;
}

Schedule load_schedule(const std::filesystem::path& path) {
  return schedule_from_json(read_text_file(path));
}

std::string trace_to_json(const SimTrace& trace, const SimConfig& config) {
  json j;
  j["ack_model"] = trace.ack_model == AckModel::FreeAck ? "free" : "explicit";
  j["completion_slot"] = trace.completion_slot;
  j["truncated"] = trace.truncated;
  j["config"] = {{"c3", config.c3},
                 {"n_estimate", config.n_estimate},
                 {"max_slots", config.max_slots},
                 {"seed", config.seed}};
  json slots = json::array();
  for (const auto& rec : trace.slots) {
    json r = {{"slot", rec.slot}, {"tx", rec.transmitters}};
    if (trace.ack_model == AckModel::ExplicitAck) {
      r["ack"] = rec.is_ack_slot;
      if (rec.is_ack_slot)
        r["ack_ok"] = rec.ack_successes;
      else
        r["ok"] = rec.successes;
    } else {
      r["ok"] = rec.successes;
    }
    slots.push_back(std::move(r));
  }
  j["slots"] = slots;
  json links = json::array();
  for (const auto& l : trace.links) {
    json e = {{"id", l.id}, {"done", l.done}, {"completion", l.completion},
              {"data_slot", l.data_success_slot}};
    if (trace.ack_model == AckModel::ExplicitAck) e["ack_slot"] = l.ack_success_slot;
    links.push_back(std::move(e));
  }
  j["links"] = links;
  return j.dump(2) + "\n";
}

namespace {

std::string join_ids(const std::vector<int>& ids) {
  std::string out;
  for (size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(ids[i]);
  }
  return out;
}

}  // namespace

std::string trace_to_csv(const SimTrace& trace) {
  std::string out = "slot,kind,transmitters,successes,ack_successes\n";
  for (const auto& rec : trace.slots) {
    out += std::to_string(rec.slot);
    out += rec.is_ack_slot ? ",ack," : ",data,";
    out += join_ids(rec.transmitters);
    out += ',';
    out += join_ids(rec.successes);
    out += ',';
    out += join_ids(rec.ack_successes);
    out += '\n';
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::ParseError, "cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw Error(ErrorKind::ParseError, "failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace sinrsched
