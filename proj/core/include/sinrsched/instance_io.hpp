#pragma once

#include <filesystem>
#include <string>

#include "sinrsched/distsim.hpp"
#include "sinrsched/instance.hpp"
#include "sinrsched/measures.hpp"

// JSON (de)serialization. Instance files carry a "schema" marker
// ("sinr-instance/1"); readers accept files without one and reject files
// with a different one. All parse failures surface as Error(ParseError)
// naming the offending field; semantic failures keep their specific kinds
// (MetricInvalid, DegenerateDistance, InfeasibleLink, ...). Doubles are
// written in shortest round-trip form, so save/load is lossless and
// identical inputs serialize byte-identically. See FORMATS.md.

namespace sinrsched {

inline constexpr const char* kInstanceSchema = "sinr-instance/1";

std::string instance_to_json(const Instance& inst);
void save_instance(const Instance& inst, const std::filesystem::path& path);
Instance instance_from_json(const std::string& text);
Instance load_instance(const std::filesystem::path& path);

// Slot files: {"slots": [[link ids], ...]}.
std::string schedule_to_json(const Schedule& schedule);
Schedule schedule_from_json(const std::string& text);
Schedule load_schedule(const std::filesystem::path& path);

std::string trace_to_json(const SimTrace& trace, const SimConfig& config);
// Compact per-slot form: slot,kind,transmitters,successes,ack_successes
// with ;-joined id lists.
std::string trace_to_csv(const SimTrace& trace);

// "%.17g": round-trips doubles exactly; used for all CSV numeric output.
std::string format_double(double v);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace sinrsched
