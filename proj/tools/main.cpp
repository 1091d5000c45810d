// Command-line front end: generate instances, check feasibility, compute
// scheduling measures, run protocol simulations and multi-seed sweeps.
//
// Exit codes: 0 success (including truncated simulations — the data is the
// point), 2 command-line usage error, 3 input/parameter error, 4 exact-mode
// size guard tripped.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sinrsched/affectance.hpp"
#include "sinrsched/distsim.hpp"
#include "sinrsched/error.hpp"
#include "sinrsched/generators.hpp"
#include "sinrsched/instance_io.hpp"
#include "sinrsched/measures.hpp"
#include "sinrsched/sweep.hpp"

namespace ss = sinrsched;

namespace {

std::vector<int> all_link_ids(const ss::Instance& inst) {
  std::vector<int> ids;
  ids.reserve(static_cast<size_t>(inst.link_count()));
  for (const auto& l : inst.links()) ids.push_back(l.id);
  return ids;
}

double worst_in_sum(const ss::Instance& inst, const std::vector<int>& ids) {
  double worst = 0.0;
  for (int v : ids)
    worst = std::max(worst, ss::affectance_sums(inst, ids, v, /*capped=*/false).in_sum);
  return worst;
}

std::string join(const std::vector<int>& xs, char sep = ';') {
  std::string out;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(xs[i]);
  }
  return out;
}

void print_instance_summary(const ss::Instance& inst, const std::string& path) {
  const auto ids = all_link_ids(inst);
  std::cout << "wrote " << path << ": " << inst.link_count() << " links, alpha="
            << ss::format_double(inst.params().alpha)
            << ", beta=" << ss::format_double(inst.params().beta)
            << ", noise=" << ss::format_double(inst.params().noise)
            << ", full set feasible: " << (ss::is_feasible(inst, ids) ? "yes" : "no") << "\n";
}

int resolve_n_estimate(int flag_value, const ss::Instance& inst) {
  return flag_value == 0 ? std::max(2, inst.link_count()) : flag_value;
}

struct GenGadgetArgs {
  int n = 2;
  double alpha = 2.0;
  std::string out;
};

struct GenAppendixBArgs {
  int n = 2;
  double alpha = 2.0;
  std::optional<double> c;
  std::optional<double> epsilon;
  std::string out;
};

struct GenRandomArgs {
  int n = 1;
  std::uint64_t seed = 0;
  double area = 10.0;
  double min_length = 0.5;
  double max_length = 2.0;
  double alpha = 2.0;
  double beta = 1.0;
  double noise = 0.0;
  double uniform_power = 1.0;
  double linear_power = 1.0;
  bool bidirectional = false;
  std::string out;
};

struct CheckArgs {
  std::string instance;
  double delta = 1.0;
  std::string slots;
};

struct MeasureArgs {
  std::string instance;
  std::string which = "T,abar,lambda";
  bool allow_heuristic = false;
  int samples = 256;
  std::uint64_t seed = 0;
  std::string out;
};

struct SimulateArgs {
  std::string instance;
  std::uint64_t seed = 0;
  double c3 = 1.0;
  std::int64_t max_slots = 100000;
  std::string ack_model = "free";
  int n_estimate = 0;  // 0 = use link count
  std::string out;
  std::string trace_format = "json";
};

struct SweepArgs {
  std::string family;
  std::vector<int> n_values;
  double alpha = 2.0;
  int seeds = 10;
  std::uint64_t master_seed = 0;
  double c3 = 1.0;
  std::int64_t max_slots = 100000;
  std::string ack_model = "free";
  int n_estimate = 0;
  int jobs = 1;
  std::string out_prefix;
  bool with_measures = false;
  bool keep_traces = false;
  // appendix-b knobs
  std::optional<double> c;
  std::optional<double> epsilon;
  // random-family knobs
  std::uint64_t instance_seed = 0;
  double area = 10.0;
  double min_length = 0.5;
  double max_length = 2.0;
  double beta = 1.0;
  double noise = 0.0;
};

struct DualArgs {
  std::string instance;
  std::string out;
};

void cmd_gen_gadget(const GenGadgetArgs& a) {
  const ss::Instance inst = ss::gen_gadget(a.n, a.alpha);
  ss::save_instance(inst, a.out);
  print_instance_summary(inst, a.out);
}

void cmd_gen_appendix_b(const GenAppendixBArgs& a) {
  const ss::AppendixBResult res = ss::gen_appendix_b(a.n, a.alpha, a.c, a.epsilon);
  ss::save_instance(res.instance, a.out);
  std::cout << "chosen c=" << ss::format_double(res.c)
            << " epsilon=" << ss::format_double(res.epsilon) << "\n";
  print_instance_summary(res.instance, a.out);
}

void cmd_gen_random(const GenRandomArgs& a, bool linear) {
  ss::RandomEuclideanSpec spec;
  spec.n = a.n;
  spec.seed = a.seed;
  spec.area_side = a.area;
  spec.min_length = a.min_length;
  spec.max_length = a.max_length;
  spec.params = {a.alpha, a.beta, a.noise};
  spec.power = linear ? ss::PowerAssignment::linear(a.linear_power)
                      : ss::PowerAssignment::uniform(a.uniform_power);
  spec.directionality =
      a.bidirectional ? ss::Directionality::Bidirectional : ss::Directionality::Unidirectional;
  const ss::Instance inst = ss::gen_random_euclidean(spec);
  ss::save_instance(inst, a.out);
  print_instance_summary(inst, a.out);
}

void cmd_check(const CheckArgs& a) {
  const ss::Instance inst = ss::load_instance(a.instance);
  if (a.slots.empty()) {
    const auto ids = all_link_ids(inst);
    std::cout << "links=" << inst.link_count()
              << " feasible=" << (ss::is_feasible(inst, ids) ? "yes" : "no")
              << " delta_signal(delta=" << ss::format_double(a.delta)
              << ")=" << (ss::is_delta_signal(inst, ids, a.delta) ? "yes" : "no")
              << " worst_in_sum=" << ss::format_double(worst_in_sum(inst, ids)) << "\n";
    return;
  }
  const ss::Schedule sched = ss::load_schedule(a.slots);
  for (size_t i = 0; i < sched.slots.size(); ++i) {
    const auto& slot = sched.slots[i];
    std::cout << "slot " << i << ": links=" << slot.size()
              << " feasible=" << (ss::is_feasible(inst, slot) ? "yes" : "no")
              << " delta_signal(delta=" << ss::format_double(a.delta)
              << ")=" << (ss::is_delta_signal(inst, slot, a.delta) ? "yes" : "no")
              << " worst_in_sum=" << ss::format_double(worst_in_sum(inst, slot)) << "\n";
  }
  std::cout << "schedule: slots=" << sched.slots.size()
            << " valid=" << (ss::validate_schedule(inst, sched) ? "yes" : "no") << "\n";
}

void cmd_measure(const MeasureArgs& a) {
  const ss::Instance inst = ss::load_instance(a.instance);
  ss::MeasureOptions opt;
  opt.want_t = opt.want_avg = opt.want_lambda = false;
  opt.allow_heuristic = a.allow_heuristic;
  opt.lambda_samples = a.samples;
  opt.seed = a.seed;

  std::string token;
  for (size_t pos = 0; pos <= a.which.size(); ++pos) {
    if (pos < a.which.size() && a.which[pos] != ',') {
      token += static_cast<char>(std::tolower(static_cast<unsigned char>(a.which[pos])));
      continue;
    }
    if (token == "t")
      opt.want_t = true;
    else if (token == "abar")
      opt.want_avg = true;
    else if (token == "lambda")
      opt.want_lambda = true;
    else if (!token.empty())
      throw ss::Error(ss::ErrorKind::BadParams,
                      "unknown measure '" + token + "' (expected T, abar or lambda)");
    token.clear();
  }

  const ss::MeasureReport rep = ss::compute_measures(inst, opt);
  if (opt.want_t) {
    std::printf("%-12s %s\n", "T_exact", rep.t_exact ? std::to_string(*rep.t_exact).c_str() : "-");
    std::printf("%-12s %s\n", "T_first_fit",
                rep.t_first_fit ? std::to_string(*rep.t_first_fit).c_str() : "-");
  }
  if (opt.want_avg && rep.avg_affectance) {
    std::printf("%-12s %s method=%s witness=%s\n", "Abar",
                ss::format_double(rep.avg_affectance->value).c_str(), rep.avg_method.c_str(),
                join(rep.avg_affectance->witness).c_str());
  }
  if (opt.want_lambda && rep.lambda) {
    std::printf("%-12s %s method=%s witness=%s\n", "Lambda",
                ss::format_double(rep.lambda->value).c_str(), rep.lambda_method.c_str(),
                join(rep.lambda->witness).c_str());
  }
  if (!a.out.empty()) ss::write_text_file(a.out, ss::measure_report_to_json(rep));
}

void cmd_simulate(const SimulateArgs& a) {
  const ss::Instance inst = ss::load_instance(a.instance);
  ss::SimConfig cfg;
  cfg.seed = a.seed;
  cfg.c3 = a.c3;
  cfg.max_slots = a.max_slots;
  cfg.ack_model = a.ack_model == "explicit" ? ss::AckModel::ExplicitAck : ss::AckModel::FreeAck;
  cfg.n_estimate = resolve_n_estimate(a.n_estimate, inst);

  const ss::SimTrace trace = ss::run_distributed(inst, cfg);
  int done = 0;
  for (const auto& l : trace.links) done += l.done ? 1 : 0;
  std::cout << "completion_slot=" << trace.completion_slot
            << " truncated=" << (trace.truncated ? "yes" : "no") << " done=" << done << "/"
            << trace.links.size() << "\n";
  if (!a.out.empty()) {
    ss::write_text_file(a.out, a.trace_format == "csv" ? ss::trace_to_csv(trace)
                                                       : ss::trace_to_json(trace, cfg));
    std::cout << "wrote " << a.out << "\n";
  }
}

void cmd_sweep(const SweepArgs& a) {
  ss::SweepSpec spec;
  if (a.family == "gadget")
    spec.family = ss::SweepFamily::Gadget;
  else if (a.family == "appendix-b")
    spec.family = ss::SweepFamily::AppendixB;
  else
    spec.family = ss::SweepFamily::Random;
  spec.n_values = a.n_values;
  spec.alpha = a.alpha;
  spec.appendix_c = a.c;
  spec.appendix_epsilon = a.epsilon;
  spec.random_base.seed = a.instance_seed;
  spec.random_base.area_side = a.area;
  spec.random_base.min_length = a.min_length;
  spec.random_base.max_length = a.max_length;
  spec.random_base.params = {a.alpha, a.beta, a.noise};
  spec.seeds = a.seeds;
  spec.master_seed = a.master_seed;
  spec.sim.c3 = a.c3;
  spec.sim.max_slots = a.max_slots;
  spec.sim.ack_model = a.ack_model == "explicit" ? ss::AckModel::ExplicitAck : ss::AckModel::FreeAck;
  spec.sim.n_estimate = a.n_estimate;
  spec.jobs = a.jobs;
  spec.with_measures = a.with_measures;
  spec.out_prefix = a.out_prefix;
  spec.keep_traces = a.keep_traces;

  const ss::SweepResult res = ss::run_sweep(spec);

  int ok_rows = 0;
  for (const auto& row : res.runs) ok_rows += row.failed ? 0 : 1;
  for (const auto& pt : res.points) {
    std::cout << "n=" << pt.n << ": runs=" << pt.runs << " ok=" << pt.ok_runs;
    if (pt.ok_runs > 0) {
      std::cout << " mean=" << ss::format_double(pt.mean)
                << " median=" << ss::format_double(pt.median) << " min=" << pt.min
                << " max=" << pt.max << " stderr=" << ss::format_double(pt.stderr_mean)
                << " truncated=" << pt.truncated_count;
      if (pt.survival_events > 0)
        std::cout << " survival=" << ss::format_double(pt.survival_freq) << " ("
                  << pt.survival_stayed << "/" << pt.survival_events << ")";
      if (pt.lambda) std::cout << " lambda=" << ss::format_double(*pt.lambda);
      if (pt.t_first_fit) std::cout << " t_first_fit=" << *pt.t_first_fit;
    }
    std::cout << "\n";
  }
  if (res.slope_vs_log2n)
    std::cout << "slope_vs_log2n=" << ss::format_double(*res.slope_vs_log2n) << "\n";
  if (!spec.out_prefix.empty())
    std::cout << "wrote " << spec.out_prefix << "_raw.csv and " << spec.out_prefix
              << "_summary.csv\n";
  if (ok_rows == 0)
    throw ss::Error(ss::ErrorKind::GenerationFailed, "sweep produced no successful runs");
}

void cmd_dual(const DualArgs& a) {
  const ss::Instance inst = ss::load_instance(a.instance);
  const ss::Instance dual = ss::dual_instance(inst);
  ss::save_instance(dual, a.out);
  print_instance_summary(dual, a.out);
}

int run(int argc, char** argv) {
  CLI::App app{"SINR link-scheduling toolkit: instances, measures, protocol simulation"};
  app.require_subcommand(1);

  // ---- gen ----
  auto* gen = app.add_subcommand("gen", "Generate an instance file");
  gen->require_subcommand(1);

  GenGadgetArgs gg;
  auto* gen_gadget = gen->add_subcommand("gadget", "Identical-link pairs spread along a line");
  gen_gadget->add_option("--n", gg.n, "number of gadgets (>= 2)")->required();
  gen_gadget->add_option("--alpha", gg.alpha, "path-loss exponent (> 1)");
  gen_gadget->add_option("-o,--out", gg.out, "output instance file")->required();
  gen_gadget->callback([&gg] { cmd_gen_gadget(gg); });

  GenAppendixBArgs gb;
  auto* gen_ab = gen->add_subcommand("appendix-b", "Hub-and-spokes tree plus scaled copy");
  gen_ab->add_option("--n", gb.n, "spoke count (>= 2); the file has 2n+2 links")->required();
  gen_ab->add_option("--alpha", gb.alpha, "path-loss exponent (> 1)");
  gen_ab->add_option("--c", gb.c, "branch-length constant (default: auto-chosen)");
  gen_ab->add_option("--epsilon", gb.epsilon, "copy scale (default: auto-chosen)");
  gen_ab->add_option("-o,--out", gb.out, "output instance file")->required();
  gen_ab->callback([&gb] { cmd_gen_appendix_b(gb); });

  GenRandomArgs gr;
  auto* gen_rand = gen->add_subcommand("random", "Uniform random links in a square");
  gen_rand->add_option("--n", gr.n, "link count (>= 1)")->required();
  gen_rand->add_option("--seed", gr.seed, "generation seed");
  gen_rand->add_option("--area", gr.area, "square side length");
  gen_rand->add_option("--min-length", gr.min_length, "shortest link length");
  gen_rand->add_option("--max-length", gr.max_length, "longest link length");
  gen_rand->add_option("--alpha", gr.alpha, "path-loss exponent");
  gen_rand->add_option("--beta", gr.beta, "SINR threshold (>= 1)");
  gen_rand->add_option("--noise", gr.noise, "ambient noise");
  auto* up = gen_rand->add_option("--uniform-power", gr.uniform_power, "uniform transmit power");
  auto* lp = gen_rand->add_option("--linear-power", gr.linear_power,
                                  "power = coeff * length^alpha (overrides uniform)");
  lp->excludes(up);
  gen_rand->add_flag("--bidirectional", gr.bidirectional,
                     "interference uses the closest endpoint pairing");
  gen_rand->add_option("-o,--out", gr.out, "output instance file")->required();
  gen_rand->callback([&gr, lp] { cmd_gen_random(gr, lp->count() > 0); });

  // ---- check ----
  CheckArgs ck;
  auto* check = app.add_subcommand("check", "Feasibility / delta-signal report");
  check->add_option("instance", ck.instance, "instance file")->required();
  check->add_option("--delta", ck.delta, "signal margin (>= 1)");
  check->add_option("--slots", ck.slots, "schedule file; checks each slot separately");
  check->callback([&ck] { cmd_check(ck); });

  // ---- measure ----
  MeasureArgs me;
  auto* measure = app.add_subcommand("measure", "Scheduling measures (T, Abar, Lambda)");
  measure->add_option("instance", me.instance, "instance file")->required();
  measure->add_option("--which", me.which, "comma-separated subset of T,abar,lambda");
  measure->add_flag("--allow-heuristic", me.allow_heuristic,
                    "fall back to first-fit/peeling/sampling beyond exact size guards");
  measure->add_option("--samples", me.samples, "sample count for the Lambda fallback");
  measure->add_option("--seed", me.seed, "seed for sampled fallbacks");
  measure->add_option("-o,--out", me.out, "also write a JSON report");
  measure->callback([&me] { cmd_measure(me); });

  // ---- simulate ----
  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run the distributed protocol once");
  simulate->add_option("instance", sim.instance, "instance file")->required();
  simulate->add_option("--seed", sim.seed, "simulation seed");
  simulate->add_option("--c3", sim.c3, "phase-length constant (> 0)");
  simulate->add_option("--max-slots", sim.max_slots, "truncate the run after this many slots");
  simulate->add_option("--ack-model", sim.ack_model, "feedback model")
      ->check(CLI::IsMember({"free", "explicit"}));
  simulate->add_option("--n-estimate", sim.n_estimate,
                       "network-size estimate fed to the phase lengths (0 = link count)");
  simulate->add_option("-o,--out", sim.out, "write the trace to this file");
  simulate->add_option("--trace-format", sim.trace_format, "trace file format")
      ->check(CLI::IsMember({"json", "csv"}));
  simulate->callback([&sim] { cmd_simulate(sim); });

  // ---- sweep ----
  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Multi-seed simulation grid with CSV output");
  sweep->add_option("--family", sw.family, "instance family")
      ->check(CLI::IsMember({"gadget", "appendix-b", "random"}))
      ->required();
  sweep->add_option("--n", sw.n_values, "instance sizes (comma-separated)")
      ->required()
      ->delimiter(',');
  sweep->add_option("--alpha", sw.alpha, "path-loss exponent");
  sweep->add_option("--seeds", sw.seeds, "runs per size");
  sweep->add_option("--master-seed", sw.master_seed, "seed all per-run seeds derive from");
  sweep->add_option("--c3", sw.c3, "phase-length constant");
  sweep->add_option("--max-slots", sw.max_slots, "per-run truncation bound");
  sweep->add_option("--ack-model", sw.ack_model, "feedback model")
      ->check(CLI::IsMember({"free", "explicit"}));
  sweep->add_option("--n-estimate", sw.n_estimate, "0 = per-instance link count");
  sweep->add_option("--jobs", sw.jobs, "worker threads (output is identical for any value)");
  sweep->add_option("--out-prefix", sw.out_prefix, "write <prefix>_raw.csv and <prefix>_summary.csv");
  sweep->add_flag("--with-measures", sw.with_measures, "add Lambda / first-fit T per size");
  sweep->add_flag("--keep-traces", sw.keep_traces, "also write per-run trace files");
  sweep->add_option("--c", sw.c, "appendix-b branch-length constant");
  sweep->add_option("--epsilon", sw.epsilon, "appendix-b copy scale");
  sweep->add_option("--instance-seed", sw.instance_seed, "random family: instance seed");
  sweep->add_option("--area", sw.area, "random family: square side");
  sweep->add_option("--min-length", sw.min_length, "random family: shortest link");
  sweep->add_option("--max-length", sw.max_length, "random family: longest link");
  sweep->add_option("--beta", sw.beta, "random family: SINR threshold");
  sweep->add_option("--noise", sw.noise, "random family: ambient noise");
  sweep->callback([&sw] { cmd_sweep(sw); });

  // ---- dual ----
  DualArgs du;
  auto* dual = app.add_subcommand("dual", "Emit the reversed (acknowledgment) instance");
  dual->add_option("instance", du.instance, "instance file")->required();
  dual->add_option("-o,--out", du.out, "output instance file")->required();
  dual->callback([&du] { cmd_dual(du); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ss::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ss::ErrorKind::TooLarge ? 4 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
