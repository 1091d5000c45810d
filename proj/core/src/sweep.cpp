#include "sinrsched/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "sinrsched/error.hpp"
#include "sinrsched/instance_io.hpp"
#include "sinrsched/measures.hpp"
#include "sinrsched/rng.hpp"

namespace sinrsched {

std::string to_string(SweepFamily family) {
  switch (family) {
    case SweepFamily::Gadget:
      return "gadget";
    case SweepFamily::AppendixB:
      return "appendix-b";
    case SweepFamily::Random:
      return "random";
  }
  return "?";
}

namespace {

std::string point_label(SweepFamily family, int n, double alpha) {
  return to_string(family) + "/n=" + std::to_string(n) + "/alpha=" + format_double(alpha);
}

// Error messages land in CSV cells; keep the delimiter and line structure.
std::string csv_safe(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

void validate_spec(const SweepSpec& spec) {
  if (spec.n_values.empty()) throw Error(ErrorKind::BadParams, "sweep grid is empty");
  if (spec.seeds < 1) throw Error(ErrorKind::BadParams, "sweep needs at least one seed");
  if (spec.jobs < 1) throw Error(ErrorKind::BadParams, "jobs must be >= 1");
  if (!(spec.alpha > 0.0)) throw Error(ErrorKind::BadParams, "alpha must be positive");
  if (!(spec.sim.c3 > 0.0)) throw Error(ErrorKind::BadParams, "c3 must be positive");
  if (spec.sim.max_slots < 1) throw Error(ErrorKind::BadParams, "max_slots must be >= 1");
  if (spec.sim.n_estimate != 0 && spec.sim.n_estimate < 2)
    throw Error(ErrorKind::BadParams, "n_estimate must be 0 (auto) or >= 2");
}

Instance generate_point(const SweepSpec& spec, int n) {
  switch (spec.family) {
    case SweepFamily::Gadget:
      return gen_gadget(n, spec.alpha);
    case SweepFamily::AppendixB:
      return gen_appendix_b(n, spec.alpha, spec.appendix_c, spec.appendix_epsilon).instance;
    case SweepFamily::Random: {
      RandomEuclideanSpec rs = spec.random_base;
      rs.n = n;
      rs.params.alpha = spec.alpha;
      // One fixed instance per grid point; protocol seeds vary per run.
      rs.seed = mix_seed(spec.random_base.seed, static_cast<uint64_t>(n));
      return gen_random_euclidean(rs);
    }
  }
  throw Error(ErrorKind::BadParams, "unknown sweep family");
}

struct RunDetail {
  std::vector<int> curve;  // per-slot active-gadget counts (gadget family)
  std::string trace_json;  // populated only when keeping traces
};

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
  validate_spec(spec);

  const size_t n_points = spec.n_values.size();
  const size_t n_seeds = static_cast<size_t>(spec.seeds);
  const size_t total = n_points * n_seeds;
  const bool want_curves = spec.family == SweepFamily::Gadget;
  const bool keep_traces = spec.keep_traces && !spec.out_prefix.empty();

  // Generation is cheap relative to simulation; do it once per point up
  // front so workers share the instances read-only.
  std::vector<std::optional<Instance>> instances(n_points);
  std::vector<std::string> gen_errors(n_points);
  for (size_t p = 0; p < n_points; ++p) {
    try {
      instances[p].emplace(generate_point(spec, spec.n_values[p]));
    } catch (const std::exception& e) {
      gen_errors[p] = e.what();
    }
  }

  SweepResult result;
  result.family = spec.family;
  result.alpha = spec.alpha;
  result.with_measures = spec.with_measures;
  result.runs.resize(total);
  std::vector<RunDetail> details(total);

  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const size_t idx = next.fetch_add(1);
      if (idx >= total) return;
      const size_t p = idx / n_seeds;
      const int n = spec.n_values[p];
      const int seed_index = static_cast<int>(idx % n_seeds);

      SweepRun& row = result.runs[idx];
      row.n = n;
      row.seed_index = seed_index;
      row.run_seed = mix_seed(spec.master_seed, fnv1a64(point_label(spec.family, n, spec.alpha)),
                              static_cast<uint64_t>(seed_index));
      if (!instances[p]) {
        row.failed = true;
        row.error = gen_errors[p];
        continue;
      }
      const Instance& inst = *instances[p];
      SimConfig cfg = spec.sim;
      cfg.seed = row.run_seed;
      if (cfg.n_estimate == 0) cfg.n_estimate = std::max(2, inst.link_count());
      try {
        const SimTrace trace = run_distributed(inst, cfg);
        row.completion_slot = trace.completion_slot;
        row.truncated = trace.truncated;
        if (want_curves) {
          // active_gadget_curve emits (slot, count) with slot == position.
          const auto curve = active_gadget_curve(trace, inst.gadgets());
          details[idx].curve.reserve(curve.size());
          for (const auto& [slot, count] : curve) details[idx].curve.push_back(count);
        }
        if (keep_traces) details[idx].trace_json = trace_to_json(trace, cfg);
      } catch (const std::exception& e) {
        row.failed = true;
        row.error = e.what();
      }
    }
  };

  const size_t workers = std::min<size_t>(static_cast<size_t>(spec.jobs), total);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  result.points.resize(n_points);
  for (size_t p = 0; p < n_points; ++p) {
    SweepPointSummary& pt = result.points[p];
    pt.n = spec.n_values[p];
    pt.runs = spec.seeds;

    std::vector<int64_t> completions;
    completions.reserve(n_seeds);
    size_t max_curve = 0;
    for (size_t s = 0; s < n_seeds; ++s) {
      const size_t idx = p * n_seeds + s;
      const SweepRun& row = result.runs[idx];
      if (row.failed) continue;
      completions.push_back(row.completion_slot);
      if (row.truncated) ++pt.truncated_count;
      max_curve = std::max(max_curve, details[idx].curve.size());
    }
    pt.ok_runs = static_cast<int>(completions.size());
    if (pt.ok_runs > 0) {
      std::sort(completions.begin(), completions.end());
      pt.min = completions.front();
      pt.max = completions.back();
      const size_t k = completions.size();
      pt.median = (k % 2 == 1)
                      ? static_cast<double>(completions[k / 2])
                      : 0.5 * (static_cast<double>(completions[k / 2 - 1]) +
                               static_cast<double>(completions[k / 2]));
      double sum = 0.0;
      for (int64_t c : completions) sum += static_cast<double>(c);
      pt.mean = sum / static_cast<double>(k);
      if (k > 1) {
        double ss = 0.0;
        for (int64_t c : completions) {
          const double d = static_cast<double>(c) - pt.mean;
          ss += d * d;
        }
        pt.stderr_mean = std::sqrt(ss / static_cast<double>(k - 1)) /
                         std::sqrt(static_cast<double>(k));
      }
    }

    if (want_curves && max_curve > 0) {
      // Curves end when their run ends; extend with the final value (zero
      // for completed runs) so per-slot means stay comparable.
      std::vector<double> sums(max_curve, 0.0);
      int curve_runs = 0;
      for (size_t s = 0; s < n_seeds; ++s) {
        const size_t idx = p * n_seeds + s;
        const std::vector<int>& curve = details[idx].curve;
        if (curve.empty()) continue;
        ++curve_runs;
        for (size_t t = 0; t + 1 < curve.size(); ++t) {
          pt.survival_events += curve[t];
          pt.survival_stayed += curve[t + 1];
        }
        for (size_t t = 0; t < max_curve; ++t)
          sums[t] += static_cast<double>(t < curve.size() ? curve[t] : curve.back());
      }
      pt.mean_active.resize(max_curve);
      for (size_t t = 0; t < max_curve; ++t)
        pt.mean_active[t] = sums[t] / static_cast<double>(curve_runs);
      if (pt.survival_events > 0)
        pt.survival_freq = static_cast<double>(pt.survival_stayed) /
                           static_cast<double>(pt.survival_events);
    }

    if (spec.with_measures && instances[p]) {
      MeasureOptions opt;
      opt.want_t = true;
      opt.want_avg = false;
      opt.want_lambda = true;
      opt.allow_heuristic = true;
      opt.seed = mix_seed(spec.master_seed,
                          fnv1a64(point_label(spec.family, pt.n, spec.alpha)));
      try {
        const MeasureReport rep = compute_measures(*instances[p], opt);
        if (rep.lambda) pt.lambda = rep.lambda->value;
        pt.t_first_fit = rep.t_first_fit;
      } catch (const std::exception&) {
        // Measures are advisory in a sweep; leave the cells empty.
      }
    }
  }

  // Fitted slope of mean completion against log2(n), using points that
  // produced data. Needs at least two distinct sizes.
  {
    std::vector<std::pair<double, double>> xy;
    for (const SweepPointSummary& pt : result.points)
      if (pt.ok_runs > 0) xy.push_back({std::log2(static_cast<double>(pt.n)), pt.mean});
    std::sort(xy.begin(), xy.end());
    const bool distinct = xy.size() >= 2 && xy.front().first != xy.back().first;
    if (distinct) {
      double mx = 0.0, my = 0.0;
      for (const auto& [x, y] : xy) {
        mx += x;
        my += y;
      }
      mx /= static_cast<double>(xy.size());
      my /= static_cast<double>(xy.size());
      double sxx = 0.0, sxy = 0.0;
      for (const auto& [x, y] : xy) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
      }
      result.slope_vs_log2n = sxy / sxx;
    }
  }

  if (!spec.out_prefix.empty()) {
    write_text_file(spec.out_prefix + "_raw.csv", sweep_raw_csv(result));
    write_text_file(spec.out_prefix + "_summary.csv", sweep_summary_csv(result));
    if (keep_traces) {
      for (size_t idx = 0; idx < total; ++idx) {
        if (details[idx].trace_json.empty()) continue;
        const SweepRun& row = result.runs[idx];
        write_text_file(spec.out_prefix + "_trace_n" + std::to_string(row.n) + "_s" +
                            std::to_string(row.seed_index) + ".json",
                        details[idx].trace_json);
      }
    }
  }

  return result;
}

std::string sweep_raw_csv(const SweepResult& result) {
  std::string out = "family,n,alpha,seed_index,run_seed,completion_slot,truncated,status\n";
  const std::string family = to_string(result.family);
  const std::string alpha = format_double(result.alpha);
  for (const SweepRun& row : result.runs) {
    out += family;
    out += ',';
    out += std::to_string(row.n);
    out += ',';
    out += alpha;
    out += ',';
    out += std::to_string(row.seed_index);
    out += ',';
    out += std::to_string(row.run_seed);
    out += ',';
    if (!row.failed) {
      out += std::to_string(row.completion_slot);
      out += ',';
      out += row.truncated ? '1' : '0';
      out += ",ok\n";
    } else {
      out += ",,";
      out += csv_safe(row.error);
      out += '\n';
    }
  }
  return out;
}

std::string sweep_summary_csv(const SweepResult& result) {
  std::string out =
      "family,n,alpha,runs,ok_runs,mean,median,min,max,stderr,truncated_count,"
      "survival_events,survival_stayed,survival_freq,mean_active_curve,lambda,t_first_fit\n";
  const std::string family = to_string(result.family);
  const std::string alpha = format_double(result.alpha);
  const bool gadget = result.family == SweepFamily::Gadget;
  for (const SweepPointSummary& pt : result.points) {
    out += family;
    out += ',';
    out += std::to_string(pt.n);
    out += ',';
    out += alpha;
    out += ',';
    out += std::to_string(pt.runs);
    out += ',';
    out += std::to_string(pt.ok_runs);
    out += ',';
    if (pt.ok_runs > 0) {
      out += format_double(pt.mean);
      out += ',';
      out += format_double(pt.median);
      out += ',';
      out += std::to_string(pt.min);
      out += ',';
      out += std::to_string(pt.max);
      out += ',';
      out += format_double(pt.stderr_mean);
    } else {
      out += ",,,,";
    }
    out += ',';
    out += std::to_string(pt.truncated_count);
    out += ',';
    if (gadget && pt.survival_events > 0) {
      out += std::to_string(pt.survival_events);
      out += ',';
      out += std::to_string(pt.survival_stayed);
      out += ',';
      out += format_double(pt.survival_freq);
    } else {
      out += ",,";
    }
    out += ',';
    for (size_t t = 0; t < pt.mean_active.size(); ++t) {
      if (t) out += ';';
      out += format_double(pt.mean_active[t]);
    }
    out += ',';
    if (pt.lambda) out += format_double(*pt.lambda);
    out += ',';
    if (pt.t_first_fit) out += std::to_string(*pt.t_first_fit);
    out += '\n';
  }
  return out;
}

}  // namespace sinrsched
