#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "mprofile/anytime_runtime.hpp"
#include "mprofile/cost_model.hpp"
#include "mprofile/error.hpp"
#include "mprofile/partition_planner.hpp"
#include "mprofile/profile_analytics.hpp"
#include "mprofile/timeseries_io.hpp"

namespace mprofile::cli {
namespace {

/// Flags shared by every subcommand that reads a series.
struct SeriesFlags {
  std::string input;
  std::string format = "text";
  std::size_t m = 0;
  std::size_t ez = 0;
  std::size_t workers = 0;
  std::size_t segment_len = 0;
  std::uint64_t seed = 0;
  std::size_t snapshot_interval = 0;
  double time_budget = 0.0;
  std::string checkpoint;
  std::string output;
  std::string output_format = "csv";
  std::size_t k = 3;

  CLI::Option* m_opt = nullptr;
  CLI::Option* ez_opt = nullptr;
  CLI::Option* workers_opt = nullptr;
  CLI::Option* segment_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* interval_opt = nullptr;
  CLI::Option* budget_opt = nullptr;
  CLI::Option* checkpoint_opt = nullptr;
  CLI::Option* output_opt = nullptr;
  CLI::Option* output_format_opt = nullptr;
};

struct ModelFlags {
  std::string platforms;
  std::string workload;
  double flops_per_cell = kDefaultFlopsPerCell;
  double bytes_per_cell = kDefaultBytesPerCell;
  bool csv = false;
};

/// Error that maps to the usage exit code.
struct UsageError : Error {
  using Error::Error;
};

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

void add_input_flags(CLI::App* cmd, SeriesFlags& f, bool require_m) {
  cmd->add_option("--input", f.input, "Series file")->required();
  cmd->add_option("--format", f.format, "text | csv:COL | f64le");
  f.m_opt = cmd->add_option("-m", f.m, "Subsequence window length");
  if (require_m) f.m_opt->required();
}

void add_run_flags(CLI::App* cmd, SeriesFlags& f) {
  f.ez_opt = cmd->add_option("--ez", f.ez, "Exclusion zone radius");
  f.workers_opt = cmd->add_option("--workers", f.workers, "Worker threads");
  f.segment_opt =
      cmd->add_option("--segment-len", f.segment_len, "Max cells per segment");
  f.seed_opt = cmd->add_option("--seed", f.seed, "Segment order seed");
  f.interval_opt = cmd->add_option("--snapshot-interval", f.snapshot_interval,
                                   "Segments between snapshots");
}

void add_anytime_flags(CLI::App* cmd, SeriesFlags& f) {
  f.budget_opt = cmd->add_option("--time-budget", f.time_budget,
                                 "Stop after this many seconds");
  f.checkpoint_opt =
      cmd->add_option("--checkpoint", f.checkpoint, "Checkpoint file");
  f.output_opt = cmd->add_option("--output", f.output, "Output file");
}

RunConfig build_config(const SeriesFlags& f, std::size_t n) {
  RunConfig c = RunConfig::defaults_for(f.m);
  if (f.ez_opt->count()) c.ez = f.ez;
  if (f.workers_opt->count()) {
    c.workers = f.workers;
    c.snapshot_interval = c.workers * 8;
  }
  if (f.segment_opt->count()) c.segment_len = f.segment_len;
  if (f.seed_opt->count()) c.order_seed = f.seed;
  if (f.interval_opt->count()) c.snapshot_interval = f.snapshot_interval;
  if (f.budget_opt && f.budget_opt->count()) c.time_budget = f.time_budget;
  c.validate(n);
  return c;
}

void print_config(const RunConfig& c, const TimeSeries& ts, std::ostream& err) {
  err << "mprofile: n=" << ts.size() << " m=" << c.m << " ez=" << c.ez
      << " workers=" << c.workers << " segment_len=" << c.segment_len
      << " seed=" << c.order_seed
      << " snapshot_interval=" << c.snapshot_interval << " time_budget=";
  if (c.time_budget) {
    err << *c.time_budget;
  } else {
    err << "none";
  }
  err << '\n';
}

RunOptions progress_options(const SeriesFlags& f, std::ostream& err,
                            const std::atomic<bool>* cancel) {
  RunOptions opt;
  opt.cancel = cancel;
  if (!f.checkpoint.empty()) opt.checkpoint_path = f.checkpoint;
  opt.on_snapshot = [&err](const Snapshot& s) {
    const auto best = top_motifs(s.profile, 1, s.profile.exclusion);
    char line[160];
    if (best.entries.empty()) {
      std::snprintf(line, sizeof line, "progress fraction_done=%.4f best_motif=none",
                    s.fraction_done);
    } else {
      const auto& e = best.entries.front();
      std::snprintf(line, sizeof line,
                    "progress fraction_done=%.4f best_motif=%zu:%llu:%.6g",
                    s.fraction_done, e.index,
                    static_cast<unsigned long long>(*e.nn_index), e.distance);
    }
    err << line << '\n' << std::flush;
  };
  return opt;
}

void write_text(const std::string& text, const SeriesFlags& f,
                std::ostream& out) {
  if (f.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(f.output, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open " + f.output + " for writing");
  file << text;
  if (!file) throw IoError("write failed on " + f.output);
}

int finish(const Snapshot& snap, std::ostream& err) {
  if (snap.exact) return kExitOk;
  err << "mprofile: interrupted: partial result written (fraction_done="
      << snap.fraction_done << ", exact=false)\n";
  return kExitInterrupted;
}

int emit_profile(const Snapshot& snap, const SeriesFlags& f,
                 std::ostream& out, std::ostream& err) {
  const ProfileFormat fmt = parse_profile_format(f.output_format);
  if (f.output.empty()) {
    write_profile_csv(snap.profile, out);
  } else {
    write_profile(snap.profile, f.output, fmt);
  }
  return finish(snap, err);
}

void check_output_flags(const SeriesFlags& f) {
  const ProfileFormat fmt = parse_profile_format(f.output_format);
  if (fmt == ProfileFormat::kF64lePair && f.output.empty()) {
    throw UsageError("--output-format f64le-pair requires --output");
  }
}

int cmd_profile(const SeriesFlags& f, std::ostream& out, std::ostream& err,
                const std::atomic<bool>* cancel) {
  check_output_flags(f);
  const TimeSeries ts = load_series(f.input, SeriesFormat::parse(f.format));
  const RunConfig cfg = build_config(f, ts.size());
  print_config(cfg, ts, err);
  const Snapshot snap = run(ts, cfg, progress_options(f, err, cancel));
  return emit_profile(snap, f, out, err);
}

int cmd_patterns(PatternKind kind, const SeriesFlags& f, std::ostream& out,
                 std::ostream& err, const std::atomic<bool>* cancel) {
  if (f.k == 0) throw UsageError("-k must be >= 1");
  const TimeSeries ts = load_series(f.input, SeriesFormat::parse(f.format));
  const RunConfig cfg = build_config(f, ts.size());
  print_config(cfg, ts, err);
  const Snapshot snap = run(ts, cfg, progress_options(f, err, cancel));
  const PatternSet set = kind == PatternKind::kMotif
                             ? top_motifs(snap.profile, f.k, cfg.ez)
                             : top_discords(snap.profile, f.k, cfg.ez);
  if (set.no_finite_entries) {
    err << "mprofile: warning: profile has no finite entries\n";
  }
  write_text(to_json_report(set, cfg.m) + "\n", f, out);
  return finish(snap, err);
}

int cmd_plan(const SeriesFlags& f, std::ostream& out, std::ostream& err) {
  const TimeSeries ts = load_series(f.input, SeriesFormat::parse(f.format));
  const RunConfig cfg = build_config(f, ts.size());
  const WorkPlan wp = plan(ts.subsequence_count(cfg.m), cfg.ez, cfg.workers,
                           cfg.segment_len, cfg.order_seed);
  err << "mprofile: total_cells=" << wp.total_cells << " cells_per_worker=";
  for (std::size_t w = 0; w < wp.workers(); ++w) {
    err << (w ? "," : "") << wp.cells_per_worker[w];
  }
  err << '\n';
  if (wp.empty_workers() > 0) {
    err << "mprofile: warning: " << wp.empty_workers()
        << " worker(s) received no diagonals\n";
  }
  std::ostringstream dump;
  write_plan_dump(wp, dump);
  write_text(dump.str(), f, out);
  return kExitOk;
}

int cmd_resume(const SeriesFlags& f, std::ostream& out, std::ostream& err,
               const std::atomic<bool>* cancel) {
  check_output_flags(f);
  const TimeSeries ts = load_series(f.input, SeriesFormat::parse(f.format));
  RunState state = load_checkpoint(f.checkpoint);
  if (f.m_opt->count() && f.m != state.config.m) {
    throw UsageError("-m " + std::to_string(f.m) +
                     " conflicts with checkpoint window " +
                     std::to_string(state.config.m));
  }
  if (f.budget_opt->count()) {
    state.config.time_budget = f.time_budget;
  } else {
    state.config.time_budget.reset();
  }
  print_config(state.config, ts, err);
  const Snapshot snap =
      run_from_state(ts, state, progress_options(f, err, cancel));
  return emit_profile(snap, f, out, err);
}

WorkloadModel parse_workload(const std::string& spec, double flops,
                             double bytes) {
  std::optional<std::size_t> n;
  std::optional<std::size_t> m;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw UsageError("--workload expects n=INT,m=INT");
    }
    const std::string key = item.substr(0, eq);
    std::size_t value = 0;
    try {
      std::size_t used = 0;
      value = std::stoull(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument("tail");
    } catch (const std::exception&) {
      throw UsageError("--workload: bad integer in '" + item + "'");
    }
    if (key == "n") {
      n = value;
    } else if (key == "m") {
      m = value;
    } else {
      throw UsageError("--workload: unknown key '" + key + "'");
    }
  }
  if (!n || !m) throw UsageError("--workload expects n=INT,m=INT");
  if (!(flops > 0.0) || !(bytes > 0.0)) {
    throw UsageError("per-cell flops and bytes must be > 0");
  }
  WorkloadModel w = WorkloadModel::for_series(*n, *m);
  w.flops_per_cell = flops;
  w.bytes_per_cell = bytes;
  return w;
}

int cmd_model(const ModelFlags& f, std::ostream& out) {
  const WorkloadModel w =
      parse_workload(f.workload, f.flops_per_cell, f.bytes_per_cell);
  const auto platforms = load_platforms(f.platforms);
  if (platforms.empty()) throw ConfigError("no platforms in " + f.platforms);
  write_comparison_table(platforms, w, f.csv, out);
  return kExitOk;
}

int report(std::ostream& err, const char* kind, const std::string& what,
           int code) {
  err << "mprofile: error: kind=" << kind << " message=" << one_line(what)
      << '\n';
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err, const std::atomic<bool>* cancel) {
  CLI::App app{"Exact anytime matrix profile"};
  app.name("mprofile");
  app.require_subcommand(1);

  SeriesFlags pf, mf, df, plf, rf;
  ModelFlags model;

  auto* profile = app.add_subcommand("profile", "Compute the matrix profile");
  add_input_flags(profile, pf, true);
  add_run_flags(profile, pf);
  add_anytime_flags(profile, pf);
  pf.output_format_opt = profile->add_option(
      "--output-format", pf.output_format, "csv | f64le-pair");

  auto* motifs = app.add_subcommand("motifs", "Top-k motifs as JSON");
  add_input_flags(motifs, mf, true);
  add_run_flags(motifs, mf);
  add_anytime_flags(motifs, mf);
  motifs->add_option("-k", mf.k, "Number of motifs");

  auto* discords = app.add_subcommand("discords", "Top-k discords as JSON");
  add_input_flags(discords, df, true);
  add_run_flags(discords, df);
  add_anytime_flags(discords, df);
  discords->add_option("-k", df.k, "Number of discords");

  auto* plan_cmd = app.add_subcommand("plan", "Dump the work partition");
  add_input_flags(plan_cmd, plf, true);
  add_run_flags(plan_cmd, plf);
  plf.output_opt = plan_cmd->add_option("--output", plf.output, "Output file");

  auto* resume_cmd =
      app.add_subcommand("resume", "Finish a run from a checkpoint");
  add_input_flags(resume_cmd, rf, false);
  add_anytime_flags(resume_cmd, rf);
  rf.checkpoint_opt->required();
  rf.output_format_opt = resume_cmd->add_option(
      "--output-format", rf.output_format, "csv | f64le-pair");

  auto* model_cmd =
      app.add_subcommand("model", "Compare platforms with the cost model");
  model_cmd->add_option("--platforms", model.platforms, "Platform file")
      ->required();
  model_cmd->add_option("--workload", model.workload, "n=INT,m=INT")
      ->required();
  model_cmd->add_option("--flops-per-cell", model.flops_per_cell);
  model_cmd->add_option("--bytes-per-cell", model.bytes_per_cell);
  model_cmd->add_flag("--csv", model.csv, "CSV instead of aligned text");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return report(err, "usage", e.what(), kExitUsage);
  }

  try {
    if (*profile) return cmd_profile(pf, out, err, cancel);
    if (*motifs) return cmd_patterns(PatternKind::kMotif, mf, out, err, cancel);
    if (*discords) {
      return cmd_patterns(PatternKind::kDiscord, df, out, err, cancel);
    }
    if (*plan_cmd) return cmd_plan(plf, out, err);
    if (*resume_cmd) return cmd_resume(rf, out, err, cancel);
    if (*model_cmd) return cmd_model(model, out);
  } catch (const UsageError& e) {
    return report(err, "usage", e.what(), kExitUsage);
  } catch (const ConfigError& e) {
    return report(err, "usage", e.what(), kExitUsage);
  } catch (const ParseError& e) {
    return report(err, "parse", e.what(), kExitData);
  } catch (const ValidationError& e) {
    return report(err, "validation", e.what(), kExitData);
  } catch (const TooShortError& e) {
    return report(err, "too-short", e.what(), kExitData);
  } catch (const IoError& e) {
    return report(err, "io", e.what(), kExitData);
  } catch (const CheckpointError& e) {
    return report(err, "checkpoint", e.what(), kExitData);
  } catch (const WorkerFailure& e) {
    return report(err, "worker", e.what(), kExitData);
  } catch (const std::exception& e) {
    return report(err, "internal", e.what(), kExitData);
  }
  return kExitUsage;
}

}  // namespace mprofile::cli
