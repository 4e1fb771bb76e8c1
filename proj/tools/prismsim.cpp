// prismsim: streaming frame subtraction-and-averaging pipeline simulator.
// Subcommands: estimate (closed-form latency), simulate (trace-driven run
// with built-in spot check), verify (randomized suites), bench-cpu (host
// batch baseline). Exit codes: 0 ok, 2 config error, 3 verification
// failure.

#include <array>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "prismsim/baseline.hpp"
#include "prismsim/config.hpp"
#include "prismsim/kernels.hpp"
#include "prismsim/latency.hpp"
#include "prismsim/report.hpp"
#include "prismsim/settings.hpp"
#include "prismsim/stream.hpp"
#include "prismsim/verify.hpp"

namespace fs = std::filesystem;
using namespace prismsim;

namespace {

struct KeyFlag {
  const char* key;
  std::string value;
  CLI::Option* opt = nullptr;
};

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir = "out";
  std::string format = "both";
  std::array<KeyFlag, 11> keys{{{"groups", "", nullptr},
                                {"frames_per_group", "", nullptr},
                                {"height", "", nullptr},
                                {"width", "", nullptr},
                                {"pixel_depth", "", nullptr},
                                {"packet_width", "", nullptr},
                                {"clock_ns", "", nullptr},
                                {"trigger_us", "", nullptr},
                                {"banks", "", nullptr},
                                {"offset", "", nullptr},
                                {"seed", "", nullptr}}};
};

void add_common(CLI::App* c, CommonOpts& o) {
  c->add_option("--config", o.config_path, "key=value settings file");
  c->add_option("--override", o.overrides,
                "extra key=value pair, wins over the file (repeatable)");
  c->add_option("--out", o.out_dir, "output directory")
      ->capture_default_str();
  c->add_option("--format", o.format, "report files to write")
      ->check(CLI::IsMember({"csv", "json", "both"}))
      ->capture_default_str();
  for (KeyFlag& k : o.keys)
    k.opt = c->add_option("--" + std::string(k.key), k.value,
                          "settings key '" + std::string(k.key) + "'");
}

// Defaults, then file, then --override in order, then dedicated flags.
// A nonzero LED frequency locks the trigger to the LED period.
RunSettings resolve_settings(const CommonOpts& o) {
  RunSettings s;
  if (!o.config_path.empty()) s = load_settings_file(o.config_path);
  for (const std::string& ov : o.overrides) apply_override(s, ov);
  for (const KeyFlag& k : o.keys)
    if (k.opt->count() > 0) apply_override(s, std::string(k.key) + "=" + k.value);
  if (s.scene_led_hz > 0.0)
    s.acq.trigger_us = trigger_interval_us(
        {Trigger::Mode::Led, 0.0, s.scene_led_hz});
  return s;
}

SceneConfig scene_of(const RunSettings& s) {
  SceneConfig sc;
  sc.base = base_pattern_from_string(s.scene_base);
  sc.signal_amplitude = s.scene_signal;
  sc.noise_sigma = s.scene_noise_sigma;
  if (s.scene_led_hz > 0.0)
    sc.led = LedDrive{s.scene_led_hz, s.scene_led_phase, s.scene_led_amp};
  sc.seed = s.seed;
  return sc;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& arg,
                                          const char* what) {
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  while (pos <= arg.size()) {
    std::size_t next = arg.find(',', pos);
    std::string part = arg.substr(pos, next - pos);
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(part, &used);
    } catch (const std::exception&) {
      used = std::string::npos;
    }
    if (used != part.size() || part.empty())
      throw ConfigError(std::string(what) + ": bad entry '" + part + "' in '" +
                        arg + "'");
    out.push_back(v);
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

struct Emitter {
  fs::path dir;
  std::string format;
  std::vector<std::string> written;

  void reports(const std::string& csv, const std::string& json_body) {
    fs::create_directories(dir);
    if (format == "csv" || format == "both") {
      write_text_file((dir / "report.csv").string(), csv);
      written.push_back("report.csv");
    }
    if (format == "json" || format == "both") {
      write_text_file((dir / "report.json").string(), json_body);
      written.push_back("report.json");
    }
  }

  void manifest(const RunSettings& s, const std::string& command) {
    fs::create_directories(dir);
    written.push_back("manifest.json");
    write_text_file((dir / "manifest.json").string(),
                    manifest_json(s, command, written));
  }
};

void print_warnings(const ValidConfig& cfg) {
  for (const std::string& w : cfg.warnings)
    std::fprintf(stderr, "warning: %s\n", w.c_str());
}

// ---- estimate ----

int run_estimate(const RunSettings& s, std::uint64_t ii, Emitter& em) {
  ValidConfig cfg = validate_config(s.acq);
  print_warnings(cfg);
  const double interval_ns = cfg.interval_us() * 1000.0;

  std::vector<ReportRow> rows;
  nlohmann::ordered_json algos = nlohmann::ordered_json::array();
  for (Algo a : kAllAlgos) {
    double total_ns = total_elapsed_closed_form_ns(a, cfg, s.axi, ii);
    Throughput tp = throughput(cfg, total_ns);
    nlohmann::ordered_json phases = nlohmann::ordered_json::array();
    for (const PhaseRow& pr : phase_census(a, cfg, s.axi, ii)) {
      double contrib_us =
          double(pr.count) * std::max(pr.latency_ns, interval_ns) / 1000.0;
      ReportRow row;
      row.algo = std::string(algo_name(a));
      row.phase = pr.label;
      row.latency_us = pr.latency_ns / 1000.0;
      row.count = pr.count;
      row.total_us = contrib_us;
      rows.push_back(row);
      phases.push_back({{"phase", pr.label},
                        {"latency_us", format_us(pr.latency_ns / 1000.0)},
                        {"count", pr.count},
                        {"total_us", format_us(contrib_us)}});
    }
    ReportRow total;
    total.algo = std::string(algo_name(a));
    total.phase = "total";
    total.count = cfg.total_frames();
    total.total_us = total_ns / 1000.0;
    total.fps_nominal = tp.fps_nominal;
    total.fps_achieved = tp.fps_achieved;
    total.mb_per_s = tp.mb_per_s;
    total.effective_ii = ii;
    rows.push_back(total);
    algos.push_back({{"algo", std::string(algo_name(a))},
                     {"phases", phases},
                     {"total_us", format_us(total_ns / 1000.0)},
                     {"elapsed_s", format_seconds(total_ns * 1e-9)},
                     {"fps_nominal", format_rate(tp.fps_nominal)},
                     {"fps_achieved", format_rate(tp.fps_achieved)},
                     {"mb_per_s", format_rate(tp.mb_per_s)},
                     {"per_frame_us", format_us(tp.per_frame_us)},
                     {"ii", ii}});
    std::printf("%-13s total %s us (%s s), nominal %s fps, %s MB/s\n",
                std::string(algo_name(a)).c_str(),
                format_us(total_ns / 1000.0).c_str(),
                format_seconds(total_ns * 1e-9).c_str(),
                format_rate(tp.fps_nominal).c_str(),
                format_rate(tp.mb_per_s).c_str());
  }

  nlohmann::ordered_json j;
  j["command"] = "estimate";
  j["ii"] = ii;
  j["interval_us"] = format_us(cfg.interval_us());
  j["algos"] = algos;
  em.reports(rows_to_csv(rows, false), j.dump(2) + "\n");
  return 0;
}

// ---- simulate ----

int run_simulate(const RunSettings& s, const std::string& algo_arg,
                 std::uint64_t ii, bool dump_frames, Emitter& em) {
  ValidConfig cfg = validate_config(s.acq);
  print_warnings(cfg);
  std::optional<Algo> algo_opt = algo_from_name(algo_arg);
  if (!algo_opt) throw ConfigError("unknown algorithm '" + algo_arg + "'");
  Algo algo = *algo_opt;
  SceneConfig scene = scene_of(s);
  const double interval_ns = cfg.interval_us() * 1000.0;
  const double closed_ns = total_elapsed_closed_form_ns(algo, cfg, s.axi, ii);

  bool overflow_any = false;
  std::string closed_fail;  // scheduled elapsed vs closed form
  std::string spot_fail;    // kernel vs reference
  std::vector<double> bank_elapsed_ns;
  nlohmann::ordered_json banks = nlohmann::ordered_json::array();
  nlohmann::ordered_json spot = nlohmann::ordered_json::array();
  nlohmann::ordered_json dumped = nlohmann::ordered_json::array();

  for (std::uint32_t b = 0; b < cfg.acq.banks; ++b) {
    DenoiseKernel kernel(algo, cfg);
    OracleAccumulator acc(cfg);
    bool oracle_alive = true;
    std::string oracle_note;
    FrameStream fsrc(cfg, scene, cfg.interval_us(), b);
    std::vector<double> lat;
    lat.reserve(cfg.total_frames());
    std::vector<OutputFrame> outs;
    outs.reserve(cfg.pairs_per_group());

    while (!fsrc.done()) {
      TimedFrame f = fsrc.next();
      if (oracle_alive) {
        try {
          acc.feed(f);
        } catch (const std::domain_error& e) {
          oracle_alive = false;
          oracle_note = e.what();
        }
      }
      StepResult r = kernel.step(f);
      lat.push_back(cfg.clock_ns() *
                    double(cfg.geom.packets_per_frame * ii +
                           price_trace(r.trace, s.axi)));
      if (r.output) outs.push_back(std::move(*r.output));
    }
    overflow_any = overflow_any || kernel.overflow_flag();

    double elapsed_ns = simulate_schedule_ns(lat, interval_ns);
    bank_elapsed_ns.push_back(elapsed_ns);
    if (std::abs(elapsed_ns - closed_ns) > 1e-8 * closed_ns &&
        closed_fail.empty())
      closed_fail = "bank " + std::to_string(b + 1) + ": scheduled elapsed " +
                    format_us(elapsed_ns / 1000.0) + " us != closed form " +
                    format_us(closed_ns / 1000.0) + " us";

    // Spot check: outputs against the exact batch reference on the same
    // pixel stream (bit-exact for the base strategies, floor bound for
    // the divide-early variant).
    std::string status = "ok";
    if (!oracle_alive) {
      status = "skipped: reference out of range (" + oracle_note + ")";
    } else {
      std::vector<OutputFrame> ref = acc.finish();
      if (outs.size() != ref.size()) {
        status = "mismatch: " + std::to_string(outs.size()) + " outputs for " +
                 std::to_string(ref.size()) + " pairs";
      } else {
        for (std::size_t k = 0; k < ref.size() && status == "ok"; ++k) {
          if (algo == Algo::BurstRwV2) {
            for (std::size_t j = 0; j < ref[k].pixels.size(); ++j) {
              std::int64_t d =
                  std::int64_t(ref[k].pixels[j]) - outs[k].pixels[j];
              if (d < 0 || d > std::int64_t(cfg.groups()) - 1) {
                status = "mismatch: pair " + std::to_string(k + 1) +
                         " outside the floor bound";
                break;
              }
            }
          } else if (outs[k].pixels != ref[k].pixels) {
            status = "mismatch: pair " + std::to_string(k + 1) +
                     " differs from the reference";
          }
        }
      }
      if (status != "ok" && spot_fail.empty())
        spot_fail = "bank " + std::to_string(b + 1) + " spot check: " + status;
    }
    spot.push_back({{"bank", b + 1},
                    {"pairs", outs.size()},
                    {"status", status}});
    banks.push_back({{"bank", b + 1},
                     {"elapsed_s", format_seconds(elapsed_ns * 1e-9)},
                     {"elapsed_us", format_us(elapsed_ns / 1000.0)}});

    if (b == 0 && dump_frames) {
      for (const OutputFrame& o : outs) {
        char stem[32];
        std::snprintf(stem, sizeof stem, "frames/pair_%04u", o.pair_index);
        std::string raw = std::string(stem) + ".raw";
        std::string pgm = std::string(stem) + ".pgm";
        fs::create_directories(em.dir / "frames");
        write_raw((em.dir / raw).string(), o.pixels);
        write_pgm((em.dir / pgm).string(), o.pixels, cfg.geom.height,
                  cfg.geom.width, 16);
        em.written.push_back(raw);
        em.written.push_back(pgm);
        dumped.push_back({{"algo", std::string(algo_name(algo))},
                          {"config_hash", settings_hash_hex(s)},
                          {"pair_index", o.pair_index},
                          {"overflow_flag", o.overflow},
                          {"raw", raw},
                          {"pgm", pgm}});
      }
    }
  }

  double aggregate_ns = bank_aggregate_elapsed_ns(bank_elapsed_ns);
  Throughput tp = throughput(cfg, aggregate_ns);

  std::vector<ReportRow> rows;
  for (const PhaseRow& pr : phase_census(algo, cfg, s.axi, ii)) {
    ReportRow row;
    row.algo = std::string(algo_name(algo));
    row.phase = pr.label;
    row.latency_us = pr.latency_ns / 1000.0;
    row.count = pr.count;
    row.total_us =
        double(pr.count) * std::max(pr.latency_ns, interval_ns) / 1000.0;
    rows.push_back(row);
  }
  if (cfg.acq.banks > 1)
    for (std::uint32_t b = 0; b < cfg.acq.banks; ++b) {
      ReportRow row;
      row.algo = std::string(algo_name(algo));
      row.phase = "total-bank" + std::to_string(b + 1);
      row.count = cfg.total_frames();
      row.total_us = bank_elapsed_ns[b] / 1000.0;
      rows.push_back(row);
    }
  ReportRow total;
  total.algo = std::string(algo_name(algo));
  total.phase = "total";
  total.count = cfg.total_frames();
  total.total_us = aggregate_ns / 1000.0;
  total.fps_nominal = tp.fps_nominal;
  total.fps_achieved = tp.fps_achieved;
  total.mb_per_s = tp.mb_per_s;
  total.effective_ii = ii;
  rows.push_back(total);

  nlohmann::ordered_json j;
  j["command"] = "simulate";
  j["algo"] = std::string(algo_name(algo));
  j["ii"] = ii;
  j["interval_us"] = format_us(cfg.interval_us());
  j["banks"] = banks;
  j["elapsed_s"] = format_seconds(aggregate_ns * 1e-9);
  j["per_frame_us"] = format_us(tp.per_frame_us);
  j["fps_nominal"] = format_rate(tp.fps_nominal);
  j["fps_achieved"] = format_rate(tp.fps_achieved);
  j["mb_per_s"] = format_rate(tp.mb_per_s);
  j["overflow_flag"] = overflow_any;
  j["closed_form_us"] = format_us(closed_ns / 1000.0);
  j["closed_form_matches"] = closed_fail.empty();
  j["spot_check"] = spot;
  if (dump_frames) j["frames"] = dumped;
  em.reports(rows_to_csv(rows, false), j.dump(2) + "\n");

  std::printf("%s: elapsed %s s (%s us/frame), %s fps nominal, %s MB/s%s\n",
              std::string(algo_name(algo)).c_str(),
              format_seconds(aggregate_ns * 1e-9).c_str(),
              format_us(tp.per_frame_us).c_str(),
              format_rate(tp.fps_nominal).c_str(),
              format_rate(tp.mb_per_s).c_str(),
              overflow_any ? " [overflow_flag=true]" : "");
  std::string failure = !closed_fail.empty() ? closed_fail : spot_fail;
  if (!failure.empty()) {
    std::fprintf(stderr, "verification failure: %s\n", failure.c_str());
    return 3;
  }
  return 0;
}

// ---- verify ----

int run_verify(const RunSettings& s, const std::string& seeds_arg,
               bool emit_frames, Emitter& em) {
  validate_config(s.acq);  // reject broken settings before suites run
  std::vector<std::uint64_t> seeds = parse_u64_list(seeds_arg, "--seeds");
  VerifyResult r = run_verify_suites(s, seeds);

  std::vector<ReportRow> rows;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const VerifyCheck& c : r.checks) {
    std::printf("[%s] %-11s %s  (%s)\n", c.passed ? " ok " : "FAIL",
                c.suite.c_str(), c.name.c_str(), c.detail.c_str());
    ReportRow row;
    row.algo = c.suite;
    row.phase = c.name;
    row.count = c.passed ? 1 : 0;
    rows.push_back(row);
    checks.push_back({{"suite", c.suite},
                      {"name", c.name},
                      {"passed", c.passed},
                      {"detail", c.detail}});
  }
  std::printf("%zu checks, %zu failed\n", r.checks.size(), r.failures());

  if (emit_frames) {
    AcquisitionConfig demo;
    demo.groups = 2;
    demo.frames_per_group = 4;
    demo.height = 64;
    demo.width = 64;
    ValidConfig dcfg = validate_config(demo);
    SceneConfig dscene;
    dscene.base = base_pattern_from_string("checker:1200:2400:8");
    dscene.signal_amplitude = 600.0;
    dscene.noise_sigma = 40.0;
    dscene.seed = s.seed;
    DenoiseKernel kernel(Algo::BurstRw, dcfg);
    FrameStream fsrc(dcfg, dscene, dcfg.interval_us());
    fs::create_directories(em.dir / "frames");
    while (!fsrc.done()) {
      TimedFrame f = fsrc.next();
      if (f.group_index == 1) {
        char stem[32];
        std::snprintf(stem, sizeof stem, "frames/input_%u", f.frame_index);
        std::string pgm = std::string(stem) + ".pgm";
        write_pgm((em.dir / pgm).string(), f.pixels, dcfg.geom.height,
                  dcfg.geom.width, dcfg.acq.pixel_depth);
        em.written.push_back(pgm);
      }
      StepResult res = kernel.step(f);
      if (res.output) {
        char stem[32];
        std::snprintf(stem, sizeof stem, "frames/pair_%u",
                      res.output->pair_index);
        write_raw((em.dir / (std::string(stem) + ".raw")).string(),
                  res.output->pixels);
        write_pgm((em.dir / (std::string(stem) + ".pgm")).string(),
                  res.output->pixels, dcfg.geom.height, dcfg.geom.width, 16);
        em.written.push_back(std::string(stem) + ".raw");
        em.written.push_back(std::string(stem) + ".pgm");
      }
    }
  }

  nlohmann::ordered_json j;
  j["command"] = "verify";
  j["seeds"] = seeds;
  j["checks"] = checks;
  j["failed"] = r.failures();
  nlohmann::ordered_json fails = nlohmann::ordered_json::array();
  for (const VerifyCheck& c : r.checks)
    if (!c.passed)
      fails.push_back(
          {{"suite", c.suite}, {"name", c.name}, {"detail", c.detail}});
  j["failures"] = fails;
  em.reports(rows_to_csv(rows, false), j.dump(2) + "\n");
  return r.all_passed() ? 0 : 3;
}

// ---- bench-cpu ----

int run_bench(const RunSettings& s, const std::string& threads_arg, int reps,
              Emitter& em) {
  ValidConfig cfg = validate_config(s.acq);
  print_warnings(cfg);
  std::vector<int> threads;
  for (std::uint64_t v : parse_u64_list(threads_arg, "--threads")) {
    if (v < 1 || v > 4096) throw ConfigError("--threads: out of range");
    threads.push_back(int(v));
  }
  std::vector<BaselineReport> reps_out =
      run_cpu_bench(cfg, scene_of(s), cfg.interval_us(), threads, reps);

  std::vector<ReportRow> rows;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const BaselineReport& r : reps_out) {
    std::printf(
        "threads %2d: buffer %.4f s, compute %.4f s, total %.4f s, speedup "
        "%.2f\n",
        r.threads, r.buffer_s, r.compute_s, r.total_s, r.speedup_vs_1);
    ReportRow row;
    row.algo = "cpu-baseline";
    row.phase = r.threads == 1 ? "serial" : "parallel";
    row.latency_us = r.compute_s * 1e6;
    row.count = std::uint64_t(reps);
    row.total_us = r.total_s * 1e6;
    row.threads = r.threads;
    rows.push_back(row);
    arr.push_back({{"threads", r.threads},
                   {"buffer_s", format_seconds(r.buffer_s)},
                   {"compute_s", format_seconds(r.compute_s)},
                   {"total_s", format_seconds(r.total_s)},
                   {"speedup_vs_1", format_rate(r.speedup_vs_1)}});
  }
  nlohmann::ordered_json j;
  j["command"] = "bench-cpu";
  j["reps"] = reps;
  j["runs"] = arr;
  em.reports(rows_to_csv(rows, true), j.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"frame subtraction-and-averaging pipeline simulator"};
  app.set_version_flag("--version",
                       std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(1);

  CommonOpts est_o, sim_o, ver_o, ben_o;
  std::uint64_t est_ii = 1, sim_ii = 1;
  std::string sim_algo = "burst-rw";
  bool sim_dump = false;
  std::string ver_seeds = "0,1,2,3,4";
  bool ver_emit = false;
  std::string ben_threads = "1,2";
  int ben_reps = 3;

  CLI::App* est = app.add_subcommand("estimate", "closed-form latency table");
  add_common(est, est_o);
  est->add_option("--ii", est_ii, "compute-loop initiation interval")
      ->check(CLI::Range(std::uint64_t(1), std::uint64_t(1) << 32))
      ->capture_default_str();

  CLI::App* sim = app.add_subcommand(
      "simulate", "trace-driven run with reference spot check");
  add_common(sim, sim_o);
  sim->add_option("--algo", sim_algo,
                  "single-beat|burst-write|burst-rw|burst-rw-v2 "
                  "(aliases alg1..alg3v2)")
      ->capture_default_str();
  sim->add_option("--ii", sim_ii, "compute-loop initiation interval")
      ->check(CLI::Range(std::uint64_t(1), std::uint64_t(1) << 32))
      ->capture_default_str();
  sim->add_flag("--dump-frames", sim_dump,
                "write output pairs as raw + PGM under <out>/frames/");

  CLI::App* ver = app.add_subcommand("verify", "randomized property suites");
  add_common(ver, ver_o);
  ver->add_option("--seeds", ver_seeds, "comma-separated suite seeds")
      ->capture_default_str();
  ver->add_flag("--emit-frames", ver_emit,
                "write the 2-group demonstration frames under <out>/frames/");

  CLI::App* ben = app.add_subcommand("bench-cpu", "host batch baseline");
  add_common(ben, ben_o);
  ben->add_option("--threads", ben_threads, "comma-separated thread counts")
      ->capture_default_str();
  ben->add_option("--reps", ben_reps, "repetitions per thread count")
      ->check(CLI::Range(1, 1000))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  std::string command;
  for (int i = 0; i < argc; ++i) {
    if (i) command += ' ';
    command += argv[i];
  }

  try {
    const CommonOpts& o = est->parsed()   ? est_o
                          : sim->parsed() ? sim_o
                          : ver->parsed() ? ver_o
                                          : ben_o;
    RunSettings s = resolve_settings(o);
    Emitter em{fs::path(o.out_dir), o.format, {}};
    int rc = 0;
    if (est->parsed())
      rc = run_estimate(s, est_ii, em);
    else if (sim->parsed())
      rc = run_simulate(s, sim_algo, sim_ii, sim_dump, em);
    else if (ver->parsed())
      rc = run_verify(s, ver_seeds, ver_emit, em);
    else
      rc = run_bench(s, ben_threads, ben_reps, em);
    em.manifest(s, command);
    return rc;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
