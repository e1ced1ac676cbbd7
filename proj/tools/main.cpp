#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pidtune/config.hpp"
#include "pidtune/csv.hpp"
#include "pidtune/errors.hpp"
#include "pidtune/routh.hpp"
#include "pidtune/svg_plot.hpp"
#include "pidtune/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pidtune;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitDomain = 2;

json gains_json(const PidGains& gains) {
  return json{{"kp", gains.kp}, {"ki", gains.ki}, {"kd", gains.kd}};
}

json metrics_json(const ResponseMetrics& metrics) {
  json j{{"ise", metrics.ise},
         {"overshoot_pct", metrics.overshoot_pct},
         {"final_value", metrics.final_value}};
  j["settling_time"] = metrics.settling_time ? json(*metrics.settling_time) : json(nullptr);
  j["rise_time"] = metrics.rise_time ? json(*metrics.rise_time) : json(nullptr);
  return j;
}

// Result-affecting parameters only; out_dir is deliberately omitted so
// reports stay byte-identical wherever they are written.
json config_json(const AppConfig& config) {
  return json{{"num", config.plant_num},
              {"den", config.plant_den},
              {"dt", config.sim.dt},
              {"horizon", config.sim.horizon},
              {"settling_band", config.sim.settling_band},
              {"rise_lo", config.sim.rise_lo},
              {"rise_hi", config.sim.rise_hi},
              {"w_bits", config.w_bits},
              {"population", config.population},
              {"max_iterations", config.max_iterations},
              {"pebble_max", config.pebble_max.value_or(default_pebble_max(config.w_bits))},
              {"rng_seed", config.rng_seed},
              {"ranges",
               {{"kp", {config.ranges.kp.lo, config.ranges.kp.hi}},
                {"ki", {config.ranges.ki.lo, config.ranges.ki.hi}},
                {"kd", {config.ranges.kd.lo, config.ranges.kd.hi}}}},
              {"penalty", config.penalty},
              {"objective",
               config.objective_kind == ObjectiveKind::IseOnly ? "ise" : "ise_ts"},
              {"runs", config.runs}};
}

json tool_json() { return json{{"name", kToolName}, {"version", kToolVersion}}; }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

StepResponse simulate_response(const AppConfig& config, const PidGains& gains) {
  const TransferFunction loop = closed_loop(config.plant(), pid_transfer_function(gains));
  return simulate_step(to_state_space(loop), config.sim);
}

int cmd_simulate(const AppConfig& config) {
  const auto gains = config.gains();
  if (!gains) {
    throw ConfigError("simulate requires gains: pass --kp/--ki/--kd or set them in the config file");
  }
  const TransferFunction plant = config.plant();
  const TransferFunction loop = closed_loop(plant, pid_transfer_function(*gains));
  const RouthAnalysis analysis = routh_analyze(loop.den);
  if (analysis.verdict == Stability::Unstable) {
    throw DomainError("closed loop is unstable (Routh verdict: unstable, " +
                      std::to_string(analysis.sign_changes) + " right-half-plane roots)");
  }

  const StepResponse resp = simulate_step(to_state_space(loop), config.sim);
  const ResponseMetrics metrics = compute_metrics(resp, config.sim, dc_gain(loop));

  const fs::path out_dir(config.out_dir);
  fs::create_directories(out_dir);
  write_response_csv(out_dir / "response.csv", resp);

  // Step-response plot with the settling band and the peak annotated.
  SvgPlotOptions options;
  options.title = "Closed-loop unit step response";
  options.x_label = "time [s]";
  options.y_label = "output";
  options.band = SvgBand{metrics.final_value * (1.0 - config.sim.settling_band),
                         metrics.final_value * (1.0 + config.sim.settling_band)};
  std::size_t peak_index = 0;
  for (std::size_t i = 1; i < resp.outputs.size(); ++i) {
    if (resp.outputs[i] > resp.outputs[peak_index]) peak_index = i;
  }
  char peak_label[64];
  std::snprintf(peak_label, sizeof(peak_label), "Mp = %.1f%%", metrics.overshoot_pct);
  options.marker = SvgMarker{resp.times[peak_index], resp.outputs[peak_index], peak_label};

  std::vector<SvgSeries> series;
  series.push_back({"y(t)", resp.times, resp.outputs, "#1f77b4"});
  series.push_back(
      {"setpoint", {resp.times.front(), resp.times.back()}, {resp.setpoint, resp.setpoint},
       "#999999"});
  write_svg_plot(out_dir / "response.svg", series, options);

  json j = metrics_json(metrics);
  std::cout << j.dump() << '\n';
  return kExitOk;
}

int cmd_zn(const AppConfig& config, bool with_metrics) {
  const TransferFunction plant = config.plant();
  const UltimateParams ultimate = find_ultimate(plant);

  json j{{"ku", ultimate.ku}, {"tu", ultimate.tu}};
  j["gains"] = json{{"P", gains_json(zn_gains(ultimate, ControlType::P))},
                    {"PI", gains_json(zn_gains(ultimate, ControlType::PI))},
                    {"PID", gains_json(zn_gains(ultimate, ControlType::PID))}};
  if (with_metrics) {
    const PidGains pid = zn_gains(ultimate, ControlType::PID);
    const TransferFunction loop = closed_loop(plant, pid_transfer_function(pid));
    const StepResponse resp = simulate_step(to_state_space(loop), config.sim);
    j["pid_metrics"] = metrics_json(compute_metrics(resp, config.sim, dc_gain(loop)));
  }
  std::cout << j.dump() << '\n';
  return kExitOk;
}

json report_json(const AppConfig& config, const TuningReport& report, int run_index,
                 std::uint64_t run_seed) {
  json j{{"run_index", run_index},
         {"rng_seed", run_seed},
         {"ultimate", {{"ku", report.ultimate.ku}, {"tu", report.ultimate.tu}}},
         {"zn", {{"gains", gains_json(report.zn_gains)}, {"metrics", metrics_json(report.zn_metrics)}}},
         {"evoa",
          {{"gains", gains_json(report.best_gains)}, {"metrics", metrics_json(report.best_metrics)}}},
         {"seed_clamped", report.seed_clamped},
         {"evaluations", report.evaluations},
         {"config", config_json(config)},
         {"tool", tool_json()}};
  return j;
}

int cmd_tune(const AppConfig& config) {
  const TransferFunction plant = config.plant();
  const int run_count = config.runs;
  const auto seed_gains = config.gains();

  std::vector<TuningReport> reports(static_cast<std::size_t>(run_count));
  std::vector<std::uint64_t> run_seeds(static_cast<std::size_t>(run_count));
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(run_count));

  // Independent runs on decorrelated streams; file output happens after the
  // join, in run order, so results do not depend on scheduling.
  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= run_count) return;
      try {
        EvoaConfig evoa = config.evoa_config();
        evoa.rng_seed = Rng::derive_stream_seed(config.rng_seed, static_cast<std::uint64_t>(i));
        run_seeds[static_cast<std::size_t>(i)] = evoa.rng_seed;
        reports[static_cast<std::size_t>(i)] =
            tune(plant, evoa, config.objective_config(), seed_gains);
      } catch (...) {
        failures[static_cast<std::size_t>(i)] = std::current_exception();
        return;
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                           static_cast<unsigned>(run_count)));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  for (int i = 0; i < run_count; ++i) {
    if (failures[static_cast<std::size_t>(i)]) {
      try {
        std::rethrow_exception(failures[static_cast<std::size_t>(i)]);
      } catch (const std::exception& e) {
        throw DomainError("run " + std::to_string(i) + " failed: " + e.what());
      }
    }
  }

  const fs::path out_dir(config.out_dir);
  fs::create_directories(out_dir);

  std::vector<double> best_values;
  best_values.reserve(reports.size());
  std::size_t best_run = 0;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& report = reports[i];
    best_values.push_back(report.best_metrics.ise);
    if (report.best_metrics.ise < reports[best_run].best_metrics.ise) best_run = i;
    write_convergence_csv(out_dir / ("convergence_" + std::to_string(i) + ".csv"), report.history);
    write_text(out_dir / ("report_" + std::to_string(i) + ".json"),
               report_json(config, report, static_cast<int>(i), run_seeds[i]).dump(2) + "\n");
    std::cerr << "run " << i << ": best ISE " << report.best_metrics.ise << " (baseline "
              << report.zn_metrics.ise << ")\n";
  }

  const RunStatistics stats = run_statistics(best_values);
  const TuningReport& best = reports[best_run];

  json summary{{"tool", tool_json()},
               {"config", config_json(config)},
               {"statistics",
                {{"runs", stats.runs},
                 {"best_ise",
                  {{"values", stats.best_values},
                   {"mean", stats.mean},
                   {"std", stats.std_dev ? json(*stats.std_dev) : json(nullptr)}}}}},
               {"best_run", best_run},
               {"comparison",
                {{"zn", {{"gains", gains_json(best.zn_gains)}, {"metrics", metrics_json(best.zn_metrics)}}},
                 {"evoa",
                  {{"gains", gains_json(best.best_gains)},
                   {"metrics", metrics_json(best.best_metrics)}}}}}};
  write_text(out_dir / "summary.json", summary.dump(2) + "\n");

  // Fig-style overlays: ZN vs tuned step response, and convergence traces.
  {
    const StepResponse zn_resp = simulate_response(config, best.zn_gains);
    const StepResponse evoa_resp = simulate_response(config, best.best_gains);
    SvgPlotOptions options;
    options.title = "Step response: baseline ZN vs tuned gains";
    options.x_label = "time [s]";
    options.y_label = "output";
    std::vector<SvgSeries> series;
    series.push_back({"ZN", zn_resp.times, zn_resp.outputs, "#d62728"});
    series.push_back({"EVOA", evoa_resp.times, evoa_resp.outputs, "#1f77b4"});
    write_svg_plot(out_dir / "comparison.svg", series, options);
  }
  {
    SvgPlotOptions options;
    options.title = "Best ISE per iteration";
    options.x_label = "iteration";
    options.y_label = "best ISE";
    static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    std::vector<SvgSeries> series;
    for (std::size_t i = 0; i < reports.size(); ++i) {
      SvgSeries s;
      s.label = reports.size() <= 10 ? ("run " + std::to_string(i)) : "";
      s.color = palette[i % 10];
      s.ys = reports[i].history;
      s.xs.resize(s.ys.size());
      for (std::size_t k = 0; k < s.xs.size(); ++k) s.xs[k] = static_cast<double>(k);
      series.push_back(std::move(s));
    }
    write_svg_plot(out_dir / "convergence.svg", series, options);
  }

  std::cerr << "mean best ISE " << stats.mean << " over " << stats.runs << " runs; outputs in "
            << out_dir.string() << "\n";
  return kExitOk;
}

struct FlagValues {
  std::string config_path;
  bool print_config = false;
  double kp = 0.0, ki = 0.0, kd = 0.0;
  std::string num, den;
  double dt = 0.0, horizon = 0.0, band = 0.0;
  int w_bits = 0, population = 0, iterations = 0, pebble_max = 0, runs = 0;
  std::uint64_t seed = 0;
  std::string out;
};

void add_common_options(CLI::App* sub, FlagValues& flags) {
  sub->add_option("--kp", flags.kp, "Proportional gain (simulate; optional seed override for tune)");
  sub->add_option("--ki", flags.ki, "Integral gain [1/s]");
  sub->add_option("--kd", flags.kd, "Derivative gain [s]");
  sub->add_option("--num", flags.num, "Plant numerator coefficients, highest degree first (comma separated)");
  sub->add_option("--den", flags.den, "Plant denominator coefficients, highest degree first (comma separated)");
  sub->add_option("--dt", flags.dt, "Integration step [s]");
  sub->add_option("--horizon", flags.horizon, "Simulation horizon [s]");
  sub->add_option("--band", flags.band, "Settling band as a fraction of the final value");
  sub->add_option("--w-bits", flags.w_bits, "Bits per gain field");
  sub->add_option("--pop", flags.population, "Population size");
  sub->add_option("--iters", flags.iterations, "Search iterations");
  sub->add_option("--pebble-max", flags.pebble_max, "Upper bound on pebble length / mutated bits");
  sub->add_option("--runs", flags.runs, "Number of independent tuning runs");
  sub->add_option("--seed", flags.seed, "Random seed (per-run streams are derived from it)");
  sub->add_option("--out", flags.out, "Output directory");
  sub->add_option("--config", flags.config_path, "Flat key=value config file");
  sub->add_flag("--print-config", flags.print_config, "Echo the effective configuration and exit");
}

AppConfig merge_config(const CLI::App* sub, const FlagValues& flags) {
  AppConfig config;
  if (sub->count("--config") > 0) {
    apply_config_file(config, flags.config_path);
  }
  if (sub->count("--kp") > 0) config.kp = flags.kp;
  if (sub->count("--ki") > 0) config.ki = flags.ki;
  if (sub->count("--kd") > 0) config.kd = flags.kd;
  if (sub->count("--num") > 0) config.plant_num = parse_coefficient_list(flags.num, "num");
  if (sub->count("--den") > 0) config.plant_den = parse_coefficient_list(flags.den, "den");
  if (sub->count("--dt") > 0) config.sim.dt = flags.dt;
  if (sub->count("--horizon") > 0) config.sim.horizon = flags.horizon;
  if (sub->count("--band") > 0) config.sim.settling_band = flags.band;
  if (sub->count("--w-bits") > 0) config.w_bits = flags.w_bits;
  if (sub->count("--pop") > 0) config.population = flags.population;
  if (sub->count("--iters") > 0) config.max_iterations = flags.iterations;
  if (sub->count("--pebble-max") > 0) config.pebble_max = flags.pebble_max;
  if (sub->count("--runs") > 0) config.runs = flags.runs;
  if (sub->count("--seed") > 0) config.rng_seed = flags.seed;
  if (sub->count("--out") > 0) config.out_dir = flags.out;
  validate(config);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(kToolName) + " " + kToolVersion +
               " - PID auto-tuning: Ziegler-Nichols baseline refined by a binary-encoded "
               "Egyptian-vulture search minimizing the step-response ISE"};
  app.require_subcommand(1);

  FlagValues flags;
  CLI::App* sim_cmd = app.add_subcommand(
      "simulate", "Simulate the closed loop for given gains; writes response.csv/response.svg");
  CLI::App* zn_cmd = app.add_subcommand(
      "zn", "Ultimate gain/period and Ziegler-Nichols gain table for the plant");
  CLI::App* tune_cmd = app.add_subcommand(
      "tune", "Run ZN-seeded searches and write reports, convergence CSVs and plots");
  add_common_options(sim_cmd, flags);
  add_common_options(zn_cmd, flags);
  add_common_options(tune_cmd, flags);
  bool zn_with_metrics = false;
  zn_cmd->add_flag("--simulate", zn_with_metrics, "Also simulate the PID row and report metrics");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
      return app.exit(e);
    }
    std::cerr << e.what() << '\n';
    return kExitConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    const AppConfig config = merge_config(sub, flags);
    if (flags.print_config) {
      std::cout << config.to_key_values();
      return kExitOk;
    }
    if (sub == sim_cmd) return cmd_simulate(config);
    if (sub == zn_cmd) return cmd_zn(config, zn_with_metrics);
    return cmd_tune(config);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  }
}
