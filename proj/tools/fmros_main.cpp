#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <unordered_set>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fmros/config.hpp"
#include "fmros/experiment/sweep.hpp"
#include "fmros/features.hpp"
#include "fmros/fire_ros.hpp"
#include "fmros/ingest.hpp"
#include "fmros/kernels/kernels.hpp"
#include "fmros/report/svg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUnreachable = 2;

// Collects per-artifact failures so a partial run can enumerate exactly what
// is missing.
struct ArtifactSink {
  std::vector<std::string> written;
  std::vector<std::string> failed;

  template <typename Fn>
  void emit(const std::string& path, Fn&& writer) {
    try {
      writer(path);
      written.push_back(path);
    } catch (const std::exception& e) {
      failed.push_back(path + ": " + e.what());
    }
  }

  int finish() const {
    for (const auto& p : written) std::cout << "wrote " << p << "\n";
    if (failed.empty()) return 0;
    std::cerr << "missing artifacts:\n";
    for (const auto& f : failed) std::cerr << "  " << f << "\n";
    return kExitFailure;
  }
};

std::vector<fmros::StationSeries> load_stations(const fmros::RunConfig& cfg,
                                                fmros::QcReport& report) {
  if (cfg.source_mode == "api") {
    std::string token;
    if (const char* env = std::getenv(cfg.api_token_env.c_str())) token = env;
    return fmros::load_stations_api(cfg.api_url, token, cfg.bbox, cfg.time_range, cfg.qc, report);
  }
  if (cfg.source_mode != "file")
    throw std::runtime_error("config: source mode must be \"file\" or \"api\"");
  if (cfg.source_path.empty()) throw std::runtime_error("config: source path is empty");
  if (cfg.source_path.size() >= 5 &&
      cfg.source_path.substr(cfg.source_path.size() - 5) == ".json")
    return fmros::load_stations_json(cfg.source_path, cfg.bbox, cfg.time_range, cfg.qc, report);
  return fmros::load_stations_csv(cfg.source_path, cfg.bbox, cfg.time_range, cfg.qc, report);
}

std::string dataset_path(const fmros::RunConfig& cfg) {
  if (!cfg.dataset_csv.empty()) return cfg.dataset_csv;
  return (fs::path(cfg.out_dir) / "dataset.csv").string();
}

json qc_report_json(const fmros::QcReport& report, std::size_t dataset_rows) {
  return {{"stations_in", report.stations_in},
          {"stations_kept", report.stations_kept},
          {"excluded_stations", report.excluded_stations},
          {"records_in", report.records_in},
          {"filters",
           {{"fmc_below_min", report.fmc_below_min},
            {"fmc_constant_run", report.fmc_constant_run},
            {"precip_out_of_range", report.precip_out_of_range},
            {"duplicate_times_dropped", report.duplicate_times_dropped}}},
          {"notes", report.notes},
          {"dataset_rows", dataset_rows}};
}

void write_json_file(const json& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

fmros::svg::Chart loss_summary_panel(const std::vector<fmros::LossSummary>& summary,
                                     const std::string& title, const std::string& y_label) {
  fmros::svg::Chart chart;
  chart.title = title;
  chart.x_label = "loss function";
  chart.y_label = y_label;
  fmros::svg::Series s;
  s.line = false;
  s.points = true;
  for (std::size_t i = 0; i < summary.size(); ++i) {
    chart.x_tick_labels.push_back(summary[i].loss);
    s.x.push_back(static_cast<double>(i));
    s.y.push_back(summary[i].mean);
    s.err.push_back(summary[i].se);
    if (summary[i].loss == "ROS" && i > 0)
      chart.x_separators.push_back(static_cast<double>(i) - 0.5);
  }
  chart.series.push_back(std::move(s));
  return chart;
}

void write_loss_summary_svg(const std::vector<fmros::LossSummary>& fmc,
                            const std::vector<fmros::LossSummary>& ros,
                            const std::string& path) {
  std::vector<fmros::svg::Chart> panels;
  panels.push_back(loss_summary_panel(fmc, "Forecast RMSE, FMC", "RMSE (percent FMC)"));
  panels.push_back(loss_summary_panel(ros, "Forecast RMSE, ROS", "RMSE (m/s)"));
  fmros::svg::write_panels_svg(panels, path);
}

void write_by_model_svg(const std::vector<fmros::ModelLossSummary>& rows,
                        const std::string& metric_label, const std::string& path) {
  std::vector<std::string> model_order;
  for (const auto& r : rows) {
    if (std::find(model_order.begin(), model_order.end(), r.model) == model_order.end())
      model_order.push_back(r.model);
  }
  std::vector<fmros::svg::Chart> panels;
  for (const auto& model : model_order) {
    std::vector<fmros::LossSummary> subset;
    for (const auto& r : rows) {
      if (r.model == model) subset.push_back(r.summary);
    }
    auto panel = loss_summary_panel(subset, model, metric_label);
    panel.width = 560;
    panels.push_back(std::move(panel));
  }
  fmros::svg::write_panels_svg(panels, path);
}

void write_ros_curves_svg(const fmros::RunConfig& cfg, const std::string& path) {
  std::vector<double> grid;
  for (double v = 0.0; v <= 40.0 + 1e-9; v += 0.25) grid.push_back(v);

  std::vector<fmros::svg::Chart> panels;
  for (double wind : {0.0, 3.0}) {
    fmros::RosContext ctx = cfg.eval_ros;
    ctx.wind_ms = wind;
    const auto curve = fmros::ros_curve(ctx, grid);
    fmros::svg::Chart chart;
    chart.title = wind == 0.0 ? "ROS vs FMC, no wind" : "ROS vs FMC, 3 m/s wind";
    chart.x_label = "FMC (percent)";
    chart.y_label = "ROS (m/s)";
    fmros::svg::Series s;
    for (const auto& [x, y] : curve) {
      s.x.push_back(x);
      s.y.push_back(y);
    }
    chart.series.push_back(std::move(s));
    chart.width = 560;
    panels.push_back(std::move(chart));
  }
  fmros::svg::write_panels_svg(panels, path);
}

void write_weight_curves_svg(const fmros::RunConfig& cfg, const std::string& path) {
  std::vector<double> grid;
  for (double v = 1.0; v <= 35.0 + 1e-9; v += 0.25) grid.push_back(v);

  fmros::svg::Chart chart;
  chart.title = "Loss function weights";
  chart.x_label = "observed FMC (percent)";
  chart.y_label = "weight";

  fmros::svg::Series equal;
  equal.label = "equal weight";
  for (double v : grid) {
    equal.x.push_back(v);
    equal.y.push_back(1.0);
  }
  chart.series.push_back(std::move(equal));

  for (double omega : {0.01, cfg.driest_omega, 0.09, 0.17, 0.25}) {
    fmros::svg::Series s;
    s.label = fmros::exponential_loss_name(omega);
    for (double v : grid) {
      s.x.push_back(v);
      s.y.push_back(std::exp(-omega * v));
    }
    chart.series.push_back(std::move(s));
  }

  // Spread-curve weights, rescaled to a unit peak for comparison.
  const auto curve = fmros::ros_curve(cfg.loss_ros, grid);
  double peak = 0.0;
  for (const auto& [x, y] : curve) peak = std::max(peak, y);
  fmros::svg::Series ros_series;
  ros_series.label = "ROS (rescaled)";
  ros_series.dashed = true;
  for (const auto& [x, y] : curve) {
    ros_series.x.push_back(x);
    ros_series.y.push_back(peak > 0 ? y / peak : 0.0);
  }
  chart.series.push_back(std::move(ros_series));

  fmros::svg::write_chart_svg(chart, path);
}

void emit_sweep_artifacts(const fmros::RunConfig& cfg, const fmros::SweepResult& result,
                          json& run_summary, ArtifactSink& sink) {
  const fs::path out(cfg.out_dir);
  const auto fmc_summary = fmros::summarize_by_loss(result.records, fmros::Metric::fmc);
  const auto ros_summary = fmros::summarize_by_loss(result.records, fmros::Metric::ros);
  const auto fmc_by_model = fmros::summarize_by_model(result.records, fmros::Metric::fmc);
  const auto ros_by_model = fmros::summarize_by_model(result.records, fmros::Metric::ros);
  const auto fmc_tests = fmros::paired_tests_vs_baseline(result.records, fmros::Metric::fmc);
  const auto ros_tests = fmros::paired_tests_vs_baseline(result.records, fmros::Metric::ros);

  sink.emit((out / "eval_records.csv").string(),
            [&](const std::string& p) { fmros::write_records_csv(result.records, p); });
  sink.emit((out / "summary_fmc.csv").string(),
            [&](const std::string& p) { fmros::write_summary_csv(fmc_summary, p); });
  sink.emit((out / "summary_ros.csv").string(),
            [&](const std::string& p) { fmros::write_summary_csv(ros_summary, p); });
  sink.emit((out / "by_model_fmc.csv").string(),
            [&](const std::string& p) { fmros::write_model_summary_csv(fmc_by_model, p); });
  sink.emit((out / "by_model_ros.csv").string(),
            [&](const std::string& p) { fmros::write_model_summary_csv(ros_by_model, p); });
  sink.emit((out / "ttests_fmc.csv").string(),
            [&](const std::string& p) { fmros::write_ttests_csv(fmc_tests, p); });
  sink.emit((out / "ttests_ros.csv").string(),
            [&](const std::string& p) { fmros::write_ttests_csv(ros_tests, p); });
  sink.emit((out / "rmse_vs_loss.svg").string(), [&](const std::string& p) {
    write_loss_summary_svg(fmc_summary, ros_summary, p);
  });
  sink.emit((out / "rmse_by_model_fmc.svg").string(), [&](const std::string& p) {
    write_by_model_svg(fmc_by_model, "RMSE (percent FMC)", p);
  });
  sink.emit((out / "rmse_by_model_ros.svg").string(), [&](const std::string& p) {
    write_by_model_svg(ros_by_model, "RMSE (m/s)", p);
  });
  sink.emit((out / "ros_curves.svg").string(),
            [&](const std::string& p) { write_ros_curves_svg(cfg, p); });
  sink.emit((out / "weight_curves.svg").string(),
            [&](const std::string& p) { write_weight_curves_svg(cfg, p); });
  for (double wind : {0.0, 3.0}) {
    std::vector<double> grid;
    for (double v = 0.0; v <= 40.0 + 1e-9; v += 0.25) grid.push_back(v);
    fmros::RosContext ctx = cfg.eval_ros;
    ctx.wind_ms = wind;
    const auto curve = fmros::ros_curve(ctx, grid);
    const std::string name = wind == 0.0 ? "ros_curve_wind0.csv" : "ros_curve_wind3.csv";
    sink.emit((out / name).string(),
              [&](const std::string& p) { fmros::write_curve_csv(p, curve); });
  }

  run_summary["records"] = result.records.size();
  run_summary["skipped_periods"] = result.skipped_periods;
  run_summary["clamped_negative_predictions"] = result.clamped_negative_total;
  run_summary["warnings"] = result.warnings;
  run_summary["kernels"] = fmros::kernels::isa_name(fmros::kernels::active_isa());
}

int cmd_ingest(const fmros::RunConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  fmros::QcReport report;
  const auto stations = load_stations(cfg, report);
  const auto data = fmros::assemble(stations);

  ArtifactSink sink;
  sink.emit(dataset_path(cfg),
            [&](const std::string& p) { fmros::write_dataset_csv(data, p); });
  sink.emit((fs::path(cfg.out_dir) / "qc_report.json").string(), [&](const std::string& p) {
    write_json_file(qc_report_json(report, data.rows()), p);
  });
  for (const auto& note : report.notes) std::cout << note << "\n";
  std::cout << "stations kept: " << report.stations_kept << " of " << report.stations_in
            << ", dataset rows: " << data.rows() << "\n";
  return sink.finish();
}

int cmd_synth(const fmros::RunConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  const auto stations = fmros::synth_generate(cfg.synth);
  const auto data = fmros::assemble(stations);
  ArtifactSink sink;
  sink.emit(dataset_path(cfg),
            [&](const std::string& p) { fmros::write_dataset_csv(data, p); });
  std::cout << "synthetic stations: " << stations.size() << ", dataset rows: " << data.rows()
            << "\n";
  return sink.finish();
}

fmros::ModelDataset load_dataset_for_run(const fmros::RunConfig& cfg, const std::string& mode,
                                         ArtifactSink& sink) {
  if (mode == "synth") {
    const auto stations = fmros::synth_generate(cfg.synth);
    auto data = fmros::assemble(stations);
    sink.emit(dataset_path(cfg),
              [&](const std::string& p) { fmros::write_dataset_csv(data, p); });
    return data;
  }
  return fmros::read_dataset_csv(dataset_path(cfg));
}

int cmd_run(const fmros::RunConfig& cfg, const std::string& mode) {
  fs::create_directories(cfg.out_dir);
  ArtifactSink sink;
  const auto data = load_dataset_for_run(cfg, mode, sink);

  json run_summary;
  run_summary["mode"] = mode;
  run_summary["seed"] = cfg.seed;
  run_summary["dataset_rows"] = data.rows();

  if (mode == "driest") {
    fmros::DriestOptions opt;
    opt.cv = cfg.cv;
    opt.replicates = cfg.driest_replicates;
    opt.losses = cfg.driest_losses();
    opt.forest = cfg.forest;
    opt.boost = cfg.boost;
    opt.eval_ros = cfg.eval_ros;
    opt.seed = cfg.seed;
    opt.threads = cfg.threads;
    const auto res = fmros::driest_period(data, opt);

    run_summary["driest_window"] = {{"begin", fmros::format_iso8601(res.window_begin)},
                                    {"end", fmros::format_iso8601(res.window_end)},
                                    {"mean_fmc", res.mean_fmc},
                                    {"mean_ros", res.mean_ros}};
    emit_sweep_artifacts(cfg, res.sweep, run_summary, sink);
    std::cout << "driest window: " << fmros::format_iso8601(res.window_begin) << " .. "
              << fmros::format_iso8601(res.window_end) << " (mean FMC "
              << res.mean_fmc << ", mean ROS " << res.mean_ros << ")\n";
  } else {
    // Periods span the dataset's own time extent.
    fmros::UtcSeconds t_min = data.times.front(), t_max = data.times.front();
    for (auto t : data.times) {
      t_min = std::min(t_min, t);
      t_max = std::max(t_max, t);
    }
    std::vector<std::string> stations;
    {
      std::unordered_set<std::string> seen;
      for (const auto& id : data.station_ids)
        if (seen.insert(id).second) stations.push_back(id);
    }
    const fmros::TimeRange range{t_min, t_max + fmros::kSecondsPerHour};
    const auto periods = fmros::make_periods(range, stations, cfg.cv, cfg.seed);

    fmros::SweepOptions opt;
    opt.losses = cfg.loss_grid();
    opt.forest = cfg.forest;
    opt.boost = cfg.boost;
    opt.eval_ros = cfg.eval_ros;
    opt.seed = cfg.seed;
    opt.threads = cfg.threads;
    const auto result = fmros::run_sweep(data, periods, opt);

    run_summary["periods"] = periods.size();
    emit_sweep_artifacts(cfg, result, run_summary, sink);
  }

  sink.emit((fs::path(cfg.out_dir) / "run_summary.json").string(),
            [&](const std::string& p) { write_json_file(run_summary, p); });
  return sink.finish();
}

int cmd_report(const fmros::RunConfig& cfg, const std::string& records_path) {
  fs::create_directories(cfg.out_dir);
  const std::string path =
      records_path.empty() ? (fs::path(cfg.out_dir) / "eval_records.csv").string() : records_path;
  fmros::SweepResult result;
  result.records = fmros::read_records_csv(path);
  ArtifactSink sink;
  json run_summary;
  run_summary["mode"] = "report";
  run_summary["records_source"] = path;
  emit_sweep_artifacts(cfg, result, run_summary, sink);
  sink.emit((fs::path(cfg.out_dir) / "run_summary.json").string(),
            [&](const std::string& p) { write_json_file(run_summary, p); });
  return sink.finish();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fuel-moisture regression under weighted losses with spread-rate evaluation"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string source_mode;
  std::string dataset;
  std::string records_path;
  std::string run_mode = "full";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = -1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "path to the JSON config file");
    cmd->add_option("--out", out_dir, "output directory override");
    cmd->add_option_function<std::uint64_t>(
        "--seed", [&](std::uint64_t v) { seed = v; seed_set = true; }, "master seed override");
    cmd->add_option("--threads", threads, "worker thread count (0 = hardware)");
  };

  auto* ingest = app.add_subcommand("ingest", "load, clean and assemble station observations");
  add_common(ingest);
  ingest->add_option("--source", source_mode, "file|api (overrides config)");

  auto* synth = app.add_subcommand("synth", "generate a synthetic station dataset");
  add_common(synth);

  auto* run = app.add_subcommand("run", "run the loss/model cross-validation sweep");
  add_common(run);
  run->add_option("--mode", run_mode, "full|driest|synth")
      ->check(CLI::IsMember({"full", "driest", "synth"}));
  run->add_option("--dataset", dataset, "dataset CSV path (overrides config)");

  auto* driest = app.add_subcommand("driest", "run the reduced sweep on the driest window");
  add_common(driest);
  driest->add_option("--dataset", dataset, "dataset CSV path (overrides config)");

  auto* report = app.add_subcommand("report", "rebuild summaries and plots from records");
  add_common(report);
  report->add_option("--records", records_path, "eval records CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    fmros::RunConfig cfg =
        config_path.empty() ? fmros::RunConfig{} : fmros::RunConfig::from_file(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!source_mode.empty()) cfg.source_mode = source_mode;
    if (!dataset.empty()) cfg.dataset_csv = dataset;
    if (seed_set) cfg.seed = seed;
    if (threads >= 0) cfg.threads = threads;

    if (app.got_subcommand(ingest)) return cmd_ingest(cfg);
    if (app.got_subcommand(synth)) return cmd_synth(cfg);
    if (app.got_subcommand(run)) return cmd_run(cfg, run_mode);
    if (app.got_subcommand(driest)) return cmd_run(cfg, "driest");
    if (app.got_subcommand(report)) return cmd_report(cfg, records_path);
  } catch (const fmros::IngestError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == fmros::IngestError::Code::unreachable ? kExitUnreachable : kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
