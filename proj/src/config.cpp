#include "fmros/config.hpp"

#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace fmros {

namespace {

using nlohmann::json;

RosContext ros_ctx_from_json(const json& j, RosContext base) {
  base.wind_ms = j.value("wind_ms", base.wind_ms);
  base.slope_tan = j.value("slope_tan", base.slope_tan);
  base.wind_adjustment = j.value("wind_adjustment", base.wind_adjustment);
  if (j.contains("fuel")) {
    const auto& f = j["fuel"];
    FuelModel& fm = base.fuel;
    fm.name = f.value("name", fm.name);
    fm.dead_1h_load = f.value("dead_1h_load", fm.dead_1h_load);
    fm.dead_10h_load = f.value("dead_10h_load", fm.dead_10h_load);
    fm.sav_1h = f.value("sav_1h", fm.sav_1h);
    fm.sav_10h = f.value("sav_10h", fm.sav_10h);
    fm.fuel_bed_depth = f.value("fuel_bed_depth", fm.fuel_bed_depth);
    fm.heat_content = f.value("heat_content", fm.heat_content);
    fm.mineral_total = f.value("mineral_total", fm.mineral_total);
    fm.mineral_effective = f.value("mineral_effective", fm.mineral_effective);
    fm.particle_density = f.value("particle_density", fm.particle_density);
    fm.moisture_of_extinction = f.value("moisture_of_extinction", fm.moisture_of_extinction);
  }
  return base;
}

json ros_ctx_to_json(const RosContext& ctx) {
  return {{"wind_ms", ctx.wind_ms},
          {"slope_tan", ctx.slope_tan},
          {"wind_adjustment", ctx.wind_adjustment},
          {"fuel",
           {{"name", ctx.fuel.name},
            {"dead_1h_load", ctx.fuel.dead_1h_load},
            {"dead_10h_load", ctx.fuel.dead_10h_load},
            {"sav_1h", ctx.fuel.sav_1h},
            {"sav_10h", ctx.fuel.sav_10h},
            {"fuel_bed_depth", ctx.fuel.fuel_bed_depth},
            {"heat_content", ctx.fuel.heat_content},
            {"mineral_total", ctx.fuel.mineral_total},
            {"mineral_effective", ctx.fuel.mineral_effective},
            {"particle_density", ctx.fuel.particle_density},
            {"moisture_of_extinction", ctx.fuel.moisture_of_extinction}}}};
}

UtcSeconds parse_time_or_throw(const std::string& text, const char* what) {
  const auto t = parse_iso8601(text);
  if (!t) throw std::runtime_error(std::string("config: bad timestamp for ") + what);
  return *t;
}

}  // namespace

std::vector<LossSpec> RunConfig::loss_grid() const {
  std::vector<LossSpec> grid;
  grid.push_back(LossSpec::mse());
  for (int i = 0; i < omega_count; ++i) {
    const double omega =
        omega_count > 1 ? omega_min + (omega_max - omega_min) * i / (omega_count - 1) : omega_min;
    grid.push_back(LossSpec::exponential(omega));
  }
  if (include_ros_loss) grid.push_back(LossSpec::ros_weighted(loss_ros));
  return grid;
}

std::vector<LossSpec> RunConfig::driest_losses() const {
  return {LossSpec::mse(), LossSpec::exponential(driest_omega), LossSpec::ros_weighted(loss_ros)};
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return from_json(doc);
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig cfg;
  if (j.contains("source")) {
    const auto& s = j["source"];
    cfg.source_mode = s.value("mode", cfg.source_mode);
    cfg.source_path = s.value("path", cfg.source_path);
    cfg.api_url = s.value("api_url", cfg.api_url);
    cfg.api_token_env = s.value("token_env", cfg.api_token_env);
  }
  if (j.contains("bbox")) {
    const auto& b = j["bbox"];
    if (!b.is_array() || b.size() != 4)
      throw std::runtime_error("config: bbox must be [minLat,minLon,maxLat,maxLon]");
    cfg.bbox = {b[0].get<double>(), b[1].get<double>(), b[2].get<double>(), b[3].get<double>()};
  }
  if (j.contains("time_range")) {
    const auto& t = j["time_range"];
    if (!t.is_array() || t.size() != 2)
      throw std::runtime_error("config: time_range must be [start,end]");
    cfg.time_range.begin = parse_time_or_throw(t[0].get<std::string>(), "time_range[0]");
    cfg.time_range.end = parse_time_or_throw(t[1].get<std::string>(), "time_range[1]");
    if (cfg.time_range.begin >= cfg.time_range.end)
      throw std::runtime_error("config: time_range start must precede end");
  }
  if (j.contains("qc")) {
    const auto& q = j["qc"];
    cfg.qc.fmc_min_pct = q.value("fmc_min_pct", cfg.qc.fmc_min_pct);
    cfg.qc.constant_run_hours = q.value("constant_run_hours", cfg.qc.constant_run_hours);
    cfg.qc.precip_rate_max = q.value("precip_rate_max", cfg.qc.precip_rate_max);
    if (q.contains("exclude_stations"))
      cfg.qc.exclude_stations = q["exclude_stations"].get<std::vector<std::string>>();
  }
  if (j.contains("losses")) {
    const auto& l = j["losses"];
    cfg.omega_min = l.value("omega_min", cfg.omega_min);
    cfg.omega_max = l.value("omega_max", cfg.omega_max);
    cfg.omega_count = l.value("omega_count", cfg.omega_count);
    cfg.include_ros_loss = l.value("include_ros", cfg.include_ros_loss);
    if (l.contains("ros_context")) cfg.loss_ros = ros_ctx_from_json(l["ros_context"], cfg.loss_ros);
    if (cfg.omega_count < 1 || cfg.omega_min < 0 || cfg.omega_max < cfg.omega_min)
      throw std::runtime_error("config: invalid loss grid");
  }
  if (j.contains("eval_ros")) cfg.eval_ros = ros_ctx_from_json(j["eval_ros"], cfg.eval_ros);
  if (j.contains("forest")) {
    const auto& f = j["forest"];
    cfg.forest.n_estimators = f.value("n_estimators", cfg.forest.n_estimators);
    cfg.forest.max_depth = f.value("max_depth", cfg.forest.max_depth);
    cfg.forest.min_samples_split = f.value("min_samples_split", cfg.forest.min_samples_split);
    cfg.forest.min_samples_leaf = f.value("min_samples_leaf", cfg.forest.min_samples_leaf);
    cfg.forest.max_features = f.value("max_features", cfg.forest.max_features);
    cfg.forest.bootstrap = f.value("bootstrap", cfg.forest.bootstrap);
  }
  if (j.contains("boost")) {
    const auto& b = j["boost"];
    cfg.boost.max_depth = b.value("max_depth", cfg.boost.max_depth);
    cfg.boost.eta = b.value("eta", cfg.boost.eta);
    cfg.boost.min_child_weight = b.value("min_child_weight", cfg.boost.min_child_weight);
    cfg.boost.subsample = b.value("subsample", cfg.boost.subsample);
    cfg.boost.colsample_bytree = b.value("colsample_bytree", cfg.boost.colsample_bytree);
    cfg.boost.n_estimators = b.value("n_estimators", cfg.boost.n_estimators);
    cfg.boost.gamma = b.value("gamma", cfg.boost.gamma);
    cfg.boost.lambda = b.value("lambda", cfg.boost.lambda);
  }
  if (j.contains("cv")) {
    const auto& c = j["cv"];
    cfg.cv.window_days = c.value("window_days", cfg.cv.window_days);
    cfg.cv.train_days = c.value("train_days", cfg.cv.train_days);
    cfg.cv.step_hours = c.value("step_hours", cfg.cv.step_hours);
    cfg.cv.test_fraction = c.value("test_fraction", cfg.cv.test_fraction);
    cfg.cv.replicates = c.value("replicates", cfg.cv.replicates);
    if (!(cfg.cv.test_fraction > 0 && cfg.cv.test_fraction < 1) || cfg.cv.replicates < 1)
      throw std::runtime_error("config: invalid cv parameters");
  }
  if (j.contains("driest")) {
    const auto& d = j["driest"];
    cfg.driest_replicates = d.value("replicates", cfg.driest_replicates);
    cfg.driest_omega = d.value("omega", cfg.driest_omega);
  }
  if (j.contains("synth")) {
    const auto& s = j["synth"];
    SynthConfig& sc = cfg.synth;
    sc.n_stations = s.value("n_stations", sc.n_stations);
    sc.span_days = s.value("span_days", sc.span_days);
    sc.lag_hours = s.value("lag_hours", sc.lag_hours);
    sc.rain_event_rate = s.value("rain_event_rate", sc.rain_event_rate);
    sc.rain_event_mean_hours = s.value("rain_event_mean_hours", sc.rain_event_mean_hours);
    sc.rain_mean_rate_mm = s.value("rain_mean_rate_mm", sc.rain_mean_rate_mm);
    sc.rain_absorption = s.value("rain_absorption", sc.rain_absorption);
    sc.noise_sd = s.value("noise_sd", sc.noise_sd);
    sc.fmc_cap = s.value("fmc_cap", sc.fmc_cap);
    sc.temp_base_c = s.value("temp_base_c", sc.temp_base_c);
    sc.temp_seasonal_amp = s.value("temp_seasonal_amp", sc.temp_seasonal_amp);
    sc.temp_diurnal_amp = s.value("temp_diurnal_amp", sc.temp_diurnal_amp);
    sc.rh_base = s.value("rh_base", sc.rh_base);
    sc.rh_diurnal_amp = s.value("rh_diurnal_amp", sc.rh_diurnal_amp);
    sc.seed = s.value("seed", sc.seed);
    if (s.contains("start_time"))
      sc.start_time = parse_time_or_throw(s["start_time"].get<std::string>(), "synth.start_time");
  }
  cfg.seed = j.value("seed", cfg.seed);
  cfg.threads = j.value("threads", cfg.threads);
  cfg.out_dir = j.value("out_dir", cfg.out_dir);
  cfg.dataset_csv = j.value("dataset_csv", cfg.dataset_csv);
  return cfg;
}

nlohmann::json RunConfig::to_json() const {
  json j;
  j["source"] = {{"mode", source_mode},
                 {"path", source_path},
                 {"api_url", api_url},
                 {"token_env", api_token_env}};
  j["bbox"] = {bbox.min_lat, bbox.min_lon, bbox.max_lat, bbox.max_lon};
  j["time_range"] = {format_iso8601(time_range.begin), format_iso8601(time_range.end)};
  j["qc"] = {{"fmc_min_pct", qc.fmc_min_pct},
             {"constant_run_hours", qc.constant_run_hours},
             {"exclude_stations", qc.exclude_stations},
             {"precip_rate_max", qc.precip_rate_max}};
  j["losses"] = {{"omega_min", omega_min},
                 {"omega_max", omega_max},
                 {"omega_count", omega_count},
                 {"include_ros", include_ros_loss},
                 {"ros_context", ros_ctx_to_json(loss_ros)}};
  j["eval_ros"] = ros_ctx_to_json(eval_ros);
  j["forest"] = {{"n_estimators", forest.n_estimators},
                 {"max_depth", forest.max_depth},
                 {"min_samples_split", forest.min_samples_split},
                 {"min_samples_leaf", forest.min_samples_leaf},
                 {"max_features", forest.max_features},
                 {"bootstrap", forest.bootstrap}};
  j["boost"] = {{"max_depth", boost.max_depth},
                {"eta", boost.eta},
                {"min_child_weight", boost.min_child_weight},
                {"subsample", boost.subsample},
                {"colsample_bytree", boost.colsample_bytree},
                {"n_estimators", boost.n_estimators},
                {"gamma", boost.gamma},
                {"lambda", boost.lambda}};
  j["cv"] = {{"window_days", cv.window_days},
             {"train_days", cv.train_days},
             {"step_hours", cv.step_hours},
             {"test_fraction", cv.test_fraction},
             {"replicates", cv.replicates}};
  j["driest"] = {{"replicates", driest_replicates}, {"omega", driest_omega}};
  j["synth"] = {{"n_stations", synth.n_stations},
                {"span_days", synth.span_days},
                {"lag_hours", synth.lag_hours},
                {"rain_event_rate", synth.rain_event_rate},
                {"rain_event_mean_hours", synth.rain_event_mean_hours},
                {"rain_mean_rate_mm", synth.rain_mean_rate_mm},
                {"rain_absorption", synth.rain_absorption},
                {"noise_sd", synth.noise_sd},
                {"fmc_cap", synth.fmc_cap},
                {"temp_base_c", synth.temp_base_c},
                {"temp_seasonal_amp", synth.temp_seasonal_amp},
                {"temp_diurnal_amp", synth.temp_diurnal_amp},
                {"rh_base", synth.rh_base},
                {"rh_diurnal_amp", synth.rh_diurnal_amp},
                {"seed", synth.seed},
                {"start_time", format_iso8601(synth.start_time)}};
  j["seed"] = seed;
  j["threads"] = threads;
  j["out_dir"] = out_dir;
  j["dataset_csv"] = dataset_csv;
  return j;
}

}  // namespace fmros
