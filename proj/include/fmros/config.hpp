#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "fmros/experiment/cv.hpp"
#include "fmros/experiment/synth.hpp"
#include "fmros/ingest.hpp"
#include "fmros/loss.hpp"
#include "fmros/models/boost.hpp"
#include "fmros/models/forest.hpp"

namespace fmros {

// One structured config file drives every command; defaults reproduce the
// standard setup end to end, so an empty JSON object is a valid config.
struct RunConfig {
  std::string source_mode = "file";  // file | api
  std::string source_path;           // .csv or .json station observations
  std::string api_url;
  std::string api_token_env = "FMROS_API_TOKEN";
  BBox bbox{37.0, -111.0, 46.0, -95.0};
  TimeRange time_range{0, timeutil::from_civil(2100, 1, 1)};

  QcConfig qc;

  double omega_min = 0.01;
  double omega_max = 0.25;
  int omega_count = 10;
  bool include_ros_loss = true;
  RosContext loss_ros;  // weighting curve context
  RosContext eval_ros;  // evaluation transform context

  ForestParams forest;
  BoostParams boost;
  CvParams cv;
  int driest_replicates = 10;
  double driest_omega = 0.01 + (0.25 - 0.01) / 9.0;  // grid's second rate

  SynthConfig synth;

  std::uint64_t seed = 20240517;
  int threads = 0;
  std::string out_dir = "out";
  std::string dataset_csv;  // defaults to <out_dir>/dataset.csv

  std::vector<LossSpec> loss_grid() const;
  std::vector<LossSpec> driest_losses() const;

  static RunConfig from_file(const std::string& path);
  static RunConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

}  // namespace fmros
