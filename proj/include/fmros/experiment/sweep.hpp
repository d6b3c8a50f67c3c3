#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fmros/experiment/cv.hpp"
#include "fmros/experiment/stats.hpp"
#include "fmros/features.hpp"
#include "fmros/loss.hpp"
#include "fmros/models/model.hpp"

namespace fmros {

enum class ModelFamily { linear, forest, boost };

std::string_view model_family_name(ModelFamily family);

struct EvalRecord {
  int period_index = 0;
  int replicate = 0;
  std::string model;
  std::string loss;
  double rmse_fmc = 0.0;
  double rmse_ros = 0.0;
  long long n_test = 0;
  long long clamped_negative = 0;  // predictions clamped to 0 before the transform
};

struct SweepOptions {
  std::vector<LossSpec> losses;  // defaulted to the standard grid when empty
  std::vector<ModelFamily> models = {ModelFamily::linear, ModelFamily::forest,
                                     ModelFamily::boost};
  ForestParams forest;
  BoostParams boost;
  RosContext eval_ros;  // transform for the ROS-space metric
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = hardware concurrency
};

struct SweepResult {
  std::vector<EvalRecord> records;
  int skipped_periods = 0;
  long long clamped_negative_total = 0;
  std::vector<std::string> warnings;
};

// Fits every (period, model, loss) cell: train rows are the period's train
// window restricted to train stations, test rows the test window restricted
// to test stations. Weights come from the loss spec on the training
// response; both the FMC and transformed-ROS RMSE are recorded. Periods with
// an empty train or test selection are skipped with a warning. Per-fit seeds
// derive from (seed, replicate, period, model family) only, so losses share
// resampling streams and runs are reproducible for any thread count.
SweepResult run_sweep(const ModelDataset& data, std::span<const CvPeriod> periods,
                      const SweepOptions& options);

struct LossSummary {
  std::string loss;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double se = 0.0;  // standard error of the mean
  long long n = 0;
};

enum class Metric { fmc, ros };

// Pooled across models and periods, in first-appearance loss order.
std::vector<LossSummary> summarize_by_loss(std::span<const EvalRecord> records, Metric metric);

struct ModelLossSummary {
  std::string model;
  LossSummary summary;
};

std::vector<ModelLossSummary> summarize_by_model(std::span<const EvalRecord> records,
                                                 Metric metric);

struct LossTTest {
  std::string loss;
  PairedTResult test;
};

// Pairs each non-baseline loss with the baseline on matching
// (period, replicate, model) keys.
std::vector<LossTTest> paired_tests_vs_baseline(std::span<const EvalRecord> records,
                                                Metric metric,
                                                const std::string& baseline = "MSE");

struct DriestOptions {
  CvParams cv;          // window geometry used for scanning and the final split
  int replicates = 10;  // station-split repeats on the selected window
  std::vector<LossSpec> losses;  // default: MSE, best exponential, ROS
  std::vector<ModelFamily> models = {ModelFamily::linear, ModelFamily::forest,
                                     ModelFamily::boost};
  ForestParams forest;
  BoostParams boost;
  RosContext eval_ros;
  std::uint64_t seed = 1;
  int threads = 0;
};

struct DriestResult {
  UtcSeconds window_begin = 0;
  UtcSeconds window_end = 0;
  double mean_fmc = 0.0;
  double mean_ros = 0.0;
  SweepResult sweep;
  std::vector<LossTTest> tests_ros;
  std::vector<LossTTest> tests_fmc;
};

// Scans every candidate window for the lowest mean observed FMC (reporting
// its mean transformed ROS), then reruns the reduced loss grid on that
// window with `replicates` independent station splits.
DriestResult driest_period(const ModelDataset& data, const DriestOptions& options);

void write_records_csv(std::span<const EvalRecord> records, const std::string& path);
std::vector<EvalRecord> read_records_csv(const std::string& path);
void write_summary_csv(std::span<const LossSummary> summary, const std::string& path);
void write_model_summary_csv(std::span<const ModelLossSummary> summary, const std::string& path);
void write_ttests_csv(std::span<const LossTTest> tests, const std::string& path);

inline constexpr const char* kRecordsCsvHeader =
    "period,replicate,model,loss,rmse_fmc,rmse_ros,n_test";

}  // namespace fmros
