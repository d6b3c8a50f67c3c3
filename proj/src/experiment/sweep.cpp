#include "fmros/experiment/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "fmros/util/csv.hpp"
#include "fmros/util/rng.hpp"

namespace fmros {

std::string_view model_family_name(ModelFamily family) {
  switch (family) {
    case ModelFamily::linear: return "linear";
    case ModelFamily::forest: return "forest";
    case ModelFamily::boost: return "boost";
  }
  return "?";
}

namespace {

struct PeriodOutput {
  std::vector<EvalRecord> records;
  std::vector<std::string> warnings;
  bool skipped = false;
  long long clamped = 0;
};

PeriodOutput eval_period(const ModelDataset& data, const CvPeriod& period,
                         const SweepOptions& opt, const RosEvaluator& ros_eval) {
  PeriodOutput out;
  const std::unordered_set<std::string> train_set(period.train_stations.begin(),
                                                  period.train_stations.end());
  const std::unordered_set<std::string> test_set(period.test_stations.begin(),
                                                 period.test_stations.end());

  const ModelDataset train = data.filter([&](std::size_t i) {
    return data.times[i] >= period.train_begin && data.times[i] < period.train_end &&
           train_set.count(data.station_ids[i]) > 0;
  });
  const ModelDataset test = data.filter([&](std::size_t i) {
    return data.times[i] >= period.train_end && data.times[i] < period.test_end &&
           test_set.count(data.station_ids[i]) > 0;
  });

  const auto tag = "period " + std::to_string(period.index) + " rep " +
                   std::to_string(period.replicate);
  if (test.rows() == 0 || train.rows() <= kNumPredictors + 1) {
    out.skipped = true;
    out.warnings.push_back(tag + ": skipped (train rows " + std::to_string(train.rows()) +
                           ", test rows " + std::to_string(test.rows()) + ")");
    return out;
  }

  std::vector<double> test_ros(test.rows());
  ros_eval.transform(test.y, test_ros);

  std::vector<double> yhat_clamped, ros_hat(test.rows());
  for (std::size_t fam_idx = 0; fam_idx < opt.models.size(); ++fam_idx) {
    const ModelFamily family = opt.models[fam_idx];
    const std::uint64_t fit_seed =
        Rng::mix(Rng::mix(Rng::mix(opt.seed, static_cast<std::uint64_t>(period.replicate)),
                          static_cast<std::uint64_t>(period.index)),
                 static_cast<std::uint64_t>(fam_idx));

    for (const LossSpec& loss : opt.losses) {
      std::vector<double> yhat;
      try {
        switch (family) {
          case ModelFamily::linear: {
            const auto w = loss_weights(loss, train.y);
            yhat = predict(fit_linear(train, w), test);
            break;
          }
          case ModelFamily::forest: {
            const auto w = loss_weights(loss, train.y);
            yhat = predict(fit_forest(train, w, fit_seed, opt.forest), test);
            break;
          }
          case ModelFamily::boost: {
            yhat = predict(fit_boost(train, loss, fit_seed, opt.boost), test);
            break;
          }
        }
      } catch (const std::exception& e) {
        out.warnings.push_back(tag + ": " + std::string(model_family_name(family)) + "/" +
                               loss.name + " failed: " + e.what());
        continue;
      }

      EvalRecord rec;
      rec.period_index = period.index;
      rec.replicate = period.replicate;
      rec.model = std::string(model_family_name(family));
      rec.loss = loss.name;
      rec.n_test = static_cast<long long>(test.rows());
      rec.rmse_fmc = rmse(test.y, yhat);

      yhat_clamped = yhat;
      for (double& v : yhat_clamped) {
        if (v < 0.0) {
          v = 0.0;
          ++rec.clamped_negative;
        }
      }
      ros_eval.transform(yhat_clamped, ros_hat);
      rec.rmse_ros = rmse(test_ros, ros_hat);

      out.clamped += rec.clamped_negative;
      out.records.push_back(std::move(rec));
    }
  }
  return out;
}

}  // namespace

SweepResult run_sweep(const ModelDataset& data, std::span<const CvPeriod> periods,
                      const SweepOptions& options) {
  if (data.rows() == 0) throw std::invalid_argument("run_sweep: empty dataset");
  SweepOptions opt = options;
  if (opt.losses.empty()) opt.losses = LossSpec::standard_grid(RosContext{});
  if (opt.models.empty()) throw std::invalid_argument("run_sweep: no model families");

  const RosEvaluator ros_eval(opt.eval_ros);

  std::vector<PeriodOutput> slots(periods.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= periods.size()) return;
      try {
        slots[i] = eval_period(data, periods[i], opt, ros_eval);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  unsigned n_threads = opt.threads > 0 ? static_cast<unsigned>(opt.threads)
                                       : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, std::max<std::size_t>(periods.size(), 1));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  SweepResult result;
  for (auto& slot : slots) {
    if (slot.skipped) ++result.skipped_periods;
    result.clamped_negative_total += slot.clamped;
    for (auto& r : slot.records) result.records.push_back(std::move(r));
    for (auto& w : slot.warnings) result.warnings.push_back(std::move(w));
  }
  return result;
}

namespace {

double metric_of(const EvalRecord& r, Metric metric) {
  return metric == Metric::fmc ? r.rmse_fmc : r.rmse_ros;
}

LossSummary summarize_values(const std::string& loss, std::span<const double> values) {
  LossSummary s;
  s.loss = loss;
  s.n = static_cast<long long>(values.size());
  if (values.empty()) return s;
  double sum = 0.0;
  s.min = std::numeric_limits<double>::infinity();
  s.max = -std::numeric_limits<double>::infinity();
  for (double v : values) {
    sum += v;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  s.mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  if (values.size() > 1) {
    const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    s.se = sd / std::sqrt(static_cast<double>(values.size()));
  }
  return s;
}

}  // namespace

std::vector<LossSummary> summarize_by_loss(std::span<const EvalRecord> records, Metric metric) {
  std::vector<std::string> order;
  std::unordered_map<std::string, std::vector<double>> buckets;
  for (const auto& r : records) {
    auto [it, inserted] = buckets.try_emplace(r.loss);
    if (inserted) order.push_back(r.loss);
    it->second.push_back(metric_of(r, metric));
  }
  std::vector<LossSummary> out;
  out.reserve(order.size());
  for (const auto& loss : order) out.push_back(summarize_values(loss, buckets[loss]));
  return out;
}

std::vector<ModelLossSummary> summarize_by_model(std::span<const EvalRecord> records,
                                                 Metric metric) {
  std::vector<std::pair<std::string, std::string>> order;  // (model, loss)
  std::map<std::pair<std::string, std::string>, std::vector<double>> buckets;
  for (const auto& r : records) {
    const auto key = std::make_pair(r.model, r.loss);
    auto [it, inserted] = buckets.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(metric_of(r, metric));
  }
  std::vector<ModelLossSummary> out;
  out.reserve(order.size());
  for (const auto& key : order)
    out.push_back({key.first, summarize_values(key.second, buckets[key])});
  return out;
}

std::vector<LossTTest> paired_tests_vs_baseline(std::span<const EvalRecord> records,
                                                Metric metric, const std::string& baseline) {
  // Matched on (period, replicate, model); unpaired records are ignored.
  struct Key {
    int period;
    int replicate;
    std::string model;
    bool operator<(const Key& o) const {
      if (period != o.period) return period < o.period;
      if (replicate != o.replicate) return replicate < o.replicate;
      return model < o.model;
    }
  };
  std::map<Key, double> base_values;
  for (const auto& r : records) {
    if (r.loss == baseline) base_values[{r.period_index, r.replicate, r.model}] =
        metric_of(r, metric);
  }

  std::vector<std::string> order;
  std::unordered_map<std::string, std::pair<std::vector<double>, std::vector<double>>> pairs;
  for (const auto& r : records) {
    if (r.loss == baseline) continue;
    const auto it = base_values.find({r.period_index, r.replicate, r.model});
    if (it == base_values.end()) continue;
    auto [bucket, inserted] = pairs.try_emplace(r.loss);
    if (inserted) order.push_back(r.loss);
    bucket->second.first.push_back(metric_of(r, metric));
    bucket->second.second.push_back(it->second);
  }

  std::vector<LossTTest> out;
  for (const auto& loss : order) {
    const auto& [a, b] = pairs[loss];
    if (a.size() < 2) continue;
    out.push_back({loss, paired_t(a, b)});
  }
  return out;
}

DriestResult driest_period(const ModelDataset& data, const DriestOptions& options) {
  if (data.rows() == 0) throw std::invalid_argument("driest_period: empty dataset");

  UtcSeconds t_min = data.times.front(), t_max = data.times.front();
  for (UtcSeconds t : data.times) {
    t_min = std::min(t_min, t);
    t_max = std::max(t_max, t);
  }
  const UtcSeconds window = static_cast<UtcSeconds>(options.cv.window_days) * kSecondsPerDay;
  const UtcSeconds step = static_cast<UtcSeconds>(options.cv.step_hours) * kSecondsPerHour;
  const UtcSeconds span = t_max - t_min + kSecondsPerHour;
  if (span < window)
    throw std::invalid_argument("driest_period: data span shorter than one window");
  const auto n_windows = static_cast<int>((span - window) / step) + 1;

  const RosEvaluator ros_eval(options.eval_ros);
  std::vector<double> row_ros(data.rows());
  ros_eval.transform(data.y, row_ros);

  DriestResult result;
  double best_mean = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n_windows; ++k) {
    const UtcSeconds begin = t_min + static_cast<UtcSeconds>(k) * step;
    const UtcSeconds end = begin + window;
    double sum = 0.0, ros_sum = 0.0;
    long long n = 0;
    for (std::size_t i = 0; i < data.rows(); ++i) {
      if (data.times[i] < begin || data.times[i] >= end) continue;
      sum += data.y[i];
      ros_sum += row_ros[i];
      ++n;
    }
    if (n == 0) continue;
    const double mean = sum / static_cast<double>(n);
    if (mean < best_mean) {
      best_mean = mean;
      result.window_begin = begin;
      result.window_end = end;
      result.mean_fmc = mean;
      result.mean_ros = ros_sum / static_cast<double>(n);
    }
  }
  if (!std::isfinite(best_mean))
    throw std::invalid_argument("driest_period: no rows in any candidate window");

  // Unique stations in first-appearance order.
  std::vector<std::string> stations;
  {
    std::unordered_set<std::string> seen;
    for (const auto& id : data.station_ids) {
      if (seen.insert(id).second) stations.push_back(id);
    }
  }

  CvParams cv = options.cv;
  cv.replicates = options.replicates;
  const TimeRange range{result.window_begin, result.window_end};
  const auto periods = make_periods(range, stations, cv, options.seed);

  SweepOptions sweep_opt;
  sweep_opt.losses = options.losses;
  if (sweep_opt.losses.empty()) {
    const auto grid = LossSpec::standard_grid(options.eval_ros);
    sweep_opt.losses = {grid[0], grid[2], grid[11]};  // MSE, exp_0.0367, ROS
  }
  sweep_opt.models = options.models;
  sweep_opt.forest = options.forest;
  sweep_opt.boost = options.boost;
  sweep_opt.eval_ros = options.eval_ros;
  sweep_opt.seed = options.seed;
  sweep_opt.threads = options.threads;

  result.sweep = run_sweep(data, periods, sweep_opt);
  result.tests_ros = paired_tests_vs_baseline(result.sweep.records, Metric::ros);
  result.tests_fmc = paired_tests_vs_baseline(result.sweep.records, Metric::fmc);
  return result;
}

void write_records_csv(std::span<const EvalRecord> records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << kRecordsCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.period_index << ',' << r.replicate << ',' << r.model << ',' << r.loss << ','
        << csv::format_double(r.rmse_fmc) << ',' << csv::format_double(r.rmse_ros) << ','
        << r.n_test << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<EvalRecord> read_records_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || csv::split_line(line) != csv::split_line(kRecordsCsvHeader))
    throw std::runtime_error(path + ": unexpected records header");
  std::vector<EvalRecord> out;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = csv::split_line(line);
    if (f.size() != 7) throw std::runtime_error(path + ": bad record row");
    EvalRecord r;
    r.period_index = static_cast<int>(*csv::parse_double(f[0]));
    r.replicate = static_cast<int>(*csv::parse_double(f[1]));
    r.model = std::string(f[2]);
    r.loss = std::string(f[3]);
    r.rmse_fmc = *csv::parse_double(f[4]);
    r.rmse_ros = *csv::parse_double(f[5]);
    r.n_test = static_cast<long long>(*csv::parse_double(f[6]));
    out.push_back(std::move(r));
  }
  return out;
}

void write_summary_csv(std::span<const LossSummary> summary, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "loss,mean,min,max,se,n\n";
  for (const auto& s : summary) {
    out << s.loss << ',' << csv::format_double(s.mean) << ',' << csv::format_double(s.min) << ','
        << csv::format_double(s.max) << ',' << csv::format_double(s.se) << ',' << s.n << '\n';
  }
}

void write_model_summary_csv(std::span<const ModelLossSummary> summary, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "model,loss,mean,min,max,se,n\n";
  for (const auto& s : summary) {
    out << s.model << ',' << s.summary.loss << ',' << csv::format_double(s.summary.mean) << ','
        << csv::format_double(s.summary.min) << ',' << csv::format_double(s.summary.max) << ','
        << csv::format_double(s.summary.se) << ',' << s.summary.n << '\n';
  }
}

void write_ttests_csv(std::span<const LossTTest> tests, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "loss,t,p,mean_diff\n";
  for (const auto& t : tests) {
    out << t.loss << ',' << csv::format_double(t.test.t_stat) << ','
        << csv::format_double(t.test.p_value) << ',' << csv::format_double(t.test.mean_diff)
        << '\n';
  }
}

}  // namespace fmros
