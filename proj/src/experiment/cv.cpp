#include "fmros/experiment/cv.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fmros/util/rng.hpp"

namespace fmros {

std::vector<CvPeriod> make_periods(const TimeRange& range, std::span<const std::string> stations,
                                   const CvParams& params, std::uint64_t seed) {
  if (params.window_days <= 0 || params.train_days <= 0 || params.step_hours <= 0 ||
      params.replicates < 1)
    throw std::invalid_argument("make_periods: non-positive parameter");
  if (params.train_days >= params.window_days)
    throw std::invalid_argument("make_periods: train_days must be below window_days");
  if (!(params.test_fraction > 0.0 && params.test_fraction < 1.0))
    throw std::invalid_argument("make_periods: test_fraction must be in (0,1)");
  if (stations.size() < 2)
    throw std::invalid_argument("make_periods: need at least two stations");

  const UtcSeconds window = static_cast<UtcSeconds>(params.window_days) * kSecondsPerDay;
  const UtcSeconds train_len = static_cast<UtcSeconds>(params.train_days) * kSecondsPerDay;
  const UtcSeconds step = static_cast<UtcSeconds>(params.step_hours) * kSecondsPerHour;
  const UtcSeconds span = range.span();
  if (span < window)
    throw std::invalid_argument("make_periods: time range shorter than the window");

  const auto per_replicate = static_cast<int>((span - window) / step) + 1;
  const std::size_t n_stations = stations.size();
  auto n_test = static_cast<std::size_t>(
      std::lround(params.test_fraction * static_cast<double>(n_stations)));
  n_test = std::clamp<std::size_t>(n_test, 1, n_stations - 1);

  std::vector<CvPeriod> periods;
  periods.reserve(static_cast<std::size_t>(per_replicate) *
                  static_cast<std::size_t>(params.replicates));

  std::vector<std::size_t> order(n_stations);
  for (int rep = 0; rep < params.replicates; ++rep) {
    for (int idx = 0; idx < per_replicate; ++idx) {
      CvPeriod p;
      p.index = idx;
      p.replicate = rep;
      p.train_begin = range.begin + static_cast<UtcSeconds>(idx) * step;
      p.train_end = p.train_begin + train_len;
      p.test_end = p.train_begin + window;

      // Sampling is positional so station relabeling cannot change splits.
      Rng rng(Rng::mix(Rng::mix(seed, static_cast<std::uint64_t>(rep)),
                       static_cast<std::uint64_t>(idx)));
      std::iota(order.begin(), order.end(), std::size_t{0});
      for (std::size_t i = 0; i < n_test; ++i) {
        const std::size_t j = i + rng.index(n_stations - i);
        std::swap(order[i], order[j]);
      }
      p.test_stations.reserve(n_test);
      p.train_stations.reserve(n_stations - n_test);
      for (std::size_t i = 0; i < n_test; ++i) p.test_stations.push_back(stations[order[i]]);
      for (std::size_t i = n_test; i < n_stations; ++i)
        p.train_stations.push_back(stations[order[i]]);
      std::sort(p.test_stations.begin(), p.test_stations.end());
      std::sort(p.train_stations.begin(), p.train_stations.end());
      periods.push_back(std::move(p));
    }
  }
  return periods;
}

}  // namespace fmros
