#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fmros/ingest.hpp"
#include "fmros/util/time.hpp"

namespace fmros {

// One blocked train/test window: the leading train_days of the window train,
// the remainder tests, and testing is restricted to a held-out station
// sample. Train and test stations are disjoint and every test time strictly
// follows every train time.
struct CvPeriod {
  int index = 0;
  int replicate = 0;
  UtcSeconds train_begin = 0;
  UtcSeconds train_end = 0;  // exclusive; test begins here
  UtcSeconds test_end = 0;   // exclusive
  std::vector<std::string> train_stations;
  std::vector<std::string> test_stations;
};

struct CvParams {
  int window_days = 30;
  int train_days = 28;
  int step_hours = 48;
  double test_fraction = 0.2;
  int replicates = 5;
};

// Slides the window by step_hours from range.begin; period count per
// replicate is floor((span - window) / step) + 1, so consecutive test
// windows abut without overlap. The station split is resampled independently
// per (replicate, period) from streams derived off `seed`. Throws
// std::invalid_argument when the span is shorter than the window, fewer than
// two stations are given, or the parameters are inconsistent.
std::vector<CvPeriod> make_periods(const TimeRange& range, std::span<const std::string> stations,
                                   const CvParams& params, std::uint64_t seed);

}  // namespace fmros
