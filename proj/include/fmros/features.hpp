#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "fmros/ingest.hpp"
#include "fmros/util/time.hpp"

namespace fmros {

// Wetting / drying equilibrium moisture content (percent) from relative
// humidity (percent) and air temperature (Kelvin):
//   wetting = 0.924*RH^0.679 + 0.000499*exp(0.1*RH)
//           + 0.18*(21.1 + 273.15 - T)*(1 - exp(-0.115*RH))
//   drying  = 0.618*RH^0.753 + 0.000454*exp(0.1*RH)
//           + 0.18*(21.1 + 273.15 - T)*(1 - exp(-0.115*RH))
// The temperature term is not clamped; hot conditions can drive both values
// negative.
struct Equilibrium {
  double wetting = 0;
  double drying = 0;
};

Equilibrium equilibrium(double rh_pct, double temp_k);

struct TimeFeatures {
  int hour = 0;  // 0-23 UTC
  int doy = 1;   // 1-366
};

inline TimeFeatures time_features(UtcSeconds t) {
  return {hour_of_day(t), day_of_year(t)};
}

inline constexpr int kNumPredictors = 9;
inline constexpr std::array<const char*, kNumPredictors> kPredictorNames = {
    "eq_drying", "precip_rate", "wind_ms", "solar_wm2", "elevation_ft",
    "hour",      "doy",         "lat",     "lon"};

// Model-ready rows: one per station-hour with a complete predictor set and an
// observed FMC. Features are stored row-major.
class ModelDataset {
 public:
  std::vector<std::string> station_ids;
  std::vector<UtcSeconds> times;
  std::vector<double> features;  // rows() x kNumPredictors
  std::vector<double> y;         // FMC percent

  std::size_t rows() const { return y.size(); }
  std::span<const double> row(std::size_t i) const {
    return {features.data() + i * kNumPredictors, kNumPredictors};
  }

  // Rows selected by predicate, preserving order.
  template <typename Pred>
  ModelDataset filter(Pred&& keep) const {
    ModelDataset out;
    for (std::size_t i = 0; i < rows(); ++i) {
      if (!keep(i)) continue;
      out.station_ids.push_back(station_ids[i]);
      out.times.push_back(times[i]);
      auto r = row(i);
      out.features.insert(out.features.end(), r.begin(), r.end());
      out.y.push_back(y[i]);
    }
    return out;
  }
};

// Builds the dataset from cleaned series. Rows with any missing predictor or
// missing FMC are dropped; the drying equilibrium is the single equilibrium
// predictor. Throws IngestError::no_data when nothing survives and
// std::invalid_argument on duplicate (station, time) pairs.
ModelDataset assemble(std::span<const StationSeries> stations);

void write_dataset_csv(const ModelDataset& data, const std::string& path);
ModelDataset read_dataset_csv(const std::string& path);

inline constexpr const char* kDatasetCsvHeader =
    "station_id,time_utc,eq_drying,precip_rate,wind_ms,solar_wm2,elevation_ft,hour,doy,lat,lon,fmc";

}  // namespace fmros
