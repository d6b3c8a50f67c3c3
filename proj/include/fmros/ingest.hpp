#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fmros/util/time.hpp"

namespace fmros {

// One raw station-hour as it arrives from a file or the timeseries API.
// Precipitation is the accumulated gauge reading; rate is derived during
// cleaning. An already-derived rate may be supplied instead (re-cleaning an
// exported series), in which case the gauge value is ignored.
struct RawObservation {
  std::string station_id;
  UtcSeconds time = 0;
  std::optional<double> fmc;            // percent, 10-hour sensor
  std::optional<double> temp_c;         // Celsius
  std::optional<double> rh;             // percent, [0,100]
  std::optional<double> accum_precip;   // mm, gauge accumulation
  std::optional<double> precip_rate;    // mm/h, if already differenced
  std::optional<double> wind;           // m/s
  std::optional<double> solar;          // W/m^2
  double elevation_ft = 0;
  double lat = 0;
  double lon = 0;
};

struct CleanRecord {
  UtcSeconds time = 0;
  std::optional<double> fmc;          // percent; missing when filtered
  std::optional<double> temp_k;       // Kelvin
  std::optional<double> rh;           // percent
  std::optional<double> precip_rate;  // mm/h in [0,50]
  std::optional<double> wind;         // m/s
  std::optional<double> solar;        // W/m^2
};

struct StationSeries {
  std::string station_id;
  double lat = 0;
  double lon = 0;
  double elevation_ft = 0;
  std::vector<CleanRecord> records;
};

struct QcConfig {
  double fmc_min_pct = 1.0;
  // Runs of >= this many consecutive zero FMC first-differences are treated
  // as a stuck sensor and blanked.
  int constant_run_hours = 24;
  std::vector<std::string> exclude_stations = {"SAWC2"};
  double precip_rate_max = 50.0;  // mm/h
};

struct QcReport {
  int stations_in = 0;
  int stations_kept = 0;
  std::vector<std::string> excluded_stations;
  long long records_in = 0;
  long long fmc_below_min = 0;
  long long fmc_constant_run = 0;
  long long precip_out_of_range = 0;
  long long duplicate_times_dropped = 0;
  std::vector<std::string> notes;

  void merge(const QcReport& other);
};

struct BBox {
  double min_lat = -90, min_lon = -180, max_lat = 90, max_lon = 180;
  bool contains(double lat, double lon) const {
    return lat >= min_lat && lat <= max_lat && lon >= min_lon && lon <= max_lon;
  }
};

struct TimeRange {
  UtcSeconds begin = 0;
  UtcSeconds end = 0;  // exclusive
  bool contains(UtcSeconds t) const { return t >= begin && t < end; }
  UtcSeconds span() const { return end - begin; }
};

class IngestError : public std::runtime_error {
 public:
  enum class Code { unreachable, malformed, no_data, unsorted };
  IngestError(Code code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

// First difference of an accumulated gauge series; differences outside
// [0, rate_max] (bucket resets, spikes) become missing, as does element 0.
std::vector<std::optional<double>> precip_rate_from_accumulated(
    std::span<const std::optional<double>> accum, double rate_max = 50.0);
std::vector<std::optional<double>> precip_rate_from_accumulated(
    std::span<const double> accum, double rate_max = 50.0);

// Unit conversion plus QC filters for one station. Input must be sorted by
// time (throws IngestError::unsorted otherwise). Returns an empty optional
// when the station is on the exclusion list.
std::optional<StationSeries> clean_series(std::span<const RawObservation> raw,
                                          const QcConfig& qc, QcReport& report);

// Loaders. Each applies bbox/time filtering and clean_series, drops stations
// left with no records, and sorts the result by station id. Throws
// IngestError (no_data when nothing survives).
std::vector<StationSeries> load_stations_csv(const std::string& path, const BBox& bbox,
                                             const TimeRange& range, const QcConfig& qc,
                                             QcReport& report);
std::vector<StationSeries> load_stations_json(const std::string& path, const BBox& bbox,
                                              const TimeRange& range, const QcConfig& qc,
                                              QcReport& report);
// `url` is e.g. "http://host:port/stations/timeseries"; bbox/start/end/token
// go in the query string. Token may be empty.
std::vector<StationSeries> load_stations_api(const std::string& url, const std::string& token,
                                             const BBox& bbox, const TimeRange& range,
                                             const QcConfig& qc, QcReport& report);

inline constexpr const char* kRawCsvHeader =
    "station_id,time_utc,fmc,temp_c,rh,accum_precip_mm,wind_ms,solar_wm2,elevation_ft,lat,lon";

}  // namespace fmros
