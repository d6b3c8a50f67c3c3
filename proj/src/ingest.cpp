#include "fmros/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fmros/util/csv.hpp"

namespace fmros {

void QcReport::merge(const QcReport& other) {
  stations_in += other.stations_in;
  stations_kept += other.stations_kept;
  excluded_stations.insert(excluded_stations.end(), other.excluded_stations.begin(),
                           other.excluded_stations.end());
  records_in += other.records_in;
  fmc_below_min += other.fmc_below_min;
  fmc_constant_run += other.fmc_constant_run;
  precip_out_of_range += other.precip_out_of_range;
  duplicate_times_dropped += other.duplicate_times_dropped;
  notes.insert(notes.end(), other.notes.begin(), other.notes.end());
}

std::vector<std::optional<double>> precip_rate_from_accumulated(
    std::span<const std::optional<double>> accum, double rate_max) {
  std::vector<std::optional<double>> rate(accum.size());
  for (std::size_t i = 1; i < accum.size(); ++i) {
    if (!accum[i] || !accum[i - 1]) continue;
    const double diff = *accum[i] - *accum[i - 1];
    if (diff >= 0.0 && diff <= rate_max) rate[i] = diff;
  }
  return rate;
}

std::vector<std::optional<double>> precip_rate_from_accumulated(
    std::span<const double> accum, double rate_max) {
  std::vector<std::optional<double>> boxed(accum.begin(), accum.end());
  return precip_rate_from_accumulated(std::span<const std::optional<double>>(boxed), rate_max);
}

std::optional<StationSeries> clean_series(std::span<const RawObservation> raw,
                                          const QcConfig& qc, QcReport& report) {
  if (raw.empty()) return std::nullopt;
  report.stations_in += 1;
  report.records_in += static_cast<long long>(raw.size());

  const std::string& id = raw.front().station_id;
  if (std::find(qc.exclude_stations.begin(), qc.exclude_stations.end(), id) !=
      qc.exclude_stations.end()) {
    report.excluded_stations.push_back(id);
    report.notes.push_back(id + ": removed");
    return std::nullopt;
  }

  for (std::size_t i = 1; i < raw.size(); ++i) {
    if (raw[i].time < raw[i - 1].time)
      throw IngestError(IngestError::Code::unsorted,
                        "station " + id + ": observations not sorted by time");
  }

  StationSeries out;
  out.station_id = id;
  out.lat = raw.front().lat;
  out.lon = raw.front().lon;
  out.elevation_ft = raw.front().elevation_ft;

  // Drop duplicate timestamps (keep first) so record times are strictly
  // increasing.
  std::vector<const RawObservation*> rows;
  rows.reserve(raw.size());
  for (const auto& r : raw) {
    if (!rows.empty() && rows.back()->time == r.time) {
      ++report.duplicate_times_dropped;
      continue;
    }
    rows.push_back(&r);
  }

  const bool rates_supplied =
      std::any_of(rows.begin(), rows.end(), [](const RawObservation* r) {
        return r->precip_rate.has_value();
      });

  std::vector<std::optional<double>> rate;
  if (rates_supplied) {
    rate.reserve(rows.size());
    for (const auto* r : rows) {
      if (r->precip_rate && (*r->precip_rate < 0.0 || *r->precip_rate > qc.precip_rate_max)) {
        rate.emplace_back();
        ++report.precip_out_of_range;
      } else {
        rate.push_back(r->precip_rate);
      }
    }
  } else {
    std::vector<std::optional<double>> accum;
    accum.reserve(rows.size());
    for (const auto* r : rows) accum.push_back(r->accum_precip);
    rate = precip_rate_from_accumulated(accum, qc.precip_rate_max);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (accum[i] && accum[i - 1] && !rate[i]) ++report.precip_out_of_range;
    }
  }

  out.records.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const RawObservation& r = *rows[i];
    CleanRecord rec;
    rec.time = r.time;
    if (r.temp_c) rec.temp_k = *r.temp_c + 273.15;
    if (r.rh && *r.rh >= 0.0 && *r.rh <= 100.0) rec.rh = r.rh;
    rec.precip_rate = rate[i];
    rec.wind = r.wind;
    rec.solar = r.solar;
    if (r.fmc) {
      if (*r.fmc < qc.fmc_min_pct) {
        ++report.fmc_below_min;
      } else {
        rec.fmc = r.fmc;
      }
    }
    out.records.push_back(rec);
  }

  // Stuck-sensor scan: a stretch of identical consecutive FMC values whose
  // zero first-difference count reaches the configured run length is blanked
  // in full.
  if (qc.constant_run_hours > 0) {
    std::size_t i = 0;
    const std::size_t n = out.records.size();
    while (i < n) {
      if (!out.records[i].fmc) {
        ++i;
        continue;
      }
      std::size_t j = i + 1;
      while (j < n && out.records[j].fmc && *out.records[j].fmc == *out.records[i].fmc) ++j;
      const std::size_t run_values = j - i;
      if (run_values >= static_cast<std::size_t>(qc.constant_run_hours) + 1) {
        for (std::size_t k = i; k < j; ++k) out.records[k].fmc.reset();
        report.fmc_constant_run += static_cast<long long>(run_values);
      }
      i = j;
    }
  }

  report.stations_kept += 1;
  return out;
}

namespace {

using StationRows = std::map<std::string, std::vector<RawObservation>>;

std::vector<StationSeries> finalize(StationRows& grouped, const BBox& bbox,
                                    const TimeRange& range, const QcConfig& qc,
                                    QcReport& report, const std::string& source_desc) {
  std::vector<StationSeries> result;
  for (auto& [id, rows] : grouped) {
    if (rows.empty()) continue;
    if (!bbox.contains(rows.front().lat, rows.front().lon)) continue;
    std::stable_sort(rows.begin(), rows.end(),
                     [](const RawObservation& a, const RawObservation& b) {
                       return a.time < b.time;
                     });
    std::vector<RawObservation> in_range;
    in_range.reserve(rows.size());
    for (auto& r : rows) {
      if (range.contains(r.time)) in_range.push_back(std::move(r));
    }
    if (in_range.empty()) continue;
    auto cleaned = clean_series(in_range, qc, report);
    if (cleaned && !cleaned->records.empty()) result.push_back(std::move(*cleaned));
  }
  if (result.empty())
    throw IngestError(IngestError::Code::no_data,
                      "no station data in bbox/time range from " + source_desc);
  // map iteration already yields id order; keep it explicit.
  std::sort(result.begin(), result.end(),
            [](const StationSeries& a, const StationSeries& b) {
              return a.station_id < b.station_id;
            });
  return result;
}

std::optional<double> json_opt(const nlohmann::json& arr, std::size_t i) {
  if (i >= arr.size() || arr[i].is_null()) return std::nullopt;
  return arr[i].get<double>();
}

StationRows rows_from_json(const nlohmann::json& doc, const std::string& source_desc) {
  if (!doc.is_object() || !doc.contains("stations") || !doc["stations"].is_object())
    throw IngestError(IngestError::Code::malformed,
                      source_desc + ": expected top-level \"stations\" object");
  StationRows grouped;
  for (const auto& [id, st] : doc["stations"].items()) {
    if (!st.contains("times") || !st["times"].is_array())
      throw IngestError(IngestError::Code::malformed,
                        source_desc + ": station " + id + " has no times array");
    const auto& times = st["times"];
    const double lat = st.value("lat", 0.0);
    const double lon = st.value("lon", 0.0);
    const double elev = st.value("elevation_ft", 0.0);
    static const nlohmann::json kEmpty = nlohmann::json::array();
    auto series = [&](const char* key) -> const nlohmann::json& {
      return st.contains(key) ? st[key] : kEmpty;
    };
    const auto& fmc = series("fmc");
    const auto& temp = series("temp_c");
    const auto& rh = series("rh");
    const auto& precip = series("accum_precip_mm");
    const auto& wind = series("wind_ms");
    const auto& solar = series("solar_wm2");

    auto& rows = grouped[id];
    rows.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
      RawObservation obs;
      obs.station_id = id;
      const auto t = parse_iso8601(times[i].get<std::string>());
      if (!t)
        throw IngestError(IngestError::Code::malformed,
                          source_desc + ": bad timestamp for station " + id);
      obs.time = *t;
      obs.fmc = json_opt(fmc, i);
      obs.temp_c = json_opt(temp, i);
      obs.rh = json_opt(rh, i);
      obs.accum_precip = json_opt(precip, i);
      obs.wind = json_opt(wind, i);
      obs.solar = json_opt(solar, i);
      obs.lat = lat;
      obs.lon = lon;
      obs.elevation_ft = elev;
      rows.push_back(std::move(obs));
    }
  }
  return grouped;
}

}  // namespace

std::vector<StationSeries> load_stations_csv(const std::string& path, const BBox& bbox,
                                             const TimeRange& range, const QcConfig& qc,
                                             QcReport& report) {
  std::ifstream in(path);
  if (!in) throw IngestError(IngestError::Code::unreachable, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    throw IngestError(IngestError::Code::malformed, path + ": empty file");
  {
    auto hdr = csv::split_line(line);
    auto want = csv::split_line(kRawCsvHeader);
    if (hdr != want)
      throw IngestError(IngestError::Code::malformed, path + ": unexpected CSV header");
  }

  StationRows grouped;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto f = csv::split_line(line);
    if (f.size() != 11)
      throw IngestError(IngestError::Code::malformed,
                        path + ": line " + std::to_string(line_no) + ": expected 11 fields");
    RawObservation obs;
    obs.station_id = std::string(f[0]);
    const auto t = parse_iso8601(f[1]);
    if (!t)
      throw IngestError(IngestError::Code::malformed,
                        path + ": line " + std::to_string(line_no) + ": bad timestamp");
    obs.time = *t;
    obs.fmc = csv::parse_double(f[2]);
    obs.temp_c = csv::parse_double(f[3]);
    obs.rh = csv::parse_double(f[4]);
    obs.accum_precip = csv::parse_double(f[5]);
    obs.wind = csv::parse_double(f[6]);
    obs.solar = csv::parse_double(f[7]);
    obs.elevation_ft = csv::parse_double(f[8]).value_or(0.0);
    obs.lat = csv::parse_double(f[9]).value_or(0.0);
    obs.lon = csv::parse_double(f[10]).value_or(0.0);
    grouped[obs.station_id].push_back(std::move(obs));
  }
  return finalize(grouped, bbox, range, qc, report, path);
}

std::vector<StationSeries> load_stations_json(const std::string& path, const BBox& bbox,
                                              const TimeRange& range, const QcConfig& qc,
                                              QcReport& report) {
  std::ifstream in(path);
  if (!in) throw IngestError(IngestError::Code::unreachable, "cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw IngestError(IngestError::Code::malformed, path + ": " + e.what());
  }
  auto grouped = rows_from_json(doc, path);
  return finalize(grouped, bbox, range, qc, report, path);
}

namespace detail {

// Shared by the HTTP loader (ingest_api.cpp) after the body is fetched.
std::vector<StationSeries> stations_from_json_text(const std::string& body,
                                                   const std::string& source_desc,
                                                   const BBox& bbox, const TimeRange& range,
                                                   const QcConfig& qc, QcReport& report) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw IngestError(IngestError::Code::malformed, source_desc + ": " + e.what());
  }
  auto grouped = rows_from_json(doc, source_desc);
  return finalize(grouped, bbox, range, qc, report, source_desc);
}

}  // namespace detail

}  // namespace fmros
