#include "fmros/features.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include "fmros/util/csv.hpp"

namespace fmros {

Equilibrium equilibrium(double rh_pct, double temp_k) {
  if (!(rh_pct >= 0.0 && rh_pct <= 100.0))
    throw std::domain_error("equilibrium: RH must be in [0,100] percent");
  if (!(temp_k > 0.0)) throw std::domain_error("equilibrium: temperature must be positive Kelvin");

  const double rh_exp = std::exp(0.1 * rh_pct);
  const double temp_term = 0.18 * (21.1 + 273.15 - temp_k) * (1.0 - std::exp(-0.115 * rh_pct));
  Equilibrium eq;
  eq.wetting = 0.924 * std::pow(rh_pct, 0.679) + 0.000499 * rh_exp + temp_term;
  eq.drying = 0.618 * std::pow(rh_pct, 0.753) + 0.000454 * rh_exp + temp_term;
  return eq;
}

ModelDataset assemble(std::span<const StationSeries> stations) {
  ModelDataset out;
  std::unordered_set<std::string> seen_keys;
  for (const auto& st : stations) {
    for (const auto& rec : st.records) {
      if (!rec.fmc || !rec.temp_k || !rec.rh || !rec.precip_rate || !rec.wind || !rec.solar)
        continue;
      std::string key = st.station_id + "@" + std::to_string(rec.time);
      if (!seen_keys.insert(std::move(key)).second)
        throw std::invalid_argument("assemble: duplicate (station,time): " + st.station_id +
                                    " " + format_iso8601(rec.time));
      const auto eq = equilibrium(*rec.rh, *rec.temp_k);
      const auto tf = time_features(rec.time);
      out.station_ids.push_back(st.station_id);
      out.times.push_back(rec.time);
      out.features.insert(out.features.end(),
                          {eq.drying, *rec.precip_rate, *rec.wind, *rec.solar, st.elevation_ft,
                           static_cast<double>(tf.hour), static_cast<double>(tf.doy), st.lat,
                           st.lon});
      out.y.push_back(*rec.fmc);
    }
  }
  if (out.rows() == 0)
    throw IngestError(IngestError::Code::no_data, "assemble: no complete rows");
  return out;
}

void write_dataset_csv(const ModelDataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << kDatasetCsvHeader << '\n';
  for (std::size_t i = 0; i < data.rows(); ++i) {
    out << data.station_ids[i] << ',' << format_iso8601(data.times[i]);
    for (double v : data.row(i)) out << ',' << csv::format_double(v);
    out << ',' << csv::format_double(data.y[i]) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

ModelDataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || csv::split_line(line) != csv::split_line(kDatasetCsvHeader))
    throw std::runtime_error(path + ": unexpected dataset header");
  ModelDataset data;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto f = csv::split_line(line);
    if (f.size() != 2 + kNumPredictors + 1)
      throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": bad field count");
    data.station_ids.emplace_back(f[0]);
    const auto t = parse_iso8601(f[1]);
    if (!t) throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": bad time");
    data.times.push_back(*t);
    for (int k = 0; k < kNumPredictors; ++k) {
      const auto v = csv::parse_double(f[2 + static_cast<std::size_t>(k)]);
      if (!v)
        throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": bad number");
      data.features.push_back(*v);
    }
    const auto yv = csv::parse_double(f[2 + kNumPredictors]);
    if (!yv) throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": bad fmc");
    data.y.push_back(*yv);
  }
  return data;
}

}  // namespace fmros
