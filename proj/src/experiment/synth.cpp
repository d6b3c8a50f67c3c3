#include "fmros/experiment/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "fmros/features.hpp"
#include "fmros/util/rng.hpp"

namespace fmros {

namespace {

constexpr double kTwoPi = 6.283185307179586477;

struct Ar1 {
  double phi;
  double scale;  // innovation scale for a stationary sd
  double state = 0.0;

  Ar1(double autocorr, double sd) : phi(autocorr), scale(sd * std::sqrt(1.0 - autocorr * autocorr)) {}

  double step(Rng& rng) {
    state = phi * state + scale * rng.normal();
    return state;
  }
};

}  // namespace

double synth_step(double fm, double equilibrium_pct, double precip_mm, double noise,
                  const SynthConfig& cfg) {
  const double pull = 1.0 - std::exp(-1.0 / cfg.lag_hours);
  double next = fm + (equilibrium_pct - fm) * pull + cfg.rain_absorption * precip_mm + noise;
  return std::clamp(next, 1.0, cfg.fmc_cap);
}

std::vector<StationSeries> synth_generate(const SynthConfig& cfg) {
  if (cfg.n_stations <= 0 || cfg.span_days <= 0 || cfg.lag_hours <= 0.0 ||
      cfg.rain_event_rate < 0.0 || cfg.noise_sd < 0.0 || cfg.fmc_cap <= 1.0)
    throw std::invalid_argument("synth_generate: invalid configuration");

  const int n_hours = cfg.span_days * 24;
  std::vector<StationSeries> out;
  out.reserve(static_cast<std::size_t>(cfg.n_stations));

  for (int s = 0; s < cfg.n_stations; ++s) {
    Rng rng(Rng::mix(cfg.seed, static_cast<std::uint64_t>(s)));

    StationSeries st;
    char id[16];
    std::snprintf(id, sizeof(id), "SYN%03d", s);
    st.station_id = id;
    st.lat = rng.uniform(cfg.area.min_lat, cfg.area.max_lat);
    st.lon = rng.uniform(cfg.area.min_lon, cfg.area.max_lon);
    st.elevation_ft = rng.uniform(cfg.elevation_min_ft, cfg.elevation_max_ft);
    st.records.reserve(static_cast<std::size_t>(n_hours));

    const double site_temp_offset =
        cfg.lapse_c_per_1000ft * (st.elevation_ft - 6000.0) / 1000.0 + 1.5 * rng.normal();
    const double site_rh_offset = 4.0 * rng.normal();

    Ar1 temp_noise(0.9, cfg.temp_noise_sd);
    Ar1 rh_noise(0.9, cfg.rh_noise_sd);

    bool raining = false;
    double fm = -1.0;  // initialized from the first equilibrium

    for (int h = 0; h < n_hours; ++h) {
      const UtcSeconds t = cfg.start_time + static_cast<UtcSeconds>(h) * kSecondsPerHour;
      const int hour = hour_of_day(t);
      const int doy = day_of_year(t);

      const double seasonal =
          cfg.temp_seasonal_amp * std::sin(kTwoPi * (doy - 81) / 365.25);
      const double diurnal = std::sin(kTwoPi * (hour - 15) / 24.0);
      const double temp_anom = seasonal + cfg.temp_diurnal_amp * diurnal + temp_noise.step(rng);
      const double temp_c = cfg.temp_base_c + site_temp_offset + temp_anom;

      // Rain event state machine.
      double precip = 0.0;
      if (raining) {
        if (rng.uniform() < 1.0 / cfg.rain_event_mean_hours) raining = false;
      } else if (rng.uniform() < cfg.rain_event_rate) {
        raining = true;
      }
      if (raining) {
        precip = std::min(-cfg.rain_mean_rate_mm * std::log(1.0 - rng.uniform()), 45.0);
      }

      double rh = cfg.rh_base + site_rh_offset - cfg.rh_temp_coupling * temp_anom -
                  cfg.rh_diurnal_amp * diurnal + rh_noise.step(rng);
      if (raining) rh = std::max(rh, 88.0);
      rh = std::clamp(rh, 3.0, 100.0);

      const double day_arc = std::sin(kTwoPi * (hour - 13) / 24.0);
      double solar = cfg.solar_max * std::max(0.0, day_arc);
      if (raining) solar *= 0.25;

      const double wind = std::abs(rng.normal()) * cfg.wind_mean * 1.1;

      const double eq = equilibrium(rh, temp_c + 273.15).drying;
      if (fm < 0.0) fm = std::clamp(eq + cfg.init_fmc_offset, 1.0, cfg.fmc_cap);

      CleanRecord rec;
      rec.time = t;
      rec.fmc = fm;
      rec.temp_k = temp_c + 273.15;
      rec.rh = rh;
      rec.precip_rate = precip;
      rec.wind = wind;
      rec.solar = solar;
      st.records.push_back(rec);

      fm = synth_step(fm, eq, precip, cfg.noise_sd * rng.normal(), cfg);
    }
    out.push_back(std::move(st));
  }
  return out;
}

}  // namespace fmros
