#pragma once

#include <cstdint>
#include <vector>

#include "fmros/ingest.hpp"
#include "fmros/util/time.hpp"

namespace fmros {

// Synthetic hourly station generator. Weather follows seasonal and diurnal
// cycles with AR(1) noise and Poisson-started rain events; fuel moisture
// relaxes toward the drying equilibrium with the configured lag and absorbs
// rain directly:
//   fm[t+1] = fm[t] + (E[t] - fm[t]) * (1 - exp(-1/lag_hours))
//           + rain_absorption * precip[t] + noise
// floored at 1 percent.
struct SynthConfig {
  int n_stations = 40;
  int span_days = 120;
  double lag_hours = 10.0;

  double rain_event_rate = 0.012;      // per-hour start probability
  double rain_event_mean_hours = 3.0;  // geometric event length
  double rain_mean_rate_mm = 2.5;      // exponential intensity while raining
  double rain_absorption = 2.0;        // percent FMC per mm
  double noise_sd = 0.25;              // process noise, percent FMC
  double fmc_cap = 60.0;
  double init_fmc_offset = 0.0;        // starting displacement from E[0]

  // Climate. Temperatures in Celsius, humidity in percent.
  double temp_base_c = 12.0;
  double temp_seasonal_amp = 10.0;
  double temp_diurnal_amp = 8.0;
  double temp_noise_sd = 1.5;
  double lapse_c_per_1000ft = -1.9;
  double rh_base = 55.0;
  double rh_diurnal_amp = 18.0;
  double rh_noise_sd = 6.0;
  double rh_temp_coupling = 1.2;  // percent RH lost per degree of warm anomaly
  double wind_mean = 2.7;         // m/s
  double solar_max = 1000.0;      // W/m^2

  BBox area{37.0, -111.0, 46.0, -95.0};
  double elevation_min_ft = 1000.0;
  double elevation_max_ft = 11555.0;

  UtcSeconds start_time = timeutil::from_civil(2023, 5, 17, 0, 0, 0);
  std::uint64_t seed = 20230517;
};

std::vector<StationSeries> synth_generate(const SynthConfig& cfg);

// One moisture update step (noise supplied explicitly; pass 0 for the
// deterministic path).
double synth_step(double fm, double equilibrium_pct, double precip_mm, double noise,
                  const SynthConfig& cfg);

}  // namespace fmros
