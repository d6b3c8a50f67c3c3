#include "fmros/fire_ros.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "fmros/util/csv.hpp"

namespace fmros {

namespace {

constexpr double kFtPerMin_to_MPerSec = 0.00508;
constexpr double kMPerSec_to_FtPerMin = 196.8503937007874;

}  // namespace

void FuelModel::validate() const {
  if (dead_1h_load < 0 || dead_10h_load < 0)
    throw std::invalid_argument("fuel model: loads must be >= 0");
  if (dead_1h_load + dead_10h_load <= 0)
    throw std::invalid_argument("fuel model: total load must be positive");
  if (!(moisture_of_extinction > 0 && moisture_of_extinction < 100))
    throw std::invalid_argument("fuel model: moisture of extinction must be in (0,100)");
  if (sav_1h <= 0 || sav_10h <= 0 || fuel_bed_depth <= 0 || heat_content <= 0 ||
      particle_density <= 0)
    throw std::invalid_argument("fuel model: geometry/heat parameters must be positive");
  if (mineral_total < 0 || mineral_total >= 1 || mineral_effective <= 0 || mineral_effective > 1)
    throw std::invalid_argument("fuel model: mineral fractions out of range");
}

// Rothermel (1972) surface spread with Albini's (1976) revisions, reduced to
// the moisture-dependent closed form
//   R(m) = scale * etaM(m/Mx) / (qa + qb*m)          [m/s, m as a fraction]
// where etaM(r) = 1 - 2.59 r + 5.11 r^2 - 3.52 r^3 is the moisture damping
// polynomial (exactly zero at r = 1) and qa + qb*m is the heat sink
// rho_b * sum_j f_j eps_j * (250 + 1116 m). Everything else — reaction
// velocity, propagating flux ratio, wind and slope factors — is constant for
// a fixed context and folds into `scale`. The two dead size classes share
// the single observed moisture, so category weighting only enters through
// the surface-area factors f_j.
RosEvaluator::RosEvaluator(const RosContext& ctx) {
  const FuelModel& f = ctx.fuel;
  f.validate();
  if (ctx.wind_ms < 0 || ctx.slope_tan < 0 || ctx.wind_adjustment < 0)
    throw std::invalid_argument("ros context: wind, slope and adjustment must be >= 0");

  // Surface-area weighting over the two dead classes.
  const double area_1h = f.sav_1h * f.dead_1h_load / f.particle_density;
  const double area_10h = f.sav_10h * f.dead_10h_load / f.particle_density;
  const double f_1h = area_1h / (area_1h + area_10h);
  const double f_10h = area_10h / (area_1h + area_10h);

  const double sav = f_1h * f.sav_1h + f_10h * f.sav_10h;  // characteristic SAV
  const double total_load = f.dead_1h_load + f.dead_10h_load;
  const double bulk_density = total_load / f.fuel_bed_depth;
  const double packing = bulk_density / f.particle_density;
  const double packing_opt = 3.348 * std::pow(sav, -0.8189);
  const double packing_rel = packing / packing_opt;

  const double sav15 = std::pow(sav, 1.5);
  const double gamma_max = sav15 / (495.0 + 0.0594 * sav15);
  const double aa = 133.0 * std::pow(sav, -0.7913);
  const double gamma = gamma_max * std::pow(packing_rel, aa) * std::exp(aa * (1.0 - packing_rel));

  const double net_load =
      (f_1h * f.dead_1h_load + f_10h * f.dead_10h_load) * (1.0 - f.mineral_total);
  const double eta_s = std::min(0.174 * std::pow(f.mineral_effective, -0.19), 1.0);

  const double xi = std::exp((0.792 + 0.681 * std::sqrt(sav)) * (packing + 0.1)) /
                    (192.0 + 0.2595 * sav);

  const double phi_slope = 5.275 * std::pow(packing, -0.3) * ctx.slope_tan * ctx.slope_tan;

  double phi_wind = 0.0;
  const double wind_ftmin = ctx.wind_ms * ctx.wind_adjustment * kMPerSec_to_FtPerMin;
  if (wind_ftmin > 0.0) {
    const double bw = 0.02526 * std::pow(sav, 0.54);
    const double cw = 7.47 * std::exp(-0.133 * std::pow(sav, 0.55));
    const double ew = 0.715 * std::exp(-0.000359 * sav);
    phi_wind = cw * std::pow(wind_ftmin, bw) * std::pow(packing_rel, -ew);
  }

  // Effective heating number per class; the moisture part of the heat of
  // preignition (250 + 1116 m) stays symbolic in m.
  const double eps_sum = f_1h * std::exp(-138.0 / f.sav_1h) + f_10h * std::exp(-138.0 / f.sav_10h);

  const double heat_source_const =
      gamma * net_load * f.heat_content * eta_s * xi * (1.0 + phi_wind + phi_slope);

  coeffs_.r_per_pct = 1.0 / f.moisture_of_extinction;
  coeffs_.scale = kFtPerMin_to_MPerSec * heat_source_const;
  coeffs_.qa = bulk_density * eps_sum * 250.0;
  // qb multiplies fmc in percent: 1116 per unit fraction -> 11.16 per percent.
  coeffs_.qb = bulk_density * eps_sum * 11.16;
}

double RosEvaluator::operator()(double fmc_pct) const {
  if (fmc_pct < 0.0) throw std::domain_error("ros: moisture content must be >= 0");
  double out = 0.0;
  kernels::scalar::ros_curve_eval(coeffs_, {&fmc_pct, 1}, {&out, 1});
  return out;
}

void RosEvaluator::transform(std::span<const double> fmc, std::span<double> out) const {
  for (double v : fmc) {
    if (v < 0.0) throw std::domain_error("ros: moisture content must be >= 0");
  }
  kernels::ros_curve_eval(coeffs_, fmc, out);
}

double ros(double fmc_pct, const RosContext& ctx) { return RosEvaluator(ctx)(fmc_pct); }

std::vector<std::pair<double, double>> ros_curve(const RosContext& ctx,
                                                 std::span<const double> fmc_grid) {
  for (std::size_t i = 1; i < fmc_grid.size(); ++i) {
    if (fmc_grid[i] < fmc_grid[i - 1])
      throw std::invalid_argument("ros_curve: grid must be ascending");
  }
  RosEvaluator eval(ctx);
  std::vector<double> values(fmc_grid.size());
  if (!fmc_grid.empty()) eval.transform(fmc_grid, values);
  std::vector<std::pair<double, double>> out;
  out.reserve(fmc_grid.size());
  for (std::size_t i = 0; i < fmc_grid.size(); ++i) out.emplace_back(fmc_grid[i], values[i]);
  return out;
}

std::vector<std::pair<double, double>> ros_sensitivity(const RosContext& base, RosVary vary,
                                                       std::span<const double> grid,
                                                       double fmc_pct) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 0 || (i > 0 && grid[i] < grid[i - 1]))
      throw std::invalid_argument("ros_sensitivity: grid must be ascending and non-negative");
  }
  std::vector<std::pair<double, double>> out;
  out.reserve(grid.size());
  for (double x : grid) {
    RosContext ctx = base;
    if (vary == RosVary::wind) {
      ctx.wind_ms = x;
    } else {
      ctx.slope_tan = x;
    }
    out.emplace_back(x, ros(fmc_pct, ctx));
  }
  return out;
}

FuelModel load_fuel_model(const std::string& path, const std::string& name) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open fuel model table " + path);
  nlohmann::json doc;
  in >> doc;
  if (!doc.is_object() || !doc.contains(name))
    throw std::runtime_error(path + ": no fuel model named " + name);
  const auto& j = doc[name];
  FuelModel f;
  f.name = name;
  f.dead_1h_load = j.value("dead_1h_load", f.dead_1h_load);
  f.dead_10h_load = j.value("dead_10h_load", f.dead_10h_load);
  f.sav_1h = j.value("sav_1h", f.sav_1h);
  f.sav_10h = j.value("sav_10h", f.sav_10h);
  f.fuel_bed_depth = j.value("fuel_bed_depth", f.fuel_bed_depth);
  f.heat_content = j.value("heat_content", f.heat_content);
  f.mineral_total = j.value("mineral_total", f.mineral_total);
  f.mineral_effective = j.value("mineral_effective", f.mineral_effective);
  f.particle_density = j.value("particle_density", f.particle_density);
  f.moisture_of_extinction = j.value("moisture_of_extinction", f.moisture_of_extinction);
  f.validate();
  return f;
}

void write_curve_csv(const std::string& path,
                     std::span<const std::pair<double, double>> curve,
                     const std::string& x_name, const std::string& y_name) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << x_name << ',' << y_name << '\n';
  for (const auto& [x, y] : curve)
    out << csv::format_double(x) << ',' << csv::format_double(y) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace fmros
