#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fmros/kernels/kernels.hpp"

namespace fmros {

// Surface-fire parameter bundle for one Anderson fuel category, two dead
// size classes (1-hour and 10-hour). Values are in the customary units the
// published tables use; spread output is converted to m/s at the boundary.
struct FuelModel {
  std::string name = "closed timber litter";
  double dead_1h_load = 0.046;    // lb/ft^2
  double dead_10h_load = 0.115;   // lb/ft^2
  double sav_1h = 2000.0;         // ft^2/ft^3
  double sav_10h = 109.0;         // ft^2/ft^3
  double fuel_bed_depth = 0.2;    // ft
  double heat_content = 8000.0;   // Btu/lb
  double mineral_total = 0.0555;  // fraction
  double mineral_effective = 0.010;
  double particle_density = 32.0;        // lb/ft^3
  double moisture_of_extinction = 30.0;  // percent

  static FuelModel closed_timber_litter() { return FuelModel{}; }

  void validate() const;  // throws std::invalid_argument
};

struct RosContext {
  double wind_ms = 3.0;          // reference wind speed
  double slope_tan = 0.0;        // tangent of slope angle
  double wind_adjustment = 1.0;  // multiplier applied before the wind factor
  FuelModel fuel = FuelModel::closed_timber_litter();
};

// Steady-state surface spread rate in m/s for a dead fuel moisture content
// given in percent. Zero at and above the moisture of extinction; throws
// std::domain_error for negative moisture.
double ros(double fmc_pct, const RosContext& ctx);

// Context-constant part of the spread computation, reduced to the closed
// form the kernels evaluate in batch. Reusable across many moistures.
class RosEvaluator {
 public:
  explicit RosEvaluator(const RosContext& ctx);
  double operator()(double fmc_pct) const;
  void transform(std::span<const double> fmc, std::span<double> out) const;
  const kernels::RosCurveCoeffs& coeffs() const { return coeffs_; }

 private:
  kernels::RosCurveCoeffs coeffs_;
};

// (fmc, ros) pairs over an ascending moisture grid.
std::vector<std::pair<double, double>> ros_curve(const RosContext& ctx,
                                                 std::span<const double> fmc_grid);

enum class RosVary { wind, slope };

// (x, ros) pairs varying wind speed or slope tangent at fixed moisture.
std::vector<std::pair<double, double>> ros_sensitivity(const RosContext& base, RosVary vary,
                                                       std::span<const double> grid,
                                                       double fmc_pct);

// Looks the named category up in a JSON table of fuel models; unspecified
// fields keep the category-8 defaults.
FuelModel load_fuel_model(const std::string& path, const std::string& name);

void write_curve_csv(const std::string& path,
                     std::span<const std::pair<double, double>> curve,
                     const std::string& x_name = "fmc", const std::string& y_name = "ros");

}  // namespace fmros
