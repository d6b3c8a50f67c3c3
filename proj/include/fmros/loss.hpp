#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fmros/fire_ros.hpp"

namespace fmros {

// A named per-sample weighting rule. Weights depend on the observed response
// only, never on predictions.
struct LossSpec {
  enum class Kind { uniform, exponential, ros_curve };

  Kind kind = Kind::uniform;
  double omega = 0.0;   // exponential decay rate, >= 0
  RosContext ros_ctx;   // used by Kind::ros_curve
  std::string name = "MSE";

  static LossSpec mse();
  static LossSpec exponential(double omega);
  static LossSpec ros_weighted(const RosContext& ctx);

  // MSE, ten exponential rates evenly spaced over [0.01, 0.25], then the
  // spread-curve weighting: twelve specs in reporting order.
  static std::vector<LossSpec> standard_grid(const RosContext& ros_ctx);

  nlohmann::json to_json() const;
  static LossSpec from_json(const nlohmann::json& j);
};

// Label for an exponential rate, e.g. 0.0366667 -> "exp_0.0367".
std::string exponential_loss_name(double omega);

// w_i per the spec: 1, exp(-omega*y_i), or ros(y_i).
std::vector<double> loss_weights(const LossSpec& spec, std::span<const double> y);

// (1/N) sum w_i (y_i - yhat_i)^2
double weighted_mse(std::span<const double> y, std::span<const double> yhat,
                    std::span<const double> w);

// Per-sample derivatives of w_i (y_i - yhat_i)^2 with respect to yhat_i:
// grad_i = 2 w_i (yhat_i - y_i), hess_i = 2 w_i. The 1/N factor is left to
// the learning rate.
void loss_grad_hess(std::span<const double> y, std::span<const double> yhat,
                    std::span<const double> w, std::vector<double>& grad,
                    std::vector<double>& hess);

}  // namespace fmros
