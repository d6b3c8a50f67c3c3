#include "fmros/loss.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "fmros/kernels/kernels.hpp"

namespace fmros {

LossSpec LossSpec::mse() { return LossSpec{}; }

LossSpec LossSpec::exponential(double omega) {
  if (omega < 0) throw std::invalid_argument("loss: omega must be >= 0");
  LossSpec spec;
  spec.kind = Kind::exponential;
  spec.omega = omega;
  spec.name = exponential_loss_name(omega);
  return spec;
}

LossSpec LossSpec::ros_weighted(const RosContext& ctx) {
  LossSpec spec;
  spec.kind = Kind::ros_curve;
  spec.ros_ctx = ctx;
  spec.name = "ROS";
  return spec;
}

std::string exponential_loss_name(double omega) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", omega);
  std::string s(buf);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return "exp_" + s;
}

std::vector<LossSpec> LossSpec::standard_grid(const RosContext& ros_ctx) {
  std::vector<LossSpec> grid;
  grid.push_back(mse());
  constexpr double lo = 0.01, hi = 0.25;
  constexpr int count = 10;
  for (int i = 0; i < count; ++i) {
    grid.push_back(exponential(lo + (hi - lo) * i / (count - 1)));
  }
  grid.push_back(ros_weighted(ros_ctx));
  return grid;
}

nlohmann::json LossSpec::to_json() const {
  switch (kind) {
    case Kind::uniform:
      return {{"kind", "uniform"}};
    case Kind::exponential:
      return {{"kind", "exponential"}, {"omega", omega}};
    case Kind::ros_curve:
      return {{"kind", "ros_curve"},
              {"wind_ms", ros_ctx.wind_ms},
              {"slope_tan", ros_ctx.slope_tan},
              {"wind_adjustment", ros_ctx.wind_adjustment}};
  }
  return {};
}

LossSpec LossSpec::from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "uniform") return mse();
  if (kind == "exponential") return exponential(j.at("omega").get<double>());
  if (kind == "ros_curve") {
    RosContext ctx;
    ctx.wind_ms = j.value("wind_ms", ctx.wind_ms);
    ctx.slope_tan = j.value("slope_tan", ctx.slope_tan);
    ctx.wind_adjustment = j.value("wind_adjustment", ctx.wind_adjustment);
    return ros_weighted(ctx);
  }
  throw std::invalid_argument("loss: unknown kind \"" + kind + "\"");
}

std::vector<double> loss_weights(const LossSpec& spec, std::span<const double> y) {
  std::vector<double> w(y.size());
  switch (spec.kind) {
    case LossSpec::Kind::uniform:
      std::fill(w.begin(), w.end(), 1.0);
      break;
    case LossSpec::Kind::exponential:
      if (spec.omega < 0) throw std::invalid_argument("loss: omega must be >= 0");
      kernels::exp_weights(spec.omega, y, w);
      break;
    case LossSpec::Kind::ros_curve: {
      RosEvaluator eval(spec.ros_ctx);
      eval.transform(y, w);
      break;
    }
  }
  return w;
}

double weighted_mse(std::span<const double> y, std::span<const double> yhat,
                    std::span<const double> w) {
  if (y.size() != yhat.size() || y.size() != w.size())
    throw std::invalid_argument("weighted_mse: length mismatch");
  if (y.empty()) throw std::invalid_argument("weighted_mse: empty input");
  return kernels::weighted_sse(y, yhat, w) / static_cast<double>(y.size());
}

void loss_grad_hess(std::span<const double> y, std::span<const double> yhat,
                    std::span<const double> w, std::vector<double>& grad,
                    std::vector<double>& hess) {
  if (y.size() != yhat.size() || y.size() != w.size())
    throw std::invalid_argument("grad_hess: length mismatch");
  grad.resize(y.size());
  hess.resize(y.size());
  kernels::grad_hess(y, yhat, w, grad, hess);
}

}  // namespace fmros
