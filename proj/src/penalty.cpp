#include "pathglm/penalty.hpp"

#include <cmath>

namespace pathglm {

void PenaltySpec::validate() const {
  if (kind == PenaltyKind::Mcp && !(gamma > 1.0))
    throw std::invalid_argument("MCP requires gamma > 1");
}

PenaltySpec PenaltySpec::effective(double u) const {
  if (kind == PenaltyKind::Lasso || std::isnan(u)) return *this;
  PenaltySpec out = *this;
  out.gamma = gamma / u;
  return out;
}

double soft_threshold(double z, double lambda) {
  if (z > lambda) return z - lambda;
  if (z < -lambda) return z + lambda;
  return 0.0;
}

double penalty_value(const PenaltySpec& spec, double lambda, double t) {
  if (lambda < 0.0) throw std::invalid_argument("penalty_value: lambda < 0");
  double a = std::fabs(t);
  if (spec.kind == PenaltyKind::Lasso) return lambda * a;
  double flat = spec.gamma * lambda;
  if (a >= flat) return 0.5 * spec.gamma * lambda * lambda;
  return lambda * a - t * t / (2.0 * spec.gamma);
}

double penalty_derivative(const PenaltySpec& spec, double lambda, double t) {
  if (t == 0.0)
    throw std::invalid_argument("penalty_derivative: t = 0 is outside the domain");
  if (spec.kind == PenaltyKind::Lasso) return lambda * sgn(t);
  double slope = 1.0 - std::fabs(t) / (lambda * spec.gamma);
  return slope > 0.0 ? lambda * slope * sgn(t) : 0.0;
}

double cd_update(const PenaltySpec& spec, double lambda, double z, double v) {
  if (!(v > 0.0)) throw std::invalid_argument("cd_update: v must be > 0");
  if (spec.kind == PenaltyKind::Lasso) return soft_threshold(z, lambda) / v;
  if (!(v > 1.0 / spec.gamma))
    throw DegenerateCurvatureError("cd_update: MCP needs v > 1/gamma");
  if (std::fabs(z) <= v * spec.gamma * lambda)
    return soft_threshold(z, lambda) / (v - 1.0 / spec.gamma);
  return z / v;
}

}  // namespace pathglm
