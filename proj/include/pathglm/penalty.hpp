#pragma once

#include "pathglm/types.hpp"

namespace pathglm {

enum class PenaltyKind { Lasso, Mcp };

struct PenaltySpec {
  PenaltyKind kind = PenaltyKind::Lasso;
  double gamma = 3.0;  // MCP concavity; ignored for Lasso; must be > 1

  // Throws std::invalid_argument when MCP has gamma <= 1.
  void validate() const;

  // A copy with gamma replaced by the effective concavity gamma/u, the
  // curvature rescaling used by the MCP minimum-eigenvalue adaptation.
  // u = NaN (absent) or a Lasso penalty returns *this unchanged.
  PenaltySpec effective(double u) const;
};

double soft_threshold(double z, double lambda);

// p_lambda(t). Lasso: lambda|t|.
// Mcp: lambda|t| - t^2/(2 gamma) for |t| < gamma lambda, else gamma lambda^2/2.
double penalty_value(const PenaltySpec& spec, double lambda, double t);

// dp/dt for t != 0. Lasso: lambda sgn(t). Mcp: lambda(1-|t|/(lambda gamma))_+ sgn(t).
// Throws std::invalid_argument at t = 0 (the subgradient interval lives in the
// active-set logic, not here).
double penalty_derivative(const PenaltySpec& spec, double lambda, double t);

// Unique minimizer of (v/2) b^2 - z b + penalty(b) for v > 0.
// Lasso: S(z,lambda)/v. Mcp: S(z,lambda)/(v-1/gamma) when |z| <= v gamma lambda,
// else z/v; requires v > 1/gamma (throws DegenerateCurvatureError otherwise).
double cd_update(const PenaltySpec& spec, double lambda, double z, double v);

}  // namespace pathglm
