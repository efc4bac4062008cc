#pragma once

#include <cstdint>
#include <optional>
#include <variant>

#include "noisygd/accountant.hpp"

namespace noisygd::planner {

using accountant::DpParams;
using accountant::LossClass;
using accountant::RdpPoint;

// Problem description plus a privacy budget, either a Renyi point
// (order, eps') or classical (eps, delta). The loss certificate must carry a
// Lipschitz constant. When no constraint-set radius is supplied the planner
// assumes the optimum lies within distance 2L/lambda of the start.
struct PlanRequest {
  LossClass loss{};
  std::int64_t n = 0;
  std::int64_t d = 0;
  std::variant<RdpPoint, DpParams> budget{};
  std::optional<double> set_radius{};
};

// Utility-optimal hyperparameters meeting the budget with matching bounds.
struct PlanResult {
  double sigma2 = 0.0;
  std::int64_t k_star = 0;
  double eta = 0.0;
  double predicted_risk = 0.0;
  double floor = 0.0;
};

// Two-term excess-risk bound after `steps` iterations:
// (beta/2) D0^2 e^{-lambda eta K} + 2 beta d sigma2 / lambda, where D0 is the
// initial-distance bound min(2L/lambda, set_radius). Requires
// eta <= lambda / (2 beta^2) and a Lipschitz constant.
double excess_risk_bound(const LossClass& loss, std::int64_t n, std::int64_t d,
                         double eta, double sigma2, std::int64_t steps,
                         std::optional<double> set_radius = {});

// Smallest noise meeting a Renyi budget (order alpha, eps') together with the
// risk-minimising iteration count:
//   sigma2 = 4 alpha L^2 / (lambda eps' n^2),
//   K*     = ceil((2 beta^2 / lambda^2) log(n^2 eps' / (alpha d))),
//   eta    = lambda / (2 beta^2).
// Infeasible when n^2 eps' <= alpha d.
PlanResult plan_rdp(const PlanRequest& req);

// Classical-budget planner. Converts (eps, delta) through
// dp_budget_to_rdp and uses the budget-specific closed forms
//   sigma2 = 8 L^2 (eps + 2 log(1/delta)) / (lambda eps^2 n^2),
//   K*     = ceil((2 beta^2 / lambda^2) log(n^2 eps^2 / (4 log(1/delta) d))).
// Requires eps <= 2 log(1/delta); infeasible when n^2 eps^2 <= 4 log(1/delta) d.
PlanResult plan_dp(const PlanRequest& req);

// Renyi order and budget targeted by plan_dp:
// alpha = 1 + (2/eps) log(1/delta), eps' = eps / 2.
RdpPoint dp_budget_to_rdp(const DpParams& budget);

// Scale of the unavoidable excess risk under an (eps, *)-style budget:
// min{1, d / (eps^2 n^2)}, constants dropped.
double utility_floor(std::int64_t n, std::int64_t d, double eps);

}  // namespace noisygd::planner
