#include "noisygd/planner.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace noisygd::planner {

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

double require_lipschitz(const LossClass& loss) {
  loss.validate();
  if (!loss.lipschitz)
    throw UnsupportedLossError("a Lipschitz constant is required for risk planning");
  return *loss.lipschitz;
}

// ceil of x as a positive iteration count.
std::int64_t ceil_steps(double x) {
  return static_cast<std::int64_t>(std::ceil(x));
}

}  // namespace

double excess_risk_bound(const LossClass& loss, std::int64_t n, std::int64_t d,
                         double eta, double sigma2, std::int64_t steps,
                         std::optional<double> set_radius) {
  const double lip = require_lipschitz(loss);
  require(n >= 1, "n must be >= 1");
  require(d >= 1, "d must be >= 1");
  require(positive_finite(eta), "eta must be positive and finite");
  require(std::isfinite(sigma2) && sigma2 >= 0.0, "sigma2 must be >= 0");
  require(steps >= 0, "steps must be >= 0");
  const double lambda = loss.lambda;
  const double beta = loss.beta;
  if (!(eta <= lambda / (2.0 * beta * beta)))
    throw PreconditionError("eta <= lambda/(2*beta^2)",
                            "eta = " + std::to_string(eta));
  double dist0 = 2.0 * lip / lambda;
  if (set_radius) {
    require(positive_finite(*set_radius), "set_radius must be positive and finite");
    dist0 = std::min(dist0, *set_radius);
  }
  const double contraction =
      std::exp(-lambda * eta * static_cast<double>(steps));
  return (beta / 2.0) * dist0 * dist0 * contraction +
         2.0 * beta * static_cast<double>(d) * sigma2 / lambda;
}

PlanResult plan_rdp(const PlanRequest& req) {
  const double lip = require_lipschitz(req.loss);
  require(req.n >= 1, "n must be >= 1");
  require(req.d >= 1, "d must be >= 1");
  if (!std::holds_alternative<RdpPoint>(req.budget))
    throw MismatchError("plan_rdp needs a Renyi budget (alpha, eps')");
  const RdpPoint budget = std::get<RdpPoint>(req.budget);
  require(std::isfinite(budget.alpha) && budget.alpha > 1.0, "alpha must be > 1");
  require(positive_finite(budget.epsilon), "eps' must be positive and finite");

  const double lambda = req.loss.lambda;
  const double beta = req.loss.beta;
  const double n2 = static_cast<double>(req.n) * static_cast<double>(req.n);
  const double arg = n2 * budget.epsilon / (budget.alpha * static_cast<double>(req.d));
  if (!(arg > 1.0))
    throw InfeasibleBudgetError(
        "budget infeasible: requires n^2 * eps' > alpha * d");

  PlanResult out;
  out.sigma2 = 4.0 * budget.alpha * lip * lip / (lambda * budget.epsilon * n2);
  out.k_star = ceil_steps(2.0 * beta * beta / (lambda * lambda) * std::log(arg));
  out.eta = lambda / (2.0 * beta * beta);
  out.predicted_risk = excess_risk_bound(req.loss, req.n, req.d, out.eta,
                                         out.sigma2, out.k_star, req.set_radius);
  out.floor = utility_floor(req.n, req.d, budget.epsilon);
  return out;
}

PlanResult plan_dp(const PlanRequest& req) {
  const double lip = require_lipschitz(req.loss);
  require(req.n >= 1, "n must be >= 1");
  require(req.d >= 1, "d must be >= 1");
  if (!std::holds_alternative<DpParams>(req.budget))
    throw MismatchError("plan_dp needs a classical budget (eps, delta)");
  const DpParams budget = std::get<DpParams>(req.budget);
  require(positive_finite(budget.eps), "eps must be positive and finite");
  require(std::isfinite(budget.delta) && budget.delta > 0.0 && budget.delta < 1.0,
          "delta must lie in (0, 1)");

  const double log1d = std::log(1.0 / budget.delta);
  if (!(budget.eps <= 2.0 * log1d))
    throw PreconditionError("eps <= 2*log(1/delta)",
                            "eps = " + std::to_string(budget.eps));

  const double lambda = req.loss.lambda;
  const double beta = req.loss.beta;
  const double n2 = static_cast<double>(req.n) * static_cast<double>(req.n);
  const double arg =
      n2 * budget.eps * budget.eps / (4.0 * log1d * static_cast<double>(req.d));
  if (!(arg > 1.0))
    throw InfeasibleBudgetError(
        "budget infeasible: requires n^2 * eps^2 > 4 * log(1/delta) * d");

  PlanResult out;
  out.sigma2 = 8.0 * lip * lip * (budget.eps + 2.0 * log1d) /
               (lambda * budget.eps * budget.eps * n2);
  out.k_star = ceil_steps(2.0 * beta * beta / (lambda * lambda) * std::log(arg));
  out.eta = lambda / (2.0 * beta * beta);
  out.predicted_risk = excess_risk_bound(req.loss, req.n, req.d, out.eta,
                                         out.sigma2, out.k_star, req.set_radius);
  out.floor = utility_floor(req.n, req.d, budget.eps);
  return out;
}

RdpPoint dp_budget_to_rdp(const DpParams& budget) {
  require(positive_finite(budget.eps), "eps must be positive and finite");
  require(std::isfinite(budget.delta) && budget.delta > 0.0 && budget.delta < 1.0,
          "delta must lie in (0, 1)");
  const double log1d = std::log(1.0 / budget.delta);
  return RdpPoint{1.0 + 2.0 / budget.eps * log1d, budget.eps / 2.0};
}

double utility_floor(std::int64_t n, std::int64_t d, double eps) {
  require(n >= 1, "n must be >= 1");
  require(d >= 1, "d must be >= 1");
  require(positive_finite(eps), "eps must be positive and finite");
  const double n2 = static_cast<double>(n) * static_cast<double>(n);
  return std::min(1.0, static_cast<double>(d) / (eps * eps * n2));
}

}  // namespace noisygd::planner
