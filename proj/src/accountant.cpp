#include "noisygd/accountant.hpp"

#include <cmath>
#include <string>

#include "noisygd/mathutil.hpp"

namespace noisygd::accountant {

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

}  // namespace

void LossClass::validate() const {
  require(positive_finite(lambda), "loss.lambda must be positive and finite");
  require(std::isfinite(beta) && beta >= lambda,
          "loss.beta must be finite and >= loss.lambda");
  require(positive_finite(grad_sensitivity),
          "loss.grad_sensitivity must be positive and finite");
  if (lipschitz) {
    require(positive_finite(*lipschitz), "loss.lipschitz must be positive and finite");
    require(grad_sensitivity <= 2.0 * *lipschitz,
            "loss.grad_sensitivity must be <= 2 * loss.lipschitz");
  }
}

void AccountantInput::validate() const {
  loss.validate();
  require(n >= 1, "n must be >= 1");
  require(positive_finite(eta), "eta must be positive and finite");
  require(positive_finite(sigma2), "sigma2 must be positive and finite");
  require(steps >= 0, "steps must be >= 0");
  require(std::isfinite(alpha) && alpha > 1.0, "alpha must be > 1");
}

double linear_bound(double alpha, double sv, double sigma2, double time) {
  require(std::isfinite(alpha) && alpha > 1.0, "alpha must be > 1");
  require(std::isfinite(sv) && sv >= 0.0, "sv must be >= 0");
  require(positive_finite(sigma2), "sigma2 must be positive and finite");
  require(std::isfinite(time) && time >= 0.0, "time must be >= 0");
  return alpha * sv * sv * time / (4.0 * sigma2);
}

double composition_bound(const AccountantInput& in) {
  in.validate();
  const double sg = in.loss.grad_sensitivity;
  const double n2 = static_cast<double>(in.n) * static_cast<double>(in.n);
  return in.alpha * sg * sg * in.eta * static_cast<double>(in.steps) /
         (4.0 * n2 * in.sigma2);
}

RdpCurve rdp_recursion(const AccountantInput& in, double lsi_c, double gamma) {
  in.validate();
  require(positive_finite(lsi_c), "lsi_c must be positive and finite");
  if (!(std::isfinite(gamma) && gamma > 0.0 && gamma < 1.0))
    throw DomainError("gamma must lie in the open interval (0, 1)");

  const double sg = in.loss.grad_sensitivity;
  const double n2 = static_cast<double>(in.n) * static_cast<double>(in.n);
  const double a1 = 2.0 * (1.0 - gamma) * in.sigma2 * lsi_c;
  const double a2 = sg * sg / (4.0 * gamma * in.sigma2 * n2);
  const double fixed_point = (a2 / a1) * in.alpha;

  // R_k = F * P_k with P_{k+1} = (1 - e^{-a1 eta}) + e^{-a1 eta} P_k; keeping
  // the complement of the decay factor explicit avoids cancellation when
  // a1 * eta is tiny.
  const double decay = std::exp(-a1 * in.eta);
  const double gain = one_minus_exp_neg(a1 * in.eta);

  RdpCurve curve{in.alpha, std::vector<double>(static_cast<std::size_t>(in.steps) + 1)};
  double p = 0.0;
  curve.values[0] = 0.0;
  for (std::int64_t k = 1; k <= in.steps; ++k) {
    p = gain + decay * p;
    curve.values[static_cast<std::size_t>(k)] = fixed_point * p;
  }
  return curve;
}

double rdp_under_lsi(const AccountantInput& in, double lsi_c) {
  in.validate();
  require(positive_finite(lsi_c), "lsi_c must be positive and finite");
  const double sg = in.loss.grad_sensitivity;
  const double n2 = static_cast<double>(in.n) * static_cast<double>(in.n);
  const double limit =
      in.alpha * sg * sg / (2.0 * lsi_c * in.sigma2 * in.sigma2 * n2);
  return limit * one_minus_exp_neg(in.sigma2 * lsi_c * in.eta *
                                   static_cast<double>(in.steps));
}

double converging_bound(const AccountantInput& in) {
  in.validate();
  if (!(in.eta < 1.0 / in.loss.beta))
    throw PreconditionError("eta < 1/beta",
                            "eta = " + std::to_string(in.eta) +
                                ", 1/beta = " + std::to_string(1.0 / in.loss.beta));
  const double sg = in.loss.grad_sensitivity;
  const double n2 = static_cast<double>(in.n) * static_cast<double>(in.n);
  const double limit = in.alpha * sg * sg / (in.loss.lambda * in.sigma2 * n2);
  return limit * one_minus_exp_neg(in.loss.lambda * in.eta *
                                   static_cast<double>(in.steps) / 2.0);
}

double squared_loss_upper_bound(const AccountantInput& in) {
  in.validate();
  require(in.eta < 1.0, "eta must lie in (0, 1)");
  const double sg = in.loss.grad_sensitivity;
  const double n2 = static_cast<double>(in.n) * static_cast<double>(in.n);
  const double limit = in.alpha * sg * sg / ((2.0 - in.eta) * in.sigma2 * n2);
  return limit * one_minus_exp_neg((2.0 - in.eta) * in.eta *
                                   static_cast<double>(in.steps) / 2.0);
}

double lower_bound(const AccountantInput& in) {
  in.validate();
  require(in.eta < 1.0, "eta must lie in (0, 1)");
  const double sg = in.loss.grad_sensitivity;
  const double n2 = static_cast<double>(in.n) * static_cast<double>(in.n);
  const double limit = in.alpha * sg * sg / (4.0 * in.sigma2 * n2);
  return limit * one_minus_exp_neg(in.eta * static_cast<double>(in.steps));
}

double lsi_constant(const LossClass& loss, double sigma2, double eta,
                    LsiVariant variant) {
  require(positive_finite(sigma2), "sigma2 must be positive and finite");
  require(positive_finite(eta), "eta must be positive and finite");
  if (variant == LsiVariant::strongly_convex) {
    loss.validate();
    if (!(eta < 1.0 / loss.beta))
      throw PreconditionError("eta < 1/beta",
                              "eta = " + std::to_string(eta) +
                                  ", 1/beta = " + std::to_string(1.0 / loss.beta));
    return loss.lambda / (2.0 * sigma2);
  }
  require(eta < 2.0, "eta must lie in (0, 2) for the squared-loss constant");
  return (2.0 - eta) / (2.0 * sigma2);
}

double best_bound(const AccountantInput& in) {
  return std::min(converging_bound(in), composition_bound(in));
}

RdpPoint rdp_compose(const RdpPoint& a, const RdpPoint& b) {
  require(std::isfinite(a.alpha) && a.alpha > 1.0, "alpha must be > 1");
  require(std::isfinite(a.epsilon) && a.epsilon >= 0.0, "epsilon must be >= 0");
  require(std::isfinite(b.epsilon) && b.epsilon >= 0.0, "epsilon must be >= 0");
  if (a.alpha != b.alpha)
    throw MismatchError("cannot compose privacy curves at different orders");
  return RdpPoint{a.alpha, a.epsilon + b.epsilon};
}

DpParams rdp_to_dp(const RdpPoint& p, double delta) {
  require(std::isfinite(p.alpha) && p.alpha > 1.0, "alpha must be > 1");
  require(std::isfinite(p.epsilon) && p.epsilon >= 0.0, "epsilon must be >= 0");
  require(std::isfinite(delta) && delta > 0.0 && delta < 1.0,
          "delta must lie in (0, 1)");
  return DpParams{p.epsilon + std::log(1.0 / delta) / (p.alpha - 1.0), delta};
}

}  // namespace noisygd::accountant
