#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "noisygd/errors.hpp"

namespace noisygd::accountant {

// Analytic certificate of a loss family: strong convexity, smoothness, an
// optional Lipschitz constant, and the worst-case change of the summed
// gradient when one record is replaced.
struct LossClass {
  double lambda = 0.0;
  double beta = 0.0;
  std::optional<double> lipschitz{};
  double grad_sensitivity = 0.0;

  // Throws DomainError unless 0 < lambda <= beta, grad_sensitivity > 0, and,
  // when a Lipschitz constant is present, L > 0 and grad_sensitivity <= 2L.
  void validate() const;
};

// One point (alpha, epsilon) on a Renyi privacy curve.
struct RdpPoint {
  double alpha = 0.0;
  double epsilon = 0.0;
};

// Per-iteration Renyi privacy values at a fixed order: values[k] covers the
// output after k steps, k = 0..K.
struct RdpCurve {
  double alpha = 0.0;
  std::vector<double> values{};
};

// Classical (eps, delta) privacy parameters.
struct DpParams {
  double eps = 0.0;
  double delta = 0.0;
};

// Common argument bundle for the iteration bounds below.
struct AccountantInput {
  LossClass loss{};
  std::int64_t n = 0;      // dataset size
  double eta = 0.0;        // step size
  double sigma2 = 0.0;     // per-step noise variance sigma^2
  std::int64_t steps = 0;  // iteration count K >= 0
  double alpha = 0.0;      // Renyi order > 1

  void validate() const;
};

enum class LsiVariant { strongly_convex, squared_loss };

// Renyi divergence bound for releasing all of a T-long Gaussian path whose
// drift has sensitivity s_v: alpha * s_v^2 * T / (4 sigma2).
double linear_bound(double alpha, double sv, double sigma2, double time);

// Per-step moments-accountant baseline summed over K steps:
// alpha * S_g^2 * eta * K / (4 n^2 sigma2). Linear in K.
double composition_bound(const AccountantInput& in);

// Divergence recursion under a log-Sobolev constant c with splitting
// parameter gamma in (0, 1): with a1 = 2 (1-gamma) sigma2 c and
// a2 = S_g^2 / (4 gamma sigma2 n^2), R_0 = 0 and
// R_{k+1} = (R_k - (a2/a1) alpha) e^{-a1 eta} + (a2/a1) alpha.
// Returns the whole curve R_0..R_K.
RdpCurve rdp_recursion(const AccountantInput& in, double lsi_c, double gamma);

// Converging bound under a log-Sobolev constant c:
// alpha S_g^2 / (2 c sigma2^2 n^2) * (1 - e^{-sigma2 c eta K}).
double rdp_under_lsi(const AccountantInput& in, double lsi_c);

// Converging bound for lambda-strongly-convex, beta-smooth losses with
// eta < 1/beta: alpha S_g^2 / (lambda sigma2 n^2) * (1 - e^{-lambda eta K / 2}).
double converging_bound(const AccountantInput& in);

// Converging upper bound specialised to the mean-squared loss, 0 < eta < 1:
// alpha S_g^2 / ((2-eta) sigma2 n^2) * (1 - e^{-(2-eta) eta K / 2}).
double squared_loss_upper_bound(const AccountantInput& in);

// Matching lower bound attained by a worst-case pair, 0 < eta < 1:
// alpha S_g^2 / (4 sigma2 n^2) * (1 - e^{-eta K}).
double lower_bound(const AccountantInput& in);

// Log-Sobolev constant of the stationary dynamics. The strongly-convex
// variant returns lambda / (2 sigma2) and requires eta < 1/beta; the
// squared-loss variant returns (2 - eta) / (2 sigma2).
double lsi_constant(const LossClass& loss, double sigma2, double eta,
                    LsiVariant variant = LsiVariant::strongly_convex);

// Pointwise minimum of converging_bound and composition_bound.
double best_bound(const AccountantInput& in);

// Adaptive sequential composition at a common order.
RdpPoint rdp_compose(const RdpPoint& a, const RdpPoint& b);

// Conversion to (eps, delta): eps_dp = eps + log(1/delta) / (alpha - 1).
DpParams rdp_to_dp(const RdpPoint& p, double delta);

}  // namespace noisygd::accountant
