#include "noisygd/oracle.hpp"

#include <cmath>
#include <string>

#include "noisygd/mathutil.hpp"

namespace noisygd::oracle {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

// Mean/variance evolution shared by gaussian_state and exact_divergence;
// callers have already validated their inputs.
GaussianIsotropic evolve_state(const trainer::Dataset& data, double eta,
                               double sigma2, std::int64_t steps,
                               std::span<const double> theta0) {
  const std::size_t d = data.dim();
  const double n = static_cast<double>(data.size());
  std::vector<double> xbar(d, 0.0);
  for (const auto& r : data.records)
    for (std::size_t j = 0; j < d; ++j) xbar[j] += r[j];
  for (double& x : xbar) x /= n;

  GaussianIsotropic state;
  state.mean.assign(theta0.begin(), theta0.end());
  state.var = 0.0;
  const double keep = 1.0 - eta;
  for (std::int64_t k = 0; k < steps; ++k) {
    for (std::size_t j = 0; j < d; ++j)
      state.mean[j] = keep * state.mean[j] + eta * xbar[j];
    state.var = keep * keep * state.var + 2.0 * eta * sigma2;
  }
  return state;
}

}  // namespace

void NeighborPair::validate() const {
  first.validate();
  second.validate();
  if (first.size() != second.size() || first.dim() != second.dim())
    throw MismatchError("neighboring datasets must have equal shape");
  std::size_t differing = 0;
  std::size_t where = 0;
  for (std::size_t i = 0; i < first.size(); ++i) {
    if (first.records[i] != second.records[i]) {
      differing += 1;
      where = i;
    }
  }
  if (differing != 1)
    throw MismatchError("neighboring datasets must differ in exactly one record");
  if (where != differing_index)
    throw MismatchError("differing_index does not locate the differing record");
  const double sep = std::sqrt(
      squared_distance(first.records[where], second.records[where]));
  if (!(std::abs(sep - separation) <= 1e-12 * std::max(1.0, sep)))
    throw MismatchError("separation does not match the differing records");
}

GaussianIsotropic gaussian_state(const trainer::Dataset& data, double eta,
                                 double sigma2, std::int64_t steps,
                                 std::span<const double> theta0) {
  data.validate();
  require(std::isfinite(eta) && eta > 0.0 && eta < 1.0, "eta must lie in (0, 1)");
  require(std::isfinite(sigma2) && sigma2 >= 0.0, "sigma2 must be >= 0");
  require(steps >= 0, "steps must be >= 0");
  if (theta0.size() != data.dim())
    throw MismatchError("theta0 dimension does not match the dataset");
  return evolve_state(data, eta, sigma2, steps, theta0);
}

double renyi_gaussians(const GaussianIsotropic& a, const GaussianIsotropic& b,
                       double alpha) {
  require(std::isfinite(alpha) && alpha > 1.0, "alpha must be > 1");
  if (a.mean.size() != b.mean.size())
    throw MismatchError("Gaussian means have different dimensions");
  if (a.var != b.var)
    throw MismatchError("Renyi divergence in closed form needs equal variances");
  require(a.var > 0.0, "variance must be positive");
  return alpha * squared_distance(a.mean, b.mean) / (2.0 * a.var);
}

NeighborPair worst_case_pair(std::int64_t n, std::int64_t d, double sg) {
  require(n >= 1, "n must be >= 1");
  require(d >= 1, "d must be >= 1");
  require(std::isfinite(sg) && sg > 0.0, "sg must be positive and finite");

  const std::size_t un = static_cast<std::size_t>(n);
  const std::size_t ud = static_cast<std::size_t>(d);
  std::vector<std::vector<double>> records(un, std::vector<double>(ud, 0.0));
  NeighborPair pair;
  records[0][0] = sg / 2.0;
  pair.first.records = records;
  records[0][0] = -sg / 2.0;
  pair.second.records = std::move(records);
  pair.first.domain_radius = sg / 2.0;
  pair.second.domain_radius = sg / 2.0;
  pair.differing_index = 0;
  pair.separation = sg;
  pair.validate();
  return pair;
}

double exact_divergence(const NeighborPair& pair, double eta, double sigma2,
                        std::int64_t steps, double alpha) {
  pair.validate();
  require(std::isfinite(eta) && eta > 0.0 && eta < 1.0, "eta must lie in (0, 1)");
  require(std::isfinite(sigma2) && sigma2 > 0.0, "sigma2 must be positive");
  require(steps >= 0, "steps must be >= 0");
  require(std::isfinite(alpha) && alpha > 1.0, "alpha must be > 1");
  if (steps == 0) return 0.0;  // identical point masses

  const double n = static_cast<double>(pair.first.size());
  const double sep = pair.separation;
  const double decay_k = pow_one_minus(eta, steps);
  const double closed = alpha * sep * sep / (4.0 * sigma2 * n * n) *
                        (2.0 - eta) * (1.0 - decay_k) / (1.0 + decay_k);

  // Independent route: evolve both state laws and compare them directly.
  // The pair was validated above, so the evolution core is used directly.
  const std::vector<double> theta0(pair.first.dim(), 0.0);
  const GaussianIsotropic ga = evolve_state(pair.first, eta, sigma2, steps, theta0);
  const GaussianIsotropic gb = evolve_state(pair.second, eta, sigma2, steps, theta0);
  const double evolved = renyi_gaussians(ga, gb, alpha);

  if (!(std::abs(closed - evolved) <= 1e-9 * std::max(std::abs(closed), 1e-300)))
    throw Error("internal: closed-form and state-evolution divergences disagree");
  return closed;
}

}  // namespace noisygd::oracle
