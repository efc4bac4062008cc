#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "noisygd/trainer.hpp"

namespace noisygd::oracle {

// Isotropic Gaussian N(mean, var * I).
struct GaussianIsotropic {
  std::vector<double> mean{};
  double var = 0.0;
};

// Two datasets differing in exactly one record.
struct NeighborPair {
  trainer::Dataset first{};
  trainer::Dataset second{};
  std::size_t differing_index = 0;
  double separation = 0.0;  // distance between the differing records

  void validate() const;
};

// Law of the iterate after `steps` rounds of unconstrained noisy gradient
// descent on the mean-squared loss, started at the point mass theta0:
//   mean_{k+1} = (1 - eta) mean_k + eta xbar,
//   var_{k+1}  = (1 - eta)^2 var_k + 2 eta sigma2,
// from (theta0, 0). The variance is dataset-size independent; only the mean
// depends on the records through their average. Requires 0 < eta < 1.
GaussianIsotropic gaussian_state(const trainer::Dataset& data, double eta,
                                 double sigma2, std::int64_t steps,
                                 std::span<const double> theta0);

// Renyi divergence of order alpha between equal-variance isotropic Gaussians:
// alpha * ||mean_a - mean_b||^2 / (2 var).
double renyi_gaussians(const GaussianIsotropic& a, const GaussianIsotropic& b,
                       double alpha);

// Neighboring pair attaining the matching lower bound: the differing record
// sits at +/- (sg/2) e_1, every other record at the origin; both datasets
// have domain radius sg/2.
NeighborPair worst_case_pair(std::int64_t n, std::int64_t d, double sg);

// Exact order-alpha divergence between the laws of the two iterates started
// at zero:
//   alpha sep^2 / (4 sigma2 n^2) * (2 - eta) (1 - (1-eta)^K) / (1 + (1-eta)^K),
// with (1-eta)^K evaluated in log space. The value is recomputed through the
// state evolution behind gaussian_state plus renyi_gaussians, and both routes
// must agree to 1e-9 relative, otherwise an Error is raised.
double exact_divergence(const NeighborPair& pair, double eta, double sigma2,
                        std::int64_t steps, double alpha);

}  // namespace noisygd::oracle
