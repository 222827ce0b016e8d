#ifndef WLRA_GENERATORS_HPP
#define WLRA_GENERATORS_HPP

#include <cstdint>
#include <vector>

#include "wlra/matrix.hpp"
#include "wlra/weights.hpp"

namespace wlra {

// Mixture-of-Gaussians instance: n samples in d dimensions from k
// components with diagonal covariances whose variances take at most r
// distinct values per component.
struct MogSpec {
  int n = 0;
  int d = 0;
  int k = 1;
  int r = 1;
  std::uint64_t seed = 0;
};

struct MogData {
  Matrix a;                 // n x d samples
  Matrix w;                 // n x d inverse-variance weights
  std::vector<int> labels;  // component of each sample, in [0, k)
};

// Component c draws d standard-normal means and r variance values, each
// max(g^4, 1e-6) for a standard normal g; the d coordinates share the r
// values in contiguous blocks of ceil(d / r). Sample i picks its component
// uniformly, then adds sigma-scaled noise to the mean coordinatewise.
// W_ij = 1 / sigma^2 depends only on the component, so W has at most k
// distinct rows, each with at most r distinct values, and rank at most kr.
//
// Draw order from Rng(seed): for each component, d means then r variance
// draws; then for each sample, one component index then d noise draws.
MogData gen_mog(const MogSpec& spec);

// Planted low-rank instance with a factored positive weight.
struct PlantedSpec {
  int n = 0;
  int d = 0;
  int k = 1;            // planted signal rank
  int r = 1;            // weight rank
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

struct PlantedData {
  Matrix a;
  LowRankWeight w;
  LowRankPair a_true;
};

// W is a product of uniform(0.5, 1.5) factors of rank r (entrywise
// positive); the signal is a product of standard-normal factors of rank k;
// A adds entrywise noise_sigma-scaled Gaussian noise. With zero noise the
// optimal rank-k weighted loss is 0.
//
// Draw order from Rng(seed): W left factor row-major, W right factor
// row-major, signal left then right row-major, then noise row-major.
PlantedData gen_planted(const PlantedSpec& spec);

// Importance-score-shaped weight: a rank-1 product u v^T of entrywise
// |Gaussian| vectors plus a small entrywise |Gaussian| perturbation. For noise_frac <= 0.05 the first
// singular value retains at least 95% of the squared Frobenius mass
// (verified on the generated matrix). noise_frac must lie in [0, 0.3].
//
// Draw order from Rng(seed): u (n draws), v (d draws), then the
// perturbation row-major.
Matrix gen_fisher_like(int n, int d, double noise_frac, std::uint64_t seed);

}  // namespace wlra

#endif
