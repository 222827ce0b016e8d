#include "wlra/generators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "wlra/errors.hpp"
#include "wlra/random.hpp"
#include "wlra/svd.hpp"

namespace wlra {

MogData gen_mog(const MogSpec& spec) {
  if (spec.n < 1 || spec.d < 1 || spec.k < 1 || spec.r < 1 || spec.d < spec.r)
    throw std::invalid_argument("gen_mog: need n, d >= 1, k, r >= 1, d >= r");
  Rng rng(spec.seed);
  const int block = (spec.d + spec.r - 1) / spec.r;

  Matrix means(spec.k, spec.d);
  Matrix variances(spec.k, spec.d);
  for (int c = 0; c < spec.k; ++c) {
    for (int j = 0; j < spec.d; ++j) means(c, j) = rng.normal();
    for (int v = 0; v < spec.r; ++v) {
      const double g = rng.normal();
      const double var = std::max(g * g * g * g, 1e-6);
      for (int j = v * block; j < std::min((v + 1) * block, spec.d); ++j) variances(c, j) = var;
    }
  }

  MogData out;
  out.a.resize(spec.n, spec.d);
  out.w.resize(spec.n, spec.d);
  out.labels.resize(static_cast<std::size_t>(spec.n));
  for (int i = 0; i < spec.n; ++i) {
    const int c = static_cast<int>(rng.index(static_cast<std::uint64_t>(spec.k)));
    out.labels[static_cast<std::size_t>(i)] = c;
    for (int j = 0; j < spec.d; ++j) {
      out.a(i, j) = means(c, j) + std::sqrt(variances(c, j)) * rng.normal();
      out.w(i, j) = 1.0 / variances(c, j);
    }
  }
  return out;
}

PlantedData gen_planted(const PlantedSpec& spec) {
  if (spec.n < 1 || spec.d < 1 || spec.r < 1 || spec.k < 1 ||
      spec.k > std::min(spec.n, spec.d))
    throw std::invalid_argument("gen_planted: need n, d >= 1, r >= 1, 1 <= k <= min(n, d)");
  if (!(spec.noise_sigma >= 0.0))
    throw std::invalid_argument("gen_planted: noise_sigma must be nonnegative");
  Rng rng(spec.seed);

  Matrix wl(spec.n, spec.r), wr(spec.r, spec.d);
  for (Index i = 0; i < wl.rows(); ++i)
    for (Index j = 0; j < wl.cols(); ++j) wl(i, j) = rng.uniform(0.5, 1.5);
  for (Index i = 0; i < wr.rows(); ++i)
    for (Index j = 0; j < wr.cols(); ++j) wr(i, j) = rng.uniform(0.5, 1.5);

  Matrix sl(spec.n, spec.k), sr(spec.k, spec.d);
  for (Index i = 0; i < sl.rows(); ++i)
    for (Index j = 0; j < sl.cols(); ++j) sl(i, j) = rng.normal();
  for (Index i = 0; i < sr.rows(); ++i)
    for (Index j = 0; j < sr.cols(); ++j) sr(i, j) = rng.normal();

  LowRankPair a_true(std::move(sl), std::move(sr));
  Matrix a = a_true.dense();
  if (spec.noise_sigma > 0.0)
    for (Index i = 0; i < a.rows(); ++i)
      for (Index j = 0; j < a.cols(); ++j) a(i, j) += spec.noise_sigma * rng.normal();

  return PlantedData{std::move(a), LowRankWeight(LowRankPair(std::move(wl), std::move(wr))),
                     std::move(a_true)};
}

Matrix gen_fisher_like(int n, int d, double noise_frac, std::uint64_t seed) {
  if (n < 1 || d < 1) throw std::invalid_argument("gen_fisher_like: need n, d >= 1");
  if (!(noise_frac >= 0.0 && noise_frac <= 0.3))
    throw std::invalid_argument("gen_fisher_like: noise_frac must lie in [0, 0.3]");
  Rng rng(seed);
  Vector u(n), v(d);
  for (Index i = 0; i < n; ++i) u[i] = std::abs(rng.normal());
  for (Index j = 0; j < d; ++j) v[j] = std::abs(rng.normal());
  Matrix w = u * v.transpose();
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < d; ++j) w(i, j) += noise_frac * std::abs(rng.normal());

  if (noise_frac <= 0.05) {
    const auto top = truncated_svd(w, 1);
    const double mass = top.singular_values[0] * top.singular_values[0] / w.squaredNorm();
    if (mass < 0.95)
      throw NumericalError("gen_fisher_like: top singular value holds only " +
                           std::to_string(mass) + " of the squared mass");
  }
  return w;
}

}  // namespace wlra
