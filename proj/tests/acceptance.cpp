// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances and runtime budgets are pinned here on purpose; see
// README for the checklist this implements.

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wlra/comm.hpp"
#include "wlra/errors.hpp"
#include "wlra/generators.hpp"
#include "wlra/matrix.hpp"
#include "wlra/random.hpp"
#include "wlra/solvers.hpp"
#include "wlra/svd.hpp"
#include "wlra/weights.hpp"

using wlra::Index;
using wlra::LowRankPair;
using wlra::Matrix;
using wlra::Rng;
using wlra::Vector;
using wlra::Weight;

namespace {

std::string fmt(const char* pattern, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, value);
  return buf;
}

Matrix gaussian(Index n, Index d, Rng& rng) {
  Matrix m(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < d; ++j) m(i, j) = rng.normal();
  return m;
}

Matrix positive_low_rank(Index n, Index d, int r, Rng& rng) {
  Matrix m = Matrix::Zero(n, d);
  for (int q = 0; q < r; ++q) {
    Vector u(n), v(d);
    for (Index i = 0; i < n; ++i) u(i) = rng.uniform(0.5, 1.5);
    for (Index j = 0; j < d; ++j) v(j) = rng.uniform(0.5, 1.5);
    m += u * v.transpose();
  }
  return m;
}

// Zero-noise planted schedule shared by criteria 1, 3 and 7. The family is
// chosen so that the rank-rk tail of W o A vanishes: the reweighted solver
// then attains the global optimum, which is the only regime where the
// dominance comparison below is valid against solvers whose output rank is
// not capped at k (column subset selection with a large column budget, row
// sampling with t = n draws).
struct PlantedCase {
  int n, d, k, r;
  wlra::PlantedData data;
};

PlantedCase planted_case(int index) {
  Rng pick(1000 + static_cast<std::uint64_t>(index));
  const int n = 10 + static_cast<int>(pick.index(51));  // 10..60
  const int d = 8 + static_cast<int>(pick.index(53));   // 8..60
  const int r = 1 + static_cast<int>(pick.index(3));
  const int kmax = std::min({5, n, d});
  const int k = 1 + static_cast<int>(pick.index(static_cast<std::uint64_t>(kmax)));
  return {n, d, k, r,
          wlra::gen_planted({n, d, k, r, 0.0, 7000 + static_cast<std::uint64_t>(index)})};
}

// --------------------------------------------------------------- criteria

bool criterion_loss_identity(std::string& detail) {
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const PlantedCase c = planted_case(i);
    const Weight w(c.data.w);
    const auto sol = wlra::svd_w(c.data.a, w, c.k);
    const double loss = wlra::weighted_loss(c.data.a, w, sol);
    const Matrix wa = w.matrix().cwiseProduct(c.data.a);
    const int rk = std::min(c.r * c.k, std::min(c.n, c.d));
    const double tail = oracle::tail_energy(wa, rk);
    const double err = std::abs(loss - tail) / (1.0 + std::max(loss, tail));
    worst = std::max(worst, err);
    if (err > 1e-9) {
      detail = "instance " + std::to_string(i) + " identity error " + fmt("%.3g", err);
      return false;
    }
  }
  detail = "100 instances, worst deviation " + fmt("%.3g", worst);
  return true;
}

bool criterion_hadamard_rank(std::string& detail) {
  for (int i = 0; i < 200; ++i) {
    Rng rng(2000 + static_cast<std::uint64_t>(i));
    const int r = 1 + static_cast<int>(rng.index(4));
    const int k = 1 + static_cast<int>(rng.index(4));
    const Matrix w = positive_low_rank(30, 30, r, rng);
    Matrix ap = Matrix::Zero(30, 30);
    for (int q = 0; q < k; ++q)
      ap += gaussian(30, 1, rng) * gaussian(1, 30, rng);
    const int rank = wlra::hadamard_rank_check(w, ap);
    if (rank > r * k) {
      detail = "seed " + std::to_string(i) + " rank " + std::to_string(rank) + " exceeds " +
               std::to_string(r * k);
      return false;
    }
  }
  detail = "200 products, zero violations";
  return true;
}

bool criterion_dominance(std::string& detail) {
  for (int i = 0; i < 100; ++i) {
    const PlantedCase c = planted_case(i);
    const Weight w(c.data.w);
    const std::uint64_t seed = 100 + static_cast<std::uint64_t>(i);
    const double base = wlra::weighted_loss(c.data.a, w, wlra::svd_w(c.data.a, w, c.k));

    std::vector<std::pair<std::string, double>> rivals;
    rivals.emplace_back("em", wlra::em_wlra(c.data.a, w, c.k, 25).trace.back());
    rivals.emplace_back("greedy", wlra::greedy_wlra(c.data.a, w, c.k).trace.back());
    rivals.emplace_back("adam",
                        wlra::factored_gd_wlra(c.data.a, w, c.k, {}, seed).trace.back());
    rivals.emplace_back(
        "svd", wlra::weighted_loss(c.data.a, w, wlra::plain_svd_baseline(c.data.a, c.k)));
    rivals.emplace_back(
        "sample",
        wlra::weighted_loss(c.data.a, w, wlra::sample_wlra(c.data.a, w, c.n, seed).approx));
    rivals.emplace_back(
        "css", wlra::weighted_loss(
                   c.data.a, w, wlra::css_wlra(c.data.a, w, c.k, 0.1, seed).reconstruction()));

    for (const auto& [name, loss] : rivals)
      if (base > loss + 1e-9) {
        detail = "instance " + std::to_string(i) + ": svd_w " + fmt("%.3g", base) + " above " +
                 name + " " + fmt("%.3g", loss);
        return false;
      }
  }
  detail = "100 instances, 6 rivals each, bound never exceeded";
  return true;
}

bool criterion_structured_inverse(std::string& detail) {
  struct Family {
    std::string name;
    std::function<wlra::StructuredWeight(int)> build;
  };
  const std::vector<Family> families = {
      {"sparse", [](int n) { return wlra::make_low_rank_plus_sparse(n, n, 3, 11); }},
      {"diagonal", [](int n) { return wlra::make_low_rank_plus_diagonal(n); }},
      {"block_diagonal", [](int n) { return wlra::make_low_rank_plus_block_diagonal(n, 4); }},
      {"monotone",
       [](int n) {
         std::vector<int> prefix(static_cast<std::size_t>(n));
         for (int i = 0; i < n; ++i) prefix[static_cast<std::size_t>(i)] = i < n / 2 ? n : n / 2;
         return wlra::make_monotone_missing(prefix, n);
       }},
      {"banded", [](int n) { return wlra::make_banded(n, 2); }},
  };

  Rng rng(3000);
  for (const auto& family : families) {
    const auto w20 = family.build(20);
    const Matrix dense = w20.dense();
    for (int trial = 0; trial < 100; ++trial) {
      const LowRankPair f{gaussian(20, 2, rng), gaussian(2, 20, rng)};
      Vector x = gaussian(20, 1, rng).col(0);
      const Vector got = wlra::inverse_weight_apply_vector(w20, f, x);
      const Matrix p = f.dense();
      Vector want = Vector::Zero(20);
      for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 20; ++j)
          if (dense(i, j) != 0.0) want(i) += p(i, j) / dense(i, j) * x(j);
      const double err = (got - want).cwiseAbs().maxCoeff();
      if (err > 1e-10) {
        detail = family.name + " trial " + std::to_string(trial) + " error " + fmt("%.3g", err);
        return false;
      }
    }

    // Cost model check: counted multiply-adds from 20 to 200 must track the
    // storage growth within a factor of two.
    wlra::OpCounter small, large;
    const auto w200 = family.build(200);
    const LowRankPair f20{gaussian(20, 2, rng), gaussian(2, 20, rng)};
    const LowRankPair f200{gaussian(200, 2, rng), gaussian(2, 200, rng)};
    Vector x20 = gaussian(20, 1, rng).col(0);
    Vector x200 = gaussian(200, 1, rng).col(0);
    w20.inverse_apply(f20, x20, &small);
    w200.inverse_apply(f200, x200, &large);
    const double predicted = static_cast<double>(w200.storage_size()) /
                             static_cast<double>(w20.storage_size());
    const double measured =
        static_cast<double>(large.madds) / static_cast<double>(small.madds);
    if (measured > 2.0 * predicted || measured < 0.5 * predicted) {
      detail = family.name + " cost ratio " + fmt("%.2f", measured) + " vs storage ratio " +
               fmt("%.2f", predicted);
      return false;
    }
  }
  detail = "5 families, 100 pairs each within 1e-10, cost ratios linear";
  return true;
}

bool criterion_exact_recovery(std::string& detail) {
  for (int i = 0; i < 50; ++i) {
    Rng pick(4000 + static_cast<std::uint64_t>(i));
    const int r = 2 + static_cast<int>(pick.index(3));  // 2..4
    const int mmax = 60 / r;
    const int m = 2 + static_cast<int>(pick.index(static_cast<std::uint64_t>(mmax - 1)));
    const int n = r * m;
    const int s = 1 + static_cast<int>(pick.index(static_cast<std::uint64_t>(m)));
    const int k = 1 + static_cast<int>(pick.index(static_cast<std::uint64_t>(m)));
    const auto inst = wlra::build_lb_instance(n, r, s, k, 4500 + static_cast<std::uint64_t>(i));
    const Weight w(inst.w);
    const auto sol = wlra::svd_w(inst.a, w, k);
    const double loss = wlra::weighted_loss(inst.a, w, sol);
    if (loss > 1e-12) {
      detail = "instance " + std::to_string(i) + " loss " + fmt("%.3g", loss);
      return false;
    }
    try {
      const Matrix secret = wlra::recover_secret(sol, inst);
      if ((secret - inst.a_dense).cwiseAbs().maxCoeff() != 0.0) {
        detail = "instance " + std::to_string(i) + " recovered the wrong secret";
        return false;
      }
    } catch (const wlra::RecoveryError& e) {
      detail = "instance " + std::to_string(i) + ": " + e.what();
      return false;
    }
  }
  detail = "50 instances recovered exactly, losses below 1e-12";
  return true;
}

bool criterion_bit_scaling(std::string& detail) {
  // Sign matrices with exactly s nonzero entries per column, n = 1600 rows,
  // d = 16 columns, so d <= s holds at both tested sparsities. The column
  // budget is c = 4 (eps = 1, weight rank 1, k = 2); the payload then grows
  // with s while the header and coefficient sections stay near constant.
  const int n = 1600, d = 16, k = 2;
  const Weight w = Weight::ones(n, d);
  const auto encoded_bits = [&](int s, std::uint64_t seed) {
    Rng rng(seed);
    Matrix a = Matrix::Zero(n, d);
    for (int j = 0; j < d; ++j) {
      std::set<int> rows;
      while (static_cast<int>(rows.size()) < s)
        rows.insert(static_cast<int>(rng.index(n)));
      for (int i : rows) a(i, j) = rng.bit() ? 1.0 : -1.0;
    }
    const auto sol = wlra::css_wlra(a, w, k, 1.0);
    return wlra::encode_css(a, sol).total_bits;
  };

  std::string ratios;
  for (int trial = 0; trial < 5; ++trial) {
    const auto seed = 5000 + static_cast<std::uint64_t>(trial);
    const long long base = encoded_bits(400, seed);
    const long long doubled = encoded_bits(800, seed);
    const double ratio = static_cast<double>(doubled) / static_cast<double>(base);
    ratios += (ratios.empty() ? "" : ", ") + fmt("%.3f", ratio);
    if (ratio < 1.8 || ratio > 2.2) {
      detail = "trial " + std::to_string(trial) + " ratio " + fmt("%.3f", ratio) +
               " outside [1.8, 2.2]";
      return false;
    }
  }
  detail = "s 400 to 800, ratios " + ratios;
  return true;
}

bool criterion_sampling_bound(std::string& detail) {
  const double eps = 0.5;
  const double constant = std::pow(2.0 * std::sqrt(10.0) + 1.0, 2.0);
  int hits = 0;
  for (int i = 0; i < 50; ++i) {
    Rng pick(6000 + static_cast<std::uint64_t>(i));
    const int n = 20 + static_cast<int>(pick.index(41));
    const int d = 10 + static_cast<int>(pick.index(31));
    const int r = 1 + static_cast<int>(pick.index(3));
    const int k = 1 + static_cast<int>(pick.index(5));
    const auto data =
        wlra::gen_planted({n, d, std::min({k, n, d}), r, 0.0, 6500 + static_cast<std::uint64_t>(i)});
    const Weight w(data.w);

    // The optimum is zero and the planted matrix is its own best candidate,
    // so the pseudoinverse factor in the sample count comes directly from it.
    const Eigen::CompleteOrthogonalDecomposition<Matrix> cod(data.a);
    const double factor = (data.a * cod.pseudoInverse()).squaredNorm();
    const int t = static_cast<int>(std::ceil(constant * factor / (eps * eps)));

    const auto res = wlra::sample_wlra(data.a, w, t, 600 + static_cast<std::uint64_t>(i));
    const double loss = wlra::weighted_loss(data.a, w, res.approx);
    if (loss <= eps * data.a.squaredNorm()) ++hits;
  }
  detail = std::to_string(hits) + "/50 within the loss bound (need 45)";
  return hits >= 45;
}

bool criterion_monotone_traces(std::string& detail) {
  for (int i = 0; i < 50; ++i) {
    Rng rng(8000 + static_cast<std::uint64_t>(i));
    const int n = 15 + static_cast<int>(rng.index(26));
    const int d = 15 + static_cast<int>(rng.index(26));
    const int k = 1 + static_cast<int>(rng.index(5));
    const Matrix a = gaussian(n, d, rng);
    Matrix wm(n, d);
    for (Index p = 0; p < n; ++p)
      for (Index q = 0; q < d; ++q) wm(p, q) = rng.uniform(0.5, 1.5);
    const Weight w(wm, std::min(n, d));

    const auto em = wlra::em_wlra(a, w, k, 25);
    for (std::size_t j = 1; j < em.trace.size(); ++j)
      if (em.trace[j] > em.trace[j - 1] + 1e-9) {
        detail = "em trace rises at step " + std::to_string(j) + " on seed " + std::to_string(i);
        return false;
      }
    const auto greedy = wlra::greedy_wlra(a, w, k);
    for (std::size_t j = 1; j < greedy.trace.size(); ++j)
      if (greedy.trace[j] > greedy.trace[j - 1] + 1e-9) {
        detail =
            "greedy trace rises at step " + std::to_string(j) + " on seed " + std::to_string(i);
        return false;
      }
  }
  detail = "50 instances, em and greedy traces non-increasing";
  return true;
}

bool criterion_mixture_ordering(std::string& detail) {
  const int trials = 5, max_rank = 20;
  std::vector<double> weighted_mean(static_cast<std::size_t>(max_rank), 0.0);
  std::vector<double> plain_mean(static_cast<std::size_t>(max_rank), 0.0);
  double chain_mean = 0.0, base20_mean = 0.0;

  for (int trial = 0; trial < trials; ++trial) {
    const auto data = wlra::gen_mog({1000, 50, 5, 3, 9000 + static_cast<std::uint64_t>(trial)});
    const Weight w(data.w, 15);
    for (int kk = 1; kk <= max_rank; ++kk) {
      const double ours = wlra::weighted_loss(data.a, w, wlra::svd_w(data.a, w, kk));
      const double plain =
          wlra::weighted_loss(data.a, w, wlra::plain_svd_baseline(data.a, kk));
      weighted_mean[static_cast<std::size_t>(kk - 1)] += ours / trials;
      plain_mean[static_cast<std::size_t>(kk - 1)] += plain / trials;
      if (kk == max_rank) base20_mean += ours / trials;
    }
    chain_mean += wlra::svd_w_then_em(data.a, w, max_rank).loss / trials;
  }

  for (int kk = 1; kk <= max_rank; ++kk) {
    const double ours = weighted_mean[static_cast<std::size_t>(kk - 1)];
    const double plain = plain_mean[static_cast<std::size_t>(kk - 1)];
    if (!(ours < plain)) {
      detail = "rank " + std::to_string(kk) + ": weighted " + fmt("%.6g", ours) +
               " not below plain " + fmt("%.6g", plain);
      return false;
    }
  }
  if (chain_mean > base20_mean) {
    detail = "refinement mean " + fmt("%.6g", chain_mean) + " above base " +
             fmt("%.6g", base20_mean);
    return false;
  }
  detail = "weighted below plain at ranks 1..20, refinement no worse at 20";
  return true;
}

bool criterion_gradient_check(std::string& detail) {
  const double h = 1e-5;
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    Rng rng(9500 + static_cast<std::uint64_t>(i));
    const Matrix a = gaussian(6, 5, rng);
    Matrix wm(6, 5);
    for (Index p = 0; p < 6; ++p)
      for (Index q = 0; q < 5; ++q) wm(p, q) = rng.uniform(0.5, 1.5);
    const Weight w(wm, 5);
    Matrix u = gaussian(6, 2, rng);
    Matrix v = gaussian(2, 5, rng);
    const auto [gu, gv] = wlra::factored_gd_gradients(a, w, u, v);

    const auto loss_at = [&](const Matrix& uu, const Matrix& vv) {
      return wlra::weighted_loss(a, w, LowRankPair{uu, vv});
    };
    const auto check = [&](Matrix& param, const Matrix& analytic) {
      for (Index p = 0; p < param.rows(); ++p)
        for (Index q = 0; q < param.cols(); ++q) {
          const double keep = param(p, q);
          param(p, q) = keep + h;
          const double up = loss_at(u, v);
          param(p, q) = keep - h;
          const double down = loss_at(u, v);
          param(p, q) = keep;
          const double fd = (up - down) / (2.0 * h);
          const double an = analytic(p, q);
          const double rel = std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), 1e-8});
          worst = std::max(worst, rel);
          if (rel > 1e-4) return false;
        }
      return true;
    };
    if (!check(u, gu) || !check(v, gv)) {
      detail = "instance " + std::to_string(i) + " gradient mismatch, worst rel " +
               fmt("%.3g", worst);
      return false;
    }
  }
  detail = "10 instances, worst relative deviation " + fmt("%.3g", worst);
  return true;
}

bool criterion_mixture_weight_rank(std::string& detail) {
  for (int i = 0; i < 50; ++i) {
    Rng pick(11000 + static_cast<std::uint64_t>(i));
    const int k = 1 + static_cast<int>(pick.index(4));
    const int r = 1 + static_cast<int>(pick.index(4));
    const int n = 20 + static_cast<int>(pick.index(101));
    const int d = r + 4 + static_cast<int>(pick.index(37));
    const auto data = wlra::gen_mog({n, d, k, r, 11500 + static_cast<std::uint64_t>(i)});
    const int rank = oracle::numerical_rank(data.w);
    if (rank > k * r) {
      detail = "instance " + std::to_string(i) + " rank " + std::to_string(rank) + " exceeds " +
               std::to_string(k * r);
      return false;
    }
  }
  detail = "50 instances, numerical rank within k*r";
  return true;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* label;
    double budget;  // seconds, 0 means none
    bool (*run)(std::string&);
  };
  const std::vector<Criterion> criteria = {
      {1, "reweighted loss identity", 30, criterion_loss_identity},
      {2, "hadamard product rank bound", 30, criterion_hadamard_rank},
      {3, "reweighted dominance over the solver roster", 600, criterion_dominance},
      {4, "structured inverse equivalence and cost", 60, criterion_structured_inverse},
      {5, "exact recovery on the block diagonal family", 60, criterion_exact_recovery},
      {6, "encoded size doubles with column sparsity", 0, criterion_bit_scaling},
      {7, "row sampling loss bound", 120, criterion_sampling_bound},
      {8, "em and greedy monotone traces", 120, criterion_monotone_traces},
      {9, "mixture benchmark ordering", 600, criterion_mixture_ordering},
      {10, "factored gradient check", 10, criterion_gradient_check},
      {11, "mixture weight rank bound", 30, criterion_mixture_weight_rank},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    std::string detail;
    bool ok = false;
    const auto start = std::chrono::steady_clock::now();
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget > 0 && secs >= c.budget) {
      ok = false;
      detail += " [over budget " + fmt("%.0f", c.budget) + "s]";
    }
    std::printf("[%s] %2d %-46s %s (%.1fs)\n", ok ? "PASS" : "FAIL", c.id, c.label,
                detail.c_str(), secs);
    if (!ok) ++failures;
  }
  if (failures > 0) std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
