#pragma once

// Exact O(D^2) t-SNE of document-topic vectors into two dimensions.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "lexcluster/matrix.hpp"
#include "lexcluster/util.hpp"

namespace lexcluster {

struct TsneParams {
  double perplexity = 30.0;
  std::size_t iterations = 1000;
  double learning_rate = 200.0;
  std::uint64_t seed = 1;
  double early_exaggeration = 12.0;
  std::size_t exaggeration_iterations = 250;
  double initial_momentum = 0.5;
  double final_momentum = 0.8;
  std::size_t momentum_switch = 250;
  double init_sigma = 1e-4;
  double duplicate_jitter = 1e-10;
  double entropy_tolerance = 1e-5;
  std::size_t kl_every = 1;  // record KL every n iterations (it costs one extra kernel pass)
};

struct Embedding2D {
  std::vector<std::string> ids;
  std::vector<std::array<double, 2>> coords;
  double kl_divergence = 0.0;
  std::vector<double> kl_trace;  // entry i: KL after iteration (i + 1) * kl_every
  TsneParams params;
};

namespace detail {

inline Matrix<double> squared_distances(const Matrix<double>& x) {
  const auto n = x.rows();
  Matrix<double> d(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < x.cols(); ++k) {
        const double diff = x(i, k) - x(j, k);
        s += diff * diff;
      }
      d(i, j) = d(j, i) = s;
    }
  }
  return d;
}

}  // namespace detail

// Row-conditional affinities p_{j|i}; each row's Gaussian precision is found
// by bisection so the row entropy matches log(perplexity). Rows sum to 1.
inline Matrix<double> conditional_affinities(const Matrix<double>& x, double perplexity,
                                             double tolerance = 1e-5) {
  const auto n = x.rows();
  const auto dist = detail::squared_distances(x);
  const double target = std::log(perplexity);
  Matrix<double> p(n, n, 0.0);
  std::vector<double> row(n);
  for (std::size_t i = 0; i < n; ++i) {
    double beta = 1.0;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    double entropy = 0.0;
    // Shift by the nearest distance to avoid underflow for large beta.
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) dmin = std::min(dmin, dist(i, j));
    }
    for (int step = 0; step < 200; ++step) {
      double sum = 0.0, weighted = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        row[j] = j == i ? 0.0 : std::exp(-beta * (dist(i, j) - dmin));
        sum += row[j];
        weighted += row[j] * (dist(i, j) - dmin);
      }
      entropy = std::log(sum) + beta * weighted / sum;
      for (std::size_t j = 0; j < n; ++j) p(i, j) = row[j] / sum;
      const double diff = entropy - target;
      if (std::abs(diff) < tolerance) break;
      if (diff > 0) {
        lo = beta;
        beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
      } else {
        hi = beta;
        beta = std::isinf(lo) ? beta / 2.0 : 0.5 * (beta + lo);
      }
    }
  }
  return p;
}

// (P + P^T) / 2D; sums to 1.
inline Matrix<double> joint_affinities(const Matrix<double>& conditional) {
  const auto n = conditional.rows();
  Matrix<double> p(n, n, 0.0);
  const double scale = 1.0 / (2.0 * static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) p(i, j) = (conditional(i, j) + conditional(j, i)) * scale;
  }
  return p;
}

inline Embedding2D tsne(const std::vector<std::string>& ids, const Matrix<double>& input,
                        const TsneParams& params = {}) {
  const auto n = input.rows();
  if (ids.size() != n) throw ValidationError("t-SNE: one id per row required");
  if (input.cols() < 1) throw ValidationError("t-SNE: input vectors must have at least one dimension");
  if (!(params.perplexity > 0.0)) throw ValidationError("t-SNE: perplexity must be positive");
  if (static_cast<double>(n) < 3.0 * params.perplexity) {
    throw ValidationError("t-SNE: need at least 3 x perplexity points (have " + std::to_string(n) +
                          ", perplexity " + format_double(params.perplexity) + ")");
  }
  for (double v : input.data()) {
    if (!std::isfinite(v)) throw ValidationError("t-SNE: non-finite input value");
  }

  Rng rng(params.seed);
  Matrix<double> x = input;
  {
    std::map<std::vector<double>, std::size_t> seen;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> key(x.row(i).begin(), x.row(i).end());
      if (!seen.emplace(std::move(key), i).second) {
        for (auto& v : x.row(i)) v += (rng.uniform() < 0.5 ? -1.0 : 1.0) * params.duplicate_jitter;
      }
    }
  }

  const auto p = joint_affinities(conditional_affinities(x, params.perplexity, params.entropy_tolerance));
  constexpr double kFloor = 1e-12;

  std::vector<std::array<double, 2>> y(n), update(n, {0.0, 0.0}), grad(n);
  for (auto& pt : y) pt = {rng.normal() * params.init_sigma, rng.normal() * params.init_sigma};

  Embedding2D out;
  out.ids = ids;
  out.params = params;
  Matrix<double> num(n, n, 0.0);

  auto recenter = [&] {
    double mx = 0.0, my = 0.0;
    for (const auto& pt : y) {
      mx += pt[0];
      my += pt[1];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    for (auto& pt : y) {
      pt[0] -= mx;
      pt[1] -= my;
    }
  };

  auto kernel = [&] {
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double dx = y[i][0] - y[j][0];
        const double dy = y[i][1] - y[j][1];
        const double q = 1.0 / (1.0 + dx * dx + dy * dy);
        num(i, j) = num(j, i) = q;
        z += 2.0 * q;
      }
    }
    return z;
  };

  auto kl = [&](double z) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const double pij = std::max(p(i, j), kFloor);
        const double qij = std::max(num(i, j) / z, kFloor);
        total += pij * std::log(pij / qij);
      }
    }
    return total;
  };

  recenter();
  for (std::size_t it = 0; it < params.iterations; ++it) {
    const double exaggeration = it < params.exaggeration_iterations ? params.early_exaggeration : 1.0;
    const double momentum = it < params.momentum_switch ? params.initial_momentum : params.final_momentum;
    const double z = kernel();
    for (std::size_t i = 0; i < n; ++i) {
      double gx = 0.0, gy = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const double mult = (exaggeration * p(i, j) - num(i, j) / z) * num(i, j);
        gx += mult * (y[i][0] - y[j][0]);
        gy += mult * (y[i][1] - y[j][1]);
      }
      grad[i] = {4.0 * gx, 4.0 * gy};
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (int d = 0; d < 2; ++d) {
        update[i][d] = momentum * update[i][d] - params.learning_rate * grad[i][d];
        y[i][d] += update[i][d];
      }
    }
    recenter();
    if (params.kl_every > 0 && (it + 1) % params.kl_every == 0) out.kl_trace.push_back(kl(kernel()));
  }
  out.kl_divergence = kl(kernel());
  for (const auto& pt : y) {
    if (!std::isfinite(pt[0]) || !std::isfinite(pt[1])) throw Error("t-SNE diverged");
  }
  out.coords = std::move(y);
  return out;
}

}  // namespace lexcluster
