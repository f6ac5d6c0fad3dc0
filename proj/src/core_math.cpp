#include "sumfree/core_math.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "sumfree/errors.hpp"

namespace sumfree {

Distribution::Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
  require(!probs_.empty(), "distribution must have a nonempty ground set");
  double total = 0.0;
  for (double p : probs_) {
    require(std::isfinite(p) && p >= 0.0, "distribution entries must be nonnegative");
    total += p;
  }
  require(std::abs(total - 1.0) <= kSumTolerance,
          "distribution entries must sum to 1 (got " + std::to_string(total) + ")");
}

Distribution Distribution::uniform(std::size_t size) {
  require(size > 0, "uniform distribution needs a nonempty ground set");
  return Distribution(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

CountVector::CountVector(std::vector<std::uint64_t> counts) : counts_(std::move(counts)) {
  require(!counts_.empty(), "count vector must be nonempty");
  n_ = std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
  require(n_ > 0, "count vector must have a positive total");
}

Distribution CountVector::frequencies() const {
  std::vector<double> f(counts_.size());
  const double n = static_cast<double>(n_);
  for (std::size_t i = 0; i < counts_.size(); ++i) f[i] = static_cast<double>(counts_[i]) / n;
  return Distribution(std::move(f));
}

double entropy(const Distribution& d) {
  double h = 0.0;
  for (double p : d.probs()) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

Distribution pushforward(const Distribution& d, std::span<const std::size_t> map,
                         std::size_t target_size) {
  require(map.size() == d.size(), "pushforward map must be defined on every atom");
  std::vector<double> out(target_size, 0.0);
  for (std::size_t a = 0; a < map.size(); ++a) {
    require(map[a] < target_size, "pushforward map image out of range");
    out[map[a]] += d[a];
  }
  return Distribution(std::move(out));
}

BigInt factorial(std::uint64_t n) {
  BigInt r = 1;
  for (std::uint64_t k = 2; k <= n; ++k) r *= k;
  return r;
}

BigInt multinomial(const CountVector& c) {
  BigInt denom = 1;
  for (std::uint64_t k : c.counts()) denom *= factorial(k);
  return factorial(c.n()) / denom;
}

LogBracket log_multinomial_bounds(const CountVector& c) {
  const double n = static_cast<double>(c.n());
  const double upper = n * entropy(c.frequencies());
  const double slack = static_cast<double>(c.size()) *
                       (std::log(n) + std::log(2.0 * std::numbers::pi) + 1.0 / 6.0);
  return {upper - slack, upper};
}

double geometric_mean_index(int q, double sigma) {
  double num = 0.0;
  double den = 0.0;
  double power = 1.0;
  for (int k = 0; k < q; ++k) {
    num += k * power;
    den += power;
    power *= sigma;
  }
  return num / den;
}

double theta_objective(int q, double sigma) {
  double sum = 0.0;
  double power = 1.0;
  for (int k = 0; k < q; ++k) {
    sum += power;
    power *= sigma;
  }
  return sum * std::pow(sigma, -(q - 1) / 3.0);
}

ThetaSolution solve_theta(int q) {
  require(q >= 2, "solve_theta requires q >= 2");
  const double target = (q - 1) / 3.0;

  // The mean at sigma = 1 is (q-1)/2 > target, so the root lies below 1.
  double hi = 1.0;
  double lo = 0.5;
  while (geometric_mean_index(q, lo) > target) {
    hi = lo;
    lo *= 0.5;
  }
  while (hi - lo >= 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (geometric_mean_index(q, mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double rho = 0.5 * (lo + hi);

  std::vector<double> weights(static_cast<std::size_t>(q));
  double power = 1.0;
  double total = 0.0;
  for (int k = 0; k < q; ++k) {
    weights[static_cast<std::size_t>(k)] = power;
    total += power;
    power *= rho;
  }
  for (double& w : weights) w /= total;

  return ThetaSolution{q, rho, theta_objective(q, rho), Distribution(std::move(weights))};
}

SizeBounds size_bounds(const ThetaSolution& theta, std::uint64_t n) {
  require(n >= 1, "size_bounds requires n >= 1");
  const double log_theta = std::log(theta.theta);
  const double nn = static_cast<double>(n);
  const double upper = std::log(3.0) + nn * log_theta;
  const double lower = nn * log_theta - 2.0 * std::sqrt(2.0 * std::log(2.0) * log_theta * nn);
  return {lower, upper};
}

SizeBounds size_bounds(int q, std::uint64_t n) {
  require(n >= 1, "size_bounds requires n >= 1");
  return size_bounds(solve_theta(q), n);
}

}  // namespace sumfree
