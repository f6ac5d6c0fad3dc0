#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace sumfree {

using BigInt = boost::multiprecision::cpp_int;

// Dense probability vector over {0, ..., size()-1}.
class Distribution {
 public:
  static constexpr double kSumTolerance = 1e-12;

  // Throws PreconditionError unless every entry is >= 0 and the entries sum
  // to 1 within kSumTolerance.
  explicit Distribution(std::vector<double> probs);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }

  static Distribution uniform(std::size_t size);

 private:
  std::vector<double> probs_;
};

// Histogram of a length-n string over a finite alphabet.
class CountVector {
 public:
  // Throws PreconditionError when empty; n is the sum of the counts.
  explicit CountVector(std::vector<std::uint64_t> counts);

  std::uint64_t n() const { return n_; }
  std::size_t size() const { return counts_.size(); }
  std::uint64_t operator[](std::size_t i) const { return counts_[i]; }
  std::span<const std::uint64_t> counts() const { return counts_; }

  Distribution frequencies() const;

  friend bool operator==(const CountVector&, const CountVector&) = default;

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t n_ = 0;
};

// Natural-log Shannon entropy; zero entries contribute nothing.
double entropy(const Distribution& d);

// (f_* d)_b = sum of d_a over a with f(a) = b. `map[a]` is f(a) and must be
// below `target_size`.
Distribution pushforward(const Distribution& d, std::span<const std::size_t> map,
                         std::size_t target_size);

BigInt factorial(std::uint64_t n);

// n! / prod(counts!) computed exactly.
BigInt multinomial(const CountVector& c);

struct LogBracket {
  double lower = 0.0;
  double upper = 0.0;
};

// Entropy bracket around log multinomial(c):
//   upper = n * H(c/n),
//   lower = upper - |A| (log n + log 2 pi + 1/6),
// where |A| = c.size(). Requires n >= 1.
LogBracket log_multinomial_bounds(const CountVector& c);

// Solution of min over sigma > 0 of (1 + sigma + ... + sigma^(q-1)) * sigma^(-(q-1)/3).
struct ThetaSolution {
  int q = 0;
  double rho = 0.0;
  double theta = 0.0;
  Distribution psi;  // psi_k proportional to rho^k on {0, ..., q-1}
};

// g(sigma) = (sum_k sigma^k) * sigma^(-(q-1)/3), the function minimized by theta.
double theta_objective(int q, double sigma);

// Mean of the geometric distribution proportional to sigma^k on {0, ..., q-1}.
double geometric_mean_index(int q, double sigma);

// Locates rho by bisecting the strictly increasing mean condition
// geometric_mean_index(q, sigma) = (q-1)/3 down to |d sigma| < 1e-13.
ThetaSolution solve_theta(int q);

// Log-scale reference bounds on the largest sum-free set in C_q^n:
//   log_upper = log 3 + n log theta
//   log_lower = n log theta - 2 sqrt(2 log 2 * log theta * n)
// The lower bound omits the O_q(log n) correction, whose constant is unknown.
struct SizeBounds {
  double log_lower = 0.0;
  double log_upper = 0.0;
};

SizeBounds size_bounds(int q, std::uint64_t n);
SizeBounds size_bounds(const ThetaSolution& theta, std::uint64_t n);

}  // namespace sumfree
