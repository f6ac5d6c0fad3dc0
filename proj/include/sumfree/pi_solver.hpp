#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "sumfree/core_math.hpp"

namespace sumfree {

using Triple = std::array<int, 3>;

// S3-orbit of T. `rep` is the sorted representative; `members` index into
// TripleSpace::elements.
struct Orbit {
  Triple rep{};
  std::size_t size = 0;
  std::vector<std::size_t> members;
};

// T = {(i, j, k) in {0..q-1}^3 : i + j + k = q - 1}, lexicographically ordered,
// partitioned into S3-orbits sorted by representative.
class TripleSpace {
 public:
  explicit TripleSpace(int q);

  int q() const { return q_; }
  const std::vector<Triple>& elements() const { return elements_; }
  const std::vector<Orbit>& orbits() const { return orbits_; }
  std::size_t orbit_of(std::size_t element) const { return orbit_of_[element]; }

 private:
  int q_;
  std::vector<Triple> elements_;
  std::vector<Orbit> orbits_;
  std::vector<std::size_t> orbit_of_;
};

TripleSpace build_triple_space(int q);

// S3-symmetric distribution on T, stored as one per-element probability per orbit.
struct SymmetricDistribution {
  TripleSpace space;
  std::vector<double> orbit_weights;
  std::uint64_t sweeps = 0;     // IPF sweeps used to produce it (0 if not solved)
  double residual = 0.0;        // l-inf marginal error against the target

  std::vector<double> element_probs() const;
  Distribution as_distribution() const;
  // Marginal of coordinate `axis` (0, 1 or 2) on {0..q-1}.
  std::vector<double> marginal(int axis) const;
};

struct PiSolverOptions {
  double tol = 1e-10;
  std::uint64_t max_sweeps = 1'000'000;
};

// Iterative proportional fitting: start uniform on T, then repeatedly scale
// element masses so the third-coordinate marginal equals psi(q) and average
// each orbit to restore symmetry. Stops once the marginal residual <= tol.
// Throws IterationLimitExceeded after max_sweeps.
SymmetricDistribution solve_pi(int q, const PiSolverOptions& options = {});

// Same iteration against an arbitrary target marginal with mean (q-1)/3,
// started from `start` (uniform when empty).
SymmetricDistribution fit_symmetric(const TripleSpace& space, const Distribution& target,
                                    std::vector<double> start,
                                    const PiSolverOptions& options = {});

// Per-element counts on each orbit with sum(size * count) == n.
struct LatticeSymmetricDistribution {
  TripleSpace space;
  std::uint64_t n = 0;
  std::vector<std::uint64_t> orbit_counts;
};

// Largest-remainder rounding of n * weight per orbit, followed by a repair
// pass that adds whole orbits (smallest resulting per-element error first,
// ties by representative) until the total is exactly n.
// Requires n > 0 divisible by 3.
LatticeSymmetricDistribution round_to_lattice(const SymmetricDistribution& pi, std::uint64_t n);

// Third-coordinate histogram n * psi'.
CountVector marginal_counts(const LatticeSymmetricDistribution& ld);

// Histogram of whole T-elements: the count of each element in lex order.
std::vector<std::uint64_t> element_counts(const LatticeSymmetricDistribution& ld);

}  // namespace sumfree
