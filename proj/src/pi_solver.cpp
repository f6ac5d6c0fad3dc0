#include "sumfree/pi_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sumfree/errors.hpp"

namespace sumfree {

TripleSpace::TripleSpace(int q) : q_(q) {
  require(q >= 2, "triple space requires q >= 2");
  for (int i = 0; i < q; ++i) {
    for (int j = 0; i + j <= q - 1; ++j) {
      elements_.push_back({i, j, q - 1 - i - j});
    }
  }
  // Orbits are keyed by their sorted representative.
  std::vector<Triple> reps;
  for (Triple e : elements_) {
    std::sort(e.begin(), e.end());
    reps.push_back(e);
  }
  std::sort(reps.begin(), reps.end());
  reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
  orbits_.resize(reps.size());
  for (std::size_t o = 0; o < reps.size(); ++o) orbits_[o].rep = reps[o];

  orbit_of_.resize(elements_.size());
  for (std::size_t idx = 0; idx < elements_.size(); ++idx) {
    Triple sorted = elements_[idx];
    std::sort(sorted.begin(), sorted.end());
    const auto it = std::lower_bound(reps.begin(), reps.end(), sorted);
    const auto o = static_cast<std::size_t>(it - reps.begin());
    orbit_of_[idx] = o;
    orbits_[o].members.push_back(idx);
  }
  for (Orbit& orbit : orbits_) orbit.size = orbit.members.size();
}

TripleSpace build_triple_space(int q) { return TripleSpace(q); }

std::vector<double> SymmetricDistribution::element_probs() const {
  std::vector<double> probs(space.elements().size());
  for (std::size_t e = 0; e < probs.size(); ++e) probs[e] = orbit_weights[space.orbit_of(e)];
  return probs;
}

Distribution SymmetricDistribution::as_distribution() const {
  return Distribution(element_probs());
}

std::vector<double> SymmetricDistribution::marginal(int axis) const {
  require(axis >= 0 && axis < 3, "marginal axis must be 0, 1 or 2");
  std::vector<double> m(static_cast<std::size_t>(space.q()), 0.0);
  const auto& elements = space.elements();
  for (std::size_t e = 0; e < elements.size(); ++e) {
    m[static_cast<std::size_t>(elements[e][static_cast<std::size_t>(axis)])] +=
        orbit_weights[space.orbit_of(e)];
  }
  return m;
}

namespace {

double linf(const std::vector<double>& a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace

SymmetricDistribution fit_symmetric(const TripleSpace& space, const Distribution& target,
                                    std::vector<double> start,
                                    const PiSolverOptions& options) {
  require(options.tol > 0.0, "IPF tolerance must be positive");
  require(target.size() == static_cast<std::size_t>(space.q()),
          "target marginal must live on {0..q-1}");
  const auto& orbits = space.orbits();
  if (start.empty()) {
    start.assign(orbits.size(), 1.0 / static_cast<double>(space.elements().size()));
  }
  require(start.size() == orbits.size(), "one start weight per orbit is required");

  SymmetricDistribution pi{space, std::move(start), 0, 0.0};
  std::vector<double> ratio(target.size());
  for (std::uint64_t sweep = 0;; ++sweep) {
    const std::vector<double> m = pi.marginal(2);
    pi.residual = linf(m, target.probs());
    pi.sweeps = sweep;
    if (pi.residual <= options.tol) return pi;
    if (sweep == options.max_sweeps) {
      throw IterationLimitExceeded("IPF did not reach tolerance after " +
                                   std::to_string(options.max_sweeps) + " sweeps (residual " +
                                   std::to_string(pi.residual) + ")");
    }
    for (std::size_t k = 0; k < ratio.size(); ++k) {
      ratio[k] = m[k] > 0.0 ? target[k] / m[k] : 1.0;
    }
    // Scaling by the third coordinate and then averaging over an orbit is the
    // same as scaling the orbit by the mean ratio over its three coordinates.
    for (std::size_t o = 0; o < orbits.size(); ++o) {
      const Triple& r = orbits[o].rep;
      pi.orbit_weights[o] *= (ratio[static_cast<std::size_t>(r[0])] +
                              ratio[static_cast<std::size_t>(r[1])] +
                              ratio[static_cast<std::size_t>(r[2])]) /
                             3.0;
    }
  }
}

SymmetricDistribution solve_pi(int q, const PiSolverOptions& options) {
  const ThetaSolution theta = solve_theta(q);
  return fit_symmetric(TripleSpace(q), theta.psi, {}, options);
}

LatticeSymmetricDistribution round_to_lattice(const SymmetricDistribution& pi, std::uint64_t n) {
  require(n > 0 && n % 3 == 0, "n must be a positive multiple of 3");
  const auto& orbits = pi.space.orbits();
  const std::size_t r = orbits.size();

  std::vector<double> ideal(r);
  std::vector<std::uint64_t> counts(r);
  std::uint64_t assigned = 0;
  for (std::size_t o = 0; o < r; ++o) {
    ideal[o] = pi.orbit_weights[o] * static_cast<double>(n);
    counts[o] = static_cast<std::uint64_t>(std::floor(ideal[o]));
    assigned += counts[o] * orbits[o].size;
  }
  if (assigned > n) throw InfeasibleRounding("orbit weights exceed unit mass");
  std::uint64_t deficit = n - assigned;

  // Orbits are already sorted by representative, so stable sorts break ties
  // lexicographically.
  std::vector<std::size_t> order(r);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return ideal[x] - static_cast<double>(counts[x]) > ideal[y] - static_cast<double>(counts[y]);
  });
  for (std::size_t o : order) {
    if (orbits[o].size <= deficit) {
      ++counts[o];
      deficit -= orbits[o].size;
    }
  }

  while (deficit > 0) {
    std::size_t best = r;
    double best_error = 0.0;
    for (std::size_t o = 0; o < r; ++o) {
      if (orbits[o].size > deficit) continue;
      const double error = std::abs(static_cast<double>(counts[o] + 1) - ideal[o]);
      if (best == r || error < best_error) {
        best = o;
        best_error = error;
      }
    }
    if (best == r) {
      throw InfeasibleRounding("no orbit fits the remaining mass " + std::to_string(deficit) +
                               "; increase n");
    }
    ++counts[best];
    deficit -= orbits[best].size;
  }
  return LatticeSymmetricDistribution{pi.space, n, std::move(counts)};
}

std::vector<std::uint64_t> element_counts(const LatticeSymmetricDistribution& ld) {
  std::vector<std::uint64_t> counts(ld.space.elements().size());
  for (std::size_t e = 0; e < counts.size(); ++e) counts[e] = ld.orbit_counts[ld.space.orbit_of(e)];
  return counts;
}

CountVector marginal_counts(const LatticeSymmetricDistribution& ld) {
  std::vector<std::uint64_t> m(static_cast<std::size_t>(ld.space.q()), 0);
  const auto& elements = ld.space.elements();
  for (std::size_t e = 0; e < elements.size(); ++e) {
    m[static_cast<std::size_t>(elements[e][2])] += ld.orbit_counts[ld.space.orbit_of(e)];
  }
  return CountVector(std::move(m));
}

}  // namespace sumfree
