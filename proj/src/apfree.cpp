#include "sumfree/apfree.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "sumfree/errors.hpp"
#include "sumfree/primes.hpp"
#include "sumfree/random.hpp"

namespace sumfree {

namespace {

constexpr std::uint64_t kMaxBehrendCandidates = 100'000'000;

// floor(n^(1/d)) without trusting pow() at the boundary.
std::uint64_t integer_root(std::uint64_t n, std::uint64_t d) {
  auto power_at_most = [&](std::uint64_t base) {
    unsigned __int128 acc = 1;
    for (std::uint64_t i = 0; i < d; ++i) {
      acc *= base;
      if (acc > n) return false;
    }
    return true;
  };
  auto r = static_cast<std::uint64_t>(std::pow(static_cast<double>(n), 1.0 / static_cast<double>(d)));
  while (r > 1 && !power_at_most(r)) --r;
  while (power_at_most(r + 1)) ++r;
  return r;
}

}  // namespace

APFreeSet::APFreeSet(std::uint64_t p, std::vector<std::uint64_t> members)
    : p_(p), members_(std::move(members)) {
  require(p_ >= 3 && (p_ & 1) && is_prime(p_), "AP-free sets live in F_p for an odd prime p");
  require(!members_.empty(), "AP-free set must be nonempty");
  require(std::adjacent_find(members_.begin(), members_.end(),
                             [](std::uint64_t a, std::uint64_t b) { return a >= b; }) ==
              members_.end(),
          "AP-free set members must be sorted and distinct");
  require(members_.back() < p_, "AP-free set members must be residues below p");
  require(!verify_apfree(p_, members_).has_value(), "set contains a 3-term progression mod p");
}

bool APFreeSet::contains(std::uint64_t x) const {
  return std::binary_search(members_.begin(), members_.end(), x);
}

std::optional<APViolation> verify_apfree(std::uint64_t p, std::span<const std::uint64_t> members) {
  require(p >= 3 && (p & 1), "verify_apfree needs an odd modulus");
  const std::uint64_t inv2 = half_mod(p);
  for (std::uint64_t x : members) {
    for (std::uint64_t z : members) {
      if (x == z) continue;
      const std::uint64_t y = mul_mod((x + z) % p, inv2, p);
      if (y == x || y == z) continue;
      if (std::binary_search(members.begin(), members.end(), y)) return APViolation{x, y, z};
    }
  }
  return std::nullopt;
}

std::optional<APViolation> verify_apfree(const APFreeSet& s) {
  return verify_apfree(s.p(), s.members());
}

bool is_apfree_integers(std::span<const std::uint64_t> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t k = i + 2; k < values.size(); ++k) {
      const std::uint64_t sum = values[i] + values[k];
      if (sum & 1) continue;
      if (std::binary_search(values.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                             values.begin() + static_cast<std::ptrdiff_t>(k), sum / 2)) {
        return false;
      }
    }
  }
  return true;
}

std::vector<std::uint64_t> behrend_integers(std::uint64_t n) {
  require(n >= 2, "behrend_integers requires N >= 2");
  if (n < 8) return {0, 1};

  const auto dim = static_cast<std::uint64_t>(
      std::max<long long>(1, std::llround(std::sqrt(2.0 * std::log2(static_cast<double>(n))))));
  const std::uint64_t radix = std::max<std::uint64_t>(2, integer_root(n, dim));
  const std::uint64_t digits = (radix + 1) / 2;

  std::uint64_t candidates = 1;
  for (std::uint64_t i = 0; i < dim; ++i) {
    candidates *= digits;
    if (candidates > kMaxBehrendCandidates) {
      throw InstanceTooLarge("Behrend enumeration exceeds " +
                             std::to_string(kMaxBehrendCandidates) + " candidates");
    }
  }

  // Odometer over digit vectors; value and squared norm kept incrementally.
  std::map<std::uint64_t, std::vector<std::uint64_t>> shells;
  std::vector<std::uint64_t> digit(dim, 0);
  std::vector<std::uint64_t> place(dim, 1);
  for (std::uint64_t i = 1; i < dim; ++i) place[i] = place[i - 1] * radix;
  for (std::uint64_t c = 0; c < candidates; ++c) {
    std::uint64_t value = 0;
    std::uint64_t norm = 0;
    for (std::uint64_t i = 0; i < dim; ++i) {
      value += digit[i] * place[i];
      norm += digit[i] * digit[i];
    }
    shells[norm].push_back(value);
    for (std::uint64_t i = 0; i < dim; ++i) {
      if (++digit[i] < digits) break;
      digit[i] = 0;
    }
  }

  const std::vector<std::uint64_t>* best = nullptr;
  for (const auto& [norm, members] : shells) {
    if (best == nullptr || members.size() > best->size()) best = &members;
  }
  std::vector<std::uint64_t> out = *best;
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint64_t> greedy_apfree_integers(std::uint64_t n, std::uint64_t trials,
                                                  std::uint64_t seed) {
  require(n >= 1, "greedy_apfree_integers requires N >= 1");
  require(trials >= 1, "greedy_apfree_integers requires at least one trial");

  std::vector<std::uint64_t> order(n);
  std::vector<char> blocked(n);
  std::vector<std::uint64_t> best;
  std::vector<std::uint64_t> current;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    std::iota(order.begin(), order.end(), std::uint64_t{0});
    if (trial > 0) {
      Rng rng(mix_seed(seed, trial));
      rng.shuffle(order);
    }
    std::fill(blocked.begin(), blocked.end(), 0);
    current.clear();
    for (std::uint64_t z : order) {
      if (blocked[z]) continue;
      // Block every value that would now complete a progression with z.
      for (std::uint64_t x : current) {
        const std::uint64_t hi = std::max(x, z);
        const std::uint64_t lo = std::min(x, z);
        if (2 * hi - lo < n) blocked[2 * hi - lo] = 1;
        if (2 * lo >= hi) blocked[2 * lo - hi] = 1;
        if (((x + z) & 1) == 0) blocked[(x + z) / 2] = 1;
      }
      current.push_back(z);
    }
    if (current.size() > best.size()) best = current;
  }
  std::sort(best.begin(), best.end());
  return best;
}

APFreeSet embed_mod_p(std::span<const std::uint64_t> integers, std::uint64_t p) {
  const std::uint64_t window = (p + 2) / 3;
  std::vector<std::uint64_t> members(integers.begin(), integers.end());
  std::sort(members.begin(), members.end());
  for (std::uint64_t& s : members) {
    if (s >= window) {
      throw WindowOverflow("element " + std::to_string(s) + " lies outside [0, " +
                           std::to_string(window) + ")");
    }
    s += window;
  }
  return APFreeSet(p, std::move(members));
}

APFreeSet build_apfree(std::uint64_t p, std::uint64_t seed) {
  require(p >= 3 && (p & 1) && is_prime(p), "build_apfree requires an odd prime");
  const std::uint64_t window = (p + 2) / 3;
  if (window == 1) return embed_mod_p(std::vector<std::uint64_t>{0}, p);
  std::vector<std::uint64_t> behrend = behrend_integers(window);
  std::vector<std::uint64_t> greedy = greedy_apfree_integers(window, 20, seed);
  return embed_mod_p(behrend.size() >= greedy.size() ? behrend : greedy, p);
}

}  // namespace sumfree
