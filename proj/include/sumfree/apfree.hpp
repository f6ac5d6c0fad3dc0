#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sumfree {

// Nonempty subset of F_p with no three distinct members x, y, z satisfying
// x + z = 2y (mod p). Members are sorted and distinct.
class APFreeSet {
 public:
  // Validates range, ordering, nonemptiness and AP-freeness; throws
  // PreconditionError on any failure.
  APFreeSet(std::uint64_t p, std::vector<std::uint64_t> members);

  std::uint64_t p() const { return p_; }
  const std::vector<std::uint64_t>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool contains(std::uint64_t x) const;

 private:
  std::uint64_t p_;
  std::vector<std::uint64_t> members_;
};

struct APViolation {
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  std::uint64_t z = 0;
  friend bool operator==(const APViolation&, const APViolation&) = default;
};

// Exhaustive O(|S|^2) check over ordered pairs (x, z), x != z: reports the
// first midpoint y = (x + z) / 2 mod p that lies in S with y not in {x, z}.
// `members` must be sorted residues below the odd modulus p.
std::optional<APViolation> verify_apfree(std::uint64_t p, std::span<const std::uint64_t> members);
std::optional<APViolation> verify_apfree(const APFreeSet& s);

// True when no distinct x < y < z in `values` satisfy x + z = 2y over Z.
// `values` must be sorted.
bool is_apfree_integers(std::span<const std::uint64_t> values);

// Sphere-shell Behrend set inside [0, N): d = max(1, round(sqrt(2 log2 N))),
// D = max(2, floor(N^(1/d))), digits below ceil(D/2) so sums never carry; the
// most populated shell of constant digit square-sum is returned (smallest sum
// on ties). For N < 8 the result is {0, 1}. Requires N >= 2.
std::vector<std::uint64_t> behrend_integers(std::uint64_t n);

// Best of `trials` greedy passes over [0, N), keeping every element that does
// not complete a 3-AP with two already kept. Trial 0 scans in ascending order
// (the Stanley sequence); later trials scan seeded random permutations. Ties
// go to the lowest trial index.
std::vector<std::uint64_t> greedy_apfree_integers(std::uint64_t n, std::uint64_t trials,
                                                  std::uint64_t seed);

// Shifts an integer AP-free set into the middle third [w, 2w) of F_p with
// w = ceil(p/3), where a modular AP forces an integer AP. Throws
// WindowOverflow unless every element is below w.
APFreeSet embed_mod_p(std::span<const std::uint64_t> integers, std::uint64_t p);

// Larger of the Behrend and greedy (20 trials) sets on [0, ceil(p/3)),
// embedded into F_p. Requires p to be an odd prime.
APFreeSet build_apfree(std::uint64_t p, std::uint64_t seed);

}  // namespace sumfree
