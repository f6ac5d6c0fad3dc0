#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sumfree/apfree.hpp"
#include "sumfree/core_math.hpp"
#include "sumfree/pi_solver.hpp"

namespace sumfree {

// A vector in {0..q-1}^n.
using Word = std::vector<std::uint8_t>;

inline constexpr std::uint64_t kDefaultMaxW = 10'000'000;

// Everything fixed by (q, n) before any randomness: the rounded symmetric
// lattice distribution, its marginal n*psi' and the target (q-1, ..., q-1).
struct InstanceParams {
  int q = 0;
  std::uint64_t n = 0;
  LatticeSymmetricDistribution lattice;
  CountVector marginal;
  Word target;
};

// Solves for pi, rounds it to the 1/n lattice and checks
// sum_k k * marginal_k == n (q-1) / 3. Requires 2 <= q <= 255, 3 | n.
InstanceParams make_instance(int q, std::uint64_t n, const PiSolverOptions& options = {});
InstanceParams make_instance(LatticeSymmetricDistribution lattice);

// All words with a fixed histogram, stored contiguously in lexicographic order.
class WordTable {
 public:
  WordTable(std::size_t n, std::vector<std::uint8_t> data);

  std::size_t size() const { return n_ == 0 ? 0 : data_.size() / n_; }
  std::size_t word_length() const { return n_; }
  std::span<const std::uint8_t> operator[](std::size_t i) const {
    return {data_.data() + i * n_, n_};
  }
  // Index of `w` in the table, if present.
  std::optional<std::size_t> find(std::span<const std::uint8_t> w) const;

 private:
  std::size_t n_;
  std::vector<std::uint8_t> data_;
};

// W = {a in I^n : histogram(a) = marginal}, by multiset-permutation
// enumeration. Throws InstanceTooLarge if |W| > max_words.
WordTable enumerate_W(const CountVector& marginal, std::uint64_t max_words = kDefaultMaxW);

BigInt count_W(const InstanceParams& params);

inline constexpr std::size_t kMaxCountVTripleSpace = 10;
inline constexpr std::uint64_t kMaxCountVLength = 60;

// |V| = |{(a, b, c) in W^3 : a + b + c = t}|, summing n!/prod m_e! over
// histograms m on T whose three coordinate projections all equal `marginal`.
// Histograms are enumerated element by element with pruning on the remaining
// per-coordinate counts. Returns 0 when the marginal cannot be matched.
// Throws InstanceTooLarge when |T| > 10 or n > 60.
BigInt count_V(int q, const CountVector& marginal);
BigInt count_V(const InstanceParams& params);

// |V_0| = multinomial(n; n*pi'), a lower bound on |V| available at any size.
BigInt count_V0(const InstanceParams& params);

// Smallest prime p > max(4 |V|/|W|, 4). Whenever 4|V| > 5|W| this also
// satisfies p < 8 |V|/|W|. Requires count_v >= count_w >= 1 and
// 4 |V|/|W| < 2^63.
std::uint64_t choose_prime(const BigInt& count_v, const BigInt& count_w);

// h : Z^(n+2) -> F_p, h(u) = sum_i coeffs[i] * u[i] mod p.
struct LinearFunctional {
  std::uint64_t p = 0;
  std::vector<std::uint64_t> coeffs;

  std::uint64_t operator()(std::span<const std::int64_t> u) const;
  // h(x0, x1, w_1, ..., w_n) without materializing the argument.
  std::uint64_t eval(std::uint64_t x0, std::uint64_t x1, std::span<const std::uint8_t> w) const;
};

// n + 2 coefficients drawn uniformly from [0, p) by Rng(seed).
LinearFunctional sample_functional(std::size_t n, std::uint64_t p, std::uint64_t seed);

// The three progression terms h(0,1,a), h(1,1,t-b)/2 and h(1,0,c).
std::uint64_t value_a(const LinearFunctional& h, std::span<const std::uint8_t> a);
std::uint64_t value_b(const LinearFunctional& h, std::span<const std::uint8_t> b, int q);
std::uint64_t value_c(const LinearFunctional& h, std::span<const std::uint8_t> c);

struct WordTriple {
  Word a;
  Word b;
  Word c;
  friend bool operator==(const WordTriple&, const WordTriple&) = default;
};

struct TripleSet {
  int q = 0;
  std::uint64_t n = 0;
  Word target;
  std::vector<WordTriple> triples;

  std::size_t size() const { return triples.size(); }
  friend bool operator==(const TripleSet&, const TripleSet&) = default;
};

// Checks a + b + c == target over Z and histogram(a|b|c) == marginal for
// every triple. Returns the index of the first offending triple.
std::optional<std::size_t> check_triple_invariants(const TripleSet& ts, const CountVector& marginal);

// All of V, in (a, c) lexicographic order.
TripleSet enumerate_V(const InstanceParams& params, const WordTable& w);

// V' = {(a,b,c) in V : h(0,1,a) = h(1,1,t-b)/2 = h(1,0,c) in S}. Built from
// per-s buckets of a- and c-words; b = t - a - c is looked up in W.
// Output is ordered by s, then a, then c.
TripleSet build_V_prime(const InstanceParams& params, const WordTable& w, const LinearFunctional& h,
                        const APFreeSet& s);
TripleSet build_V_prime(const InstanceParams& params, const LinearFunctional& h, const APFreeSet& s,
                        std::uint64_t max_words = kDefaultMaxW);

// Keeps the triples whose a-, b- and c-words each occur exactly once in `vp`.
TripleSet prune_to_V_double_prime(const TripleSet& vp);

struct SumViolation {
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t k = 0;
  friend bool operator==(const SumViolation&, const SumViolation&) = default;
};

// a_i + b_j + c_k == t (mod q) must hold exactly when i == j == k.
// Returns the first witness in (i, j) order.
std::optional<SumViolation> verify_sum_free(const TripleSet& ts);

// (a, b, c) -> (a, (q-1-b)/2 mod q, c). Throws EvenModulus for even q.
std::vector<WordTriple> to_ap_form(const TripleSet& ts);
// Inverse: b = (q-1) - 2 b~ mod q.
std::vector<WordTriple> from_ap_form(std::span<const WordTriple> triples, int q);
// a_i + c_k == 2 b~_j (mod q) must hold exactly when i == j == k.
std::optional<SumViolation> verify_ap_form(std::span<const WordTriple> triples, int q);

// Rank over F_p of a dense matrix of residues.
std::size_t rank_mod_p(std::vector<std::vector<std::uint64_t>> rows, std::uint64_t p);

// Rank over F_p of the (n+2) x 6 matrix whose columns are the coefficient
// vectors of the six progression terms for two triples of V.
std::size_t progression_matrix_rank(const WordTriple& x, const WordTriple& y, int q, std::uint64_t p);

struct PipelineOptions {
  std::uint64_t max_words = kDefaultMaxW;
  PiSolverOptions pi;
};

// Seed streams derived from the single user seed via mix_seed.
inline constexpr std::uint64_t kApFreeStream = 1;
inline constexpr std::uint64_t kFunctionalStream = 2;

// Randomness-free part of a run plus the AP-free set drawn from the seed.
struct PreparedInstance {
  InstanceParams params;
  WordTable words;
  BigInt w_count;
  BigInt v_count;
  bool v_exact = true;  // false: v_count is the |V_0| lower bound, p from |V| <= |W|^2
  std::uint64_t p = 0;
  APFreeSet s;
};

PreparedInstance prepare_instance(int q, std::uint64_t n, std::uint64_t seed,
                                  const PipelineOptions& options = {});

struct PipelineReport {
  int q = 0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  std::uint64_t p = 0;
  std::size_t s_size = 0;
  BigInt w_count;
  BigInt v_count;
  bool v_exact = true;
  std::size_t vp_size = 0;
  std::size_t vpp_size = 0;
  double log_theta = 0.0;
  double log_lower = 0.0;
  double log_upper = 0.0;
  std::vector<std::uint64_t> marginal;
};

struct PipelineResult {
  TripleSet vpp;
  PipelineReport report;
};

// theta -> pi -> lattice -> |W|, |V| -> p -> S -> h -> V' -> V''. Throws
// std::logic_error if the result fails verify_sum_free.
PipelineResult run_pipeline(int q, std::uint64_t n, std::uint64_t seed,
                            const PipelineOptions& options = {});
PipelineResult run_pipeline(const PreparedInstance& instance, std::uint64_t seed);

struct ExpectationAudit {
  std::uint64_t p = 0;
  std::size_t s_size = 0;
  BigInt w_count;
  BigInt v_count;
  std::uint64_t seeds = 0;
  double expected_vp = 0.0;  // |V| |S| / p^2
  double mean_vp = 0.0;
  double stderr_vp = 0.0;
  double mean_vpp = 0.0;
  double stderr_vpp = 0.0;
  bool vp_within_tolerance = false;  // |mean - expected| <= 5 stderr
  bool vpp_above_bound = false;      // mean >= expected/4 - 5 stderr

  bool passed() const { return vp_within_tolerance && vpp_above_bound; }
};

// Fixes (p, S) from `instance` and samples h for base_seed, base_seed+1, ...
// Requires num_seeds >= 30 and an exact |V|.
ExpectationAudit expectation_audit(const PreparedInstance& instance, std::uint64_t num_seeds,
                                   std::uint64_t base_seed);
ExpectationAudit expectation_audit(int q, std::uint64_t n, std::uint64_t num_seeds,
                                   std::uint64_t base_seed, const PipelineOptions& options = {});

}  // namespace sumfree
