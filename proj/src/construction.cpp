#include "sumfree/construction.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>

#include "sumfree/errors.hpp"
#include "sumfree/primes.hpp"
#include "sumfree/random.hpp"

namespace sumfree {

namespace {

std::string_view key_of(std::span<const std::uint8_t> w) {
  return {reinterpret_cast<const char*>(w.data()), w.size()};
}

double to_double(const BigInt& x) { return x.convert_to<double>(); }

}  // namespace

InstanceParams make_instance(LatticeSymmetricDistribution lattice) {
  const int q = lattice.space.q();
  require(q <= 255, "q must fit in a byte");
  const std::uint64_t n = lattice.n;
  CountVector marginal = marginal_counts(lattice);
  std::uint64_t weighted = 0;
  for (std::size_t k = 0; k < marginal.size(); ++k) weighted += k * marginal[k];
  if (3 * weighted != n * static_cast<std::uint64_t>(q - 1)) {
    throw std::logic_error("lattice marginal does not have mean (q-1)/3");
  }
  Word target(n, static_cast<std::uint8_t>(q - 1));
  return InstanceParams{q, n, std::move(lattice), std::move(marginal), std::move(target)};
}

InstanceParams make_instance(int q, std::uint64_t n, const PiSolverOptions& options) {
  require(q >= 2 && q <= 255, "q must lie in [2, 255]");
  require(n > 0 && n % 3 == 0, "n must be a positive multiple of 3");
  return make_instance(round_to_lattice(solve_pi(q, options), n));
}

// ---------------------------------------------------------------------------
// W

WordTable::WordTable(std::size_t n, std::vector<std::uint8_t> data)
    : n_(n), data_(std::move(data)) {
  require(n_ > 0 && data_.size() % n_ == 0, "word table data must hold whole words");
}

std::optional<std::size_t> WordTable::find(std::span<const std::uint8_t> w) const {
  if (w.size() != n_) return std::nullopt;
  std::size_t lo = 0;
  std::size_t hi = size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    const int cmp = std::memcmp(data_.data() + mid * n_, w.data(), n_);
    if (cmp == 0) return mid;
    if (cmp < 0) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return std::nullopt;
}

WordTable enumerate_W(const CountVector& marginal, std::uint64_t max_words) {
  require(marginal.size() <= 256, "alphabet must fit in a byte");
  const BigInt count = multinomial(marginal);
  if (count > max_words) {
    throw InstanceTooLarge("|W| = " + count.str() + " exceeds the cap of " +
                           std::to_string(max_words));
  }
  const auto n = static_cast<std::size_t>(marginal.n());
  Word word;
  word.reserve(n);
  for (std::size_t v = 0; v < marginal.size(); ++v) {
    word.insert(word.end(), marginal[v], static_cast<std::uint8_t>(v));
  }
  std::vector<std::uint8_t> data;
  data.reserve(count.convert_to<std::size_t>() * n);
  do {
    data.insert(data.end(), word.begin(), word.end());
  } while (std::next_permutation(word.begin(), word.end()));
  return WordTable(n, std::move(data));
}

BigInt count_W(const InstanceParams& params) { return multinomial(params.marginal); }

// ---------------------------------------------------------------------------
// V

namespace {

class HistogramCounter {
 public:
  HistogramCounter(const TripleSpace& space, const CountVector& marginal)
      : elements_(space.elements()), n_(marginal.n()) {
    const auto q = static_cast<std::size_t>(space.q());
    for (int axis = 0; axis < 3; ++axis) {
      remaining_[axis].assign(marginal.counts().begin(), marginal.counts().end());
      last_[axis].assign(q, elements_.size());
    }
    for (std::size_t e = 0; e < elements_.size(); ++e) {
      for (int axis = 0; axis < 3; ++axis) {
        last_[axis][static_cast<std::size_t>(elements_[e][axis])] = e;
      }
    }
    // A value that never occurs on an axis must have zero count.
    for (int axis = 0; axis < 3; ++axis) {
      for (std::size_t v = 0; v < q; ++v) {
        if (last_[axis][v] == elements_.size() && remaining_[axis][v] != 0) feasible_ = false;
      }
    }
    binom_.assign(n_ + 1, std::vector<BigInt>(n_ + 1));
    for (std::uint64_t r = 0; r <= n_; ++r) {
      binom_[r][0] = 1;
      for (std::uint64_t k = 1; k <= r; ++k) {
        binom_[r][k] = binom_[r - 1][k - 1] + (k <= r - 1 ? binom_[r - 1][k] : BigInt(0));
      }
    }
  }

  BigInt count() {
    if (!feasible_) return 0;
    total_ = 0;
    visit(0, n_, BigInt(1));
    return total_;
  }

 private:
  void visit(std::size_t e, std::uint64_t left, const BigInt& weight) {
    if (e == elements_.size()) {
      if (left == 0) total_ += weight;
      return;
    }
    const Triple& t = elements_[e];
    const auto i = static_cast<std::size_t>(t[0]);
    const auto j = static_cast<std::size_t>(t[1]);
    const auto k = static_cast<std::size_t>(t[2]);
    const std::uint64_t cap =
        std::min({remaining_[0][i], remaining_[1][j], remaining_[2][k], left});
    for (std::uint64_t m = 0; m <= cap; ++m) {
      remaining_[0][i] -= m;
      remaining_[1][j] -= m;
      remaining_[2][k] -= m;
      // After the last element carrying a value on some axis, that value's
      // count must be exhausted.
      const bool closed = (last_[0][i] != e || remaining_[0][i] == 0) &&
                          (last_[1][j] != e || remaining_[1][j] == 0) &&
                          (last_[2][k] != e || remaining_[2][k] == 0);
      if (closed) visit(e + 1, left - m, weight * binom_[left][m]);
      remaining_[0][i] += m;
      remaining_[1][j] += m;
      remaining_[2][k] += m;
    }
  }

  const std::vector<Triple>& elements_;
  std::uint64_t n_;
  std::vector<std::uint64_t> remaining_[3];
  std::vector<std::size_t> last_[3];
  std::vector<std::vector<BigInt>> binom_;
  bool feasible_ = true;
  BigInt total_;
};

}  // namespace

BigInt count_V(int q, const CountVector& marginal) {
  require(marginal.size() == static_cast<std::size_t>(q), "marginal must live on {0..q-1}");
  const TripleSpace space(q);
  if (space.elements().size() > kMaxCountVTripleSpace || marginal.n() > kMaxCountVLength) {
    throw InstanceTooLarge("exact |V| enumeration is capped at |T| <= " +
                           std::to_string(kMaxCountVTripleSpace) + " and n <= " +
                           std::to_string(kMaxCountVLength));
  }
  return HistogramCounter(space, marginal).count();
}

BigInt count_V(const InstanceParams& params) { return count_V(params.q, params.marginal); }

BigInt count_V0(const InstanceParams& params) {
  return multinomial(CountVector(element_counts(params.lattice)));
}

// ---------------------------------------------------------------------------
// Prime and functional

std::uint64_t choose_prime(const BigInt& count_v, const BigInt& count_w) {
  require(count_w >= 1 && count_v >= count_w, "choose_prime requires |V| >= |W| >= 1");
  // Smallest integer strictly above 4|V|/|W|.
  const BigInt above = (4 * count_v) / count_w + 1;
  if (above > BigInt(std::uint64_t{1} << 63)) {
    throw InstanceTooLarge("4|V|/|W| exceeds 2^63");
  }
  const std::uint64_t p = next_prime(std::max<std::uint64_t>(above.convert_to<std::uint64_t>(), 5));
  if (4 * count_v > 5 * count_w && !(BigInt(p) * count_w < 8 * count_v)) {
    throw std::logic_error("no prime found inside (4|V|/|W|, 8|V|/|W|)");
  }
  return p;
}

std::uint64_t LinearFunctional::operator()(std::span<const std::int64_t> u) const {
  require(u.size() == coeffs.size(), "functional argument has the wrong length");
  unsigned __int128 acc = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const std::int64_t r = u[i] % static_cast<std::int64_t>(p);
    const auto residue = static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(p) : r);
    acc += static_cast<unsigned __int128>(coeffs[i]) * residue;
    acc %= p;
  }
  return static_cast<std::uint64_t>(acc);
}

std::uint64_t LinearFunctional::eval(std::uint64_t x0, std::uint64_t x1,
                                     std::span<const std::uint8_t> w) const {
  unsigned __int128 acc = static_cast<unsigned __int128>(coeffs[0]) * x0 +
                          static_cast<unsigned __int128>(coeffs[1]) * x1;
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += static_cast<unsigned __int128>(coeffs[i + 2]) * w[i];
  }
  return static_cast<std::uint64_t>(acc % p);
}

LinearFunctional sample_functional(std::size_t n, std::uint64_t p, std::uint64_t seed) {
  require(p >= 3, "functional modulus must be at least 3");
  Rng rng(seed);
  LinearFunctional h{p, std::vector<std::uint64_t>(n + 2)};
  for (auto& c : h.coeffs) c = rng.below(p);
  return h;
}

std::uint64_t value_a(const LinearFunctional& h, std::span<const std::uint8_t> a) {
  return h.eval(0, 1, a);
}

std::uint64_t value_b(const LinearFunctional& h, std::span<const std::uint8_t> b, int q) {
  Word complement(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    complement[i] = static_cast<std::uint8_t>(q - 1 - b[i]);
  }
  return mul_mod(h.eval(1, 1, complement), half_mod(h.p), h.p);
}

std::uint64_t value_c(const LinearFunctional& h, std::span<const std::uint8_t> c) {
  return h.eval(1, 0, c);
}

// ---------------------------------------------------------------------------
// Triple sets

std::optional<std::size_t> check_triple_invariants(const TripleSet& ts,
                                                   const CountVector& marginal) {
  auto histogram_matches = [&](const Word& w) {
    std::vector<std::uint64_t> h(marginal.size(), 0);
    for (std::uint8_t x : w) {
      if (x >= h.size()) return false;
      ++h[x];
    }
    return std::equal(h.begin(), h.end(), marginal.counts().begin());
  };
  for (std::size_t idx = 0; idx < ts.triples.size(); ++idx) {
    const WordTriple& t = ts.triples[idx];
    if (t.a.size() != ts.n || t.b.size() != ts.n || t.c.size() != ts.n) return idx;
    for (std::size_t i = 0; i < ts.n; ++i) {
      if (t.a[i] + t.b[i] + t.c[i] != ts.target[i]) return idx;
    }
    if (!histogram_matches(t.a) || !histogram_matches(t.b) || !histogram_matches(t.c)) return idx;
  }
  return std::nullopt;
}

namespace {

// b = t - a - c, or nullopt when some entry leaves {0..q-1}.
std::optional<Word> complete_b(std::span<const std::uint8_t> a, std::span<const std::uint8_t> c,
                               int q) {
  Word b(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int v = q - 1 - a[i] - c[i];
    if (v < 0) return std::nullopt;
    b[i] = static_cast<std::uint8_t>(v);
  }
  return b;
}

TripleSet empty_like(const InstanceParams& params) {
  return TripleSet{params.q, params.n, params.target, {}};
}

}  // namespace

TripleSet enumerate_V(const InstanceParams& params, const WordTable& w) {
  TripleSet out = empty_like(params);
  for (std::size_t ai = 0; ai < w.size(); ++ai) {
    for (std::size_t ci = 0; ci < w.size(); ++ci) {
      auto b = complete_b(w[ai], w[ci], params.q);
      if (!b || !w.find(*b)) continue;
      out.triples.push_back({Word(w[ai].begin(), w[ai].end()), std::move(*b),
                             Word(w[ci].begin(), w[ci].end())});
    }
  }
  return out;
}

TripleSet build_V_prime(const InstanceParams& params, const WordTable& w, const LinearFunctional& h,
                        const APFreeSet& s) {
  require(h.coeffs.size() == params.n + 2, "functional must have n + 2 coefficients");
  require(h.p == s.p(), "functional and AP-free set must share the modulus");

  const auto& members = s.members();
  auto slot_of = [&](std::uint64_t value) -> std::optional<std::size_t> {
    const auto it = std::lower_bound(members.begin(), members.end(), value);
    if (it == members.end() || *it != value) return std::nullopt;
    return static_cast<std::size_t>(it - members.begin());
  };

  std::vector<std::vector<std::uint32_t>> a_bucket(members.size());
  std::vector<std::vector<std::uint32_t>> c_bucket(members.size());
  std::vector<std::uint64_t> b_value(w.size());
  for (std::size_t idx = 0; idx < w.size(); ++idx) {
    if (auto slot = slot_of(value_a(h, w[idx]))) a_bucket[*slot].push_back(static_cast<std::uint32_t>(idx));
    if (auto slot = slot_of(value_c(h, w[idx]))) c_bucket[*slot].push_back(static_cast<std::uint32_t>(idx));
    b_value[idx] = value_b(h, w[idx], params.q);
  }

  TripleSet out = empty_like(params);
  for (std::size_t slot = 0; slot < members.size(); ++slot) {
    for (std::uint32_t ai : a_bucket[slot]) {
      for (std::uint32_t ci : c_bucket[slot]) {
        auto b = complete_b(w[ai], w[ci], params.q);
        if (!b) continue;
        const auto bi = w.find(*b);
        if (!bi || b_value[*bi] != members[slot]) continue;
        out.triples.push_back({Word(w[ai].begin(), w[ai].end()), std::move(*b),
                               Word(w[ci].begin(), w[ci].end())});
      }
    }
  }
  return out;
}

TripleSet build_V_prime(const InstanceParams& params, const LinearFunctional& h, const APFreeSet& s,
                        std::uint64_t max_words) {
  return build_V_prime(params, enumerate_W(params.marginal, max_words), h, s);
}

TripleSet prune_to_V_double_prime(const TripleSet& vp) {
  std::unordered_map<std::string_view, int> seen[3];
  for (const WordTriple& t : vp.triples) {
    ++seen[0][key_of(t.a)];
    ++seen[1][key_of(t.b)];
    ++seen[2][key_of(t.c)];
  }
  TripleSet out{vp.q, vp.n, vp.target, {}};
  for (const WordTriple& t : vp.triples) {
    if (seen[0][key_of(t.a)] == 1 && seen[1][key_of(t.b)] == 1 && seen[2][key_of(t.c)] == 1) {
      out.triples.push_back(t);
    }
  }
  return out;
}

namespace {

using WordIndex = std::unordered_map<std::string, std::vector<std::size_t>>;

template <typename Project>
WordIndex index_words(std::span<const WordTriple> triples, Project project) {
  WordIndex index;
  for (std::size_t k = 0; k < triples.size(); ++k) {
    const Word& w = project(triples[k]);
    index[std::string(key_of(w))].push_back(k);
  }
  return index;
}

// For each pair (i, j), `expected(i, j)` names the word the third slot must
// equal; the index maps such words to their positions. Only i == j == k may hit.
template <typename Expected>
std::optional<SumViolation> scan_pairs(std::size_t m, const WordIndex& index, Expected expected) {
  std::string key;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      key = expected(i, j);
      const auto it = index.find(key);
      if (i == j) {
        const bool diagonal_hit =
            it != index.end() && std::find(it->second.begin(), it->second.end(), i) != it->second.end();
        if (!diagonal_hit) return SumViolation{i, i, i};
      }
      if (it == index.end()) continue;
      for (std::size_t k : it->second) {
        if (!(i == j && j == k)) return SumViolation{i, j, k};
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<SumViolation> verify_sum_free(const TripleSet& ts) {
  const int q = ts.q;
  require(q >= 2, "triple set modulus must be at least 2");
  for (const WordTriple& t : ts.triples) {
    require(t.a.size() == ts.n && t.b.size() == ts.n && t.c.size() == ts.n,
            "every word must have length n");
  }
  require(ts.target.size() == ts.n, "target must have length n");
  const WordIndex index =
      index_words(ts.triples, [](const WordTriple& t) -> const Word& { return t.c; });
  return scan_pairs(ts.triples.size(), index, [&](std::size_t i, std::size_t j) {
    const Word& a = ts.triples[i].a;
    const Word& b = ts.triples[j].b;
    std::string need(ts.n, '\0');
    for (std::size_t x = 0; x < ts.n; ++x) {
      const int v = ((ts.target[x] - a[x] - b[x]) % q + 2 * q) % q;
      need[x] = static_cast<char>(v);
    }
    return need;
  });
}

std::vector<WordTriple> to_ap_form(const TripleSet& ts) {
  if (ts.q % 2 == 0) throw EvenModulus("2 is not invertible modulo an even q");
  const auto q = static_cast<std::uint64_t>(ts.q);
  const std::uint64_t half = half_mod(q);
  std::vector<WordTriple> out;
  out.reserve(ts.triples.size());
  for (const WordTriple& t : ts.triples) {
    Word b(t.b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
      b[i] = static_cast<std::uint8_t>(((q - 1 + q - t.b[i]) % q) * half % q);
    }
    out.push_back({t.a, std::move(b), t.c});
  }
  return out;
}

std::vector<WordTriple> from_ap_form(std::span<const WordTriple> triples, int q) {
  if (q % 2 == 0) throw EvenModulus("2 is not invertible modulo an even q");
  std::vector<WordTriple> out;
  out.reserve(triples.size());
  for (const WordTriple& t : triples) {
    Word b(t.b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
      b[i] = static_cast<std::uint8_t>(((q - 1 - 2 * t.b[i]) % q + 2 * q) % q);
    }
    out.push_back({t.a, std::move(b), t.c});
  }
  return out;
}

std::optional<SumViolation> verify_ap_form(std::span<const WordTriple> triples, int q) {
  if (q % 2 == 0) throw EvenModulus("2 is not invertible modulo an even q");
  const int half = (q + 1) / 2;
  const WordIndex index =
      index_words(triples, [](const WordTriple& t) -> const Word& { return t.b; });
  // Pairs are (i, k); scan_pairs reports (i, k, j), reordered below.
  auto found = scan_pairs(triples.size(), index, [&](std::size_t i, std::size_t k) {
    const Word& a = triples[i].a;
    const Word& c = triples[k].c;
    std::string need(a.size(), '\0');
    for (std::size_t x = 0; x < a.size(); ++x) {
      need[x] = static_cast<char>((a[x] + c[x]) * half % q);
    }
    return need;
  });
  if (found) return SumViolation{found->i, found->k, found->j};
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Rank

std::size_t rank_mod_p(std::vector<std::vector<std::uint64_t>> rows, std::uint64_t p) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][col] % p == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    const std::uint64_t inv = pow_mod(rows[rank][col] % p, p - 2, p);
    for (std::uint64_t& x : rows[rank]) x = mul_mod(x % p, inv, p);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank) continue;
      const std::uint64_t factor = rows[r][col] % p;
      if (factor == 0) continue;
      for (std::size_t c = 0; c < cols; ++c) {
        rows[r][c] = (rows[r][c] % p + p - mul_mod(factor, rows[rank][c], p)) % p;
      }
    }
    ++rank;
  }
  return rank;
}

std::size_t progression_matrix_rank(const WordTriple& x, const WordTriple& y, int q,
                                    std::uint64_t p) {
  const std::uint64_t half = half_mod(p);
  auto halved_complement = [&](std::uint8_t b) {
    return mul_mod(static_cast<std::uint64_t>(q - 1 - b) % p, half, p);
  };
  std::vector<std::vector<std::uint64_t>> rows;
  rows.push_back({0, 0, half, half, 1, 1});
  rows.push_back({1, 1, half, half, 0, 0});
  for (std::size_t i = 0; i < x.a.size(); ++i) {
    rows.push_back({x.a[i] % p, y.a[i] % p, halved_complement(x.b[i]), halved_complement(y.b[i]),
                    x.c[i] % p, y.c[i] % p});
  }
  return rank_mod_p(std::move(rows), p);
}

// ---------------------------------------------------------------------------
// Pipeline

PreparedInstance prepare_instance(int q, std::uint64_t n, std::uint64_t seed,
                                  const PipelineOptions& options) {
  InstanceParams params = make_instance(q, n, options.pi);
  BigInt w_count = count_W(params);
  WordTable words = enumerate_W(params.marginal, options.max_words);

  BigInt v_count;
  bool v_exact = true;
  std::uint64_t p = 0;
  try {
    v_count = count_V(params);
    p = choose_prime(v_count, w_count);
  } catch (const InstanceTooLarge&) {
    // |V| <= |W|^2 keeps p above 4|V|/|W| without knowing |V|.
    v_count = count_V0(params);
    v_exact = false;
    p = choose_prime(w_count * w_count, w_count);
  }
  APFreeSet s = build_apfree(p, mix_seed(seed, kApFreeStream));
  return PreparedInstance{std::move(params), std::move(words), std::move(w_count),
                          std::move(v_count), v_exact, p, std::move(s)};
}

PipelineResult run_pipeline(const PreparedInstance& instance, std::uint64_t seed) {
  const InstanceParams& params = instance.params;
  const LinearFunctional h =
      sample_functional(params.n, instance.p, mix_seed(seed, kFunctionalStream));
  const TripleSet vp = build_V_prime(params, instance.words, h, instance.s);
  TripleSet vpp = prune_to_V_double_prime(vp);
  if (auto bad = verify_sum_free(vpp)) {
    throw std::logic_error("constructed set is not sum-free at (" + std::to_string(bad->i) + ", " +
                           std::to_string(bad->j) + ", " + std::to_string(bad->k) + ")");
  }

  const ThetaSolution theta = solve_theta(params.q);
  const SizeBounds bounds = size_bounds(theta, params.n);
  PipelineReport report;
  report.q = params.q;
  report.n = params.n;
  report.seed = seed;
  report.p = instance.p;
  report.s_size = instance.s.size();
  report.w_count = instance.w_count;
  report.v_count = instance.v_count;
  report.v_exact = instance.v_exact;
  report.vp_size = vp.size();
  report.vpp_size = vpp.size();
  report.log_theta = std::log(theta.theta);
  report.log_lower = bounds.log_lower;
  report.log_upper = bounds.log_upper;
  report.marginal.assign(params.marginal.counts().begin(), params.marginal.counts().end());
  return PipelineResult{std::move(vpp), std::move(report)};
}

PipelineResult run_pipeline(int q, std::uint64_t n, std::uint64_t seed,
                            const PipelineOptions& options) {
  return run_pipeline(prepare_instance(q, n, seed, options), seed);
}

ExpectationAudit expectation_audit(const PreparedInstance& instance, std::uint64_t num_seeds,
                                   std::uint64_t base_seed) {
  require(num_seeds >= 30, "expectation audit needs at least 30 seeds");
  require(instance.v_exact, "expectation audit needs the exact |V|");
  const InstanceParams& params = instance.params;

  double sum_vp = 0.0;
  double sq_vp = 0.0;
  double sum_vpp = 0.0;
  double sq_vpp = 0.0;
  for (std::uint64_t i = 0; i < num_seeds; ++i) {
    const LinearFunctional h =
        sample_functional(params.n, instance.p, mix_seed(base_seed + i, kFunctionalStream));
    const TripleSet vp = build_V_prime(params, instance.words, h, instance.s);
    const auto vpp = static_cast<double>(prune_to_V_double_prime(vp).size());
    const auto vps = static_cast<double>(vp.size());
    sum_vp += vps;
    sq_vp += vps * vps;
    sum_vpp += vpp;
    sq_vpp += vpp * vpp;
  }

  const auto count = static_cast<double>(num_seeds);
  auto standard_error = [&](double sum, double sq) {
    const double mean = sum / count;
    const double var = std::max(0.0, (sq - count * mean * mean) / (count - 1.0));
    return std::sqrt(var / count);
  };

  ExpectationAudit audit;
  audit.p = instance.p;
  audit.s_size = instance.s.size();
  audit.w_count = instance.w_count;
  audit.v_count = instance.v_count;
  audit.seeds = num_seeds;
  const auto p = static_cast<double>(instance.p);
  audit.expected_vp = to_double(instance.v_count) * static_cast<double>(instance.s.size()) / (p * p);
  audit.mean_vp = sum_vp / count;
  audit.stderr_vp = standard_error(sum_vp, sq_vp);
  audit.mean_vpp = sum_vpp / count;
  audit.stderr_vpp = standard_error(sum_vpp, sq_vpp);
  audit.vp_within_tolerance = std::abs(audit.mean_vp - audit.expected_vp) <= 5.0 * audit.stderr_vp;
  audit.vpp_above_bound = audit.mean_vpp >= audit.expected_vp / 4.0 - 5.0 * audit.stderr_vpp;
  return audit;
}

ExpectationAudit expectation_audit(int q, std::uint64_t n, std::uint64_t num_seeds,
                                   std::uint64_t base_seed, const PipelineOptions& options) {
  return expectation_audit(prepare_instance(q, n, base_seed, options), num_seeds, base_seed);
}

}  // namespace sumfree
