#include <algorithm>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "sumfree/apfree.hpp"
#include "sumfree/errors.hpp"
#include "sumfree/primes.hpp"

using namespace sumfree;

TEST_CASE("Miller-Rabin agrees with trial division") {
  for (std::uint64_t n = 0; n < 100000; ++n) {
    if (is_prime(n) != oracle::is_prime(n)) {
      FAIL("mismatch at ", n);
    }
  }
  CHECK(is_prime(2305843009213693951ULL));          // 2^61 - 1
  CHECK_FALSE(is_prime(3215031751ULL));             // strong pseudoprime to 2, 3, 5, 7
  CHECK_FALSE(is_prime(3825123056546413051ULL));    // strong pseudoprime to bases up to 23
  CHECK(is_prime(18446744073709551557ULL));         // largest 64-bit prime
  CHECK(next_prime(401) == 401);
  CHECK(next_prime(400) == 401);
  CHECK(next_prime(9) == 11);
}

TEST_CASE("behrend_integers") {
  CHECK(behrend_integers(2) == std::vector<std::uint64_t>{0, 1});
  CHECK_THROWS_AS(behrend_integers(1), PreconditionError);

  const auto thousand = behrend_integers(1000);
  CHECK(!thousand.empty());
  CHECK(is_apfree_integers(thousand));
  CHECK(thousand.back() < 1000);
  const auto greedy = greedy_apfree_integers(1000, 20, 0);
  MESSAGE("Behrend |S| = ", thousand.size(), ", greedy |S| = ", greedy.size(), " at N = 1000");
}

TEST_CASE("behrend_integers is AP-free over the integers") {
  for (std::uint64_t n = 2; n <= 10000; n = n < 64 ? n + 1 : n * 5 / 4) {
    CAPTURE(n);
    const auto s = behrend_integers(n);
    CHECK(std::is_sorted(s.begin(), s.end()));
    CHECK(s.back() < n);
    CHECK(is_apfree_integers(s));
  }
}

TEST_CASE("greedy_apfree_integers") {
  CHECK(greedy_apfree_integers(14, 1, 0) == std::vector<std::uint64_t>{0, 1, 3, 4, 9, 10, 12, 13});
  CHECK(greedy_apfree_integers(3, 1, 0) == std::vector<std::uint64_t>{0, 1});
  CHECK(oracle::max_apfree_size(10) == 5);
  CHECK(greedy_apfree_integers(10, 20, 99).size() >= 5);
  CHECK(greedy_apfree_integers(500, 7, 3) == greedy_apfree_integers(500, 7, 3));
  for (std::uint64_t n : {1, 2, 17, 100, 777}) {
    CHECK(is_apfree_integers(greedy_apfree_integers(n, 5, n)));
  }
  CHECK_THROWS_AS(greedy_apfree_integers(0, 1, 0), PreconditionError);
  CHECK_THROWS_AS(greedy_apfree_integers(5, 0, 0), PreconditionError);
}

TEST_CASE("embed_mod_p") {
  const APFreeSet a = embed_mod_p(std::vector<std::uint64_t>{0, 1, 3}, 13);
  CHECK(a.members() == std::vector<std::uint64_t>{5, 6, 8});
  // Exhaustive check over all ordered triples mod 13.
  for (auto x : a.members()) {
    for (auto y : a.members()) {
      for (auto z : a.members()) {
        if (x != y && y != z && x != z) CHECK((x + z) % 13 != (2 * y) % 13);
      }
    }
  }
  CHECK(embed_mod_p(std::vector<std::uint64_t>{0}, 7).members() == std::vector<std::uint64_t>{3});
  CHECK(embed_mod_p(std::vector<std::uint64_t>{0, 1}, 11).members() ==
        std::vector<std::uint64_t>{4, 5});
  CHECK_THROWS_AS(embed_mod_p(std::vector<std::uint64_t>{0, 4}, 11), WindowOverflow);
}

TEST_CASE("verify_apfree") {
  CHECK_FALSE(verify_apfree(13, std::vector<std::uint64_t>{5, 6, 8}).has_value());
  const auto v = verify_apfree(7, std::vector<std::uint64_t>{1, 2, 3});
  REQUIRE(v.has_value());
  CHECK(*v == APViolation{1, 2, 3});
  CHECK(verify_apfree(5, std::vector<std::uint64_t>{0, 2, 4}).has_value());
  // Wraparound progressions: 5 + 0 = 2 * 6 mod 7 and 10 + 1 = 2 * 0 mod 11.
  CHECK(verify_apfree(7, std::vector<std::uint64_t>{0, 5, 6}).has_value());
  CHECK(*verify_apfree(11, std::vector<std::uint64_t>{0, 1, 10}) == APViolation{1, 0, 10});
  CHECK_FALSE(verify_apfree(11, std::vector<std::uint64_t>{1, 9, 10}).has_value());
  CHECK_THROWS_AS(APFreeSet(7, {1, 2, 3}), PreconditionError);
  CHECK_THROWS_AS(APFreeSet(7, {}), PreconditionError);
  CHECK_THROWS_AS(APFreeSet(9, {1}), PreconditionError);
}

TEST_CASE("verify_apfree agrees with a cubic scan on random sets") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 300; ++trial) {
    std::uint64_t p = 0;
    do {
      p = 3 + gen() % 60;
    } while (!oracle::is_prime(p));
    std::vector<std::uint64_t> s;
    for (std::uint64_t x = 0; x < p; ++x) {
      if (gen() % 4 == 0) s.push_back(x);
    }
    bool has_ap = false;
    for (auto x : s) {
      for (auto y : s) {
        for (auto z : s) {
          if (x != y && y != z && x != z && (x + z) % p == (2 * y) % p) has_ap = true;
        }
      }
    }
    CHECK(verify_apfree(p, s).has_value() == has_ap);
  }
}

TEST_CASE("build_apfree") {
  const APFreeSet eleven = build_apfree(11, 0);
  CHECK(!verify_apfree(eleven).has_value());
  CHECK(eleven.size() >= 1);

  CHECK(build_apfree(5, 0).members() == std::vector<std::uint64_t>{2, 3});
  CHECK(build_apfree(3, 0).members() == std::vector<std::uint64_t>{1});

  const APFreeSet big = build_apfree(101, 4);
  CHECK(big.size() >= greedy_apfree_integers(34, 20, 4).size());
  CHECK(!verify_apfree(big).has_value());

  CHECK_THROWS_AS(build_apfree(9, 0), PreconditionError);
  CHECK_THROWS_AS(build_apfree(2, 0), PreconditionError);
}

TEST_CASE("build_apfree on random primes") {
  std::mt19937_64 gen(31337);
  int tested = 0;
  while (tested < 200) {
    const std::uint64_t p = 3 + gen() % 9998;
    if (!oracle::is_prime(p)) continue;
    ++tested;
    const std::uint64_t seed = gen();
    const APFreeSet s = build_apfree(p, seed);
    CHECK(!verify_apfree(s).has_value());
    const std::uint64_t w = (p + 2) / 3;
    CHECK(s.members().front() >= w);
    CHECK(s.members().back() < 2 * w);
    CHECK(build_apfree(p, seed).members() == s.members());
  }
}
