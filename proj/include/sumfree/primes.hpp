#pragma once

#include <cstdint>

namespace sumfree {

// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(std::uint64_t n);

// Smallest prime >= n. Throws PreconditionError if none fits in 64 bits.
std::uint64_t next_prime(std::uint64_t n);

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

// Inverse of 2 modulo an odd m > 1.
inline std::uint64_t half_mod(std::uint64_t m) { return (m + 1) / 2; }

}  // namespace sumfree
