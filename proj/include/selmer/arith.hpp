#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "selmer/numbers.hpp"

namespace selmer {

struct PrimeFactorization {
    int sign = 1;
    std::vector<std::pair<Int, int>> factors;  // primes strictly increasing

    Int value() const;
};

// Legendre symbol (a | p) for an odd prime p.
int legendre(const Int& a, const Int& p);
// Hot-loop variant; p must be an odd prime below 2^63.
int legendre_u64(std::int64_t a, std::uint64_t p);

bool is_prime(const Int& n);
bool is_prime_u64(std::uint64_t n);

// Complete factorization of a nonzero integer. Pollard-Brent randomness is
// derived from seed, so the output is deterministic.
PrimeFactorization factor_integer(const Int& n, std::uint64_t seed = 0x5e1e);

// Distinct prime divisors of a nonzero integer.
std::vector<Int> prime_divisors(const Int& n, std::uint64_t seed = 0x5e1e);

// True iff x + y*sqrt(d) is a square in Q(sqrt d); d squarefree, d != 0, 1.
bool is_square_in_quadratic_field(const Int& d, const Rat& x, const Rat& y);

// Squarefree part of a nonzero integer (sign kept).
Int squarefree_part(const Int& n);

std::vector<std::uint32_t> primes_up_to(std::uint32_t limit);

}  // namespace selmer
