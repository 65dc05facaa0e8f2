#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "selmer/unipoly.hpp"

namespace selmer::modp {

// Polynomials over F_p for primes p < 2^32, lowest degree first, trimmed.
using Poly = std::vector<std::uint64_t>;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p);
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p);
std::uint64_t invmod(std::uint64_t a, std::uint64_t p);
// Reduces a rational mod p; nullopt when p divides the denominator.
std::optional<std::uint64_t> reduce(const Rat& x, std::uint64_t p);
std::optional<Poly> reduce(const UniPoly& f, std::uint64_t p);

void trim(Poly& a);
int degree(const Poly& a);  // -1 for zero
Poly add(const Poly& a, const Poly& b, std::uint64_t p);
Poly sub(const Poly& a, const Poly& b, std::uint64_t p);
Poly mul(const Poly& a, const Poly& b, std::uint64_t p);
Poly scale(const Poly& a, std::uint64_t s, std::uint64_t p);
void divmod(const Poly& a, const Poly& b, std::uint64_t p, Poly& q, Poly& r);
Poly mod(const Poly& a, const Poly& b, std::uint64_t p);
Poly monic(const Poly& a, std::uint64_t p);
Poly gcd(Poly a, Poly b, std::uint64_t p);
Poly derivative(const Poly& a, std::uint64_t p);
// base^e mod m.
Poly powmod(const Poly& base, std::uint64_t e, const Poly& m, std::uint64_t p);
std::uint64_t eval(const Poly& a, std::uint64_t x, std::uint64_t p);
// Extended gcd: returns g = s a + t b with g monic.
Poly xgcd(const Poly& a, const Poly& b, std::uint64_t p, Poly& s, Poly& t);

bool is_squarefree(const Poly& f, std::uint64_t p);
// Monic irreducible factors of a monic squarefree polynomial (p odd), sorted.
std::vector<Poly> factor_squarefree(const Poly& f, std::uint64_t p, std::uint64_t seed = 1);
// Distinct roots in F_p of a nonzero polynomial, sorted ascending.
std::vector<std::uint64_t> roots(const Poly& f, std::uint64_t p, std::uint64_t seed = 1);

}  // namespace selmer::modp
