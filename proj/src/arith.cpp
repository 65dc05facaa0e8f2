#include "selmer/arith.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "selmer/errors.hpp"

namespace selmer {

namespace {

constexpr std::uint32_t kTrialLimit = 100000;

const std::vector<std::uint32_t>& small_primes() {
    static const std::vector<std::uint32_t> primes = primes_up_to(kTrialLimit);
    return primes;
}

std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1U) r = mulmod64(r, a, m);
        a = mulmod64(a, a, m);
        e >>= 1U;
    }
    return r;
}

std::uint64_t gcd64(std::uint64_t a, std::uint64_t b) {
    while (b) {
        std::uint64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Pollard-rho with Brent cycle detection on 64-bit composites.
std::uint64_t brent64(std::uint64_t n, std::mt19937_64& rng) {
    if (n % 2 == 0) return 2;
    std::uniform_int_distribution<std::uint64_t> dist(1, n - 1);
    while (true) {
        std::uint64_t y = dist(rng), c = dist(rng), m = 128, g = 1, r = 1, q = 1, x = 0, ys = 0;
        auto step = [&](std::uint64_t v) {
            return static_cast<std::uint64_t>((static_cast<unsigned __int128>(mulmod64(v, v, n)) + c) % n);
        };
        do {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i) y = step(y);
            std::uint64_t k = 0;
            do {
                ys = y;
                for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
                    y = step(y);
                    q = mulmod64(q, x > y ? x - y : y - x, n);
                }
                g = gcd64(q, n);
                k += m;
            } while (k < r && g == 1);
            r <<= 1U;
        } while (g == 1);
        if (g == n) {
            do {
                ys = step(ys);
                g = gcd64(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

Int brent_big(const Int& n, std::mt19937_64& rng) {
    gmp_randclass gr(gmp_randinit_default);
    gr.seed(static_cast<unsigned long>(rng()));
    while (true) {
        Int y = gr.get_z_range(n - 1) + 1, c = gr.get_z_range(n - 1) + 1;
        Int g = 1, r = 1, q = 1, x, ys;
        const unsigned long m = 256;
        auto step = [&](Int& v) {
            v = v * v + c;
            mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
        };
        do {
            x = y;
            for (Int i = 0; i < r; ++i) step(y);
            Int k = 0;
            do {
                ys = y;
                Int lim = r - k;
                unsigned long iters = lim < m ? lim.get_ui() : m;
                for (unsigned long i = 0; i < iters; ++i) {
                    step(y);
                    Int diff = x - y;
                    q = q * abs(diff);
                    mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += m;
            } while (k < r && g == 1);
            r *= 2;
        } while (g == 1);
        if (g == n) {
            do {
                step(ys);
                Int diff = x - ys;
                Int ad = abs(diff);
                mpz_gcd(g.get_mpz_t(), ad.get_mpz_t(), n.get_mpz_t());
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

void split_into(const Int& n, std::mt19937_64& rng, std::map<Int, int>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out[n] += 1;
        return;
    }
    Int d;
    if (n.fits_ulong_p() && sizeof(unsigned long) == 8) {
        d = Int(static_cast<unsigned long>(brent64(n.get_ui(), rng)));
    } else {
        d = brent_big(n, rng);
    }
    split_into(d, rng, out);
    split_into(Int(n / d), rng, out);
}

}  // namespace

Int PrimeFactorization::value() const {
    Int v = sign;
    for (const auto& [p, e] : factors) v *= ipow(p, static_cast<unsigned long>(e));
    return v;
}

int legendre(const Int& a, const Int& p) {
    if (p < 3 || mpz_even_p(p.get_mpz_t()) || !is_prime(p)) throw DomainError("legendre requires an odd prime");
    Int r = a % p;
    if (r < 0) r += p;
    return mpz_legendre(r.get_mpz_t(), p.get_mpz_t());
}

int legendre_u64(std::int64_t a, std::uint64_t p) {
    // Binary Jacobi algorithm (quadratic reciprocity, no exponentiation).
    std::int64_t sp = static_cast<std::int64_t>(p);
    std::uint64_t x = static_cast<std::uint64_t>(((a % sp) + sp) % sp);
    std::uint64_t n = p;
    int result = 1;
    while (x != 0) {
        while ((x & 1U) == 0) {
            x >>= 1U;
            std::uint64_t r = n & 7U;
            if (r == 3 || r == 5) result = -result;
        }
        std::swap(x, n);
        if ((x & 3U) == 3 && (n & 3U) == 3) result = -result;
        x %= n;
    }
    return n == 1 ? result : 0;
}

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1U) == 0) {
        d >>= 1U;
        ++s;
    }
    // Deterministic witness set for n < 3.3e24 (covers all 64-bit n).
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL, 41ULL}) {
        if (a % n == 0) continue;
        std::uint64_t x = powmod64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

bool is_prime(const Int& n) {
    if (n < 2) return false;
    if (n.fits_ulong_p() && sizeof(unsigned long) == 8) return is_prime_u64(n.get_ui());
    // Miller-Rabin with the deterministic prefix of bases, then extra GMP rounds
    // (Baillie-PSW plus random bases) beyond the deterministic range.
    Int d = n - 1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
    for (unsigned long a : {2UL, 3UL, 5UL, 7UL, 11UL, 13UL, 17UL, 19UL, 23UL, 29UL, 31UL, 37UL, 41UL}) {
        Int x;
        Int base(a);
        mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned long r = 1; r < s; ++r) {
            x = x * x % n;
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return mpz_probab_prime_p(n.get_mpz_t(), 10) > 0;
}

PrimeFactorization factor_integer(const Int& n, std::uint64_t seed) {
    if (n == 0) throw DomainError("factor_integer(0)");
    PrimeFactorization out;
    out.sign = n < 0 ? -1 : 1;
    Int rest = abs(n);
    std::map<Int, int> acc;
    for (std::uint32_t p : small_primes()) {
        if (rest == 1) break;
        if (Int(p) * p > rest) break;
        if (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
            int e = 0;
            while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
                mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
                ++e;
            }
            acc[Int(p)] += e;
        }
    }
    if (rest > 1) {
        std::mt19937_64 rng(seed);
        split_into(rest, rng, acc);
    }
    for (const auto& [p, e] : acc) out.factors.emplace_back(p, e);
    return out;
}

std::vector<Int> prime_divisors(const Int& n, std::uint64_t seed) {
    std::vector<Int> out;
    for (const auto& [p, e] : factor_integer(n, seed).factors) out.push_back(p);
    return out;
}

Int squarefree_part(const Int& n) {
    if (n == 0) throw DomainError("squarefree part of 0");
    Int out = n < 0 ? -1 : 1;
    for (const auto& [p, e] : factor_integer(n).factors)
        if (e % 2) out *= p;
    return out;
}

bool is_square_in_quadratic_field(const Int& d, const Rat& x, const Rat& y) {
    if (d == 0 || d == 1) throw DomainError("d must differ from 0 and 1");
    if (squarefree_part(d) != d) throw DomainError("d must be squarefree");
    if (y == 0) {
        // (u + v sqrt d)^2 rational forces u = 0 or v = 0.
        if (x >= 0 && is_rational_square(x)) return true;
        Rat q = x / Rat(d);
        return q >= 0 && is_rational_square(q);
    }
    // (u + v sqrt d)^2 = x + y sqrt d  <=>  u^4 - x u^2 + y^2 d / 4 = 0 with v = y / (2u).
    Rat disc = x * x - y * y * Rat(d);
    if (disc < 0 || !is_rational_square(disc)) return false;
    Rat root = rational_sqrt(disc);
    for (const Rat& u2 : {Rat((x + root) / 2), Rat((x - root) / 2)}) {
        if (u2 <= 0 || !is_rational_square(u2)) continue;
        Rat u = rational_sqrt(u2);
        Rat v = y / (2 * u);
        if (u * u + Rat(d) * v * v == x && 2 * u * v == y) return true;
    }
    return false;
}

std::vector<std::uint32_t> primes_up_to(std::uint32_t limit) {
    std::vector<std::uint32_t> out;
    if (limit < 2) return out;
    std::vector<bool> composite(static_cast<size_t>(limit) + 1, false);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        out.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return out;
}

}  // namespace selmer
