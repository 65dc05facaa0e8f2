#include <gtest/gtest.h>

#include <random>

#include "selmer/arith.hpp"
#include "selmer/errors.hpp"

using namespace selmer;

TEST(Legendre, KnownValues) {
    EXPECT_EQ(legendre(Int(0), Int(7)), 0);
    EXPECT_EQ(legendre(Int(6), Int(31)), -1);
    EXPECT_EQ(legendre(Int(12), Int(11)), 1);
    EXPECT_EQ(legendre(Int(-1), Int(13)), 1);
    EXPECT_EQ(legendre(Int(-1), Int(7)), -1);
    EXPECT_THROW(legendre(Int(3), Int(9)), DomainError);
    EXPECT_THROW(legendre(Int(3), Int(2)), DomainError);
}

TEST(Legendre, MultiplicativeAndEuler) {
    std::mt19937_64 rng(7);
    auto primes = primes_up_to(5000);
    std::uniform_int_distribution<size_t> pick(1, primes.size() - 1);
    std::uniform_int_distribution<std::int64_t> val(-1000000, 1000000);
    for (int i = 0; i < 1000; ++i) {
        std::uint64_t p = primes[pick(rng)];
        std::int64_t a = val(rng), b = val(rng);
        Int P(static_cast<unsigned long>(p));
        int la = legendre(Int(static_cast<long>(a)), P), lb = legendre(Int(static_cast<long>(b)), P);
        int lab = legendre(Int(static_cast<long>(a)) * Int(static_cast<long>(b)), P);
        EXPECT_EQ(lab, la * lb);
        EXPECT_EQ(legendre_u64(a, p), la);
        Int r;
        Int am = Int(static_cast<long>(a)) % P;
        if (am < 0) am += P;
        mpz_powm_ui(r.get_mpz_t(), am.get_mpz_t(), (p - 1) / 2, P.get_mpz_t());
        int euler = r == 0 ? 0 : (r == 1 ? 1 : -1);
        EXPECT_EQ(euler, la);
    }
}

TEST(Factor, Examples) {
    auto f = factor_integer(Int(1496537856));
    ASSERT_EQ(f.factors.size(), 3u);
    EXPECT_EQ(f.factors[0], std::make_pair(Int(2), 8));
    EXPECT_EQ(f.factors[1], std::make_pair(Int(3), 12));
    EXPECT_EQ(f.factors[2], std::make_pair(Int(11), 1));
    auto g = factor_integer(Int(-12));
    EXPECT_EQ(g.sign, -1);
    ASSERT_EQ(g.factors.size(), 2u);
    EXPECT_EQ(g.factors[0], std::make_pair(Int(2), 2));
    auto h = factor_integer(Int(1000000007));
    ASSERT_EQ(h.factors.size(), 1u);
    EXPECT_EQ(h.factors[0].first, Int(1000000007));
    EXPECT_THROW(factor_integer(Int(0)), DomainError);
}

TEST(Factor, RoundTripRandom64) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 10000; ++i) {
        std::uint64_t v = rng();
        if (v == 0) continue;
        Int n;
        mpz_import(n.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
        if (i % 2) n = -n;
        auto fac = factor_integer(n);
        EXPECT_EQ(fac.value(), n);
        for (size_t j = 0; j < fac.factors.size(); ++j) {
            EXPECT_TRUE(is_prime(fac.factors[j].first));
            if (j) EXPECT_LT(fac.factors[j - 1].first, fac.factors[j].first);
        }
    }
}

TEST(Factor, LargeSemiprime) {
    Int p("10000000019"), q("1000000000039");
    auto fac = factor_integer(p * q * 49);
    ASSERT_EQ(fac.factors.size(), 3u);
    EXPECT_EQ(fac.factors[1].first, p);
    EXPECT_EQ(fac.factors[2].first, q);
}

TEST(QuadraticSquare, Examples) {
    EXPECT_TRUE(is_square_in_quadratic_field(Int(2), Rat(3), Rat(2)));
    EXPECT_FALSE(is_square_in_quadratic_field(Int(3), Rat(2), Rat(0)));
    EXPECT_TRUE(is_square_in_quadratic_field(Int(3), Rat(3), Rat(0)));
    EXPECT_TRUE(is_square_in_quadratic_field(Int(5), Rat(4), Rat(0)));
    // 6g(t) at a root of t^2+11t-1 for the 5-torsion family, up to a rational square factor.
    EXPECT_FALSE(is_square_in_quadratic_field(Int(5), Rat(-1525), Rat(682)));
    EXPECT_THROW(is_square_in_quadratic_field(Int(12), Rat(1), Rat(1)), DomainError);
    EXPECT_THROW(is_square_in_quadratic_field(Int(1), Rat(1), Rat(1)), DomainError);
}

TEST(QuadraticSquare, AgreesWithBruteForce) {
    std::mt19937_64 rng(3);
    const long ds[] = {-7, -3, -1, 2, 3, 5, 6, 7, 10, 13};
    std::uniform_int_distribution<int> small(-6, 6), den(1, 3), coin(0, 1);
    int positives = 0;
    for (int i = 0; i < 100; ++i) {
        long d = ds[i % 10];
        Rat x, y;
        if (coin(rng)) {
            Rat u(small(rng), den(rng)), v(small(rng), den(rng));
            u.canonicalize();
            v.canonicalize();
            x = u * u + v * v * d;
            y = 2 * u * v;
        } else {
            x = Rat(small(rng), den(rng));
            y = Rat(small(rng), den(rng));
        }
        x.canonicalize();
        y.canonicalize();
        if (x == 0 && y == 0) continue;
        bool brute = false;
        for (int dn = 1; dn <= 12 && !brute; ++dn)
            for (int un = -40; un <= 40 && !brute; ++un)
                for (int vn = -40; vn <= 40 && !brute; ++vn) {
                    Rat u(un, dn), v(vn, dn);
                    u.canonicalize();
                    v.canonicalize();
                    if (u * u + v * v * d == x && 2 * u * v == y) brute = true;
                }
        bool fast = is_square_in_quadratic_field(Int(d), x, y);
        EXPECT_EQ(fast, brute) << "d=" << d << " x=" << x << " y=" << y;
        positives += fast;
    }
    EXPECT_GT(positives, 10);
}

TEST(Primes, SieveAndPrimality) {
    auto ps = primes_up_to(100);
    EXPECT_EQ(ps.size(), 25u);
    EXPECT_TRUE(is_prime_u64(18446744073709551557ULL));
    EXPECT_FALSE(is_prime_u64(3215031751ULL));
    EXPECT_EQ(squarefree_part(Int(-72)), Int(-2));
}
