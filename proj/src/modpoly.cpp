#include "selmer/modpoly.hpp"

#include <algorithm>
#include <random>

#include "selmer/errors.hpp"

namespace selmer::modp {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1U) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1U;
    }
    return r;
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t p) {
    std::int64_t t = 0, nt = 1;
    std::int64_t r = static_cast<std::int64_t>(p), nr = static_cast<std::int64_t>(a % p);
    while (nr != 0) {
        std::int64_t q = r / nr;
        std::int64_t tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    if (r != 1) throw DomainError("element not invertible mod p");
    if (t < 0) t += static_cast<std::int64_t>(p);
    return static_cast<std::uint64_t>(t);
}

std::optional<std::uint64_t> reduce(const Rat& x, std::uint64_t p) {
    unsigned long den = mpz_fdiv_ui(x.get_den().get_mpz_t(), p);
    if (den == 0) return std::nullopt;
    unsigned long num = mpz_fdiv_ui(x.get_num().get_mpz_t(), p);
    return mulmod(num, invmod(den, p), p);
}

std::optional<Poly> reduce(const UniPoly& f, std::uint64_t p) {
    Poly out;
    out.reserve(f.coeffs().size());
    for (const auto& c : f.coeffs()) {
        auto r = reduce(c, p);
        if (!r) return std::nullopt;
        out.push_back(*r);
    }
    trim(out);
    return out;
}

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

int degree(const Poly& a) { return static_cast<int>(a.size()) - 1; }

Poly add(const Poly& a, const Poly& b, std::uint64_t p) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) {
        std::uint64_t x = i < a.size() ? a[i] : 0;
        std::uint64_t y = i < b.size() ? b[i] : 0;
        r[i] = (x + y) % p;
    }
    trim(r);
    return r;
}

Poly sub(const Poly& a, const Poly& b, std::uint64_t p) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) {
        std::uint64_t x = i < a.size() ? a[i] : 0;
        std::uint64_t y = i < b.size() ? b[i] : 0;
        r[i] = (x + p - y) % p;
    }
    trim(r);
    return r;
}

Poly mul(const Poly& a, const Poly& b, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
    }
    trim(r);
    return r;
}

Poly scale(const Poly& a, std::uint64_t s, std::uint64_t p) {
    Poly r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = mulmod(a[i], s, p);
    trim(r);
    return r;
}

void divmod(const Poly& a, const Poly& b, std::uint64_t p, Poly& q, Poly& r) {
    if (b.empty()) throw DomainError("division by zero polynomial mod p");
    r = a;
    trim(r);
    int db = degree(b);
    if (degree(r) < db) {
        q.clear();
        return;
    }
    q.assign(static_cast<size_t>(degree(r) - db) + 1, 0);
    std::uint64_t inv = invmod(b.back(), p);
    for (int i = degree(r); i >= db; --i) {
        std::uint64_t f = mulmod(r[static_cast<size_t>(i)], inv, p);
        if (f == 0) continue;
        q[static_cast<size_t>(i - db)] = f;
        for (int j = 0; j <= db; ++j) {
            size_t k = static_cast<size_t>(i - db + j);
            r[k] = (r[k] + p - mulmod(f, b[static_cast<size_t>(j)], p)) % p;
        }
    }
    r.resize(static_cast<size_t>(db));
    trim(r);
    trim(q);
}

Poly mod(const Poly& a, const Poly& b, std::uint64_t p) {
    Poly q, r;
    divmod(a, b, p, q, r);
    return r;
}

Poly monic(const Poly& a, std::uint64_t p) {
    if (a.empty()) return a;
    return scale(a, invmod(a.back(), p), p);
}

Poly gcd(Poly a, Poly b, std::uint64_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a, p);
}

Poly derivative(const Poly& a, std::uint64_t p) {
    if (a.size() <= 1) return {};
    Poly r(a.size() - 1);
    for (size_t i = 1; i < a.size(); ++i) r[i - 1] = mulmod(a[i], i % p, p);
    trim(r);
    return r;
}

Poly powmod(const Poly& base, std::uint64_t e, const Poly& m, std::uint64_t p) {
    Poly result{1 % p};
    result = mod(result, m, p);
    Poly b = mod(base, m, p);
    while (e) {
        if (e & 1U) result = mod(mul(result, b, p), m, p);
        e >>= 1U;
        if (e) b = mod(mul(b, b, p), m, p);
    }
    return result;
}

std::uint64_t eval(const Poly& a, std::uint64_t x, std::uint64_t p) {
    std::uint64_t acc = 0;
    for (auto it = a.rbegin(); it != a.rend(); ++it) acc = (mulmod(acc, x, p) + *it) % p;
    return acc;
}

Poly xgcd(const Poly& a, const Poly& b, std::uint64_t p, Poly& s, Poly& t) {
    Poly r0 = a, r1 = b;
    Poly s0{1}, s1{}, t0{}, t1{1};
    trim(r0);
    trim(r1);
    while (!r1.empty()) {
        Poly q, r;
        divmod(r0, r1, p, q, r);
        Poly s2 = sub(s0, mul(q, s1, p), p);
        Poly t2 = sub(t0, mul(q, t1, p), p);
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.empty()) throw DomainError("xgcd of two zero polynomials");
    std::uint64_t inv = invmod(r0.back(), p);
    s = scale(s0, inv, p);
    t = scale(t0, inv, p);
    return scale(r0, inv, p);
}

bool is_squarefree(const Poly& f, std::uint64_t p) {
    Poly d = derivative(f, p);
    if (d.empty()) return degree(f) <= 0;
    return degree(gcd(f, d, p)) == 0;
}

namespace {

// Splits a monic squarefree product of irreducibles of degree d (p odd).
void equal_degree_split(const Poly& f, int d, std::uint64_t p, std::mt19937_64& rng,
                        std::vector<Poly>& out) {
    int n = degree(f);
    if (n == d) {
        out.push_back(f);
        return;
    }
    std::uniform_int_distribution<std::uint64_t> dist(0, p - 1);
    // (p^d - 1)/2 can overflow for large p^d, so exponentiate in two stages:
    // r^((p^d-1)/2) = (r^(1+p+...+p^(d-1)))^((p-1)/2).
    while (true) {
        Poly r(static_cast<size_t>(n), 0);
        for (auto& c : r) c = dist(rng);
        trim(r);
        if (degree(r) < 1) continue;
        Poly acc = r, pw = r;
        for (int i = 1; i < d; ++i) {
            pw = powmod(pw, p, f, p);
            acc = mod(mul(acc, pw, p), f, p);
        }
        Poly h = powmod(acc, (p - 1) / 2, f, p);
        h = sub(h, Poly{1}, p);
        Poly g = gcd(f, h, p);
        if (degree(g) > 0 && degree(g) < n) {
            Poly q, rem;
            divmod(f, g, p, q, rem);
            equal_degree_split(g, d, p, rng, out);
            equal_degree_split(monic(q, p), d, p, rng, out);
            return;
        }
    }
}

}  // namespace

std::vector<Poly> factor_squarefree(const Poly& f0, std::uint64_t p, std::uint64_t seed) {
    if (p < 3) throw DomainError("factor_squarefree requires an odd prime");
    Poly f = monic(f0, p);
    std::vector<Poly> out;
    if (degree(f) <= 0) return out;
    std::mt19937_64 rng(seed);
    Poly x{0, 1};
    Poly h = x;
    int d = 0;
    while (degree(f) >= 2 * (d + 1)) {
        ++d;
        h = powmod(h, p, f, p);
        Poly g = gcd(f, sub(h, x, p), p);
        if (degree(g) > 0) {
            equal_degree_split(g, d, p, rng, out);
            Poly q, r;
            divmod(f, g, p, q, r);
            f = monic(q, p);
            h = mod(h, f, p);
        }
    }
    if (degree(f) > 0) out.push_back(f);
    std::sort(out.begin(), out.end(), [](const Poly& a, const Poly& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

std::vector<std::uint64_t> roots(const Poly& f0, std::uint64_t p, std::uint64_t seed) {
    Poly f = f0;
    trim(f);
    if (f.empty()) throw DomainError("roots of the zero polynomial");
    std::vector<std::uint64_t> out;
    if (degree(f) == 0) return out;
    f = monic(f, p);
    if (p == 2) {
        for (std::uint64_t x = 0; x < 2; ++x)
            if (eval(f, x, p) == 0) out.push_back(x);
        return out;
    }
    if (degree(f) == 1) {
        out.push_back((p - f[0]) % p);
        return out;
    }
    Poly x{0, 1};
    Poly xp = powmod(x, p, f, p);
    Poly g = gcd(f, sub(xp, x, p), p);
    if (degree(g) <= 0) return out;
    std::vector<Poly> lin;
    std::mt19937_64 rng(seed);
    equal_degree_split(g, 1, p, rng, lin);
    for (const auto& l : lin) out.push_back((p - l[0]) % p);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace selmer::modp
