#include "selmer/factor.hpp"

#include <algorithm>
#include <functional>

#include "selmer/errors.hpp"
#include "selmer/modpoly.hpp"

namespace selmer {

namespace {

// Integer polynomials reduced into [0, M), lowest degree first, trimmed.
using ZPoly = std::vector<Int>;

void ztrim(ZPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

ZPoly zreduce(ZPoly a, const Int& m) {
    for (auto& c : a) {
        mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
    }
    ztrim(a);
    return a;
}

ZPoly zadd(const ZPoly& a, const ZPoly& b, const Int& m) {
    ZPoly r(std::max(a.size(), b.size()));
    for (size_t i = 0; i < r.size(); ++i) {
        if (i < a.size()) r[i] += a[i];
        if (i < b.size()) r[i] += b[i];
    }
    return zreduce(std::move(r), m);
}

ZPoly zsub(const ZPoly& a, const ZPoly& b, const Int& m) {
    ZPoly r(std::max(a.size(), b.size()));
    for (size_t i = 0; i < r.size(); ++i) {
        if (i < a.size()) r[i] += a[i];
        if (i < b.size()) r[i] -= b[i];
    }
    return zreduce(std::move(r), m);
}

ZPoly zmul(const ZPoly& a, const ZPoly& b, const Int& m) {
    if (a.empty() || b.empty()) return {};
    ZPoly r(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return zreduce(std::move(r), m);
}

// Division by a monic polynomial modulo m.
void zdivmod_monic(const ZPoly& a, const ZPoly& h, const Int& m, ZPoly& q, ZPoly& r) {
    r = zreduce(a, m);
    int dh = static_cast<int>(h.size()) - 1;
    int dr = static_cast<int>(r.size()) - 1;
    if (dr < dh) {
        q.clear();
        return;
    }
    q.assign(static_cast<size_t>(dr - dh + 1), Int(0));
    for (int i = dr; i >= dh; --i) {
        Int c = r[static_cast<size_t>(i)];
        mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
        if (c == 0) continue;
        q[static_cast<size_t>(i - dh)] = c;
        for (int j = 0; j <= dh; ++j) r[static_cast<size_t>(i - dh + j)] -= c * h[static_cast<size_t>(j)];
    }
    r.resize(static_cast<size_t>(dh));
    r = zreduce(std::move(r), m);
    q = zreduce(std::move(q), m);
}

ZPoly from_modp(const modp::Poly& a) {
    ZPoly r;
    r.reserve(a.size());
    for (auto c : a) r.emplace_back(static_cast<unsigned long>(c));
    return r;
}

ZPoly scale(const ZPoly& a, const Int& s, const Int& m) {
    ZPoly r = a;
    for (auto& c : r) c *= s;
    return zreduce(std::move(r), m);
}

// One quadratic Hensel step: f = g h mod m, s g + t h = 1 mod m, h monic.
// Updates all four to the same relations modulo m^2.
void hensel_step(const ZPoly& f, ZPoly& g, ZPoly& h, ZPoly& s, ZPoly& t, const Int& m) {
    Int m2 = m * m;
    ZPoly e = zsub(f, zmul(g, h, m2), m2);
    ZPoly q, r;
    zdivmod_monic(zmul(s, e, m2), h, m2, q, r);
    ZPoly g1 = zadd(g, zadd(zmul(t, e, m2), zmul(q, g, m2), m2), m2);
    ZPoly h1 = zadd(h, r, m2);
    ZPoly b = zsub(zadd(zmul(s, g1, m2), zmul(t, h1, m2), m2), ZPoly{Int(1)}, m2);
    ZPoly c, d;
    zdivmod_monic(zmul(s, b, m2), h1, m2, c, d);
    ZPoly s1 = zsub(s, d, m2);
    ZPoly t1 = zsub(t, zadd(zmul(t, b, m2), zmul(c, g1, m2), m2), m2);
    g = std::move(g1);
    h = std::move(h1);
    s = std::move(s1);
    t = std::move(t1);
}

// Lifts f = lc * prod(factors) mod p to modulus p^(2^steps) by recursive
// two-factor splits. Returns monic lifts in the same order.
std::vector<ZPoly> multifactor_lift(const ZPoly& f, const std::vector<modp::Poly>& factors,
                                    std::uint64_t p, int steps) {
    if (factors.size() == 1) {
        // The lone factor is f divided by its leading coefficient.
        Int mod = Int(static_cast<unsigned long>(p));
        for (int i = 0; i < steps; ++i) mod *= mod;
        Int lc = f.back();
        Int inv;
        if (mpz_invert(inv.get_mpz_t(), lc.get_mpz_t(), mod.get_mpz_t()) == 0)
            throw DomainError("leading coefficient not invertible in Hensel lift");
        return {scale(f, inv, mod)};
    }
    size_t half = factors.size() / 2;
    modp::Poly gp{1}, hp{1};
    for (size_t i = 0; i < half; ++i) gp = modp::mul(gp, factors[i], p);
    for (size_t i = half; i < factors.size(); ++i) hp = modp::mul(hp, factors[i], p);
    Int pz(static_cast<unsigned long>(p));
    Int lc_mod_p = f.back();
    mpz_fdiv_r(lc_mod_p.get_mpz_t(), lc_mod_p.get_mpz_t(), pz.get_mpz_t());
    gp = modp::scale(gp, lc_mod_p.get_ui(), p);
    modp::Poly sp, tp;
    modp::Poly one = modp::xgcd(gp, hp, p, sp, tp);
    if (one.size() != 1) throw DomainError("modular factors are not coprime");
    ZPoly g = from_modp(gp), h = from_modp(hp), s = from_modp(sp), t = from_modp(tp);
    Int mod = pz;
    for (int i = 0; i < steps; ++i) {
        hensel_step(f, g, h, s, t, mod);
        mod *= mod;
    }
    std::vector<modp::Poly> left(factors.begin(), factors.begin() + static_cast<long>(half));
    std::vector<modp::Poly> right(factors.begin() + static_cast<long>(half), factors.end());
    auto lifted_left = multifactor_lift(g, left, p, steps);
    auto lifted_right = multifactor_lift(h, right, p, steps);
    lifted_left.insert(lifted_left.end(), lifted_right.begin(), lifted_right.end());
    return lifted_left;
}

UniPoly symmetric_lift(const ZPoly& a, const Int& m) {
    Int half = m / 2;
    std::vector<Int> c = a;
    for (auto& x : c) {
        mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
        if (x > half) x -= m;
    }
    return UniPoly::from_ints(c);
}

bool is_prime_small(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

Int norm2_ceil(const UniPoly& f) {
    Int s = 0;
    for (const auto& c : f.coeffs()) s += c.get_num() * c.get_num();
    Int r;
    mpz_sqrt(r.get_mpz_t(), s.get_mpz_t());
    return r + 1;
}

}  // namespace

UniPoly FactoredPoly::expand() const {
    UniPoly r = UniPoly::constant(content);
    for (const auto& [f, e] : factors) r *= f.pow(static_cast<unsigned>(e));
    return r;
}

bool factor_less(const UniPoly& a, const UniPoly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    for (int i = a.degree(); i >= 0; --i) {
        Rat x = a.coeff(i), y = b.coeff(i);
        if (x != y) return x < y;
    }
    return false;
}

std::vector<UniPoly> factor_squarefree_integral(const UniPoly& f0) {
    if (f0.is_zero()) throw DomainError("factoring the zero polynomial");
    UniPoly f = f0.primitive();
    int n = f.degree();
    if (n <= 1) return n == 1 ? std::vector<UniPoly>{f} : std::vector<UniPoly>{};

    std::vector<Int> fc = f.int_coeffs();
    Int lc = fc.back();

    // Pick among a handful of good primes the one giving the fewest modular factors.
    std::uint64_t best_p = 0;
    std::vector<modp::Poly> best;
    int tried = 0;
    for (std::uint64_t p = 3; tried < 8 && p < 100000; p += 2) {
        if (!is_prime_small(p)) continue;
        if (mpz_fdiv_ui(lc.get_mpz_t(), p) == 0) continue;
        auto fp = modp::reduce(f, p);
        if (!fp || modp::degree(*fp) != n || !modp::is_squarefree(*fp, p)) continue;
        ++tried;
        auto facs = modp::factor_squarefree(*fp, p, p);
        if (best_p == 0 || facs.size() < best.size()) {
            best_p = p;
            best = std::move(facs);
        }
        if (best.size() == 1) break;
    }
    if (best_p == 0) throw ResourceError("no suitable prime for modular factorization");
    if (best.size() == 1) return {f};

    // Coefficients of lc * (any factor) are bounded by |lc| 2^n ||f||_2.
    Int bound = 2 * abs(lc) * ipow(2, static_cast<unsigned long>(n)) * norm2_ceil(f);
    Int pz(static_cast<unsigned long>(best_p));
    Int mod = pz;
    int steps = 0;
    while (mod <= bound) {
        mod *= mod;
        ++steps;
    }
    ZPoly fz = zreduce(fc, mod);
    std::vector<ZPoly> lifted = multifactor_lift(fz, best, best_p, steps);

    std::vector<UniPoly> found;
    std::vector<ZPoly> remaining = lifted;
    UniPoly rest = f;
    size_t subset_size = 1;
    while (2 * subset_size <= remaining.size()) {
        bool progress = false;
        size_t r = remaining.size();
        std::vector<size_t> idx(subset_size);
        for (size_t i = 0; i < subset_size; ++i) idx[i] = i;
        while (true) {
            Int rest_lc = rest.lc().get_num();
            ZPoly cand{rest_lc};
            cand = zreduce(cand, mod);
            for (size_t i : idx) cand = zmul(cand, remaining[i], mod);
            UniPoly g = symmetric_lift(cand, mod);
            if (!g.is_zero() && g.degree() > 0) {
                g = g.primitive();
                auto [q, rem] = divmod(rest, g);
                if (rem.is_zero()) {
                    found.push_back(g);
                    rest = q.primitive();
                    std::vector<ZPoly> keep;
                    for (size_t i = 0; i < r; ++i)
                        if (std::find(idx.begin(), idx.end(), i) == idx.end()) keep.push_back(remaining[i]);
                    remaining = std::move(keep);
                    progress = true;
                    break;
                }
            }
            // Next combination in lexicographic order.
            int k = static_cast<int>(subset_size) - 1;
            while (k >= 0 && idx[static_cast<size_t>(k)] == r - subset_size + static_cast<size_t>(k)) --k;
            if (k < 0) break;
            ++idx[static_cast<size_t>(k)];
            for (size_t j = static_cast<size_t>(k) + 1; j < subset_size; ++j) idx[j] = idx[j - 1] + 1;
        }
        if (!progress) ++subset_size;
    }
    if (rest.degree() > 0) found.push_back(rest.primitive());
    std::sort(found.begin(), found.end(), factor_less);
    return found;
}

FactoredPoly poly_factor(const UniPoly& p) {
    if (p.is_zero()) throw DomainError("factoring the zero polynomial");
    FactoredPoly out;
    if (p.degree() == 0) {
        out.content = p.lc();
        return out;
    }
    for (const auto& [part, mult] : squarefree_decomposition(p)) {
        for (auto& fac : factor_squarefree_integral(part)) out.factors.emplace_back(fac, mult);
    }
    std::sort(out.factors.begin(), out.factors.end(),
              [](const auto& a, const auto& b) { return factor_less(a.first, b.first); });
    Rat lc_prod = 1;
    for (const auto& [f, e] : out.factors) lc_prod *= rpow(f.lc(), e);
    out.content = p.lc() / lc_prod;
    return out;
}

bool is_irreducible(const UniPoly& p) {
    if (p.is_zero() || p.degree() < 1) return false;
    auto fp = poly_factor(p);
    return fp.factors.size() == 1 && fp.factors[0].second == 1;
}

}  // namespace selmer
