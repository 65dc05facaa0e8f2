#include "selmer/isogeny.hpp"

#include <map>

#include "selmer/arith.hpp"
#include "selmer/curves.hpp"
#include "selmer/errors.hpp"
#include "selmer/modpoly.hpp"

namespace selmer {

namespace {

const std::vector<Rat>& default_samples() {
    static const std::vector<Rat> s{Rat(2), Rat(3), Rat(5), Rat(-7), Rat(11, 3), Rat(13), Rat(-2, 5)};
    return s;
}

std::optional<std::int64_t> count_at(const UniPoly& f, const UniPoly& g, const Rat& t, std::uint64_t p) {
    auto a = modp::reduce(f.eval(t), p);
    auto b = modp::reduce(g.eval(t), p);
    if (!a || !b) return std::nullopt;
    unsigned __int128 disc = (4 * static_cast<unsigned __int128>(*a) * *a % p * *a + 27 * static_cast<unsigned __int128>(*b) * *b) % p;
    if (disc == 0) return std::nullopt;
    return count_points_mod_p(*a, *b, p);
}

}  // namespace

Json KernelSpec::to_json() const {
    Json j;
    switch (kind) {
        case Kind::TwoTorsionX:
            j["type"] = "two_torsion_x";
            j["data"] = poly_to_json(x0);
            break;
        case Kind::KernelPolynomial: {
            j["type"] = "kernel_polynomial";
            Json arr = Json::array();
            for (const auto& c : psi) arr.push_back(ratfunc_to_json(c));
            j["data"] = arr;
            break;
        }
        case Kind::ExplicitCodomain:
            j["type"] = "explicit_codomain";
            j["data"] = Json{{"f", poly_to_json(f_codomain)}, {"g", poly_to_json(g_codomain)}};
            break;
    }
    return j;
}

KernelSpec KernelSpec::from_json(const Json& j) {
    KernelSpec k;
    std::string type = j.at("type").get<std::string>();
    const Json& data = j.at("data");
    if (type == "two_torsion_x") {
        k.kind = Kind::TwoTorsionX;
        k.x0 = poly_from_json(data);
    } else if (type == "kernel_polynomial") {
        k.kind = Kind::KernelPolynomial;
        for (const auto& c : data) k.psi.push_back(ratfunc_from_json(c));
        xpoly::trim(k.psi);
        if (k.psi.empty() || k.psi.back() != RatFunc::constant(Rat(1)))
            throw KernelValidationError("kernel polynomial must be monic in x");
    } else if (type == "explicit_codomain") {
        k.kind = Kind::ExplicitCodomain;
        k.f_codomain = poly_from_json(data.at("f"));
        k.g_codomain = poly_from_json(data.at("g"));
    } else {
        throw DomainError("unknown kernel type '" + type + "'");
    }
    return k;
}

Coeffs velu_two_isogeny(const UniPoly& f, const UniPoly& g, const UniPoly& x0) {
    if (!(x0.pow(3) + f * x0 + g).is_zero())
        throw KernelValidationError("x0 = " + x0.str() + " is not a root of x^3 + f x + g");
    UniPoly t_val = UniPoly::constant(Rat(3)) * x0 * x0 + f;
    UniPoly w = x0 * t_val;
    return clear_denominators(f - Rat(5) * t_val, g - Rat(7) * w);
}

Coeffs velu_odd_isogeny(const UniPoly& f, const UniPoly& g, const XPoly& psi_in, int ell) {
    if (ell < 3 || ell % 2 == 0) throw DomainError("odd-degree Velu needs an odd prime");
    XPoly psi = psi_in;
    xpoly::trim(psi);
    int d = xpoly::degree(psi);
    if (d != (ell - 1) / 2) throw KernelValidationError("kernel polynomial must have degree (ell-1)/2");
    if (psi.back() != RatFunc::constant(Rat(1))) throw KernelValidationError("kernel polynomial must be monic");
    XPoly div = xpoly::division_polynomial(RatFunc(f), RatFunc(g), ell);
    XPoly quotient;
    XPoly rem = xpoly::divmod(div, psi, quotient);
    if (!rem.empty()) throw KernelValidationError("kernel polynomial does not divide the division polynomial");
    auto coeff = [&](int k) { return k <= d ? psi[static_cast<size_t>(d - k)] : RatFunc(); };
    // psi = x^d - e1 x^(d-1) + e2 x^(d-2) - e3 x^(d-3) ...
    RatFunc e1 = -coeff(1), e2 = coeff(2), e3 = -coeff(3);
    RatFunc s1 = e1;
    RatFunc s2 = e1 * e1 - RatFunc::constant(Rat(2)) * e2;
    RatFunc s3 = e1 * e1 * e1 - RatFunc::constant(Rat(3)) * e1 * e2 + RatFunc::constant(Rat(3)) * e3;
    RatFunc F(f), G(g), D = RatFunc::constant(Rat(d));
    RatFunc T = RatFunc::constant(Rat(6)) * s2 + RatFunc::constant(Rat(2)) * F * D;
    RatFunc W = RatFunc::constant(Rat(10)) * s3 + RatFunc::constant(Rat(6)) * F * s1 + RatFunc::constant(Rat(4)) * G * D;
    RatFunc fp = F - RatFunc::constant(Rat(5)) * T;
    RatFunc gp = G - RatFunc::constant(Rat(7)) * W;
    if (!fp.is_polynomial() || !gp.is_polynomial())
        throw DomainError("codomain coefficients are not polynomial in t");
    Coeffs out = clear_denominators(fp.as_polynomial(), gp.as_polynomial());
    IsogenyPair pair{f, g, out.first, out.second, ell};
    if (!verify_isogeny(pair, default_samples(), {}))
        throw KernelValidationError("Velu codomain fails the point-count check");
    return out;
}

Coeffs clear_denominators(const UniPoly& f, const UniPoly& g) {
    std::map<Int, int> need;
    auto scan = [&](const UniPoly& p, int weight) {
        for (const auto& c : p.coeffs()) {
            if (c.get_den() == 1) continue;
            for (const auto& [q, e] : factor_integer(c.get_den()).factors) {
                int k = (e + weight - 1) / weight;
                need[q] = std::max(need[q], k);
            }
        }
    };
    scan(f, 4);
    scan(g, 6);
    Int lambda = 1;
    for (const auto& [q, k] : need) lambda *= ipow(q, static_cast<unsigned long>(k));
    Rat l = Rat(lambda);
    return {f * rpow(l, 4), g * rpow(l, 6)};
}

bool verify_isogeny(const IsogenyPair& pair, const std::vector<Rat>& t_samples,
                    const std::vector<std::uint64_t>& primes, VerifyStats* stats) {
    VerifyStats local;
    const std::vector<std::uint64_t>& ps = primes;
    std::vector<std::uint64_t> fallback;
    if (ps.empty()) {
        for (std::uint32_t p : primes_up_to(200))
            if (p > 3) fallback.push_back(p);
    }
    const auto& use = ps.empty() ? fallback : ps;
    for (const Rat& t : t_samples) {
        for (std::uint64_t p : use) {
            auto c1 = count_at(pair.f, pair.g, t, p);
            auto c2 = count_at(pair.fp, pair.gp, t, p);
            if (!c1 || !c2) continue;
            ++local.comparisons;
            if (*c1 != *c2) ++local.mismatches;
        }
    }
    if (stats) *stats = local;
    if (local.comparisons == 0) throw SampleError("every (t, p) sample is degenerate; isogeny check inconclusive");
    return local.mismatches == 0;
}

VerifyStats verify_isogeny_good_primes(const IsogenyPair& pair, const std::vector<Rat>& t_samples, int count_per_t) {
    VerifyStats total;
    static const std::vector<std::uint32_t> pool = primes_up_to(100000);
    for (const Rat& t : t_samples) {
        int used = 0;
        for (std::uint32_t p : pool) {
            if (p <= 3) continue;
            if (used == count_per_t) break;
            auto c1 = count_at(pair.f, pair.g, t, p);
            auto c2 = count_at(pair.fp, pair.gp, t, p);
            if (!c1 || !c2) continue;
            ++used;
            ++total.comparisons;
            if (*c1 != *c2) ++total.mismatches;
        }
    }
    if (total.comparisons == 0) throw SampleError("every (t, p) sample is degenerate; isogeny check inconclusive");
    return total;
}

IsogenyPair build_isogeny(const UniPoly& f, const UniPoly& g, int ell, const KernelSpec& kernel) {
    IsogenyPair pair;
    pair.f = f;
    pair.g = g;
    pair.ell = ell;
    Coeffs c;
    switch (kernel.kind) {
        case KernelSpec::Kind::TwoTorsionX:
            if (ell != 2) throw KernelValidationError("two-torsion kernel given for ell != 2");
            c = velu_two_isogeny(f, g, kernel.x0);
            break;
        case KernelSpec::Kind::KernelPolynomial:
            c = velu_odd_isogeny(f, g, kernel.psi, ell);
            break;
        case KernelSpec::Kind::ExplicitCodomain:
            c = {kernel.f_codomain, kernel.g_codomain};
            break;
    }
    pair.fp = c.first;
    pair.gp = c.second;
    if ((Rat(4) * pair.fp.pow(3) + Rat(27) * pair.gp.pow(2)).is_zero())
        throw KernelValidationError("codomain discriminant vanishes identically");
    if (!verify_isogeny(pair, default_samples(), {}))
        throw KernelValidationError("codomain is not isogenous to the domain (point counts differ)");
    return pair;
}

}  // namespace selmer
