#include "selmer/curves.hpp"

#include <json.hpp>

#include "selmer/arith.hpp"
#include "selmer/errors.hpp"

namespace selmer {

CurveModel::CurveModel(Int a, Int b) : A(std::move(a)), B(std::move(b)) {
    disc = 4 * A * A * A + 27 * B * B;
}

Int m_of(const Int& A, const Int& B) {
    if (A == 0 && B == 0) throw DomainError("m(A,B) undefined for A = B = 0");
    Int g;
    Int a3 = A * A * A, b2 = B * B;
    mpz_gcd(g.get_mpz_t(), a3.get_mpz_t(), b2.get_mpz_t());
    Int out = 1;
    // d^12 | gcd(A^3, B^2) iff d^4 | A and d^6 | B; only primes of gcd(A, B) matter.
    Int gab;
    mpz_gcd(gab.get_mpz_t(), A.get_mpz_t(), B.get_mpz_t());
    for (const auto& [p, e] : factor_integer(gab).factors) {
        (void)e;
        int k = valuation(g, p) / 12;
        if (k > 0) out *= ipow(p, static_cast<unsigned long>(k));
    }
    return out;
}

Int height_h0(const Int& A, const Int& B) {
    Int a4 = 4 * abs(A) * A * A;
    if (a4 < 0) a4 = -a4;
    Int b27 = 27 * B * B;
    return a4 > b27 ? a4 : b27;
}

Height naive_height(const Int& A, const Int& B) {
    if (A == 0 && B == 0) throw DomainError("height undefined for A = B = 0");
    Height h;
    h.H0 = height_h0(A, B);
    Int m = m_of(A, B);
    h.H = Rat(h.H0) / Rat(ipow(m, 12));
    h.H.canonicalize();
    return h;
}

CurveModel minimal_at_p(const CurveModel& E, const Int& p) {
    if (p <= 3) throw DomainError("minimal_at_p requires p > 3");
    Int a = E.A, b = E.B;
    Int p4 = ipow(p, 4), p6 = ipow(p, 6);
    while ((a == 0 || a % p4 == 0) && (b == 0 || b % p6 == 0) && !(a == 0 && b == 0)) {
        a /= p4;
        b /= p6;
    }
    return CurveModel(a, b);
}

ReductionType reduction_type(const CurveModel& E, const Int& p) {
    if (p <= 3) throw DomainError("reduction type is only classified for p > 3");
    if (E.singular()) throw DomainError("singular model");
    CurveModel m = minimal_at_p(E, p);
    ReductionType r;
    r.disc_valuation = valuation(m.disc, p);
    if (r.disc_valuation == 0) {
        r.kind = Reduction::Good;
    } else if (m.A % p == 0) {
        r.kind = Reduction::Additive;
    } else {
        r.kind = legendre(6 * m.B, p) == 1 ? Reduction::SplitMultiplicative : Reduction::NonsplitMultiplicative;
    }
    return r;
}

LocalData tamagawa_mult(const CurveModel& E, const Int& p) {
    LocalData d;
    d.p = p;
    d.type = reduction_type(E, p);
    if (!d.type.multiplicative()) throw DomainError("tamagawa_mult requires multiplicative reduction");
    if (d.type.kind == Reduction::SplitMultiplicative)
        d.tamagawa = d.type.disc_valuation;
    else
        d.tamagawa = d.type.disc_valuation % 2 == 0 ? 2 : 1;
    return d;
}

LocalData local_data(const CurveModel& E, const Int& p) {
    LocalData d;
    d.p = p;
    d.type = reduction_type(E, p);
    if (d.type.kind == Reduction::Good) d.tamagawa = 1;
    if (d.type.multiplicative()) d.tamagawa = tamagawa_mult(E, p).tamagawa;
    return d;
}

std::int64_t count_points_mod_p(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    if (p <= 3) throw DomainError("point counts need p > 3");
    a %= p;
    b %= p;
    unsigned __int128 disc = (4 * static_cast<unsigned __int128>(a) * a % p * a + 27 * static_cast<unsigned __int128>(b) * b) % p;
    if (disc == 0) throw DomainError("bad reduction at p");
    std::int64_t total = static_cast<std::int64_t>(p) + 1;
    for (std::uint64_t x = 0; x < p; ++x) {
        unsigned __int128 rhs = (static_cast<unsigned __int128>(x) * x % p * x + static_cast<unsigned __int128>(a) * x + b) % p;
        total += legendre_u64(static_cast<std::int64_t>(rhs), p);
    }
    return total;
}

std::int64_t count_points_mod_p(const CurveModel& E, std::uint64_t p) {
    Int P(static_cast<unsigned long>(p));
    Int a = E.A % P, b = E.B % P;
    if (a < 0) a += P;
    if (b < 0) b += P;
    return count_points_mod_p(a.get_ui(), b.get_ui(), p);
}

std::string reduction_name(Reduction r) {
    switch (r) {
        case Reduction::Good: return "good";
        case Reduction::SplitMultiplicative: return "split";
        case Reduction::NonsplitMultiplicative: return "nonsplit";
        case Reduction::Additive: return "additive";
    }
    return "?";
}

std::string curve_to_json(const CurveModel& E) {
    nlohmann::json j;
    j["A"] = to_string(E.A);
    j["B"] = to_string(E.B);
    return j.dump();
}

CurveModel curve_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    return CurveModel(parse_int(j.at("A").get<std::string>()), parse_int(j.at("B").get<std::string>()));
}

}  // namespace selmer
