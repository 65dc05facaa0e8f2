#include "selmer/family.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "selmer/arith.hpp"
#include "selmer/errors.hpp"
#include "selmer/factor.hpp"
#include "selmer/modpoly.hpp"
#include "selmer/registry_data.hpp"

namespace selmer {

namespace {

constexpr long kChebotarevX = 1000000;
constexpr double kChebotarevMargin = 0.1;

WHomPoly one(int tau) { return WHomPoly::constant(tau, Rat(1)); }

bool is_y_factor(const WHomPoly& p) { return p.weighted_degree() == 1 && p.dehom().degree() == 0; }

// Number of distinct real roots via a Sturm sequence.
int count_real_roots(const UniPoly& h) {
    if (h.is_zero()) throw DomainError("real roots of zero");
    if (h.degree() == 0) return 0;
    std::vector<UniPoly> seq{h, h.derivative()};
    while (!seq.back().is_zero() && seq.back().degree() > 0) {
        UniPoly r = seq[seq.size() - 2] % seq.back();
        if (r.is_zero()) break;
        seq.push_back(-r);
    }
    auto changes = [&](bool at_plus) {
        int count = 0, prev = 0;
        for (const auto& p : seq) {
            if (p.is_zero()) continue;
            int s = sign(p.lc());
            if (!at_plus && p.degree() % 2 == 1) s = -s;
            if (prev != 0 && s != prev) ++count;
            prev = s;
        }
        return count;
    };
    return changes(false) - changes(true);
}

Rat max_half_third(const UniPoly& f, const UniPoly& g) {
    Rat best(-1);
    if (!f.is_zero()) best = std::max(best, Rat(f.degree(), 2));
    if (!g.is_zero()) best = std::max(best, Rat(g.degree(), 3));
    best.canonicalize();
    return best;
}

void add_prime_divisors(const Rat& x, std::set<Int>& out) {
    if (x == 0) return;
    for (const Int* part : {&x.get_num(), &x.get_den()}) {
        Int v = abs(*part);
        if (v > 1)
            for (const auto& p : prime_divisors(v)) out.insert(p);
    }
}

// Resultant of two distinct irreducible weighted forms, up to the leading
// coefficient adjustments that account for the root at infinity.
Rat factor_resultant(const WHomPoly& P, const WHomPoly& Q) {
    bool py = is_y_factor(P), qy = is_y_factor(Q);
    if (py && qy) return Rat(1);
    if (py) return Q.dehom().lc();
    if (qy) return P.dehom().lc();
    return poly_resultant(P.dehom(), Q.dehom());
}

Int mod_pos(const Int& v, const Int& m) {
    Int r = v % m;
    if (r < 0) r += m;
    return r;
}

Rat eval_quadratic_poly(const UniPoly& g, const Rat& u, const Rat& w, const Int& d, Rat& im) {
    // Horner in Q(sqrt d): value = re + im*sqrt(d) at u + w sqrt(d).
    Rat re = 0;
    im = 0;
    const auto& c = g.coeffs();
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        Rat nre = re * u + im * w * Rat(d) + *it;
        Rat nim = re * w + im * u;
        re = nre;
        im = nim;
    }
    return re;
}

}  // namespace

std::string class_name(AdmissibilityClass c) {
    switch (c) {
        case AdmissibilityClass::A1: return "A1";
        case AdmissibilityClass::A2: return "A2";
        case AdmissibilityClass::A3: return "A3";
        case AdmissibilityClass::A4: return "A4";
    }
    return "?";
}

AdmissibilityClass parse_class(const std::string& s) {
    if (s == "A1") return AdmissibilityClass::A1;
    if (s == "A2") return AdmissibilityClass::A2;
    if (s == "A3") return AdmissibilityClass::A3;
    if (s == "A4") return AdmissibilityClass::A4;
    throw InvalidFamily("unknown admissibility class '" + s + "'");
}

std::string branch_name(VBranch b) {
    switch (b) {
        case VBranch::Theta: return "theta";
        case VBranch::HalfU: return "half-u";
        case VBranch::DefinitionParity: return "definition";
    }
    return "?";
}

VBranch parse_branch(const std::string& s) {
    if (s == "theta") return VBranch::Theta;
    if (s == "half-u") return VBranch::HalfU;
    if (s == "definition") return VBranch::DefinitionParity;
    throw DomainError("unknown v-branch '" + s + "'");
}

std::string provenance_name(ThetaResult::Provenance p) {
    switch (p) {
        case ThetaResult::Provenance::ExactRational: return "exact-rational";
        case ThetaResult::Provenance::ExactQuadratic: return "exact-quadratic";
        case ThetaResult::Provenance::EmpiricalChebotarev: return "empirical-chebotarev";
    }
    return "?";
}

bool FamilySpec::is_bad(const Int& p) const { return std::binary_search(bad_primes.begin(), bad_primes.end(), p); }

// ---------------------------------------------------------------------------
// Registry

const Json& builtin_registry() {
    static const Json reg = Json::parse(kRegistryJson);
    return reg;
}

Json read_registry_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ResourceError("cannot open registry '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const std::exception& e) {
        throw InvalidFamily(std::string("registry is not valid JSON: ") + e.what());
    }
}

std::vector<std::string> registry_names(const Json& registry) {
    std::vector<std::string> out;
    for (const auto& e : registry.at("families")) out.push_back(e.at("name").get<std::string>());
    return out;
}

const Json& registry_entry(const Json& registry, const std::string& name) {
    for (const auto& e : registry.at("families"))
        if (e.at("name").get<std::string>() == name) return e;
    throw InvalidFamily("unknown family '" + name + "'");
}

FamilySpec load_builtin(const std::string& name) { return load_family(registry_entry(builtin_registry(), name)); }

// ---------------------------------------------------------------------------
// Lambda

int max_local_m_exponent(const WHomPoly& A, const WHomPoly& B, const Int& p, int upsilon, int tau, int k_cap) {
    if (p > 1000) throw ResourceError("local search for m-exponents needs p <= 1000");
    const int t_a = upsilon * tau, t_b = upsilon;
    auto exists = [&](int k) {
        const int levels = 6 * k;
        std::vector<Int> pw(static_cast<size_t>(levels) + 1);
        pw[0] = 1;
        for (int j = 1; j <= levels; ++j) pw[static_cast<size_t>(j)] = pw[static_cast<size_t>(j) - 1] * p;
        unsigned long pu = p.get_ui();
        std::function<bool(const Int&, const Int&, int)> dfs = [&](const Int& a, const Int& b, int j) -> bool {
            if (j > 0) {
                const Int& mA = pw[static_cast<size_t>(std::min(j, 4 * k))];
                const Int& mB = pw[static_cast<size_t>(std::min(j, 6 * k))];
                if (mod_pos(A.eval_int(a, b), mA) != 0) return false;
                if (mod_pos(B.eval_int(a, b), mB) != 0) return false;
                if (j >= std::max(t_a, t_b) && mod_pos(a, pw[static_cast<size_t>(t_a)]) == 0 &&
                    mod_pos(b, pw[static_cast<size_t>(t_b)]) == 0)
                    return false;
            }
            if (j == levels) return true;
            for (unsigned long da = 0; da < pu; ++da)
                for (unsigned long db = 0; db < pu; ++db)
                    if (dfs(a + pw[static_cast<size_t>(j)] * da, b + pw[static_cast<size_t>(j)] * db, j + 1)) return true;
            return false;
        };
        return dfs(Int(0), Int(0), 0);
    };
    int k = 0;
    while (k < k_cap && exists(k + 1)) ++k;
    return k;
}

LambdaData lambda_cap(const UniPoly& f, const UniPoly& g, const WHomPoly& A, const WHomPoly& B, int upsilon, int tau,
                      int varsigma) {
    LambdaData out;
    if (f.is_zero() || g.is_zero()) throw InapplicableError("lambda_cap needs nonzero f and g");
    if (poly_gcd(f, g).degree() > 0) throw InapplicableError("lambda_cap needs coprime f and g");
    out.applicable = true;
    if (f.degree() == 0 || g.degree() == 0) {
        // A constant form cannot share a prime with the other beyond its content.
        Int c = f.degree() == 0 ? abs(f.coeff(0).get_num()) : abs(g.coeff(0).get_num());
        if (c == 1) return out;
    }
    const int n = 6 * varsigma * varsigma;
    auto padded = [n](const UniPoly& p) {
        std::vector<Rat> c(static_cast<size_t>(n) + 1, Rat(0));
        for (size_t i = 0; i < p.coeffs().size(); ++i) c[i] = p.coeffs()[i];
        return c;
    };
    UniPoly F = f.pow(static_cast<unsigned>(3 * varsigma * tau));
    UniPoly G = g.pow(static_cast<unsigned>(2 * varsigma * tau));
    if (F.degree() > n || G.degree() > n) throw DomainError("degree condition violated in lambda_cap");
    Rat res = form_resultant(padded(F), padded(G));
    if (res == 0 || res.get_den() != 1) throw DomainError("unexpected resultant in lambda_cap");
    out.cap = abs(res.get_num());

    std::set<Int> candidates{Int(2), Int(3)};
    add_prime_divisors(poly_resultant(f, g), candidates);
    add_prime_divisors(f.lc(), candidates);
    add_prime_divisors(g.lc(), candidates);
    Int rest = out.cap;
    for (const Int& p : candidates) {
        int v = 0;
        while (rest % p == 0) {
            rest /= p;
            ++v;
        }
        if (v > 0) out.cap_factors.emplace_back(p, v);
    }
    if (rest != 1) {
        for (const auto& [p, e] : factor_integer(rest).factors) out.cap_factors.emplace_back(p, e);
        std::sort(out.cap_factors.begin(), out.cap_factors.end());
    }
    for (const auto& [p, v] : out.cap_factors) {
        // 12k <= v_p(cap) + (upsilon*tau - 1) * 6 varsigma / tau.
        int bound = (v + (upsilon * tau - 1) * 6 * varsigma / tau) / 12;
        if (bound <= 0) continue;
        int k = max_local_m_exponent(A, B, p, upsilon, tau, bound);
        if (k > 0) {
            out.exact.emplace_back(p, k);
            out.exact_value *= ipow(p, static_cast<unsigned long>(k));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Discriminant split

DiscSplit split_discriminant(const WHomPoly& A, const WHomPoly& B, const WHomPoly& Delta, const WHomPoly& DeltaPrime,
                             int ell) {
    if (Delta.is_zero() || DeltaPrime.is_zero()) throw DomainError("split_discriminant needs nonzero discriminants");
    const int tau = Delta.tau();
    FactoredWHom fd = whom_factor(Delta), fdp = whom_factor(DeltaPrime);
    std::vector<WHomPoly> gcd_factors;
    if (!A.is_zero() && !B.is_zero()) {
        UniPoly gab = poly_gcd(A.dehom(), B.dehom());
        if (gab.degree() > 0)
            for (const auto& [h, e] : poly_factor(gab).factors) gcd_factors.push_back(whom_lift_factor(h, tau));
        if (A.y_multiplicity() > 0 && B.y_multiplicity() > 0) gcd_factors.push_back(WHomPoly::y(tau));
    }
    auto mult_in = [](const FactoredWHom& fw, const WHomPoly& P) {
        for (const auto& [q, e] : fw.factors)
            if (q == P) return e;
        return 0;
    };
    std::vector<WHomPoly> all;
    for (const auto& [q, e] : fd.factors) all.push_back(q);
    for (const auto& [q, e] : fdp.factors)
        if (std::find(all.begin(), all.end(), q) == all.end()) all.push_back(q);

    DiscSplit s;
    s.T = s.Tprime = s.Dplus = s.Dminus = one(tau);
    s.Dplus1 = s.Dplus2 = s.Dminus1 = s.Dminus2 = one(tau);
    s.radical = one(tau);
    for (const auto& P : all) {
        int m = mult_in(fd, P), mp = mult_in(fdp, P);
        bool in_gcd = std::find(gcd_factors.begin(), gcd_factors.end(), P) != gcd_factors.end();
        if (m > 0 && mp == ell * m) {
            s.plus_factors.emplace_back(P, m);
        } else if (mp > 0 && m == ell * mp) {
            s.minus_factors.emplace_back(P, mp);
        } else if (m == mp && in_gcd) {
            s.t_factors.emplace_back(P, m);
        } else {
            throw ClassificationError("factor " + P.str() + " has multiplicities " + std::to_string(m) + " in Delta and " +
                                      std::to_string(mp) + " in Delta', fitting no routing case");
        }
    }
    for (const auto& [P, e] : s.t_factors) {
        s.T = s.T * P.pow(static_cast<unsigned>(e));
        s.Tprime = s.T;
    }
    for (const auto& [P, e] : s.plus_factors) {
        WHomPoly pe = P.pow(static_cast<unsigned>(e));
        s.Dplus = s.Dplus * pe;
        (e % 2 ? s.Dplus1 : s.Dplus2) = (e % 2 ? s.Dplus1 : s.Dplus2) * pe;
        s.radical = s.radical * P;
    }
    for (const auto& [P, e] : s.minus_factors) {
        WHomPoly pe = P.pow(static_cast<unsigned>(e));
        s.Dminus = s.Dminus * pe;
        (e % 2 ? s.Dminus1 : s.Dminus2) = (e % 2 ? s.Dminus1 : s.Dminus2) * pe;
        s.radical = s.radical * P;
    }
    auto constant_ratio = [](const WHomPoly& num, const WHomPoly& den, const char* what) {
        if (num.weighted_degree() != den.weighted_degree())
            throw ClassificationError(std::string("weighted degree mismatch in the split of ") + what);
        auto [q, r] = divmod(num.dehom(), den.dehom());
        if (!r.is_zero() || q.degree() != 0) throw ClassificationError(std::string("non-constant cofactor in ") + what);
        return q.coeff(0);
    };
    const unsigned l = static_cast<unsigned>(ell);
    s.cprime = constant_ratio(Delta, s.T * s.Dplus * s.Dminus.pow(l), "Delta");
    s.c = constant_ratio(DeltaPrime, s.Tprime * s.Dplus.pow(l) * s.Dminus, "Delta'");
    return s;
}

// ---------------------------------------------------------------------------
// Loading

FamilySpec load_family(const Json& entry) {
    FamilySpec fam;
    try {
        fam.source = entry;
        fam.name = entry.at("name").get<std::string>();
        fam.label = entry.value("label", fam.name);
        fam.ell = entry.at("ell").get<int>();
        fam.upsilon = entry.at("upsilon").get<int>();
        fam.tau = entry.at("tau").get<int>();
        fam.m = entry.at("m").get<int>();
        fam.delta = entry.at("delta").get<int>();
        fam.cls = parse_class(entry.at("class").get<std::string>());
        fam.f = poly_from_json(entry.at("f"));
        fam.g = poly_from_json(entry.at("g"));
        fam.kernel = KernelSpec::from_json(entry.at("kernel"));
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw InvalidFamily(std::string("malformed registry entry: ") + e.what());
    }
    const std::string who = "family '" + fam.name + "': ";
    if (fam.ell < 2 || !is_prime(Int(fam.ell))) throw InvalidFamily(who + "ell must be prime");
    if (fam.upsilon != 1 && fam.upsilon != 2) throw InvalidFamily(who + "upsilon must be 1 or 2");
    if (fam.tau < 1 || fam.m < 1) throw InvalidFamily(who + "tau and m must be positive");
    if (fam.delta != 0 && fam.delta != 1) throw InvalidFamily(who + "delta must be 0 or 1");
    if (!fam.f.has_integer_coeffs() || !fam.g.has_integer_coeffs())
        throw InvalidFamily(who + "f and g must have integer coefficients");
    fam.varsigma = fam.upsilon == 1 ? 2 * fam.m : 1;

    Rat lhs = max_half_third(fam.f, fam.g), rhs(2 * fam.m, fam.upsilon * fam.tau);
    rhs.canonicalize();
    if (lhs != rhs)
        throw InvalidFamily(who + "degree condition fails: max(deg f/2, deg g/3) = " + to_string(lhs) + " but 2m/(upsilon tau) = " +
                            to_string(rhs));
    UniPoly disc_t = Rat(4) * fam.f.pow(3) + Rat(27) * fam.g.pow(2);
    if (disc_t.is_zero()) throw InvalidFamily(who + "4f^3 + 27g^2 vanishes identically");

    bool coprime = fam.f.is_zero() || fam.g.is_zero() ? false : poly_gcd(fam.f, fam.g).degree() == 0;
    if (!coprime && !fam.f.is_zero() && !fam.g.is_zero() && count_real_roots(poly_gcd(fam.f, fam.g)) > 0)
        throw InvalidFamily(who + "f and g share a real root");
    fam.s = (fam.f.is_zero() || fam.g.is_zero()) ? UniPoly::constant(Rat(1)) : poly_gcd(fam.f.pow(3), fam.g.pow(2));

    switch (fam.cls) {
        case AdmissibilityClass::A1:
            if (!coprime) throw InvalidFamily(who + "class A1 needs coprime f and g");
            if (fam.upsilon != 1 || fam.delta != 1) throw InvalidFamily(who + "class A1 needs upsilon = delta = 1");
            if (fam.m != 1 && fam.tau != 1) throw InvalidFamily(who + "class A1 needs m = 1 or tau = 1");
            break;
        case AdmissibilityClass::A2:
            if (!coprime) throw InvalidFamily(who + "class A2 needs coprime f and g");
            if (fam.upsilon != 2 || fam.delta != 1 || fam.m != 1)
                throw InvalidFamily(who + "class A2 needs upsilon = 2, delta = 1, m = 1");
            break;
        case AdmissibilityClass::A3: {
            if (fam.upsilon != 1 || fam.tau != 1 || fam.delta != 1)
                throw InvalidFamily(who + "class A3 needs upsilon = tau = delta = 1");
            if (fam.ell < 5) throw InvalidFamily(who + "class A3 needs ell >= 5");
            int ds = fam.s.degree();
            if (ds < 4 || Rat(ds) >= Rat(24 * fam.m, 2 + fam.m))
                throw InvalidFamily(who + "class A3 needs 4 <= deg s < 24m/(2+m), got deg s = " + std::to_string(ds));
            auto sq = squarefree_decomposition(fam.s);
            if (sq.size() != 1) throw InvalidFamily(who + "class A3 needs s = k^r with k squarefree");
            fam.k_rad = sq[0].first;
            fam.r = sq[0].second;
            if (fam.r != 2 && fam.r != 3 && fam.r != 4 && fam.r != 6)
                throw InvalidFamily(who + "class A3 needs r in {2,3,4,6}, got " + std::to_string(fam.r));
            auto mult = [&](const UniPoly& p) {
                int e = 0;
                UniPoly rest = p;
                while (true) {
                    auto [q, rem] = divmod(rest, fam.k_rad);
                    if (!rem.is_zero()) return e;
                    rest = q;
                    ++e;
                }
            };
            if (mult(fam.f) == 2 && mult(fam.g) == 3 && mult(disc_t) != 6)
                throw InvalidFamily(who + "class A3 multiplicity condition on 4f^3+27g^2 fails");
            break;
        }
        case AdmissibilityClass::A4:
            if (fam.upsilon != 1 || fam.tau != 1 || fam.delta != 0)
                throw InvalidFamily(who + "class A4 needs upsilon = tau = 1 and delta = 0");
            if (fam.ell <= 3 && !coprime) throw InvalidFamily(who + "class A4 with ell in {2,3} needs coprime f and g");
            break;
    }

    fam.A = whom_from_univariate(fam.f, fam.tau, fam.varsigma, 2);
    fam.B = whom_from_univariate(fam.g, fam.tau, fam.varsigma, 3);
    fam.Delta = fam.A.pow(3) * Rat(4) + fam.B.pow(2) * Rat(27);
    fam.pair = build_isogeny(fam.f, fam.g, fam.ell, fam.kernel);
    try {
        fam.Aprime = whom_from_univariate(fam.pair.fp, fam.tau, fam.varsigma, 2);
        fam.Bprime = whom_from_univariate(fam.pair.gp, fam.tau, fam.varsigma, 3);
    } catch (const DomainError& e) {
        throw InvalidFamily(who + "codomain violates the degree condition: " + e.what());
    }
    fam.DeltaPrime = fam.Aprime.pow(3) * Rat(4) + fam.Bprime.pow(2) * Rat(27);

    if (coprime && fam.delta == 1)
        fam.lambda = lambda_cap(fam.f, fam.g, fam.A, fam.B, fam.upsilon, fam.tau, fam.varsigma);
    fam.split = split_discriminant(fam.A, fam.B, fam.Delta, fam.DeltaPrime, fam.ell);

    // Excluded primes.
    std::set<Int> bad;
    add_prime_divisors(Rat(6 * fam.ell), bad);
    add_prime_divisors(fam.split.c, bad);
    add_prime_divisors(fam.split.cprime, bad);
    add_prime_divisors(fam.f.is_zero() ? Rat(1) : fam.f.content(), bad);
    add_prime_divisors(fam.g.is_zero() ? Rat(1) : fam.g.content(), bad);
    // Resultants that matter for the local ratio: pairs of factors of A and B, and D+ against D- and T.
    auto factors_of = [](const WHomPoly& p) {
        std::vector<WHomPoly> out;
        if (p.is_zero()) return out;
        for (const auto& [q, e] : whom_factor(p).factors)
            if (q.weighted_degree() > 0) out.push_back(q);
        return out;
    };
    auto add_pairs = [&](const std::vector<WHomPoly>& left, const std::vector<WHomPoly>& right) {
        for (const auto& P : left)
            for (const auto& Q : right)
                if (!(P == Q)) add_prime_divisors(factor_resultant(P, Q), bad);
    };
    std::vector<WHomPoly> ab = factors_of(fam.A), plus, minus, tfac;
    for (const auto& q : factors_of(fam.B))
        if (std::find(ab.begin(), ab.end(), q) == ab.end()) ab.push_back(q);
    for (const auto& [q, e] : fam.split.plus_factors) plus.push_back(q);
    for (const auto& [q, e] : fam.split.minus_factors) minus.push_back(q);
    for (const auto& [q, e] : fam.split.t_factors) tfac.push_back(q);
    for (const auto* list : {&ab, &plus, &minus, &tfac})
        for (const auto& q : *list)
            if (!is_y_factor(q)) add_prime_divisors(q.dehom().lc(), bad);
    for (size_t i = 0; i < ab.size(); ++i)
        for (size_t j = i + 1; j < ab.size(); ++j) add_prime_divisors(factor_resultant(ab[i], ab[j]), bad);
    add_pairs(plus, minus);
    add_pairs(tfac, plus);
    add_pairs(tfac, minus);
    for (const auto& [p, k] : fam.lambda.exact) bad.insert(p);
    fam.bad_primes.assign(bad.begin(), bad.end());
    return fam;
}

// ---------------------------------------------------------------------------
// Theta and constants

ThetaResult theta_of_factor(const FamilySpec& fam, const WHomPoly& R) {
    ThetaResult out;
    if (is_y_factor(R)) {
        if (fam.B.y_multiplicity() > 0) throw DomainError("factor y divides B");
        Rat val = Rat(6) * fam.B.eval(Rat(1), Rat(0));
        out.theta = is_rational_square(val) ? Rat(1) : Rat(1, 2);
        out.provenance = ThetaResult::Provenance::ExactRational;
        return out;
    }
    const UniPoly& h = R.dehom();
    if (divides(h, fam.g)) throw DomainError("factor " + R.str() + " divides B");
    const int deg = h.degree();
    if (deg == 1) {
        Rat root = -h.coeff(0) / h.coeff(1);
        Rat val = Rat(6) * fam.g.eval(root);
        out.theta = is_rational_square(val) ? Rat(1) : Rat(1, 2);
        out.provenance = ThetaResult::Provenance::ExactRational;
        return out;
    }
    if (deg == 2) {
        Rat a2 = h.coeff(2), a1 = h.coeff(1), a0 = h.coeff(0);
        Rat D = a1 * a1 - 4 * a2 * a0;
        // D = s^2 * d with d squarefree.
        Int num = D.get_num() * D.get_den();
        Int d = squarefree_part(num);
        Rat s = rational_sqrt(D / Rat(d));
        Rat u = -a1 / (2 * a2), w = s / (2 * a2);
        Rat im;
        Rat re = eval_quadratic_poly(fam.g, u, w, d, im);
        out.theta = is_square_in_quadratic_field(d, Rat(6) * re, Rat(6) * im) ? Rat(1) : Rat(1, 2);
        out.provenance = ThetaResult::Provenance::ExactQuadratic;
        return out;
    }
    ChebotarevReport rep = chebotarev_density_report(h, fam.g, kChebotarevX);
    double est = rep.root_average > 0 ? rep.qr_average / rep.root_average : 0.0;
    out.provenance = ThetaResult::Provenance::EmpiricalChebotarev;
    out.X = kChebotarevX;
    out.estimate = est;
    out.margin = std::fabs(est - 0.75);
    if (out.margin < kChebotarevMargin)
        throw LowConfidenceError("theta estimate " + std::to_string(est) + " for " + R.str() + " is too close to 3/4");
    out.theta = est > 0.75 ? Rat(1) : Rat(1, 2);
    return out;
}

FamilyConstants family_constants(const FamilySpec& fam, const DiscSplit& split, VBranch branch) {
    FamilyConstants k;
    k.branch = branch;
    const bool odd_b = (3 * fam.varsigma) % 2 == 1;
    auto v_of = [&](const std::vector<const FactorConstant*>& fs) {
        Rat sum_theta = 0;
        for (const auto* f : fs) sum_theta += f->theta.theta;
        Rat half_u(static_cast<long>(fs.size()), 2);
        half_u.canonicalize();
        switch (branch) {
            case VBranch::Theta: return sum_theta;
            case VBranch::HalfU: return half_u;
            case VBranch::DefinitionParity: return odd_b ? half_u : sum_theta;
        }
        return sum_theta;
    };
    for (const auto& [P, e] : split.plus_factors) k.factors.push_back({P, e, '+', theta_of_factor(fam, P)});
    for (const auto& [P, e] : split.minus_factors) k.factors.push_back({P, e, '-', theta_of_factor(fam, P)});
    std::vector<const FactorConstant*> plus, minus, plus2, minus2;
    for (const auto& f : k.factors) {
        auto& all = f.side == '+' ? plus : minus;
        all.push_back(&f);
        if (f.multiplicity % 2 == 0) (f.side == '+' ? plus2 : minus2).push_back(&f);
        if (f.side == '+') (f.multiplicity % 2 ? k.u_plus1 : k.u_plus2) += 1;
        else (f.multiplicity % 2 ? k.u_minus1 : k.u_minus2) += 1;
    }
    k.u_plus = static_cast<int>(plus.size());
    k.u_minus = static_cast<int>(minus.size());
    k.v_plus = v_of(plus);
    k.v_minus = v_of(minus);
    k.v_plus2 = v_of(plus2);
    k.v_minus2 = v_of(minus2);
    if (fam.ell >= 3) {
        k.c_plus = k.v_plus;
        k.c_minus = k.v_minus;
    } else {
        k.c_plus = Rat(k.u_plus1) + k.v_plus2;
        k.c_minus = Rat(k.u_minus1) + k.v_minus2;
    }
    k.mu = k.c_plus - k.c_minus;
    k.sigma_sq = k.c_plus + k.c_minus;
    return k;
}

Rat rho_exponent(const FamilyConstants& k, int ell, int kk) {
    if (kk < 1) throw DomainError("rho needs k >= 1");
    Rat lk = rpow(Rat(ell), kk);
    return (lk - 1) * k.c_plus - (1 - 1 / lk) * k.c_minus;
}

double rho_exponent_real(const FamilyConstants& k, int ell, double kk) {
    if (!(kk > 0)) throw DomainError("rho needs k > 0");
    double lk = std::pow(static_cast<double>(ell), kk);
    return (lk - 1) * to_double(k.c_plus) - (1 - 1 / lk) * to_double(k.c_minus);
}

Rat delta_of_A(const FamilyConstants& k, const Rat& A) {
    if (k.c_plus == 0) throw DomainError("delta(A) is undefined when c+ = 0");
    if (A <= 0) throw DomainError("delta(A) needs A > 0");
    Rat alpha = 1 + (A + k.c_minus) / k.c_plus;
    return (alpha - 1) * (alpha - 1) * k.c_plus + 2 * (1 - 1 / alpha) * k.c_minus;
}

ChebotarevReport chebotarev_density_report(const UniPoly& h_in, const UniPoly& g_in, long X) {
    if (X < 100) throw SampleError("Chebotarev report needs X >= 100");
    if (h_in.is_zero() || h_in.degree() < 1) throw DomainError("Chebotarev report needs a non-constant h");
    UniPoly h = h_in.primitive();
    UniPoly g = g_in.is_zero() ? g_in : g_in.primitive() * g_in.content();
    if (poly_gcd(h, h.derivative()).degree() > 0) throw DomainError("h must be squarefree");
    if (!g.is_zero() && poly_gcd(h, g).degree() > 0) throw DomainError("h and g must be coprime");
    // Primes dividing these may lose roots or degree; they are skipped.
    Rat guard = poly_discriminant(h) * h.lc() * (g.is_zero() || g.degree() == 0 ? Rat(1) : poly_resultant(h, g));
    std::vector<Rat> gden;
    for (const auto& c : g.coeffs()) gden.push_back(Rat(c.get_den()));

    ChebotarevReport rep;
    rep.X = X;
    auto primes = primes_up_to(static_cast<std::uint32_t>(X));
    double s_root = 0, s_qr = 0;
    long n_root = 0, n_qr = 0;
    std::vector<double> xs, yr, yq;
    for (std::uint32_t p32 : primes) {
        std::uint64_t p = p32;
        if (p <= 3) continue;
        if (mpz_divisible_ui_p(guard.get_num().get_mpz_t(), p) || mpz_divisible_ui_p(guard.get_den().get_mpz_t(), p)) continue;
        auto hp = modp::reduce(h, p);
        if (!hp || modp::degree(*hp) != h.degree()) continue;
        std::optional<modp::Poly> gp;
        if (!g.is_zero()) {
            gp = modp::reduce(g, p);
            if (!gp) continue;
        }
        ++rep.prime_count;
        auto roots = modp::roots(*hp, p, 0x5eed + p);
        long qr = 0;
        for (auto t : roots) {
            std::uint64_t val = gp ? modp::mulmod(6 % p, modp::eval(*gp, t, p), p) : 6 % p;
            if (legendre_u64(static_cast<std::int64_t>(val), p) == 1) ++qr;
        }
        n_root += static_cast<long>(roots.size());
        n_qr += qr;
        s_root += static_cast<double>(roots.size()) / static_cast<double>(p);
        s_qr += static_cast<double>(qr) / static_cast<double>(p);
        if (p >= 100) {
            xs.push_back(std::log(std::log(static_cast<double>(p))));
            yr.push_back(s_root);
            yq.push_back(s_qr);
        }
    }
    if (rep.prime_count == 0) throw SampleError("no usable primes below X");
    rep.root_average = static_cast<double>(n_root) / static_cast<double>(rep.prime_count);
    rep.qr_average = static_cast<double>(n_qr) / static_cast<double>(rep.prime_count);
    auto fit = [&](const std::vector<double>& ys, double& slope, double& icpt) {
        double n = static_cast<double>(xs.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (size_t i = 0; i < xs.size(); ++i) {
            sx += xs[i];
            sy += ys[i];
            sxx += xs[i] * xs[i];
            sxy += xs[i] * ys[i];
        }
        double den = n * sxx - sx * sx;
        slope = den != 0 ? (n * sxy - sx * sy) / den : 0;
        icpt = n > 0 ? (sy - slope * sx) / n : 0;
    };
    if (xs.size() >= 2) {
        fit(yr, rep.root_slope, rep.root_intercept);
        fit(yq, rep.qr_slope, rep.qr_intercept);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// JSON

Json split_to_json(const DiscSplit& s) {
    auto list = [](const FactorList& fl) {
        Json arr = Json::array();
        for (const auto& [P, e] : fl) arr.push_back(Json{{"factor", P.str()}, {"multiplicity", e}});
        return arr;
    };
    return Json{{"cprime", to_string(s.cprime)}, {"c", to_string(s.c)},         {"T", s.T.str()},
                {"Dplus", s.Dplus.str()},       {"Dminus", s.Dminus.str()}, {"Dplus1", s.Dplus1.str()},
                {"Dplus2", s.Dplus2.str()},     {"Dminus1", s.Dminus1.str()}, {"Dminus2", s.Dminus2.str()},
                {"plus_factors", list(s.plus_factors)}, {"minus_factors", list(s.minus_factors)},
                {"t_factors", list(s.t_factors)}};
}

Json constants_to_json(const FamilyConstants& k) {
    Json factors = Json::array();
    for (const auto& f : k.factors) {
        Json j{{"factor", f.factor.str()},
               {"side", std::string(1, f.side)},
               {"multiplicity", f.multiplicity},
               {"theta", to_string(f.theta.theta)},
               {"provenance", provenance_name(f.theta.provenance)}};
        if (f.theta.provenance == ThetaResult::Provenance::EmpiricalChebotarev) {
            j["X"] = f.theta.X;
            j["estimate"] = f.theta.estimate;
            j["margin"] = f.theta.margin;
        }
        factors.push_back(j);
    }
    return Json{{"branch", branch_name(k.branch)},
                {"u_plus", k.u_plus},
                {"u_minus", k.u_minus},
                {"u_plus1", k.u_plus1},
                {"u_plus2", k.u_plus2},
                {"u_minus1", k.u_minus1},
                {"u_minus2", k.u_minus2},
                {"v_plus", to_string(k.v_plus)},
                {"v_minus", to_string(k.v_minus)},
                {"v_plus2", to_string(k.v_plus2)},
                {"v_minus2", to_string(k.v_minus2)},
                {"c_plus", to_string(k.c_plus)},
                {"c_minus", to_string(k.c_minus)},
                {"mu", to_string(k.mu)},
                {"sigma_sq", to_string(k.sigma_sq)},
                {"factors", factors}};
}

Json family_to_json(const FamilySpec& fam) {
    Json lam = Json::object();
    lam["applicable"] = fam.lambda.applicable;
    if (fam.lambda.applicable) {
        Json capf = Json::array(), ex = Json::array();
        for (const auto& [p, e] : fam.lambda.cap_factors) capf.push_back(Json::array({to_string(p), e}));
        for (const auto& [p, e] : fam.lambda.exact) ex.push_back(Json::array({to_string(p), e}));
        lam["cap_factors"] = capf;
        lam["exact"] = ex;
        lam["exact_value"] = to_string(fam.lambda.exact_value);
    }
    Json bad = Json::array();
    for (const auto& p : fam.bad_primes) bad.push_back(to_string(p));
    Json j{{"name", fam.name},
           {"label", fam.label},
           {"ell", fam.ell},
           {"upsilon", fam.upsilon},
           {"tau", fam.tau},
           {"m", fam.m},
           {"varsigma", fam.varsigma},
           {"delta", fam.delta},
           {"class", class_name(fam.cls)},
           {"f", poly_to_json(fam.f)},
           {"g", poly_to_json(fam.g)},
           {"kernel", fam.kernel.to_json()},
           {"f_prime", poly_to_json(fam.pair.fp)},
           {"g_prime", poly_to_json(fam.pair.gp)},
           {"A", fam.A.str()},
           {"B", fam.B.str()},
           {"Delta", fam.Delta.str()},
           {"A_prime", fam.Aprime.str()},
           {"B_prime", fam.Bprime.str()},
           {"Delta_prime", fam.DeltaPrime.str()},
           {"s", fam.s.str()},
           {"lambda", lam},
           {"excluded_primes", bad},
           {"split", split_to_json(fam.split)}};
    if (fam.cls == AdmissibilityClass::A3) {
        j["k"] = fam.k_rad.str();
        j["r"] = fam.r;
    }
    return j;
}

}  // namespace selmer
