#include <gtest/gtest.h>

#include <numeric>

#include "selmer/arith.hpp"
#include "selmer/curves.hpp"
#include "selmer/errors.hpp"
#include "selmer/family.hpp"
#include "selmer/tables.hpp"

using namespace selmer;

namespace {

const FamilySpec& fam(const std::string& name) {
    static std::map<std::string, FamilySpec> cache;
    auto it = cache.find(name);
    if (it == cache.end()) it = cache.emplace(name, load_builtin(name)).first;
    return it->second;
}

bool in_t_set(long a, long b, int upsilon, int tau) {
    long g = std::gcd(std::labs(a), std::labs(b));
    if (g == 0) return false;
    for (const auto& [p, e] : factor_integer(Int(g)).factors) {
        (void)e;
        int va = a == 0 ? 1 << 20 : valuation(Int(a), p), vb = b == 0 ? 1 << 20 : valuation(Int(b), p);
        if (va >= upsilon * tau && vb >= upsilon) return false;
    }
    return true;
}

Json entry_with(const std::string& name, const std::function<void(Json&)>& edit) {
    Json e = registry_entry(builtin_registry(), name);
    edit(e);
    return e;
}

}  // namespace

TEST(Registry, ShipsTenEntries) {
    auto names = registry_names(builtin_registry());
    EXPECT_EQ(names.size(), 10u);
    EXPECT_THROW(registry_entry(builtin_registry(), "nope"), InvalidFamily);
}

TEST(Registry, LoadExamples) {
    EXPECT_EQ(fam("z5").cls, AdmissibilityClass::A1);
    EXPECT_EQ(fam("z5").tau, 1);
    EXPECT_EQ(fam("z5").m, 1);
    EXPECT_EQ(fam("z2").cls, AdmissibilityClass::A2);
    EXPECT_EQ(fam("z2").tau, 2);
    EXPECT_EQ(fam("z2").varsigma, 1);
    EXPECT_EQ(fam("iso13").cls, AdmissibilityClass::A4);
    EXPECT_EQ(fam("iso13").m, 2);
    EXPECT_EQ(fam("iso7").cls, AdmissibilityClass::A3);
    EXPECT_EQ(fam("iso7").r, 2);
    EXPECT_EQ(fam("iso7").s.degree(), 4);
}

TEST(Registry, RejectsBadEntries) {
    auto degree = entry_with("z5", [](Json& e) { e["m"] = 2; });
    EXPECT_THROW(load_family(degree), InvalidFamily);
    auto cls = entry_with("z5", [](Json& e) { e["class"] = "A2"; });
    EXPECT_THROW(load_family(cls), InvalidFamily);
    auto shape = entry_with("iso7", [](Json& e) { e["ell"] = 3; });
    EXPECT_THROW(load_family(shape), InvalidFamily);
    auto junk = entry_with("z3", [](Json& e) { e.erase("f"); });
    EXPECT_THROW(load_family(junk), InvalidFamily);
}

TEST(Registry, NormalizedJsonRoundTrip) {
    for (const auto& name : registry_names(builtin_registry())) {
        Json j = family_to_json(fam(name));
        Json entry = Json::object();
        for (const char* key : {"name", "label", "ell", "upsilon", "tau", "m", "delta", "class", "f", "g", "kernel"})
            entry[key] = j[key];
        FamilySpec again = load_family(entry);
        EXPECT_EQ(again.Delta, fam(name).Delta) << name;
        EXPECT_EQ(again.DeltaPrime, fam(name).DeltaPrime) << name;
    }
}

TEST(Split, IdentityHoldsForEveryFamily) {
    for (const auto& name : registry_names(builtin_registry())) {
        const auto& F = fam(name);
        const auto& s = F.split;
        auto l = static_cast<unsigned>(F.ell);
        EXPECT_EQ(s.T * s.Dplus * s.Dminus.pow(l) * s.cprime, F.Delta) << name;
        EXPECT_EQ(s.Tprime * s.Dplus.pow(l) * s.Dminus * s.c, F.DeltaPrime) << name;
        EXPECT_EQ(poly_gcd(s.Dplus.dehom(), s.Dminus.dehom()).degree(), 0) << name;
        EXPECT_EQ(poly_gcd(s.T.dehom(), (s.Dplus * s.Dminus).dehom()).degree(), 0) << name;
    }
}

TEST(Split, Examples) {
    const auto& z5 = fam("z5").split;
    EXPECT_EQ(z5.Dplus.str(), "a^2 + 11*a*b - b^2");
    EXPECT_EQ(z5.Dminus.str(), "a*b");
    EXPECT_EQ(z5.minus_factors.size(), 2u);
    const auto& z4 = fam("z4").split;
    EXPECT_EQ(z4.Dplus1.str(), "16*a + b^2");
    EXPECT_EQ(z4.Dplus2.str(), "b^2");
    EXPECT_EQ(z4.Dminus2.str(), "a^2");
    const auto& iso7 = fam("iso7").split;
    EXPECT_EQ(iso7.Dplus.str(), "a");
    EXPECT_EQ(iso7.Dminus.str(), "b");
    EXPECT_EQ(iso7.T.str(), "a^4 + 26*a^3*b + 267*a^2*b^2 + 1274*a*b^3 + 2401*b^4");
}

TEST(Split, UnroutableFactorThrows) {
    const auto& F = fam("z3");
    // Pairing Delta with itself puts every factor at ratio 1 outside gcd(A,B).
    EXPECT_THROW(split_discriminant(F.A, F.B, F.Delta, F.Delta, F.ell), ClassificationError);
}

TEST(Theta, Examples) {
    const auto& z3 = fam("z3");
    auto t9 = theta_of_factor(z3, WHomPoly(3, 3, UniPoly({9, 1})));
    EXPECT_EQ(t9.theta, Rat(1));
    EXPECT_EQ(t9.provenance, ThetaResult::Provenance::ExactRational);
    EXPECT_EQ(theta_of_factor(z3, WHomPoly(3, 3, UniPoly({5, 1}))).theta, Rat(1, 2));

    const auto& z5 = fam("z5");
    auto dp = theta_of_factor(z5, z5.split.Dplus);
    EXPECT_EQ(dp.theta, Rat(1, 2));
    EXPECT_EQ(dp.provenance, ThetaResult::Provenance::ExactQuadratic);

    EXPECT_EQ(theta_of_factor(fam("z2xz2"), WHomPoly(1, 1, UniPoly({-1, 1}))).theta, Rat(1));
    // y factor of the 7-isogeny family: 6B(1,0) = 12.
    EXPECT_EQ(theta_of_factor(fam("iso7"), WHomPoly::y(1)).theta, Rat(1, 2));
}

TEST(Theta, FactorDividingBThrows) {
    const auto& iso7 = fam("iso7");
    EXPECT_THROW(theta_of_factor(iso7, WHomPoly(1, 2, UniPoly({49, 13, 1}))), DomainError);
}

TEST(Constants, TableRowsUnderThetaBranch) {
    for (const auto& row : expected_rows()) {
        const auto& F = fam(row.family);
        auto k = family_constants(F, F.split);
        auto check = check_row(row, F, k);
        for (const auto& c : check.cells) {
            if (row.family == "iso13" && c.key == "mu") {
                // Printed 1/2 conflicts with c+ - c- = 1/2 - 1.
                EXPECT_EQ(c.computed, Rat(-1, 2));
                continue;
            }
            EXPECT_TRUE(c.ok) << row.family << " " << c.key << " expected " << to_string(c.expected) << " got "
                              << to_string(c.computed);
        }
    }
}

TEST(Constants, Invariants) {
    for (const auto& name : registry_names(builtin_registry())) {
        const auto& F = fam(name);
        auto k = family_constants(F, F.split);
        EXPECT_EQ(k.mu, k.c_plus - k.c_minus);
        EXPECT_EQ(k.sigma_sq, k.c_plus + k.c_minus);
        if (F.ell >= 3) {
            EXPECT_EQ(k.c_plus, k.v_plus);
            EXPECT_EQ(k.c_minus, k.v_minus);
        } else {
            EXPECT_EQ(k.c_plus, Rat(k.u_plus1) + k.v_plus2);
            EXPECT_EQ(k.c_minus, Rat(k.u_minus1) + k.v_minus2);
        }
        for (const auto& f : k.factors) EXPECT_TRUE(f.theta.theta == Rat(1) || f.theta.theta == Rat(1, 2));
    }
}

TEST(Constants, BranchesDifferOnlyWhereExpected) {
    const auto& F = fam("z2xz2");
    auto theta = family_constants(F, F.split, VBranch::Theta);
    auto half = family_constants(F, F.split, VBranch::HalfU);
    auto literal = family_constants(F, F.split, VBranch::DefinitionParity);
    EXPECT_EQ(theta.v_plus2, Rat(1));
    EXPECT_EQ(half.v_plus2, Rat(1, 2));
    // Weighted degree of B is 3, which is odd.
    EXPECT_EQ(literal.v_plus2, Rat(1, 2));
    const auto& z5 = fam("z5");
    EXPECT_EQ(family_constants(z5, z5.split, VBranch::DefinitionParity).v_minus, Rat(2));
}

TEST(Constants, RhoAndDelta) {
    const auto& z3 = fam("z3");
    auto k3 = family_constants(z3, z3.split);
    EXPECT_EQ(rho_exponent(k3, 3, 1), Rat(1, 3));
    FamilyConstants zero;
    EXPECT_EQ(rho_exponent(zero, 5, 3), Rat(0));
    const auto& z22 = fam("z2xz2");
    EXPECT_EQ(rho_exponent(family_constants(z22, z22.split), 2, 2), Rat(3, 2));
    EXPECT_NEAR(rho_exponent_real(k3, 3, 1.0), 1.0 / 3.0, 1e-12);

    FamilyConstants unit;
    unit.c_plus = 1;
    unit.c_minus = 0;
    EXPECT_EQ(delta_of_A(unit, Rat(1)), Rat(1));
    EXPECT_LT(to_double(delta_of_A(unit, Rat(1, 1000000))), 1e-10);
    const auto& z5 = fam("z5");
    EXPECT_EQ(delta_of_A(family_constants(z5, z5.split), Rat(1)), Rat(150, 7));
    FamilyConstants no_plus;
    no_plus.c_minus = 1;
    EXPECT_THROW(delta_of_A(no_plus, Rat(1)), DomainError);
}

TEST(Lambda, TrivialAndRejections) {
    UniPoly one = UniPoly::constant(Rat(1)), t = UniPoly::x();
    auto A = whom_from_univariate(one, 1, 2, 2), B = whom_from_univariate(t, 1, 2, 3);
    EXPECT_EQ(lambda_cap(one, t, A, B, 1, 1, 2).exact_value, Int(1));
    EXPECT_THROW(lambda_cap(t, t * t, A, B, 1, 1, 2), InapplicableError);
    EXPECT_FALSE(fam("iso7").lambda.applicable);
}

TEST(Lambda, PrimesDivideSixTimesResultant) {
    const auto& z3 = fam("z3");
    Rat res = poly_resultant(z3.f, z3.g) * z3.f.lc() * z3.g.lc() * 6;
    for (const auto& [p, e] : z3.lambda.cap_factors) EXPECT_EQ(res.get_num() % p, 0) << p;
}

TEST(Lambda, SampleMultiplesDivideLambda) {
    for (const char* name : {"z2", "z2xz2", "z4", "z3", "cyclic4"}) {
        const auto& F = fam(name);
        Int seen = 1;
        const long box = 120;
        for (long a = -box; a <= box; ++a)
            for (long b = 0; b <= box; ++b) {
                if (!in_t_set(a, b, F.upsilon, F.tau)) continue;
                Int A = F.A.eval_int(Int(a), Int(b)), B = F.B.eval_int(Int(a), Int(b));
                if (A == 0 && B == 0) continue;
                Int m = m_of(A, B);
                EXPECT_EQ(F.lambda.cap % ipow(m, 12), 0) << name << " " << a << "," << b;
                EXPECT_EQ(F.lambda.exact_value % m, 0) << name << " " << a << "," << b;
                mpz_lcm(seen.get_mpz_t(), seen.get_mpz_t(), m.get_mpz_t());
            }
        EXPECT_EQ(seen, F.lambda.exact_value) << name;
    }
}

TEST(Chebotarev, DensityReports) {
    const auto& z5 = fam("z5");
    auto rep = chebotarev_density_report(z5.split.Dplus.dehom(), z5.g, 100000);
    EXPECT_NEAR(rep.qr_average, 0.5, 0.05);
    EXPECT_NEAR(rep.root_average, 1.0, 0.05);
    EXPECT_NEAR(rep.qr_slope, 0.5, 0.15);

    const auto& z3 = fam("z3");
    auto rep3 = chebotarev_density_report(UniPoly({9, 1}), z3.g, 100000);
    EXPECT_NEAR(rep3.qr_average, 1.0, 0.05);

    auto gauss = chebotarev_density_report(UniPoly({1, 0, 1}), UniPoly::constant(Rat(1)), 100000);
    EXPECT_NEAR(gauss.root_average, 1.0, 0.05);
    EXPECT_THROW(chebotarev_density_report(UniPoly({1, 1}), UniPoly::constant(Rat(1)), 50), SampleError);
}

TEST(Chebotarev, EmpiricalThetaForCubicFactor) {
    // t^3 - 2 with g = 1: 6 is a square mod p for half of the primes, independently of the roots.
    FamilySpec F = fam("z3");
    F.g = UniPoly::constant(Rat(1));
    F.B = whom_from_univariate(F.g, 3, 2, 3);
    auto r = theta_of_factor(F, WHomPoly(3, 9, UniPoly({-2, 0, 0, 1})));
    EXPECT_EQ(r.provenance, ThetaResult::Provenance::EmpiricalChebotarev);
    EXPECT_EQ(r.theta, Rat(1, 2));
    EXPECT_GE(r.margin, 0.1);
}

TEST(Displays, CorrectionsBackedBySpotChecks) {
    for (const auto& d : printed_displays()) {
        if (d.correction.empty()) continue;
        auto c = check_display(d, fam(d.family));
        ASSERT_TRUE(c.has_spot);
        EXPECT_NE(c.spot_literal, c.spot_computed) << d.family;
        if (d.quantity == "Delta") EXPECT_EQ(c.spot_corrected, c.spot_computed) << d.family;
    }
    auto z5 = check_display(printed_displays()[2], fam("z5"));
    EXPECT_EQ(z5.spot_computed, Int("82717728768"));
}

TEST(Displays, KnownOutcomes) {
    std::map<std::string, bool> ok;
    for (const auto& d : printed_displays()) ok[d.family + " " + d.quantity] = check_display(d, fam(d.family)).ok;
    for (const char* key : {"z3 Delta", "z3 Delta'", "z5 Delta", "z5 Delta'", "z4 Delta", "z4 Delta'", "z2 Delta",
                            "z2 Delta'", "iso7 Delta"})
        EXPECT_TRUE(ok.at(key)) << key;
    for (const char* key : {"z2xz2 Delta", "z2xz2 Delta'", "cyclic4 Delta", "cyclic4 Delta'", "iso7 Delta'",
                            "iso13 Delta", "iso13 Delta'"})
        EXPECT_FALSE(ok.at(key)) << key;
}
