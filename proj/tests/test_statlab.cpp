#include <gtest/gtest.h>

#include <map>
#include <random>
#include <sstream>

#include "selmer/arith.hpp"
#include "selmer/errors.hpp"
#include "selmer/statlab.hpp"

using namespace selmer;

namespace {

const FamilySpec& fam(const std::string& name) {
    static std::map<std::string, FamilySpec> cache;
    auto it = cache.find(name);
    if (it == cache.end()) it = cache.emplace(name, load_builtin(name)).first;
    return it->second;
}

ParamPoint make_point(const FamilySpec& f, long a, long b) {
    ParamPoint pt;
    pt.a = a;
    pt.b = b;
    pt.A = f.A.eval_int(pt.a, pt.b);
    pt.B = f.B.eval_int(pt.a, pt.b);
    pt.Delta = 4 * pt.A * pt.A * pt.A + 27 * pt.B * pt.B;
    pt.e = 1;
    pt.H = 0;
    return pt;
}

std::vector<ParamPoint> points_at(const std::string& name, int exponent) {
    EnumOptions o;
    o.N = ipow(Int(10), static_cast<unsigned long>(exponent));
    return collect_points(fam(name), o);
}

}  // namespace

TEST(LocalExponent, CyclicFiveAtEleven) {
    const auto& z5 = fam("z5");
    PointValues v = point_values(z5, Int(1), Int(1));
    EXPECT_EQ(v.Dplus, 11);
    EXPECT_EQ(abs(v.Dminus), 1);
    EXPECT_EQ(v.B * 6, 49248);
    LocalExponent le = local_exponent(z5, Int(1), Int(1), Int(11));
    EXPECT_FALSE(le.excluded);
    EXPECT_EQ(le.value, 1);
}

TEST(LocalExponent, GoodReductionIsZero) {
    const auto& z5 = fam("z5");
    // 13 does not divide Delta(1, 1).
    ParamPoint pt = make_point(z5, 1, 1);
    ASSERT_NE(pt.Delta % 13, 0);
    LocalExponent le = local_exponent(z5, Int(1), Int(1), Int(13));
    EXPECT_FALSE(le.excluded);
    EXPECT_EQ(le.value, 0);
}

TEST(LocalExponent, ExcludedPrimesReported) {
    const auto& z5 = fam("z5");
    for (const auto& p : z5.bad_primes) {
        LocalExponent le = local_exponent(z5, Int(1), Int(1), p);
        EXPECT_TRUE(le.excluded);
        EXPECT_EQ(le.value, 0);
    }
    EXPECT_THROW(local_exponent(z5, Int(1), Int(1), Int(12)), DomainError);
}

TEST(LocalExponent, SquareHitForDegreeTwo) {
    const auto& z2 = fam("z2");
    // Search a point whose radical value has a square factor p^2 with p >= 5 outside S_bad.
    bool found = false;
    for (long a = -60; a <= 60 && !found; ++a)
        for (long b = 1; b <= 60 && !found; ++b) {
            if (!in_coprimality_set(Int(a), Int(b), z2.upsilon, z2.tau)) continue;
            PointValues v = point_values(z2, Int(a), Int(b));
            if (v.R == 0) continue;
            for (long p : {5L, 7L, 11L, 13L}) {
                if (z2.is_bad(Int(p)) || v.R % (p * p) != 0) continue;
                if (v.A % p == 0 && v.B % p == 0) continue;
                if (v.Dplus % p == 0 && v.Dminus % p == 0) continue;
                LocalExponent le = local_exponent(z2, v, Int(p));
                EXPECT_TRUE(le.excluded);
                EXPECT_EQ(le.reason, "square hit");
                found = true;
                break;
            }
        }
    EXPECT_TRUE(found);
}

TEST(ExponentSum, Examples) {
    CurveRecord r = curve_exponent_sum(fam("z5"), make_point(fam("z5"), 1, 1));
    EXPECT_EQ(r.exponent_sum, 1);
    ASSERT_EQ(r.local_exponents.size(), 1u);
    EXPECT_EQ(r.local_exponents[0].first, 11);

    const auto& iso7 = fam("iso7");
    PointValues v = point_values(iso7, Int(1), Int(1));
    EXPECT_EQ(abs(v.Dplus), 1);
    EXPECT_EQ(abs(v.Dminus), 1);
    EXPECT_EQ(curve_exponent_sum(iso7, make_point(iso7, 1, 1)).exponent_sum, 0);

    EXPECT_THROW(curve_exponent_sum(fam("z5"), ParamPoint{}), DomainError);
}

TEST(ExponentSum, InvariantsOverEnumeration) {
    for (const char* name : {"z3", "z2", "cyclic4", "iso13"}) {
        const auto& f = fam(name);
        for (const auto& pt : points_at(name, 8)) {
            CurveRecord r = curve_exponent_sum(f, pt);
            int total = 0;
            PointValues v = point_values(f, pt.a, pt.b);
            for (const auto& [p, e] : r.local_exponents) {
                total += e;
                EXPECT_EQ((v.Dplus * v.Dminus) % p, 0) << name;
            }
            EXPECT_EQ(total, r.exponent_sum);
            EXPECT_EQ(r.n_plus - r.n_minus, r.exponent_sum);
        }
    }
}

TEST(ExponentSum, SignChoiceIrrelevant) {
    // (a, b) and its weighted negation describe the same curve.
    const auto& z3 = fam("z3");
    for (const auto& pt : points_at("z3", 8)) {
        ParamPoint neg = make_point(z3, -pt.a.get_si(), -pt.b.get_si());
        EXPECT_EQ(curve_exponent_sum(z3, pt).exponent_sum, curve_exponent_sum(z3, neg).exponent_sum);
    }
}

TEST(Oracle, CyclicFiveAtEleven) {
    OracleResult r = oracle_cross_check(fam("z5"), Int(1), Int(1), Int(11));
    EXPECT_TRUE(r.applicable);
    EXPECT_EQ(r.ratio_valuation, 1);
    EXPECT_EQ(r.exponent, 1);
    EXPECT_TRUE(r.agree);
}

TEST(Oracle, GoodPrimeNotApplicable) {
    OracleResult r = oracle_cross_check(fam("z5"), Int(1), Int(1), Int(13));
    EXPECT_FALSE(r.applicable);
    EXPECT_EQ(r.note, "good");
}

TEST(Oracle, NonsplitGivesZero) {
    const auto& z5 = fam("z5");
    int seen = 0;
    for (const auto& pt : points_at("z5", 20)) {
        PointValues v = point_values(z5, pt.a, pt.b);
        for (const auto& p : prime_divisors(abs(v.Dplus))) {
            if (p <= 3 || z5.is_bad(p) || legendre(6 * v.B, p) != -1) continue;
            OracleResult r = oracle_cross_check(z5, pt.a, pt.b, p);
            if (!r.applicable) continue;
            EXPECT_EQ(r.exponent, 0);
            EXPECT_EQ(r.ratio_valuation, 0);
            EXPECT_TRUE(r.agree);
            ++seen;
        }
    }
    EXPECT_GT(seen, 0);
}

TEST(Oracle, SweepAgreesEverywhere) {
    for (const char* name : {"z3", "z4", "z5", "z2", "z2xz2", "cyclic4", "iso7", "iso13"}) {
        int e = std::string(name) == "z5" ? 20 : std::string(name) == "iso7" ? 20 : std::string(name) == "iso13" ? 40 : 10;
        auto pts = points_at(name, e);
        OracleSummary s = oracle_sweep(fam(name), pts, 2);
        EXPECT_EQ(s.curves, pts.size());
        EXPECT_GT(s.checks, 0u) << name;
        EXPECT_EQ(s.agreements, s.checks) << name << ": " << (s.disagreements.empty() ? "" : s.disagreements[0]);
        EXPECT_EQ(s.sandwich_violations, 0u) << name;
    }
}

TEST(Profile, ExhaustiveCountAtEleven) {
    const auto& z5 = fam("z5");
    Profile prof = theoretical_profile(z5, 11);
    ASSERT_FALSE(prof.primes.empty());
    const PrimeDensity& d = prof.primes.back();
    ASSERT_EQ(d.p, 11u);
    std::uint64_t plus = 0, minus = 0;
    for (long a = 0; a < 11; ++a)
        for (long b = 0; b < 11; ++b) {
            if (a == 0 && b == 0) continue;
            int y = y_circ_mod_p(z5.ell, point_values(z5, Int(a), Int(b)), 11);
            plus += y > 0;
            minus += y < 0;
        }
    EXPECT_EQ(d.plus, plus);
    EXPECT_EQ(d.minus, minus);
    Rat expected(Int(static_cast<unsigned long>(plus)), Int(120));
    expected.canonicalize();
    EXPECT_EQ(d.d_plus, expected);
}

TEST(Profile, ExcludedPrimesOmitted) {
    const auto& z5 = fam("z5");
    Profile prof = theoretical_profile(z5, 200);
    for (const auto& d : prof.primes) {
        EXPECT_FALSE(z5.is_bad(Int(static_cast<unsigned long>(d.p))));
        EXPECT_GE(d.p, 5u);
    }
    EXPECT_THROW(theoretical_profile(z5, 1001), DomainError);
}

TEST(Profile, CubicSlopeNearHalf) {
    Profile prof = theoretical_profile(fam("z3"), 1000);
    EXPECT_NEAR(prof.slope_plus, 0.5, 0.1);
}

TEST(Convolution, SurrogateFromLawsIsClose) {
    Profile prof = theoretical_profile(fam("z5"), 100);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0, 1);
    std::map<int, std::uint64_t> hist;
    for (int i = 0; i < 20000; ++i) {
        int s = 0;
        for (const auto& d : prof.primes) {
            double x = u(rng), dp = to_double(d.d_plus), dm = to_double(d.d_minus);
            s += x < dp ? 1 : x < dp + dm ? -1 : 0;
        }
        ++hist[s];
    }
    EXPECT_LT(convolution_tv(hist, prof.primes), 0.02);
    std::map<int, std::uint64_t> shifted;
    for (const auto& [s, c] : hist) shifted[s + 3] = c;
    EXPECT_GT(convolution_tv(shifted, prof.primes), 0.5);
    EXPECT_THROW(convolution_tv({}, prof.primes), SampleError);
}

TEST(Convolution, LawsSumToOne) {
    auto dist = convolve_laws(theoretical_profile(fam("iso13"), 60).primes);
    double total = 0;
    for (const auto& [s, w] : dist) total += w;
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(AveragePower, AllZeroIsOne) {
    std::vector<CurveRecord> recs(5);
    EXPECT_EQ(average_power(fam("z4"), recs, 1), 1);
    EXPECT_EQ(average_power(fam("z4"), recs, 3), 1);
    EXPECT_THROW(average_power(fam("z4"), std::vector<CurveRecord>{}, 1), SampleError);
    EXPECT_THROW(average_power(fam("z4"), recs, 0), DomainError);
}

TEST(AveragePower, ExactValue) {
    std::vector<CurveRecord> recs(2);
    recs[0].exponent_sum = 1;
    recs[1].exponent_sum = -1;
    EXPECT_EQ(average_power(fam("z5"), recs, 1), Rat(13, 5));
    EXPECT_EQ(average_power(fam("z5"), recs, 2), Rat(313, 25));
}

TEST(AveragePower, QuarticFamilyIncreases) {
    Rat prev = 0;
    for (int e : {6, 8, 10}) {
        Rat cur = average_power(fam("z4"), ipow(Int(10), static_cast<unsigned long>(e)), 1);
        EXPECT_GT(cur, prev);
        prev = cur;
    }
}

TEST(Tail, Guards) {
    std::vector<CurveRecord> recs(4);
    recs[0].exponent_sum = -1;
    recs[1].exponent_sum = 2;
    TailResult t0 = tail_count(fam("z4"), recs, Int(1000), Rat(0));
    EXPECT_EQ(t0.count, 3u);
    EXPECT_EQ(t0.total, 4u);
    EXPECT_FALSE(t0.has_reference);
    EXPECT_TRUE(tail_count(fam("z4"), recs, Int(1000), Rat(1)).has_reference);
    EXPECT_EQ(tail_count(fam("z4"), recs, Int(1000), Rat(1000000)).count, 0u);
    EXPECT_THROW(tail_count(fam("z4"), recs, Int(15), Rat(1)), DomainError);
}

TEST(Summary, MomentsAreExact) {
    std::vector<CurveRecord> recs;
    for (long a = 1; a <= 1000; ++a) {
        CurveRecord r;
        r.point = make_point(fam("z5"), a, 1);
        r.exponent_sum = (a % 4 == 0) ? 3 : -1;
        recs.push_back(r);
    }
    ExperimentOptions o;
    o.N = ipow(Int(10), 12);
    o.p_cut = 50;
    ExperimentSummary s = summarize_records(fam("z5"), o, recs);
    EXPECT_EQ(s.curve_count, 1000u);
    EXPECT_DOUBLE_EQ(s.moments.mean, 0.0);
    EXPECT_DOUBLE_EQ(s.moments.variance, 3.0);
    EXPECT_NEAR(s.moments.skewness, 2 / std::sqrt(3.0), 1e-12);
    EXPECT_NEAR(s.moments.excess_kurtosis, 21.0 / 9.0 - 3, 1e-12);
    Json j = summary_to_json(s);
    EXPECT_EQ(j["curve_count"], 1000);
    EXPECT_TRUE(j.contains("per_prime"));
    EXPECT_THROW(summarize_records(fam("z5"), o, {}), SampleError);
}

TEST(Summary, TooFewCurves) {
    ExperimentOptions o;
    o.N = ipow(Int(10), 12);
    EXPECT_THROW(distribution_experiment(fam("z5"), o), SampleError);
}

TEST(Summary, ThreadInvariant) {
    ExperimentOptions o;
    o.N = ipow(Int(10), 14);
    o.p_cut = 60;
    o.threads = 1;
    Json one = summary_to_json(distribution_experiment(fam("z3"), o));
    o.threads = 3;
    Json three = summary_to_json(distribution_experiment(fam("z3"), o));
    EXPECT_EQ(one.dump(), three.dump());
}

TEST(Csv, Header) {
    std::ostringstream out;
    std::vector<CurveRecord> recs{curve_exponent_sum(fam("z5"), make_point(fam("z5"), 1, 1))};
    write_records_csv(out, recs);
    EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "a,b,H,exponent_sum,n_plus,n_minus,n_excluded");
    EXPECT_NE(out.str().find("\n1,1,0,1,1,0,"), std::string::npos);
}
