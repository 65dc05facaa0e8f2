#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "selmer/curves.hpp"
#include "selmer/enumerate.hpp"
#include "selmer/family.hpp"

namespace selmer {

// Values at (a, b) of the forms that decide the local exponent.
struct PointValues {
    Int A, B, Dplus, Dminus, Dplus1, Dplus2, Dminus1, Dminus2, R;
};
PointValues point_values(const FamilySpec& fam, const Int& a, const Int& b);

struct LocalExponent {
    int value = 0;  // -1, 0 or +1; 0 whenever excluded
    bool excluded = false;
    std::string reason;
};

LocalExponent local_exponent(const FamilySpec& fam, const PointValues& v, const Int& p);
LocalExponent local_exponent(const FamilySpec& fam, const Int& a, const Int& b, const Int& p);

// The mod-p case list only (no exclusions): +1, -1 or 0 from residues of the values.
int y_circ_mod_p(int ell, const PointValues& v, std::uint64_t p);

struct CurveRecord {
    ParamPoint point;
    std::vector<std::pair<Int, int>> local_exponents;  // nonzero exponents only
    std::vector<std::pair<Int, std::string>> excluded_hits;
    int exponent_sum = 0;
    int n_plus = 0, n_minus = 0;
};

// Factors D+ and D- (through their irreducible factors) and evaluates every prime divisor,
// plus every excluded prime that divides Delta(a, b).
CurveRecord curve_exponent_sum(const FamilySpec& fam, const ParamPoint& pt);

struct OracleResult {
    bool applicable = false;  // false when the domain curve is not multiplicative at p
    std::string note;
    int ratio_valuation = 0;  // v_ell(c_p(E') / c_p(E))
    int exponent = 0;
    bool agree = true;
};
OracleResult oracle_cross_check(const FamilySpec& fam, const Int& a, const Int& b, const Int& p);

// Integral model of the codomain curve at (a, b).
CurveModel codomain_model(const FamilySpec& fam, const Int& a, const Int& b);

struct OracleSummary {
    std::uint64_t curves = 0, checks = 0, agreements = 0, skipped_additive = 0, excluded_reported = 0;
    std::uint64_t sandwich_violations = 0;
    std::vector<std::string> disagreements;  // first few, for reports
};
// Checks every multiplicative prime p > 3 of every curve; excluded primes are resolved by the oracle
// for the sandwich count.
OracleSummary oracle_sweep(const FamilySpec& fam, const std::vector<ParamPoint>& points, int threads = 1);

struct PrimeDensity {
    std::uint64_t p = 0;
    std::uint64_t plus = 0, minus = 0;  // classes of F_p^2 \ {0}
    Rat d_plus, d_minus;
};

struct Profile {
    std::vector<PrimeDensity> primes;  // excluded primes omitted
    double slope_plus = 0, slope_minus = 0, intercept_plus = 0, intercept_minus = 0;
};
Profile theoretical_profile(const FamilySpec& fam, std::uint64_t p_cut);

struct PrimeFrequency {
    std::uint64_t p = 0;
    std::uint64_t plus = 0, minus = 0;
    double d_plus = 0, d_minus = 0;
    bool consistent = true;  // both signs within 3 binomial standard errors
};

struct Moments {
    double mean = 0, variance = 0, skewness = 0, excess_kurtosis = 0;
};

struct ExperimentOptions {
    Int N{1};
    std::uint64_t p_cut = 300;
    std::vector<int> ks{1, 2};
    std::vector<Rat> tail_As{Rat(0), Rat(1)};
    int threads = 1;
    std::uint64_t seed = 1;
    std::uint64_t max_curves = 0;  // 0 keeps every enumerated curve; otherwise a seeded subsample
};

struct ExperimentSummary {
    std::string family;
    Int N;
    std::uint64_t curve_count = 0;
    Moments moments;
    Moments truncated;  // of the sum over p <= p_cut
    double predicted_truncated_mean = 0, predicted_truncated_variance = 0;
    double loglog_N = 0, standardized_mean = 0;
    std::vector<std::pair<int, Rat>> average_power;  // k -> exact average of ell^(k * sum)
    std::vector<std::pair<int, double>> rho_reference;
    std::vector<std::pair<Rat, std::uint64_t>> tail_counts;
    std::vector<PrimeFrequency> frequencies;
    double consistent_fraction = 0;
    double total_variation = 0;
    std::map<int, std::uint64_t> truncated_histogram;
    std::vector<CurveRecord> records;
};

ExperimentSummary distribution_experiment(const FamilySpec& fam, const ExperimentOptions& opts);
ExperimentSummary summarize_records(const FamilySpec& fam, const ExperimentOptions& opts, std::vector<CurveRecord> records);

std::vector<CurveRecord> curve_records(const FamilySpec& fam, const std::vector<ParamPoint>& points, int threads);
std::vector<CurveRecord> curve_records(const FamilySpec& fam, const EnumOptions& enum_opts, std::uint64_t max_curves,
                                       std::uint64_t seed);

Rat average_power(const FamilySpec& fam, const std::vector<CurveRecord>& records, int k);
Rat average_power(const FamilySpec& fam, const Int& N, int k, int threads = 1);

struct TailResult {
    std::uint64_t count = 0, total = 0;
    double threshold = 0, ratio = 0;
    Rat reference_exponent{0};  // delta(A) from the family constants
    bool has_reference = false;
};
TailResult tail_count(const FamilySpec& fam, const std::vector<CurveRecord>& records, const Int& N, const Rat& A);
TailResult tail_count(const FamilySpec& fam, const Int& N, const Rat& A, int threads = 1);

// Total variation between an empirical histogram and the convolution of independent per-prime laws.
double convolution_tv(const std::map<int, std::uint64_t>& histogram, const std::vector<PrimeDensity>& laws);
std::map<int, double> convolve_laws(const std::vector<PrimeDensity>& laws);

void write_records_csv(std::ostream& out, const std::vector<CurveRecord>& records);
Json summary_to_json(const ExperimentSummary& s);
Json profile_to_json(const Profile& p);

}  // namespace selmer
