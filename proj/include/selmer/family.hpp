#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "selmer/isogeny.hpp"
#include "selmer/serialize.hpp"
#include "selmer/unipoly.hpp"
#include "selmer/whompoly.hpp"

namespace selmer {

enum class AdmissibilityClass { A1, A2, A3, A4 };
enum class VBranch { Theta, HalfU, DefinitionParity };

std::string class_name(AdmissibilityClass c);
AdmissibilityClass parse_class(const std::string& s);
std::string branch_name(VBranch b);
VBranch parse_branch(const std::string& s);  // "theta", "half-u", "definition"

using FactorList = std::vector<std::pair<WHomPoly, int>>;

// Delta = cprime * T * D+ * D-^ell and Delta' = c * T' * D+^ell * D-.
struct DiscSplit {
    Rat cprime{1}, c{1};
    WHomPoly T, Tprime, Dplus, Dminus;
    // Parity parts: factors of D+/D- whose multiplicity is odd (1) or even (2).
    WHomPoly Dplus1, Dplus2, Dminus1, Dminus2;
    FactorList plus_factors, minus_factors, t_factors;
    // Distinct irreducible factors of D+ * D-, used by the square-hit exclusion.
    WHomPoly radical;
};

struct LambdaData {
    bool applicable = false;               // false unless f and g are coprime
    Int cap{1};                            // provable multiple from the resultant bound
    std::vector<std::pair<Int, int>> cap_factors;
    std::vector<std::pair<Int, int>> exact;  // p -> largest k with p^k attained
    Int exact_value{1};
};

struct FamilySpec {
    std::string name, label;
    int ell = 0, upsilon = 1, tau = 1, m = 1, varsigma = 2, delta = 1;
    AdmissibilityClass cls = AdmissibilityClass::A1;
    UniPoly f, g;
    KernelSpec kernel;

    WHomPoly A, B, Delta;
    IsogenyPair pair;
    WHomPoly Aprime, Bprime, DeltaPrime;
    UniPoly s;      // gcd(f^3, g^2)
    UniPoly k_rad;  // class A3: s = k^r
    int r = 0;
    LambdaData lambda;
    DiscSplit split;
    std::vector<Int> bad_primes;  // S_bad, increasing
    Json source;

    bool is_bad(const Int& p) const;
};

// Registry shipped with the library.
const Json& builtin_registry();
Json read_registry_file(const std::string& path);
std::vector<std::string> registry_names(const Json& registry);
const Json& registry_entry(const Json& registry, const std::string& name);  // throws InvalidFamily

FamilySpec load_family(const Json& entry);
FamilySpec load_builtin(const std::string& name);

LambdaData lambda_cap(const UniPoly& f, const UniPoly& g, const WHomPoly& A, const WHomPoly& B, int upsilon, int tau,
                      int varsigma);
// Largest k such that p^(4k) | A and p^(6k) | B at some (a,b) in the coprimality set, locally at p.
int max_local_m_exponent(const WHomPoly& A, const WHomPoly& B, const Int& p, int upsilon, int tau, int k_cap);

DiscSplit split_discriminant(const WHomPoly& A, const WHomPoly& B, const WHomPoly& Delta, const WHomPoly& DeltaPrime,
                             int ell);

struct ThetaResult {
    enum class Provenance { ExactRational, ExactQuadratic, EmpiricalChebotarev };
    Rat theta{1};
    Provenance provenance = Provenance::ExactRational;
    long X = 0;
    double estimate = 0, margin = 0;
};
std::string provenance_name(ThetaResult::Provenance p);

ThetaResult theta_of_factor(const FamilySpec& fam, const WHomPoly& R);

struct FactorConstant {
    WHomPoly factor;
    int multiplicity = 1;
    char side = '+';
    ThetaResult theta;
};

struct FamilyConstants {
    int u_plus = 0, u_minus = 0;
    int u_plus1 = 0, u_plus2 = 0, u_minus1 = 0, u_minus2 = 0;
    Rat v_plus, v_minus, v_plus2, v_minus2;
    Rat c_plus, c_minus, mu, sigma_sq;
    VBranch branch = VBranch::Theta;
    std::vector<FactorConstant> factors;
};

FamilyConstants family_constants(const FamilySpec& fam, const DiscSplit& split, VBranch branch = VBranch::Theta);
Rat rho_exponent(const FamilyConstants& k, int ell, int kk);
double rho_exponent_real(const FamilyConstants& k, int ell, double kk);
Rat delta_of_A(const FamilyConstants& k, const Rat& A);

struct ChebotarevReport {
    long X = 0;
    long prime_count = 0;
    double root_average = 0;  // sum_p #roots / pi(X)
    double qr_average = 0;    // sum_p #roots with (6g|p) = 1, over pi(X)
    double root_slope = 0, root_intercept = 0;
    double qr_slope = 0, qr_intercept = 0;
};
ChebotarevReport chebotarev_density_report(const UniPoly& h, const UniPoly& g, long X);

// Canonical normalized registry entry plus derived data.
Json family_to_json(const FamilySpec& fam);
Json split_to_json(const DiscSplit& s);
Json constants_to_json(const FamilyConstants& k);

}  // namespace selmer
