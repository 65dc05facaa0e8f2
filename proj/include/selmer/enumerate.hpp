#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "selmer/family.hpp"

namespace selmer {

struct ParamPoint {
    Int a, b;
    Int A, B, Delta;
    Int e;  // m(A, B)
    Rat H;  // H0 / e^12
};

// p^(upsilon tau) does not divide gcd(a, b^tau) for any prime p.
bool in_coprimality_set(const Int& a, const Int& b, int upsilon, int tau);
bool in_coprimality_set(long a, long b, int upsilon, int tau);

// One representative per weighted projective class: the sign flip (a, b) -> ((-1)^tau a, -b)
// identifies points only when upsilon = 1.
bool sign_normalized(const Int& a, const Int& b, int upsilon, int tau);

struct EnumOptions {
    Int N{1};
    int delta = -1;  // -1 keeps the family's own delta
    bool sign_normalization = true;
    int threads = 1;
    std::uint64_t max_box_points = 2000000000ULL;
};

struct EnumStats {
    std::uint64_t box_points = 0;
    std::uint64_t candidates = 0;  // passed the floating-point prefilter
    std::uint64_t emitted = 0;
    std::uint64_t degenerate = 0;  // Delta = 0, never emitted
    long a_max = 0, b_max = 0;
};

// Bounding box of R_1 = {(x, y) : max(4|A|^3, 27 B^2) <= 1}, from a scan over t = tan(u).
struct RegionBox {
    double x1 = 0, y1 = 0;
};
RegionBox region_box(const FamilySpec& fam);

// Class A3 data: gcd(A^3, B^2) = K^r * gcd(A^3/K^r, B^2/K^r), and the second factor is at most
// `cofactor_bound` on primitive pairs.
struct A3Bound {
    WHomPoly K;
    int r = 0;
    Int resultant;             // Res(A^3/K^r, B^2/K^r)
    Int cofactor_bound{1};     // prod p^(c_p), c_p the local maximum of min(v_p(A^3/K^r), v_p(B^2/K^r))
    std::vector<std::pair<Int, int>> local_depths;  // (p, c_p) for p | resultant
};
A3Bound a3_bound(const FamilySpec& fam);

// Streams points in increasing b, then increasing a. Degenerate points are only counted.
EnumStats enum_points(const FamilySpec& fam, const EnumOptions& opts, const std::function<void(const ParamPoint&)>& sink);
std::vector<ParamPoint> collect_points(const FamilySpec& fam, const EnumOptions& opts, EnumStats* stats = nullptr);

// Shortcut-free reference: every (a, b) with |a| <= a_bound, |b| <= b_bound, exact arithmetic only.
std::vector<ParamPoint> brute_force_points(const FamilySpec& fam, const EnumOptions& opts, long a_bound, long b_bound);

void write_points_csv(std::ostream& out, const std::vector<ParamPoint>& points);

// Congruence classes and local densities.
struct CongruenceClass {
    Int q{1};
    bool projective = true;  // [a : b^tau] in P^1(Z/q), q prime or 1; otherwise (a, b) mod q
    Int a1{0}, b1{1};
    std::string str() const;
};

struct DensityReport {
    std::uint64_t observed = 0, total = 0;
    double ratio = 0;
    Rat predicted_exact{0};
    bool exact = true;
    double predicted = 0, error_bound = 0;
    std::string regime;  // "affine", "projective" or "local-density"
};

std::vector<CongruenceClass> projective_classes(const Int& q);
DensityReport count_congruence(const FamilySpec& fam, const std::vector<ParamPoint>& points, const CongruenceClass& cls,
                               int delta);
DensityReport count_congruence(const FamilySpec& fam, const EnumOptions& opts, const CongruenceClass& cls);

// nu(k) = max(ceil(12k/r), vR); psi(n) = prod p^nu(v_p(n)).
int nu_exponent(int r, int vR, int k);
Int psi(const Int& n, int r, const std::function<int(const Int&)>& vR_of);

// Haar measure of {x in P^1(Z_p) : p^(4k) | A(x), p^(6k) | B(x)}; needs tau = upsilon = 1.
Rat rho_local(const FamilySpec& fam, const Int& p, int k);
// Same value by enumerating P^1(Z/psi); throws ResourceError when psi > 1e5.
Rat rho_local_bruteforce(const FamilySpec& fam, const Int& p, int k);

struct LambdaInterval {
    double lower = 1, upper = 1;
    bool exact = true;
};
LambdaInterval lambda_p(const FamilySpec& fam, const Int& p, int k_max);

struct VolumeEstimate {
    double value = 0, half_width = 0;
    std::uint64_t samples = 0;
};
VolumeEstimate region_volume(const FamilySpec& fam, std::uint64_t samples, std::uint64_t seed);
// Deterministic quadrature of (2/(tau+1)) * integral H0(t,1)^(-(tau+1)/(6 varsigma)) dt.
double region_volume_quadrature(const FamilySpec& fam);

}  // namespace selmer
