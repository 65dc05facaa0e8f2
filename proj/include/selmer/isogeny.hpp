#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "selmer/ratfunc.hpp"
#include "selmer/serialize.hpp"
#include "selmer/unipoly.hpp"

namespace selmer {

struct KernelSpec {
    enum class Kind { TwoTorsionX, KernelPolynomial, ExplicitCodomain };
    Kind kind = Kind::TwoTorsionX;
    UniPoly x0;                     // TwoTorsionX
    XPoly psi;                      // KernelPolynomial: monic in x over Q(t)
    UniPoly f_codomain, g_codomain;  // ExplicitCodomain

    Json to_json() const;
    static KernelSpec from_json(const Json& j);
};

struct IsogenyPair {
    UniPoly f, g;    // domain y^2 = x^3 + f x + g
    UniPoly fp, gp;  // codomain
    int ell = 0;
};

using Coeffs = std::pair<UniPoly, UniPoly>;

Coeffs velu_two_isogeny(const UniPoly& f, const UniPoly& g, const UniPoly& x0);
Coeffs velu_odd_isogeny(const UniPoly& f, const UniPoly& g, const XPoly& psi, int ell);

// Smallest positive integer lambda with lambda^4 f, lambda^6 g integral; returns the scaled pair.
Coeffs clear_denominators(const UniPoly& f, const UniPoly& g);

struct VerifyStats {
    int comparisons = 0;
    int mismatches = 0;
};

// Point-count comparison over the sample grid; throws SampleError if every sample is degenerate.
bool verify_isogeny(const IsogenyPair& pair, const std::vector<Rat>& t_samples,
                    const std::vector<std::uint64_t>& primes, VerifyStats* stats = nullptr);
// Same check with count_per_t good primes starting above 3 for each sample.
VerifyStats verify_isogeny_good_primes(const IsogenyPair& pair, const std::vector<Rat>& t_samples, int count_per_t);

// Builds the codomain from kernel data and gates the result on verify_isogeny.
IsogenyPair build_isogeny(const UniPoly& f, const UniPoly& g, int ell, const KernelSpec& kernel);

}  // namespace selmer
