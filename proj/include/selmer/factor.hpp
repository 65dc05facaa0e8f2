#pragma once

#include <utility>
#include <vector>

#include "selmer/unipoly.hpp"

namespace selmer {

// content * prod factor^mult, each factor irreducible over Q, integral,
// primitive, with positive leading coefficient.
struct FactoredPoly {
    Rat content{1};
    std::vector<std::pair<UniPoly, int>> factors;

    UniPoly expand() const;
};

// Complete factorization over Q (Zassenhaus). Factors sorted by degree, then
// by coefficients from the leading term down.
FactoredPoly poly_factor(const UniPoly& p);

// Irreducible factors of a squarefree primitive integral polynomial.
std::vector<UniPoly> factor_squarefree_integral(const UniPoly& f);

bool is_irreducible(const UniPoly& p);

// Ordering used for factor lists.
bool factor_less(const UniPoly& a, const UniPoly& b);

}  // namespace selmer
