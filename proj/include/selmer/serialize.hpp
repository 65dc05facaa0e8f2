#pragma once

#include <json.hpp>

#include "selmer/ratfunc.hpp"
#include "selmer/unipoly.hpp"
#include "selmer/whompoly.hpp"

namespace selmer {

using Json = nlohmann::ordered_json;

// Coefficient strings, lowest degree first.
Json poly_to_json(const UniPoly& p);
UniPoly poly_from_json(const Json& j);

// {"tau": .., "weighted_degree": .., "coeffs": [...]} with coeffs of P(t, 1).
Json whom_to_json(const WHomPoly& p);
WHomPoly whom_from_json(const Json& j);

// A bare coefficient array, or {"num": [...], "den": [...]}.
Json ratfunc_to_json(const RatFunc& r);
RatFunc ratfunc_from_json(const Json& j);

}  // namespace selmer
