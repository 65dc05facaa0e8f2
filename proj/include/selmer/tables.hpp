#pragma once

#include <string>
#include <utility>
#include <vector>

#include "selmer/family.hpp"

namespace selmer {

// One printed row of the constants tables. Keys: u_plus, u_minus, v_plus, v_minus,
// u_plus1, u_plus2, u_minus1, u_minus2, v_plus2, v_minus2, mu, sigma_sq, rho1, rho2.
struct ExpectedRow {
    std::string family;
    std::string table;
    int deg_delta = 0;
    std::vector<std::pair<std::string, Rat>> cells;
};

const std::vector<ExpectedRow>& expected_rows();

struct CellCheck {
    std::string key;
    Rat expected, computed;
    bool ok = false;
};

struct RowCheck {
    std::string family, table;
    std::vector<CellCheck> cells;
    bool ok = false;
};

Rat constant_by_key(const FamilyConstants& k, const FamilySpec& fam, const std::string& key);
RowCheck check_row(const ExpectedRow& row, const FamilySpec& fam, const FamilyConstants& k);
Json row_check_to_json(const RowCheck& r);

// A printed factored discriminant: constant * prod factor^exponent.
struct PrintedDisplay {
    std::string family;
    std::string quantity;  // "Delta" or "Delta'"
    Rat constant{1};
    std::vector<std::pair<WHomPoly, int>> factors;
    // Typo correction applied to the printed form, with the literal form kept for spot checks.
    std::string correction;
    Rat literal_constant{1};
    std::vector<std::pair<WHomPoly, int>> literal_factors;
    std::pair<Int, Int> spot_point{1, 2};

    WHomPoly expand(int tau) const;
    WHomPoly expand_literal(int tau) const;
    std::string str() const;
};

const std::vector<PrintedDisplay>& printed_displays();

struct DisplayCheck {
    std::string family, quantity, printed, computed;
    bool ok = false;
    std::string diagnosis;  // empty when ok
    std::string correction;
    // Spot check of the correction: computed, corrected and literal values at spot_point.
    bool has_spot = false;
    Int spot_computed, spot_corrected, spot_literal;
};

DisplayCheck check_display(const PrintedDisplay& d, const FamilySpec& fam);
Json display_check_to_json(const DisplayCheck& c);

}  // namespace selmer
