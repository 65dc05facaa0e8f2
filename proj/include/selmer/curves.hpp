#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "selmer/numbers.hpp"

namespace selmer {

// y^2 = x^3 + A x + B over Q with integer coefficients.
struct CurveModel {
    Int A;
    Int B;
    Int disc;  // 4A^3 + 27B^2

    CurveModel() = default;
    CurveModel(Int a, Int b);
    bool singular() const { return disc == 0; }
};

enum class Reduction { Good, SplitMultiplicative, NonsplitMultiplicative, Additive };

struct ReductionType {
    Reduction kind = Reduction::Good;
    int disc_valuation = 0;  // v_p of the minimal discriminant

    bool multiplicative() const {
        return kind == Reduction::SplitMultiplicative || kind == Reduction::NonsplitMultiplicative;
    }
};

struct LocalData {
    Int p;
    ReductionType type;
    std::optional<int> tamagawa;  // empty when additive (not computed)
};

struct Height {
    Rat H;   // H0 / m^12
    Int H0;  // max(4|A|^3, 27 B^2)
};

Int m_of(const Int& A, const Int& B);
Height naive_height(const Int& A, const Int& B);
Int height_h0(const Int& A, const Int& B);

CurveModel minimal_at_p(const CurveModel& E, const Int& p);
ReductionType reduction_type(const CurveModel& E, const Int& p);
LocalData tamagawa_mult(const CurveModel& E, const Int& p);
// Local data for any reduction type; tamagawa is 1 for good reduction.
LocalData local_data(const CurveModel& E, const Int& p);

std::int64_t count_points_mod_p(const CurveModel& E, std::uint64_t p);
// Same count from reduced coefficients.
std::int64_t count_points_mod_p(std::uint64_t a, std::uint64_t b, std::uint64_t p);

std::string reduction_name(Reduction r);
std::string curve_to_json(const CurveModel& E);
CurveModel curve_from_json(const std::string& text);

}  // namespace selmer
