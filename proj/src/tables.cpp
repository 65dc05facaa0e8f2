#include "selmer/tables.hpp"

#include <sstream>

#include "selmer/errors.hpp"

namespace selmer {

namespace {

Rat q(long n, long d = 1) {
    Rat r(n, d);
    r.canonicalize();
    return r;
}

// Weighted form with dehomogenization given by integer coefficients, lowest degree first.
WHomPoly form(int tau, int wdeg, const std::vector<long>& coeffs) {
    std::vector<Int> c;
    for (long v : coeffs) c.emplace_back(v);
    return WHomPoly(tau, wdeg, UniPoly::from_ints(c));
}

Rat power_of(long base, int e) { return rpow(Rat(base), e); }

std::vector<std::pair<std::string, Rat>> odd_cells(long up, long um, Rat vp, Rat vm, Rat mu, Rat s2, Rat rho1) {
    return {{"u_plus", Rat(up)}, {"u_minus", Rat(um)}, {"v_plus", vp},   {"v_minus", vm},
            {"mu", mu},          {"sigma_sq", s2},     {"rho1", rho1}};
}

std::vector<std::pair<std::string, Rat>> two_cells(long up1, long up2, long um1, long um2, Rat vp2, Rat vm2, Rat mu,
                                                   Rat s2, Rat rho1) {
    return {{"u_plus1", Rat(up1)}, {"u_plus2", Rat(up2)}, {"u_minus1", Rat(um1)}, {"u_minus2", Rat(um2)},
            {"v_plus2", vp2},      {"v_minus2", vm2},     {"mu", mu},             {"sigma_sq", s2},
            {"rho1", rho1}};
}

WHomPoly expand_factors(const Rat& c, const std::vector<std::pair<WHomPoly, int>>& fs, int tau) {
    WHomPoly r = WHomPoly::constant(tau, c);
    for (const auto& [P, e] : fs) r = r * P.pow(static_cast<unsigned>(e));
    return r;
}

}  // namespace

const std::vector<ExpectedRow>& expected_rows() {
    static const std::vector<ExpectedRow> rows = [] {
        std::vector<ExpectedRow> r;
        r.push_back({"z3", "odd-prime", 12, odd_cells(1, 1, q(1, 2), q(1), q(-1, 2), q(3, 2), q(1, 3))});
        r.push_back({"z5", "odd-prime", 12, odd_cells(1, 2, q(1, 2), q(2), q(-3, 2), q(5, 2), q(2, 5))});
        r.push_back({"z2", "two-unique", 6, two_cells(1, 0, 1, 0, q(0), q(0), q(0), q(2), q(1, 2))});
        r.push_back({"z4", "two-unique", 12, two_cells(1, 1, 0, 1, q(1, 2), q(1), q(1, 2), q(5, 2), q(1))});
        auto row1 = two_cells(0, 1, 2, 0, q(1), q(0), q(-1), q(3), q(0));
        row1.emplace_back("rho2", q(3, 2));
        r.push_back({"z2xz2", "two-choice", 6, row1});
        auto row23 = two_cells(0, 1, 2, 0, q(1, 2), q(0), q(-3, 2), q(5, 2), q(-1, 2));
        row23.emplace_back("rho2", q(0));
        r.push_back({"z2xz2_b", "two-choice", 6, row23});
        r.push_back({"z2xz2_c", "two-choice", 6, row23});
        r.push_back({"cyclic4", "cyclic-4", 6, two_cells(2, 0, 0, 1, q(0), q(1, 2), q(3, 2), q(5, 2), q(7, 4))});
        r.push_back({"iso7", "isogeny", 12, odd_cells(1, 1, q(1, 2), q(1, 2), q(0), q(1), q(18, 7))});
        r.push_back({"iso13", "isogeny", 24, odd_cells(1, 1, q(1, 2), q(1), q(1, 2), q(3, 2), q(66, 13))});
        return r;
    }();
    return rows;
}

Rat constant_by_key(const FamilyConstants& k, const FamilySpec& fam, const std::string& key) {
    if (key == "u_plus") return Rat(k.u_plus);
    if (key == "u_minus") return Rat(k.u_minus);
    if (key == "v_plus") return k.v_plus;
    if (key == "v_minus") return k.v_minus;
    if (key == "u_plus1") return Rat(k.u_plus1);
    if (key == "u_plus2") return Rat(k.u_plus2);
    if (key == "u_minus1") return Rat(k.u_minus1);
    if (key == "u_minus2") return Rat(k.u_minus2);
    if (key == "v_plus2") return k.v_plus2;
    if (key == "v_minus2") return k.v_minus2;
    if (key == "mu") return k.mu;
    if (key == "sigma_sq") return k.sigma_sq;
    if (key == "rho1") return rho_exponent(k, fam.ell, 1);
    if (key == "rho2") return rho_exponent(k, fam.ell, 2);
    if (key == "deg_delta") return Rat(fam.Delta.weighted_degree());
    throw DomainError("unknown table key '" + key + "'");
}

RowCheck check_row(const ExpectedRow& row, const FamilySpec& fam, const FamilyConstants& k) {
    RowCheck out{row.family, row.table, {}, true};
    std::vector<std::pair<std::string, Rat>> cells{{"deg_delta", Rat(row.deg_delta)}};
    cells.insert(cells.end(), row.cells.begin(), row.cells.end());
    for (const auto& [key, expected] : cells) {
        Rat got = constant_by_key(k, fam, key);
        bool ok = got == expected;
        out.cells.push_back({key, expected, got, ok});
        out.ok = out.ok && ok;
    }
    return out;
}

Json row_check_to_json(const RowCheck& r) {
    Json cells = Json::array();
    for (const auto& c : r.cells)
        cells.push_back(Json{{"key", c.key}, {"expected", to_string(c.expected)}, {"computed", to_string(c.computed)}, {"ok", c.ok}});
    return Json{{"family", r.family}, {"table", r.table}, {"ok", r.ok}, {"cells", cells}};
}

// ---------------------------------------------------------------------------

WHomPoly PrintedDisplay::expand(int tau) const { return expand_factors(constant, factors, tau); }

WHomPoly PrintedDisplay::expand_literal(int tau) const { return expand_factors(literal_constant, literal_factors, tau); }

std::string PrintedDisplay::str() const {
    std::ostringstream os;
    os << to_string(constant);
    for (const auto& [P, e] : factors) {
        os << "*(" << P.str() << ")";
        if (e > 1) os << "^" << e;
    }
    return os.str();
}

const std::vector<PrintedDisplay>& printed_displays() {
    static const std::vector<PrintedDisplay> displays = [] {
        std::vector<PrintedDisplay> d;
        const Rat c8_12 = power_of(2, 8) * power_of(3, 12);
        const Rat c8_6 = power_of(2, 8) * power_of(3, 6);
        auto add = [&](std::string fam, std::string qty, Rat c, std::vector<std::pair<WHomPoly, int>> fs) {
            PrintedDisplay p;
            p.family = std::move(fam);
            p.quantity = std::move(qty);
            p.constant = c;
            p.factors = std::move(fs);
            p.literal_constant = p.constant;
            p.literal_factors = p.factors;
            d.push_back(std::move(p));
        };

        {  // z3, weights (3,1)
            auto p5 = form(3, 3, {5, 1}), p9 = form(3, 3, {9, 1});
            add("z3", "Delta", Rat(27), {{p5, 1}, {p9, 3}});
            add("z3", "Delta'", power_of(3, 9), {{p5, 3}, {p9, 1}});
        }
        {  // z5
            auto a = WHomPoly::x(1), b = WHomPoly::y(1);
            auto dplus = form(1, 2, {-1, 11, 1});
            add("z5", "Delta", c8_12, {{dplus, 1}, {a, 5}, {b, 5}});
            d.back().correction = "quadratic factor printed as a^2 + 11ab - a; the last term is -b^2";
            // The literal a^2 + 11ab - a is not homogeneous, so check_display evaluates it directly.
            d.back().literal_factors.clear();
            add("z5", "Delta'", c8_12, {{dplus, 5}, {a, 1}, {b, 1}});
        }
        {  // z4, weights (2,1)
            auto a = WHomPoly::x(2), b = WHomPoly::y(2);
            auto l = form(2, 2, {1, 16});
            add("z4", "Delta", -c8_12, {{a, 4}, {b, 2}, {l, 1}});
            add("z4", "Delta'", -c8_12, {{a, 2}, {b, 4}, {l, 2}});
        }
        {  // z2, weights (2,1)
            auto p1 = form(2, 2, {3, 1}), p4 = form(2, 2, {3, 4});
            add("z2", "Delta", Rat(1), {{p1, 2}, {p4, 1}});
            add("z2", "Delta'", Rat(-16), {{p1, 1}, {p4, 2}});
        }
        {  // z2xz2 row 1
            auto a = WHomPoly::x(1), b = WHomPoly::y(1), amb = form(1, 1, {-1, 1});
            add("z2xz2", "Delta", Rat(-1), {{a, 2}, {b, 2}, {amb, 2}});
            add("z2xz2", "Delta'", power_of(2, 8), {{a, 1}, {b, 1}, {amb, 4}});
        }
        {  // cyclic 4
            auto a = WHomPoly::x(1);
            auto m3 = form(1, 1, {-3, 2}), p3 = form(1, 1, {3, 2});
            add("cyclic4", "Delta", Rat(-1), {{a, 4}, {m3, 1}, {p3, 1}});
            add("cyclic4", "Delta'", Rat(64), {{a, 2}, {p3, 2}, {m3, 2}});
        }
        {  // 7-isogeny
            auto a = WHomPoly::x(1), b = WHomPoly::y(1);
            auto k = form(1, 2, {49, 13, 1});
            auto literal_k = form(1, 2, {0, 62, 1});  // a^2 + 13ab + 49ab
            add("iso7", "Delta", -c8_6, {{a, 1}, {b, 7}, {k, 2}});
            d.back().correction = "quadratic factor printed as a^2 + 13ab + 49ab; the last term is 49b^2";
            d.back().literal_factors = {{a, 1}, {b, 7}, {literal_k, 2}};
            add("iso7", "Delta'", -c8_6 * power_of(7, 6), {{a, 7}, {b, 1}, {k, 2}});
            d.back().correction = "quadratic factor printed as a^2 + 13ab + 49ab; the last term is 49b^2";
            d.back().literal_factors = {{a, 7}, {b, 1}, {literal_k, 2}};
        }
        {  // 13-isogeny
            auto a = WHomPoly::x(1), b = WHomPoly::y(1);
            auto k1 = form(1, 2, {1, 5, 1}), k2 = form(1, 2, {13, 6, 1});
            add("iso13", "Delta", -c8_12, {{a, 1}, {b, 13}, {k1, 2}, {k2, 3}});
            add("iso13", "Delta'", -c8_12 * power_of(13, 6), {{a, 13}, {b, 1}, {k1, 2}, {k2, 3}});
        }
        return d;
    }();
    return displays;
}

DisplayCheck check_display(const PrintedDisplay& d, const FamilySpec& fam) {
    DisplayCheck out;
    out.family = d.family;
    out.quantity = d.quantity;
    out.correction = d.correction;
    out.printed = d.str();
    const WHomPoly& computed = d.quantity == "Delta" ? fam.Delta : fam.DeltaPrime;
    out.computed = computed.str();
    WHomPoly printed = d.expand(fam.tau);
    out.ok = printed == computed;
    if (!out.ok) {
        if (printed.weighted_degree() != computed.weighted_degree()) {
            out.diagnosis = "weighted degree " + std::to_string(printed.weighted_degree()) + " printed, " +
                            std::to_string(computed.weighted_degree()) + " computed";
        } else {
            auto [quo, rem] = divmod(computed.dehom(), printed.dehom());
            if (rem.is_zero() && quo.degree() == 0)
                out.diagnosis = "differs by the constant factor " + to_string(quo.coeff(0)) + " (computed / printed)";
            else
                out.diagnosis = "polynomials differ beyond a constant factor";
        }
    }
    if (!d.correction.empty()) {
        out.has_spot = true;
        const Int& sa = d.spot_point.first;
        const Int& sb = d.spot_point.second;
        out.spot_computed = computed.eval_int(sa, sb);
        out.spot_corrected = printed.eval_int(sa, sb);
        if (!d.literal_factors.empty()) {
            out.spot_literal = d.expand_literal(fam.tau).eval_int(sa, sb);
        } else {
            // Literal z5 form: c * (a^2 + 11ab - a) * a^5 * b^5, evaluated directly.
            Rat lit = d.literal_constant * Rat(sa * sa + 11 * sa * sb - sa) * rpow(Rat(sa), 5) * rpow(Rat(sb), 5);
            out.spot_literal = lit.get_num();
        }
    }
    return out;
}

Json display_check_to_json(const DisplayCheck& c) {
    Json j{{"family", c.family}, {"quantity", c.quantity}, {"ok", c.ok}, {"printed", c.printed}, {"computed", c.computed}};
    if (!c.diagnosis.empty()) j["diagnosis"] = c.diagnosis;
    if (!c.correction.empty()) j["correction"] = c.correction;
    if (c.has_spot)
        j["spot_check"] = Json{{"computed", to_string(c.spot_computed)},
                               {"corrected", to_string(c.spot_corrected)},
                               {"literal", to_string(c.spot_literal)}};
    return j;
}

}  // namespace selmer
