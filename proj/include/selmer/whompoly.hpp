#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "selmer/factor.hpp"
#include "selmer/unipoly.hpp"

namespace selmer {

// Weighted homogeneous P(x, y) with weights (tau, 1) and weighted degree W:
// P = sum_i r_i x^i y^(W - i tau). Stored through its dehomogenization r(t) = P(t, 1).
class WHomPoly {
public:
    WHomPoly() = default;
    WHomPoly(int tau, int weighted_degree, UniPoly dehom);

    static WHomPoly y(int tau) { return WHomPoly(tau, 1, UniPoly::constant(Rat(1))); }
    static WHomPoly x(int tau) { return WHomPoly(tau, tau, UniPoly::x()); }
    static WHomPoly constant(int tau, const Rat& c) { return WHomPoly(tau, 0, UniPoly::constant(c)); }

    int tau() const { return tau_; }
    int weighted_degree() const { return wdeg_; }
    const UniPoly& dehom() const { return r_; }
    bool is_zero() const { return r_.is_zero(); }
    // Exponent of y dividing P.
    int y_multiplicity() const;
    // Coefficient map (i, j) -> c for the monomials x^i y^j.
    std::map<std::pair<int, int>, Rat> terms() const;

    Rat eval(const Rat& a, const Rat& b) const;
    Int eval_int(const Int& a, const Int& b) const;  // requires integer coefficients

    WHomPoly operator*(const WHomPoly& o) const;
    WHomPoly operator*(const Rat& s) const;
    WHomPoly operator+(const WHomPoly& o) const;
    WHomPoly operator-(const WHomPoly& o) const;
    WHomPoly pow(unsigned e) const;
    bool operator==(const WHomPoly& o) const;
    bool operator!=(const WHomPoly& o) const { return !(*this == o); }

    bool has_integer_coeffs() const { return r_.has_integer_coeffs(); }
    std::string str(const std::string& xv = "a", const std::string& yv = "b") const;

private:
    int tau_ = 1;
    int wdeg_ = 0;
    UniPoly r_;
};

// y^(power*varsigma) h(x / y^tau).
WHomPoly whom_from_univariate(const UniPoly& h, int tau, int varsigma, int power);

struct FactoredWHom {
    Rat content{1};
    std::vector<std::pair<WHomPoly, int>> factors;

    WHomPoly expand(int tau) const;
};

// Factors of P(t,1) lifted back, followed by y^e when e > 0.
FactoredWHom whom_factor(const WHomPoly& p);

// Largest e with q^e | p; q must be irreducible.
int multiplicity(const WHomPoly& p, const WHomPoly& q);

// Irreducible non-constant WHomPoly from a primitive factor of P(t,1).
WHomPoly whom_lift_factor(const UniPoly& factor, int tau);

}  // namespace selmer
