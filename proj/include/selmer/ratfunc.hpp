#pragma once

#include <string>
#include <vector>

#include "selmer/unipoly.hpp"

namespace selmer {

// Element of Q(t) as a reduced fraction with monic denominator.
class RatFunc {
public:
    RatFunc() : num_(), den_(UniPoly::constant(Rat(1))) {}
    RatFunc(UniPoly num);  // NOLINT(google-explicit-constructor)
    RatFunc(UniPoly num, UniPoly den);
    static RatFunc constant(const Rat& c) { return RatFunc(UniPoly::constant(c)); }

    const UniPoly& num() const { return num_; }
    const UniPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.degree() == 0; }
    UniPoly as_polynomial() const;  // throws unless is_polynomial()
    Rat eval(const Rat& t) const;    // throws when the denominator vanishes

    RatFunc operator-() const;
    friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
    friend bool operator==(const RatFunc& a, const RatFunc& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }
    RatFunc pow(unsigned e) const;
    std::string str() const;

private:
    void normalize();
    UniPoly num_, den_;
};

// Polynomial in x over Q(t), lowest degree first, trimmed.
using XPoly = std::vector<RatFunc>;

namespace xpoly {
void trim(XPoly& p);
int degree(const XPoly& p);  // -1 for the zero polynomial
XPoly add(const XPoly& a, const XPoly& b);
XPoly sub(const XPoly& a, const XPoly& b);
XPoly mul(const XPoly& a, const XPoly& b);
XPoly scale(const XPoly& a, const RatFunc& s);
XPoly pow(const XPoly& a, unsigned e);
// Division by a nonzero divisor; returns the remainder and sets quotient.
XPoly divmod(const XPoly& a, const XPoly& b, XPoly& quotient);
// Odd-index division polynomial f_n(x) of y^2 = x^3 + f x + g (n odd).
XPoly division_polynomial(const RatFunc& f, const RatFunc& g, int n);
}  // namespace xpoly

}  // namespace selmer
