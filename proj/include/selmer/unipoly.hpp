#pragma once

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "selmer/numbers.hpp"

namespace selmer {

// Dense univariate polynomial over Q, coefficients lowest degree first.
// The zero polynomial has no degree: degree() throws instead of returning a
// sentinel that could leak into arithmetic. Check is_zero() first.
class UniPoly {
public:
    UniPoly() = default;
    explicit UniPoly(std::vector<Rat> coeffs);
    UniPoly(std::initializer_list<long> coeffs);

    static UniPoly constant(const Rat& c);
    static UniPoly monomial(const Rat& c, int deg);
    static UniPoly x() { return monomial(Rat(1), 1); }
    static UniPoly from_ints(const std::vector<Int>& coeffs);

    bool is_zero() const { return c_.empty(); }
    int degree() const;
    const std::vector<Rat>& coeffs() const { return c_; }
    Rat coeff(int i) const;
    const Rat& lc() const;

    Rat eval(const Rat& t) const;

    UniPoly operator-() const;
    UniPoly& operator+=(const UniPoly& o);
    UniPoly& operator-=(const UniPoly& o);
    UniPoly& operator*=(const UniPoly& o);
    UniPoly& operator*=(const Rat& s);
    friend UniPoly operator+(UniPoly a, const UniPoly& b) { return a += b; }
    friend UniPoly operator-(UniPoly a, const UniPoly& b) { return a -= b; }
    friend UniPoly operator*(const UniPoly& a, const UniPoly& b);
    friend UniPoly operator*(UniPoly a, const Rat& s) { return a *= s; }
    friend UniPoly operator*(const Rat& s, UniPoly a) { return a *= s; }
    friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const UniPoly& a, const UniPoly& b) { return !(a == b); }

    UniPoly pow(unsigned e) const;
    UniPoly derivative() const;
    // p(q(t)).
    UniPoly compose(const UniPoly& q) const;
    // t^n p(c/t) for n >= deg p.
    UniPoly reverse_substitute(const Rat& c, int n) const;

    bool has_integer_coeffs() const;
    // Positive rational c with p = c * primitive(), primitive() in Z[t] with
    // positive leading coefficient and content 1. Sign is carried by content().
    Rat content() const;
    UniPoly primitive() const;
    UniPoly monic() const;
    std::vector<Int> int_coeffs() const;  // requires integer coefficients

    std::string str(const std::string& var = "t") const;

private:
    void trim();
    std::vector<Rat> c_;
};

// Quotient and remainder over Q; throws DomainError on zero divisor.
std::pair<UniPoly, UniPoly> divmod(const UniPoly& a, const UniPoly& b);
UniPoly operator/(const UniPoly& a, const UniPoly& b);  // exact division, throws if inexact
UniPoly operator%(const UniPoly& a, const UniPoly& b);
bool divides(const UniPoly& d, const UniPoly& p);

// gcd normalized to integer coefficients, positive leading coefficient, content 1.
UniPoly poly_gcd(const UniPoly& p, const UniPoly& q);
Rat poly_resultant(const UniPoly& p, const UniPoly& q);
// Resultant of binary forms given by coefficient vectors with formal degrees
// size()-1 (leading zeros allowed). Computed as a Sylvester determinant.
Rat form_resultant(const std::vector<Rat>& p, const std::vector<Rat>& q);
Rat sylvester_resultant(const UniPoly& p, const UniPoly& q);
Rat poly_discriminant(const UniPoly& p);

// Square-free decomposition: p = c * prod f_i^i with f_i squarefree, pairwise coprime.
std::vector<std::pair<UniPoly, int>> squarefree_decomposition(const UniPoly& p);

}  // namespace selmer
