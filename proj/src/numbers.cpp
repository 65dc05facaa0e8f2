#include "selmer/numbers.hpp"

#include <cmath>
#include <regex>

#include "selmer/errors.hpp"

namespace selmer {

Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) throw DomainError("zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

Rat parse_rat(const std::string& s) {
    static const std::regex frac(R"(^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$)");
    static const std::regex sci(R"(^\s*([+-]?)(\d+)(?:\.(\d*))?[eE]\+?(\d+)\s*$)");
    std::smatch m;
    if (std::regex_match(s, m, frac)) {
        Int num(m[1].str());
        Int den = m[2].matched ? Int(m[2].str()) : Int(1);
        return make_rat(num, den);
    }
    if (std::regex_match(s, m, sci)) {
        std::string digits = m[2].str() + (m[3].matched ? m[3].str() : "");
        long frac_len = m[3].matched ? static_cast<long>(m[3].str().size()) : 0;
        long exp10 = std::stol(m[4].str()) - frac_len;
        Int mant(digits);
        Rat r = exp10 >= 0 ? Rat(mant * ipow(10, static_cast<unsigned long>(exp10)))
                           : make_rat(mant, ipow(10, static_cast<unsigned long>(-exp10)));
        if (m[1].str() == "-") r = -r;
        return r;
    }
    throw DomainError("cannot parse number '" + s + "'");
}

Int parse_int(const std::string& s) {
    Rat r = parse_rat(s);
    if (r.get_den() != 1) throw DomainError("'" + s + "' is not an integer");
    return r.get_num();
}

std::string to_string(const Int& x) { return x.get_str(); }

std::string to_string(const Rat& x) {
    if (x.get_den() == 1) return x.get_num().get_str();
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

Int ipow(const Int& base, unsigned long exp) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
    return r;
}

Rat rpow(const Rat& base, long exp) {
    if (exp >= 0) {
        return make_rat(ipow(base.get_num(), static_cast<unsigned long>(exp)),
                        ipow(base.get_den(), static_cast<unsigned long>(exp)));
    }
    if (base == 0) throw DomainError("zero to a negative power");
    return make_rat(ipow(base.get_den(), static_cast<unsigned long>(-exp)),
                    ipow(base.get_num(), static_cast<unsigned long>(-exp)));
}

int valuation(const Int& n, const Int& p) {
    if (n == 0) throw DomainError("valuation of zero");
    if (p < 2) throw DomainError("valuation base must be >= 2");
    Int m = n;
    int v = 0;
    while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
        mpz_divexact(m.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
        ++v;
    }
    return v;
}

int valuation(const Int& n, unsigned long p) {
    if (n == 0) throw DomainError("valuation of zero");
    if (p < 2) throw DomainError("valuation base must be >= 2");
    Int m = n;
    int v = 0;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
        mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
        ++v;
    }
    return v;
}

int valuation(const Rat& x, unsigned long p) {
    return valuation(x.get_num(), p) - valuation(x.get_den(), p);
}

bool is_perfect_square(const Int& n) {
    if (n < 0) return false;
    return mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

bool is_rational_square(const Rat& x) {
    return is_perfect_square(x.get_num()) && is_perfect_square(x.get_den());
}

Rat rational_sqrt(const Rat& x) {
    if (!is_rational_square(x)) throw DomainError("not a rational square: " + to_string(x));
    Int n, d;
    mpz_sqrt(n.get_mpz_t(), x.get_num().get_mpz_t());
    mpz_sqrt(d.get_mpz_t(), x.get_den().get_mpz_t());
    return make_rat(n, d);
}

double to_double(const Rat& x) { return x.get_d(); }

long double log_abs(const Int& n) {
    if (n == 0) throw DomainError("log of zero");
    long exp = 0;
    double mant = mpz_get_d_2exp(&exp, n.get_mpz_t());
    return std::log(std::fabs(static_cast<long double>(mant))) +
           static_cast<long double>(exp) * std::log(2.0L);
}

int sign(const Int& x) { return sgn(x); }
int sign(const Rat& x) { return sgn(x); }

}  // namespace selmer
