#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace selmer {

using Int = mpz_class;
using Rat = mpq_class;

Rat make_rat(const Int& num, const Int& den);

// Parses "123", "-4/6" or "1e12" style literals. Scientific notation must denote an integer.
Rat parse_rat(const std::string& s);
Int parse_int(const std::string& s);

std::string to_string(const Int& x);
std::string to_string(const Rat& x);

Int ipow(const Int& base, unsigned long exp);
Rat rpow(const Rat& base, long exp);

// Exact p-adic valuation of a nonzero integer (p >= 2).
int valuation(const Int& n, const Int& p);
int valuation(const Int& n, unsigned long p);
int valuation(const Rat& x, unsigned long p);

bool is_perfect_square(const Int& n);
bool is_rational_square(const Rat& x);
// Square root of a rational square; throws DomainError otherwise.
Rat rational_sqrt(const Rat& x);

double to_double(const Rat& x);
long double log_abs(const Int& n);

int sign(const Int& x);
int sign(const Rat& x);

}  // namespace selmer
