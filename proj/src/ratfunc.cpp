#include "selmer/ratfunc.hpp"

#include <functional>
#include <map>

#include "selmer/errors.hpp"

namespace selmer {

RatFunc::RatFunc(UniPoly num) : num_(std::move(num)), den_(UniPoly::constant(Rat(1))) {}

RatFunc::RatFunc(UniPoly num, UniPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw DomainError("rational function with zero denominator");
    normalize();
}

void RatFunc::normalize() {
    if (num_.is_zero()) {
        den_ = UniPoly::constant(Rat(1));
        return;
    }
    if (den_.degree() > 0) {
        UniPoly g = poly_gcd(num_, den_);
        if (g.degree() > 0) {
            num_ = num_ / g;
            den_ = den_ / g;
        }
    }
    Rat lc = den_.lc();
    num_ *= Rat(1) / lc;
    den_ *= Rat(1) / lc;
}

UniPoly RatFunc::as_polynomial() const {
    if (!is_polynomial()) throw DomainError("rational function is not a polynomial");
    return num_;
}

Rat RatFunc::eval(const Rat& t) const {
    Rat d = den_.eval(t);
    if (d == 0) throw DomainError("pole of rational function");
    return num_.eval(t) / d;
}

RatFunc RatFunc::operator-() const { return RatFunc(-num_, den_); }

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    if (a.den_ == b.den_) return RatFunc(a.num_ + b.num_, a.den_);
    return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    if (a.is_polynomial() && b.is_polynomial()) return RatFunc(a.num_ * b.num_ * (Rat(1) / (a.den_.lc() * b.den_.lc())));
    return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
}

RatFunc operator/(const RatFunc& a, const RatFunc& b) {
    if (b.is_zero()) throw DomainError("division by zero rational function");
    return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
}

RatFunc RatFunc::pow(unsigned e) const { return RatFunc(num_.pow(e), den_.pow(e)); }

std::string RatFunc::str() const {
    if (is_polynomial()) return num_.str();
    return "(" + num_.str() + ")/(" + den_.str() + ")";
}

namespace xpoly {

void trim(XPoly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

int degree(const XPoly& p) { return static_cast<int>(p.size()) - 1; }

XPoly add(const XPoly& a, const XPoly& b) {
    XPoly r(std::max(a.size(), b.size()));
    for (size_t i = 0; i < r.size(); ++i) {
        if (i < a.size()) r[i] = r[i] + a[i];
        if (i < b.size()) r[i] = r[i] + b[i];
    }
    trim(r);
    return r;
}

XPoly sub(const XPoly& a, const XPoly& b) { return add(a, scale(b, RatFunc::constant(Rat(-1)))); }

XPoly mul(const XPoly& a, const XPoly& b) {
    if (a.empty() || b.empty()) return {};
    XPoly r(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
    }
    trim(r);
    return r;
}

XPoly scale(const XPoly& a, const RatFunc& s) {
    XPoly r;
    r.reserve(a.size());
    for (const auto& c : a) r.push_back(c * s);
    trim(r);
    return r;
}

XPoly pow(const XPoly& a, unsigned e) {
    XPoly r{RatFunc::constant(Rat(1))};
    for (unsigned i = 0; i < e; ++i) r = mul(r, a);
    return r;
}

XPoly divmod(const XPoly& a, const XPoly& b, XPoly& quotient) {
    if (b.empty()) throw DomainError("division by the zero polynomial");
    XPoly r = a;
    trim(r);
    int db = degree(b);
    quotient.assign(r.size() > b.size() - 1 ? r.size() - b.size() + 1 : 0, RatFunc());
    RatFunc inv = RatFunc::constant(Rat(1)) / b.back();
    for (int i = degree(r); i >= db; --i) {
        RatFunc q = r[static_cast<size_t>(i)] * inv;
        if (q.is_zero()) continue;
        quotient[static_cast<size_t>(i - db)] = q;
        for (int j = 0; j <= db; ++j) {
            size_t k = static_cast<size_t>(i - db + j);
            r[k] = r[k] - q * b[static_cast<size_t>(j)];
        }
    }
    trim(r);
    trim(quotient);
    return r;
}

XPoly division_polynomial(const RatFunc& f, const RatFunc& g, int n) {
    if (n < 1 || n % 2 == 0) throw DomainError("only odd division polynomials are provided");
    // f_n with f_n = psi_n for odd n and psi_n / (2y) for even n.
    const RatFunc one = RatFunc::constant(Rat(1));
    XPoly cubic{g, f, RatFunc(), one};
    XPoly sixteen_cubic_sq = scale(mul(cubic, cubic), RatFunc::constant(Rat(16)));
    std::map<int, XPoly> memo;
    memo[0] = {};
    memo[1] = {one};
    memo[2] = {one};
    memo[3] = {-(f * f), g * RatFunc::constant(Rat(12)), f * RatFunc::constant(Rat(6)), RatFunc(),
               RatFunc::constant(Rat(3))};
    memo[4] = scale(XPoly{-(f * f * f) - g * g * RatFunc::constant(Rat(8)), -(f * g) * RatFunc::constant(Rat(4)),
                          -(f * f) * RatFunc::constant(Rat(5)), g * RatFunc::constant(Rat(20)),
                          f * RatFunc::constant(Rat(5)), RatFunc(), one},
                    RatFunc::constant(Rat(2)));
    std::function<XPoly(int)> get = [&](int k) -> XPoly {
        auto it = memo.find(k);
        if (it != memo.end()) return it->second;
        XPoly out;
        int h = k / 2;
        if (k % 2 == 1) {
            XPoly left = mul(get(h + 2), pow(get(h), 3));
            XPoly right = mul(get(h - 1), pow(get(h + 1), 3));
            if (h % 2 == 0)
                out = sub(mul(sixteen_cubic_sq, left), right);
            else
                out = sub(left, mul(sixteen_cubic_sq, right));
        } else {
            XPoly inner = sub(mul(get(h + 2), pow(get(h - 1), 2)), mul(get(h - 2), pow(get(h + 1), 2)));
            out = mul(get(h), inner);
        }
        memo[k] = out;
        return out;
    };
    return get(n);
}

}  // namespace xpoly

}  // namespace selmer
