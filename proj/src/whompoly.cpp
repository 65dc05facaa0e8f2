#include "selmer/whompoly.hpp"

#include <sstream>

#include "selmer/errors.hpp"

namespace selmer {

WHomPoly::WHomPoly(int tau, int weighted_degree, UniPoly dehom)
    : tau_(tau), wdeg_(weighted_degree), r_(std::move(dehom)) {
    if (tau_ < 1) throw DomainError("weight tau must be >= 1");
    if (!r_.is_zero() && r_.degree() * tau_ > wdeg_)
        throw DomainError("dehomogenization degree exceeds the weighted degree");
}

int WHomPoly::y_multiplicity() const {
    if (is_zero()) throw DomainError("y-multiplicity of zero");
    return wdeg_ - tau_ * r_.degree();
}

std::map<std::pair<int, int>, Rat> WHomPoly::terms() const {
    std::map<std::pair<int, int>, Rat> out;
    const auto& c = r_.coeffs();
    for (size_t i = 0; i < c.size(); ++i)
        if (c[i] != 0) out[{static_cast<int>(i), wdeg_ - static_cast<int>(i) * tau_}] = c[i];
    return out;
}

Rat WHomPoly::eval(const Rat& a, const Rat& b) const {
    Rat acc = 0;
    const auto& c = r_.coeffs();
    for (size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0) continue;
        acc += c[i] * rpow(a, static_cast<long>(i)) * rpow(b, wdeg_ - static_cast<long>(i) * tau_);
    }
    return acc;
}

Int WHomPoly::eval_int(const Int& a, const Int& b) const {
    const auto& c = r_.coeffs();
    Int acc = 0;
    Int apow = 1;
    for (size_t i = 0; i < c.size(); ++i) {
        if (c[i] != 0) {
            if (c[i].get_den() != 1) throw DomainError("eval_int on non-integral polynomial");
            acc += c[i].get_num() * apow * ipow(b, static_cast<unsigned long>(wdeg_ - static_cast<int>(i) * tau_));
        }
        apow *= a;
    }
    return acc;
}

WHomPoly WHomPoly::operator*(const WHomPoly& o) const {
    if (tau_ != o.tau_) throw DomainError("weight mismatch");
    return WHomPoly(tau_, wdeg_ + o.wdeg_, r_ * o.r_);
}

WHomPoly WHomPoly::operator*(const Rat& s) const { return WHomPoly(tau_, wdeg_, r_ * s); }

WHomPoly WHomPoly::operator+(const WHomPoly& o) const {
    if (tau_ != o.tau_) throw DomainError("weight mismatch");
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    if (wdeg_ != o.wdeg_) throw DomainError("adding polynomials of different weighted degree");
    return WHomPoly(tau_, wdeg_, r_ + o.r_);
}

WHomPoly WHomPoly::operator-(const WHomPoly& o) const { return *this + o * Rat(-1); }

WHomPoly WHomPoly::pow(unsigned e) const { return WHomPoly(tau_, wdeg_ * static_cast<int>(e), r_.pow(e)); }

bool WHomPoly::operator==(const WHomPoly& o) const {
    if (is_zero() && o.is_zero()) return true;
    return tau_ == o.tau_ && wdeg_ == o.wdeg_ && r_ == o.r_;
}

std::string WHomPoly::str(const std::string& xv, const std::string& yv) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    const auto& c = r_.coeffs();
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) {
        Rat k = c[static_cast<size_t>(i)];
        if (k == 0) continue;
        int j = wdeg_ - i * tau_;
        bool neg = k < 0;
        Rat mag = neg ? Rat(-k) : k;
        if (first)
            os << (neg ? "-" : "");
        else
            os << (neg ? " - " : " + ");
        first = false;
        bool unit = (mag == 1) && (i > 0 || j > 0);
        if (!unit) os << to_string(mag);
        bool need_star = !unit;
        if (i > 0) {
            os << (need_star ? "*" : "") << xv << (i > 1 ? "^" + std::to_string(i) : "");
            need_star = true;
        }
        if (j > 0) os << (need_star ? "*" : "") << yv << (j > 1 ? "^" + std::to_string(j) : "");
    }
    return os.str();
}

WHomPoly whom_from_univariate(const UniPoly& h, int tau, int varsigma, int power) {
    if (power != 2 && power != 3) throw DomainError("power must be 2 or 3");
    int w = power * varsigma;
    if (!h.is_zero() && tau * h.degree() > w)
        throw DomainError("degree condition violated: tau*deg h exceeds " + std::to_string(w));
    return WHomPoly(tau, w, h);
}

WHomPoly FactoredWHom::expand(int tau) const {
    WHomPoly r = WHomPoly::constant(tau, content);
    for (const auto& [f, e] : factors) r = r * f.pow(static_cast<unsigned>(e));
    return r;
}

WHomPoly whom_lift_factor(const UniPoly& factor, int tau) {
    return WHomPoly(tau, tau * factor.degree(), factor);
}

FactoredWHom whom_factor(const WHomPoly& p) {
    if (p.is_zero()) throw DomainError("factoring the zero polynomial");
    FactoredWHom out;
    FactoredPoly fp = poly_factor(p.dehom());
    out.content = fp.content;
    for (const auto& [f, e] : fp.factors) out.factors.emplace_back(whom_lift_factor(f, p.tau()), e);
    int ym = p.y_multiplicity();
    if (ym > 0) out.factors.emplace_back(WHomPoly::y(p.tau()), ym);
    return out;
}

int multiplicity(const WHomPoly& p, const WHomPoly& q) {
    if (p.is_zero()) throw DomainError("multiplicity in the zero polynomial");
    if (q.is_zero() || q.dehom().degree() == 0) {
        if (q.weighted_degree() == 1 && !q.is_zero()) return p.y_multiplicity();
        throw DomainError("multiplicity of a constant");
    }
    UniPoly rest = p.dehom();
    const UniPoly& d = q.dehom();
    int e = 0;
    while (true) {
        auto [quo, rem] = divmod(rest, d);
        if (!rem.is_zero()) break;
        rest = quo;
        ++e;
    }
    return e;
}

}  // namespace selmer
