#include "selmer/unipoly.hpp"

#include <algorithm>
#include <sstream>

#include "selmer/errors.hpp"

namespace selmer {

UniPoly::UniPoly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) {
    for (auto& c : c_) c.canonicalize();
    trim();
}

UniPoly::UniPoly(std::initializer_list<long> coeffs) {
    for (long c : coeffs) c_.emplace_back(c);
    trim();
}

UniPoly UniPoly::constant(const Rat& c) { return UniPoly(std::vector<Rat>{c}); }

UniPoly UniPoly::monomial(const Rat& c, int deg) {
    if (deg < 0) throw DomainError("negative monomial degree");
    std::vector<Rat> v(static_cast<size_t>(deg) + 1, Rat(0));
    v.back() = c;
    return UniPoly(std::move(v));
}

UniPoly UniPoly::from_ints(const std::vector<Int>& coeffs) {
    std::vector<Rat> v;
    v.reserve(coeffs.size());
    for (const auto& c : coeffs) v.emplace_back(c);
    return UniPoly(std::move(v));
}

void UniPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

int UniPoly::degree() const {
    if (c_.empty()) throw DomainError("degree of the zero polynomial is undefined");
    return static_cast<int>(c_.size()) - 1;
}

Rat UniPoly::coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(c_.size())) return Rat(0);
    return c_[static_cast<size_t>(i)];
}

const Rat& UniPoly::lc() const {
    if (c_.empty()) throw DomainError("leading coefficient of the zero polynomial");
    return c_.back();
}

Rat UniPoly::eval(const Rat& t) const {
    Rat acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
    return acc;
}

UniPoly UniPoly::operator-() const {
    UniPoly r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

UniPoly& UniPoly::operator+=(const UniPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rat(0));
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
}

UniPoly& UniPoly::operator-=(const UniPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rat(0));
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
}

UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    if (a.is_zero() || b.is_zero()) return UniPoly();
    std::vector<Rat> r(a.c_.size() + b.c_.size() - 1, Rat(0));
    for (size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i] == 0) continue;
        for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return UniPoly(std::move(r));
}

UniPoly& UniPoly::operator*=(const UniPoly& o) {
    *this = *this * o;
    return *this;
}

UniPoly& UniPoly::operator*=(const Rat& s) {
    if (s == 0) {
        c_.clear();
        return *this;
    }
    for (auto& c : c_) c *= s;
    return *this;
}

UniPoly UniPoly::pow(unsigned e) const {
    UniPoly result = constant(Rat(1));
    UniPoly base = *this;
    while (e) {
        if (e & 1U) result *= base;
        e >>= 1U;
        if (e) base = base * base;
    }
    return result;
}

UniPoly UniPoly::derivative() const {
    if (c_.size() <= 1) return UniPoly();
    std::vector<Rat> r(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * static_cast<long>(i);
    return UniPoly(std::move(r));
}

UniPoly UniPoly::compose(const UniPoly& q) const {
    UniPoly acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * q + constant(*it);
    return acc;
}

UniPoly UniPoly::reverse_substitute(const Rat& c, int n) const {
    if (is_zero()) return UniPoly();
    if (n < degree()) throw DomainError("reverse_substitute: n below degree");
    std::vector<Rat> r(static_cast<size_t>(n) + 1, Rat(0));
    Rat cp = 1;
    for (size_t i = 0; i < c_.size(); ++i) {
        r[static_cast<size_t>(n) - i] = c_[i] * cp;
        cp *= c;
    }
    return UniPoly(std::move(r));
}

bool UniPoly::has_integer_coeffs() const {
    return std::all_of(c_.begin(), c_.end(), [](const Rat& c) { return c.get_den() == 1; });
}

Rat UniPoly::content() const {
    if (is_zero()) throw DomainError("content of the zero polynomial");
    Int num_gcd = 0, den_lcm = 1;
    for (const auto& c : c_) {
        if (c == 0) continue;
        Int n = abs(c.get_num());
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), n.get_mpz_t());
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
    }
    Rat r = make_rat(num_gcd, den_lcm);
    return lc() < 0 ? Rat(-r) : r;
}

UniPoly UniPoly::primitive() const {
    if (is_zero()) return UniPoly();
    Rat inv = 1 / content();
    return *this * inv;
}

UniPoly UniPoly::monic() const {
    if (is_zero()) throw DomainError("monic of the zero polynomial");
    return *this * Rat(1 / lc());
}

std::vector<Int> UniPoly::int_coeffs() const {
    std::vector<Int> r;
    r.reserve(c_.size());
    for (const auto& c : c_) {
        if (c.get_den() != 1) throw DomainError("polynomial has non-integer coefficients");
        r.push_back(c.get_num());
    }
    return r;
}

std::string UniPoly::str(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        const Rat& c = c_[static_cast<size_t>(i)];
        if (c == 0) continue;
        Rat a = abs(c);
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        bool unit = (a == 1);
        if (!unit || i == 0) os << to_string(a);
        if (i > 0) {
            if (!unit) os << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

std::pair<UniPoly, UniPoly> divmod(const UniPoly& a, const UniPoly& b) {
    if (b.is_zero()) throw DomainError("polynomial division by zero");
    if (a.is_zero() || a.degree() < b.degree()) return {UniPoly(), a};
    std::vector<Rat> r = a.coeffs();
    const auto& bc = b.coeffs();
    int db = b.degree();
    std::vector<Rat> q(static_cast<size_t>(a.degree() - db) + 1, Rat(0));
    Rat inv = 1 / b.lc();
    for (int i = a.degree(); i >= db; --i) {
        Rat f = r[static_cast<size_t>(i)] * inv;
        if (f == 0) continue;
        q[static_cast<size_t>(i - db)] = f;
        for (int j = 0; j <= db; ++j) r[static_cast<size_t>(i - db + j)] -= f * bc[static_cast<size_t>(j)];
    }
    r.resize(static_cast<size_t>(db));
    return {UniPoly(std::move(q)), UniPoly(std::move(r))};
}

UniPoly operator/(const UniPoly& a, const UniPoly& b) {
    auto [q, r] = divmod(a, b);
    if (!r.is_zero()) throw DomainError("inexact polynomial division");
    return q;
}

UniPoly operator%(const UniPoly& a, const UniPoly& b) { return divmod(a, b).second; }

bool divides(const UniPoly& d, const UniPoly& p) { return (p % d).is_zero(); }

UniPoly poly_gcd(const UniPoly& p, const UniPoly& q) {
    if (p.is_zero() && q.is_zero()) throw DomainError("gcd(0, 0) is undefined");
    UniPoly a = p.is_zero() ? UniPoly() : p.primitive();
    UniPoly b = q.is_zero() ? UniPoly() : q.primitive();
    while (!b.is_zero()) {
        UniPoly r = a % b;
        a = std::move(b);
        b = r.is_zero() ? UniPoly() : r.primitive();
    }
    return a.primitive();
}

static Rat resultant_rec(const UniPoly& a, const UniPoly& b) {
    int m = a.degree(), n = b.degree();
    if (n == 0) return rpow(b.lc(), m);
    UniPoly r = a % b;
    if (r.is_zero()) return Rat(0);
    Rat sgn = ((m % 2) && (n % 2)) ? Rat(-1) : Rat(1);
    return sgn * rpow(b.lc(), m - r.degree()) * resultant_rec(b, r);
}

Rat poly_resultant(const UniPoly& p, const UniPoly& q) {
    if (p.is_zero() || q.is_zero()) throw DomainError("resultant with the zero polynomial");
    return resultant_rec(p, q);
}

namespace {

// Bareiss fraction-free determinant.
Int bareiss_det(std::vector<std::vector<Int>> m) {
    size_t n = m.size();
    if (n == 0) return 1;
    Int prev = 1;
    int sgn = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            size_t piv = k + 1;
            while (piv < n && m[piv][k] == 0) ++piv;
            if (piv == n) return 0;
            std::swap(m[k], m[piv]);
            sgn = -sgn;
        }
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = k + 1; j < n; ++j) {
                Int v = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
                m[i][j] = v;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    return sgn * m[n - 1][n - 1];
}

std::pair<std::vector<Int>, Int> clear_denominators(const std::vector<Rat>& v) {
    Int l = 1;
    for (const auto& c : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den().get_mpz_t());
    std::vector<Int> out;
    out.reserve(v.size());
    for (const auto& c : v) out.push_back(c.get_num() * (l / c.get_den()));
    return {out, l};
}

}  // namespace

Rat form_resultant(const std::vector<Rat>& p, const std::vector<Rat>& q) {
    if (p.empty() || q.empty()) throw DomainError("form_resultant needs formal degrees >= 0");
    size_t m = p.size() - 1, n = q.size() - 1;
    auto [pi, dp] = clear_denominators(p);
    auto [qi, dq] = clear_denominators(q);
    size_t sz = m + n;
    Int det;
    if (sz == 0) {
        det = 1;
    } else {
        std::vector<std::vector<Int>> mat(sz, std::vector<Int>(sz, Int(0)));
        // Coefficients highest degree first.
        for (size_t r = 0; r < n; ++r)
            for (size_t j = 0; j <= m; ++j) mat[r][r + j] = pi[m - j];
        for (size_t r = 0; r < m; ++r)
            for (size_t j = 0; j <= n; ++j) mat[n + r][r + j] = qi[n - j];
        det = bareiss_det(std::move(mat));
    }
    return make_rat(det, ipow(dp, static_cast<unsigned long>(n)) * ipow(dq, static_cast<unsigned long>(m)));
}

Rat sylvester_resultant(const UniPoly& p, const UniPoly& q) {
    if (p.is_zero() || q.is_zero()) throw DomainError("resultant with the zero polynomial");
    return form_resultant(p.coeffs(), q.coeffs());
}

Rat poly_discriminant(const UniPoly& p) {
    int n = p.degree();
    if (n < 1) throw DomainError("discriminant needs degree >= 1");
    if (n == 1) return Rat(1);
    Rat r = poly_resultant(p, p.derivative()) / p.lc();
    return ((n * (n - 1) / 2) % 2) ? Rat(-r) : r;
}

std::vector<std::pair<UniPoly, int>> squarefree_decomposition(const UniPoly& p) {
    if (p.is_zero()) throw DomainError("squarefree decomposition of zero");
    std::vector<std::pair<UniPoly, int>> out;
    if (p.degree() == 0) return out;
    UniPoly f = p.monic();
    UniPoly a = poly_gcd(f, f.derivative()).monic();
    UniPoly b = f / a;
    UniPoly c = f.derivative() / a;
    UniPoly d = c - b.derivative();
    int i = 1;
    while (b.degree() > 0) {
        UniPoly g = d.is_zero() ? b : poly_gcd(b, d).monic();
        if (g.degree() > 0) out.emplace_back(g.primitive(), i);
        UniPoly nb = b / g;
        UniPoly nc = d / g;
        b = nb;
        d = nc - b.derivative();
        ++i;
    }
    return out;
}

}  // namespace selmer
