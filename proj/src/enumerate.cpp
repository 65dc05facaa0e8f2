#include "selmer/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <thread>

#include "selmer/arith.hpp"
#include "selmer/curves.hpp"
#include "selmer/errors.hpp"

namespace selmer {

namespace {

constexpr double kInflate = 1.03;

// Double-precision evaluation of a weighted form sum c_i x^i y^(W - i tau).
struct FormD {
    std::vector<double> c;
    int tau = 1, wdeg = 0;

    explicit FormD(const WHomPoly& p) : tau(p.tau()), wdeg(p.weighted_degree()) {
        for (const auto& v : p.dehom().coeffs()) c.push_back(to_double(v));
    }
    FormD() = default;

    double eval(double x, double y) const {
        double acc = 0;
        for (size_t i = 0; i < c.size(); ++i) {
            if (c[i] == 0) continue;
            acc += c[i] * std::pow(x, static_cast<double>(i)) * std::pow(y, static_cast<double>(wdeg - static_cast<int>(i) * tau));
        }
        return acc;
    }
    double at_t(double t) const {
        double acc = 0;
        for (size_t i = c.size(); i-- > 0;) acc = acc * t + c[i];
        return acc;
    }
};

double h0_double(const FormD& A, const FormD& B, double x, double y) {
    double a = A.eval(x, y), b = B.eval(x, y);
    return std::max(4 * std::fabs(a) * a * a, 27 * b * b);
}

double h0_t(const FormD& A, const FormD& B, double t) {
    double a = A.at_t(t), b = B.at_t(t);
    return std::max(4 * std::fabs(a) * a * a, 27 * b * b);
}

int effective_delta(const FamilySpec& fam, const EnumOptions& opts) {
    int d = opts.delta < 0 ? fam.delta : opts.delta;
    if (d != 0 && d != 1) throw DomainError("delta must be 0 or 1");
    return d;
}

Int int_pow_mod(const Int& base, unsigned long e, const Int& mod) {
    Int r;
    mpz_powm_ui(r.get_mpz_t(), base.get_mpz_t(), e, mod.get_mpz_t());
    return r;
}

Int eval_mod(const std::vector<Int>& coeffs, const Int& t, const Int& mod) {
    Int acc = 0;
    for (size_t i = coeffs.size(); i-- > 0;) {
        acc = (acc * t + coeffs[i]) % mod;
    }
    if (acc < 0) acc += mod;
    return acc;
}

// Coefficients of F(1, s) for a weighted form with tau = 1: the reversal at the weighted degree.
std::vector<Int> reversed_coeffs(const WHomPoly& F) {
    auto c = F.dehom().int_coeffs();
    std::vector<Int> out(static_cast<size_t>(F.weighted_degree()) + 1, Int(0));
    for (size_t i = 0; i < c.size(); ++i) out[static_cast<size_t>(F.weighted_degree()) - i] = c[i];
    return out;
}

// Deepest level j such that some class of P^1(Z/p^j) has P = Q = 0 mod p^j.
int local_common_depth(const WHomPoly& P, const WHomPoly& Q, const Int& p, int cap) {
    auto pt = P.dehom().int_coeffs(), qt = Q.dehom().int_coeffs();
    auto ps = reversed_coeffs(P), qs = reversed_coeffs(Q);
    int best = 0;
    std::function<void(const std::vector<Int>&, const std::vector<Int>&, const Int&, int, const Int&)> dfs =
        [&](const std::vector<Int>& pc, const std::vector<Int>& qc, const Int& t, int j, const Int& pj) {
            // t is a residue mod pj = p^j that is alive at level j.
            best = std::max(best, j);
            if (j >= cap) return;
            Int next = pj * p;
            for (Int d = 0; d < p; ++d) {
                Int u = t + d * pj;
                if (eval_mod(pc, u, next) == 0 && eval_mod(qc, u, next) == 0) dfs(pc, qc, u, j + 1, next);
            }
        };
    dfs(pt, qt, Int(0), 0, Int(1));
    // s chart: s in pZ_p.
    if (eval_mod(ps, Int(0), p) == 0 && eval_mod(qs, Int(0), p) == 0) dfs(ps, qs, Int(0), 1, p);
    return best;
}

struct BoxPlan {
    long a_max = 0, b_max = 0;
    int delta = 0;
    double bound_factor = 1;  // N * factor bounds H0 (delta = 0 or coprime delta = 1)
    bool a3 = false;
    A3Bound a3data;
};

BoxPlan plan_box(const FamilySpec& fam, const EnumOptions& opts) {
    BoxPlan plan;
    plan.delta = effective_delta(fam, opts);
    FormD A(fam.A), B(fam.B);
    const double logN = std::log(to_double(Rat(opts.N)));
    const int tau = fam.tau;
    double D = 6.0 * fam.varsigma;
    std::function<double(double)> log_phi = [](double) { return 0.0; };
    double log_phi_axis = 0;
    if (plan.delta == 1) {
        if (fam.cls == AdmissibilityClass::A3) {
            plan.a3 = true;
            plan.a3data = a3_bound(fam);
            FormD K(plan.a3data.K);
            const double logC = std::log(to_double(Rat(plan.a3data.cofactor_bound)));
            const int r = plan.a3data.r;
            D -= static_cast<double>(r * plan.a3data.K.weighted_degree());
            log_phi = [K, logC, r](double t) { return logC + r * std::log(std::fabs(K.at_t(t))); };
            log_phi_axis = logC + r * std::log(std::fabs(K.c.back()));
            if (plan.a3data.K.dehom().degree() != plan.a3data.K.weighted_degree()) log_phi_axis = -INFINITY;
        } else {
            if (!fam.lambda.applicable) throw InapplicableError("delta = 1 enumeration needs a Lambda bound");
            double l12 = 12 * std::log(to_double(Rat(fam.lambda.exact_value)));
            log_phi = [l12](double) { return l12; };
            log_phi_axis = l12;
            plan.bound_factor = std::exp(l12);
        }
    }
    // Scan t = tan(u).
    double best_y = -INFINITY, best_x = -INFINITY;
    const int steps = 400000;
    for (int i = 1; i < steps; ++i) {
        double u = -M_PI / 2 + M_PI * i / steps;
        double t = std::tan(u);
        double h = h0_t(A, B, t);
        if (!(h > 0)) throw DomainError("H0 vanishes at a real point: the region is unbounded");
        double ly = (logN + log_phi(t) - std::log(h)) / D;
        best_y = std::max(best_y, ly);
        if (t != 0) best_x = std::max(best_x, std::log(std::fabs(t)) + tau * ly);
    }
    // Axis b = 0.
    double h_axis = h0_double(A, B, 1.0, 0.0);
    if (!(h_axis > 0)) throw DomainError("A and B both vanish at (1, 0): the region is unbounded");
    if (std::isfinite(log_phi_axis) || !plan.a3) best_x = std::max(best_x, tau * (logN + log_phi_axis - std::log(h_axis)) / D);
    double xm = std::exp(best_x) * kInflate + 1, ym = std::exp(best_y) * kInflate + 1;
    if (xm > 4e18 || ym > 4e18) throw ResourceError("enumeration box exceeds 64-bit range");
    plan.a_max = static_cast<long>(xm);
    plan.b_max = static_cast<long>(ym);
    return plan;
}

// Sharper form of m^12 <= |K|^r C: away from the resultant, p contributes p^(12 floor(r v_p(K) / 12)).
bool a3_refined_pass(const BoxPlan& plan, const Int& a, const Int& b, double needed) {
    static const std::vector<std::uint32_t> small_primes = primes_up_to(200000);
    const A3Bound& d = plan.a3data;
    Int kv = abs(d.K.eval_int(a, b));
    if (kv == 0) return true;
    const double kd = to_double(Rat(kv));
    const double reach = std::pow(kd, static_cast<double>(d.r) / 12.0);
    if (reach > small_primes.back()) return true;
    double bound = 1;
    Int rest = kv;
    for (const auto& [p, c] : d.local_depths) {
        int v = valuation(rest, p);
        if (v > 0) mpz_divexact(rest.get_mpz_t(), rest.get_mpz_t(), ipow(p, static_cast<unsigned long>(v)).get_mpz_t());
        bound *= std::pow(to_double(Rat(p)), d.r * v + c);
    }
    for (std::uint32_t p : small_primes) {
        if (p > reach) break;
        if (mpz_divisible_ui_p(rest.get_mpz_t(), p) == 0) continue;
        int v = valuation(rest, static_cast<unsigned long>(p));
        bound *= std::pow(static_cast<double>(p), 12 * ((d.r * v) / 12));
    }
    return needed <= bound;
}

struct BandResult {
    std::vector<ParamPoint> points;
    EnumStats stats;
};

void run_band(const FamilySpec& fam, const EnumOptions& opts, const BoxPlan& plan, long b_lo, long b_hi, BandResult& out) {
    const int tau = fam.tau, ups = fam.upsilon;
    const double Nd = to_double(Rat(opts.N));
    const auto& ac = fam.A.dehom().coeffs();
    const auto& bc = fam.B.dehom().coeffs();
    std::vector<double> acd, bcd, kcd;
    for (const auto& v : ac) acd.push_back(to_double(v));
    for (const auto& v : bc) bcd.push_back(to_double(v));
    if (plan.a3)
        for (const auto& v : plan.a3data.K.dehom().coeffs()) kcd.push_back(to_double(v));
    const int wA = fam.A.weighted_degree(), wB = fam.B.weighted_degree();
    const int wK = plan.a3 ? plan.a3data.K.weighted_degree() : 0;
    const double Cd = plan.a3 ? to_double(Rat(plan.a3data.cofactor_bound)) : 1.0;
    const double rel = 1e-12;

    std::vector<double> rowA(acd.size()), rowB(bcd.size()), rowK(kcd.size()), absA(acd.size()), absB(bcd.size()),
        absK(kcd.size());
    for (long b = b_lo; b <= b_hi; ++b) {
        if (opts.sign_normalization && ups == 1 && b < 0) continue;
        const double bd = static_cast<double>(b);
        auto fill = [&](const std::vector<double>& c, int w, std::vector<double>& row, std::vector<double>& ab) {
            for (size_t i = 0; i < c.size(); ++i) {
                row[i] = c[i] * std::pow(bd, static_cast<double>(w - static_cast<int>(i) * tau));
                ab[i] = std::fabs(row[i]);
            }
        };
        fill(acd, wA, rowA, absA);
        fill(bcd, wB, rowB, absB);
        if (plan.a3) fill(kcd, wK, rowK, absK);
        for (long a = -plan.a_max; a <= plan.a_max; ++a) {
            ++out.stats.box_points;
            if (opts.sign_normalization && ups == 1 && b == 0 && tau % 2 == 1 && a <= 0) continue;
            if (a == 0 && b == 0) continue;
            const double ad = static_cast<double>(a), aa = std::fabs(ad);
            auto horner = [&](const std::vector<double>& row, const std::vector<double>& ab, double& err) {
                double v = 0, m = 0;
                for (size_t i = row.size(); i-- > 0;) {
                    v = v * ad + row[i];
                    m = m * aa + ab[i];
                }
                err = m * rel + 1e-300;
                return v;
            };
            double eA, eB;
            double vA = horner(rowA, absA, eA), vB = horner(rowB, absB, eB);
            double lA = std::max(0.0, std::fabs(vA) - eA), lB = std::max(0.0, std::fabs(vB) - eB);
            double h_low = std::max(4 * lA * lA * lA, 27 * lB * lB);
            double limit;
            if (plan.delta == 0) {
                limit = Nd;
            } else if (plan.a3) {
                double eK;
                double vK = std::fabs(horner(rowK, absK, eK)) + eK;
                limit = Nd * Cd * std::pow(vK, plan.a3data.r);
            } else {
                limit = Nd * plan.bound_factor;
            }
            if (h_low > limit * (1 + 1e-9)) continue;
            if (!in_coprimality_set(a, b, ups, tau)) continue;
            Int ai(a), bi(b);
            if (plan.a3 && !a3_refined_pass(plan, ai, bi, h_low / (Nd * (1 + 1e-9)))) continue;
            ++out.stats.candidates;
            ParamPoint pt;
            pt.a = ai;
            pt.b = bi;
            pt.A = fam.A.eval_int(ai, bi);
            pt.B = fam.B.eval_int(ai, bi);
            pt.Delta = 4 * pt.A * pt.A * pt.A + 27 * pt.B * pt.B;
            if (pt.Delta == 0) {
                Int h0 = height_h0(pt.A, pt.B);
                bool inside = h0 <= opts.N;
                if (!inside && plan.delta == 1 && !(pt.A == 0 && pt.B == 0)) {
                    Int e = m_of(pt.A, pt.B);
                    inside = h0 <= opts.N * ipow(e, 12);
                }
                if (inside) ++out.stats.degenerate;
                continue;
            }
            Int h0 = height_h0(pt.A, pt.B);
            if (plan.delta == 0 && h0 > opts.N) continue;
            pt.e = m_of(pt.A, pt.B);
            Int e12 = ipow(pt.e, 12);
            if (plan.delta == 1 && h0 > opts.N * e12) continue;
            pt.H = Rat(h0) / Rat(e12);
            pt.H.canonicalize();
            out.points.push_back(std::move(pt));
            ++out.stats.emitted;
        }
    }
}

}  // namespace

bool in_coprimality_set(long a, long b, int upsilon, int tau) {
    if (a == 0 && b == 0) throw DomainError("(0, 0) is not a parameter point");
    long g = std::gcd(a < 0 ? -a : a, b < 0 ? -b : b);
    if (g == 1) return true;
    const int need_a = upsilon * tau, need_b = upsilon;
    auto vcount = [](long x, long p) {
        if (x == 0) return 1 << 20;
        int v = 0;
        while (x % p == 0) {
            x /= p;
            ++v;
        }
        return v;
    };
    long rest = g;
    for (long p = 2; p * p <= rest; ++p) {
        if (rest % p != 0) continue;
        while (rest % p == 0) rest /= p;
        if (vcount(a, p) >= need_a && vcount(b, p) >= need_b) return false;
    }
    if (rest > 1 && vcount(a, rest) >= need_a && vcount(b, rest) >= need_b) return false;
    return true;
}

bool in_coprimality_set(const Int& a, const Int& b, int upsilon, int tau) {
    if (a == 0 && b == 0) throw DomainError("(0, 0) is not a parameter point");
    if (a.fits_slong_p() && b.fits_slong_p() && abs(a) < Int("4000000000000000000") &&
        abs(b) < Int("4000000000000000000"))
        return in_coprimality_set(a.get_si(), b.get_si(), upsilon, tau);
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (g == 1) return true;
    for (const auto& [p, e] : factor_integer(g).factors) {
        (void)e;
        int va = a == 0 ? 1 << 20 : valuation(a, p), vb = b == 0 ? 1 << 20 : valuation(b, p);
        if (va >= upsilon * tau && vb >= upsilon) return false;
    }
    return true;
}

bool sign_normalized(const Int& a, const Int& b, int upsilon, int tau) {
    if (upsilon == 2) return true;
    if (b > 0) return true;
    if (b < 0) return false;
    return tau % 2 == 0 || a > 0;
}

RegionBox region_box(const FamilySpec& fam) {
    EnumOptions o;
    o.N = 1;
    o.delta = 0;
    FormD A(fam.A), B(fam.B);
    double best_y = 0, best_x = 0;
    const int steps = 400000;
    for (int i = 1; i < steps; ++i) {
        double t = std::tan(-M_PI / 2 + M_PI * i / steps);
        double h = h0_t(A, B, t);
        if (!(h > 0)) throw DomainError("H0 vanishes at a real point: the region is unbounded");
        double y = std::pow(h, -1.0 / (6 * fam.varsigma));
        best_y = std::max(best_y, y);
        best_x = std::max(best_x, std::fabs(t) * std::pow(y, fam.tau));
    }
    double h_axis = h0_double(A, B, 1.0, 0.0);
    if (!(h_axis > 0)) throw DomainError("A and B both vanish at (1, 0): the region is unbounded");
    best_x = std::max(best_x, std::pow(h_axis, -static_cast<double>(fam.tau) / (6 * fam.varsigma)));
    return {best_x, best_y};
}

A3Bound a3_bound(const FamilySpec& fam) {
    if (fam.cls != AdmissibilityClass::A3) throw InapplicableError("a3_bound needs class A3");
    A3Bound out;
    out.r = fam.r;
    out.K = whom_lift_factor(fam.k_rad, fam.tau);
    UniPoly kr = fam.k_rad.pow(static_cast<unsigned>(fam.r));
    auto [p3, rem3] = divmod(fam.f.pow(3), kr);
    auto [q2, rem2] = divmod(fam.g.pow(2), kr);
    if (!rem3.is_zero() || !rem2.is_zero()) throw DomainError("k^r does not divide f^3 and g^2");
    const int w = 6 * fam.varsigma - fam.r * out.K.weighted_degree();
    WHomPoly P(fam.tau, w, p3), Q(fam.tau, w, q2);
    std::vector<Rat> pc(static_cast<size_t>(w) + 1, Rat(0)), qc(static_cast<size_t>(w) + 1, Rat(0));
    for (size_t i = 0; i < p3.coeffs().size(); ++i) pc[i] = p3.coeffs()[i];
    for (size_t i = 0; i < q2.coeffs().size(); ++i) qc[i] = q2.coeffs()[i];
    Rat res = form_resultant(pc, qc);
    if (res == 0 || res.get_den() != 1) throw DomainError("unexpected resultant in the A3 bound");
    out.resultant = abs(res.get_num());
    for (const auto& [p, v] : factor_integer(out.resultant).factors) {
        int c = local_common_depth(P, Q, p, v + 1);
        out.local_depths.emplace_back(p, c);
        out.cofactor_bound *= ipow(p, static_cast<unsigned long>(c));
    }
    return out;
}

EnumStats enum_points(const FamilySpec& fam, const EnumOptions& opts, const std::function<void(const ParamPoint&)>& sink) {
    if (opts.N < 1) throw DomainError("N must be at least 1");
    BoxPlan plan = plan_box(fam, opts);
    const long b_lo = (opts.sign_normalization && fam.upsilon == 1) ? 0 : -plan.b_max;
    const long rows = plan.b_max - b_lo + 1;
    long double box = static_cast<long double>(rows) * (2.0L * plan.a_max + 1);
    if (box > static_cast<long double>(opts.max_box_points))
        throw ResourceError("enumeration box of " + std::to_string(static_cast<double>(box)) + " points exceeds the limit");
    const int threads = std::max(1, std::min<int>(opts.threads, static_cast<int>(rows)));
    std::vector<BandResult> bands(static_cast<size_t>(threads));
    std::vector<std::pair<long, long>> ranges;
    for (int i = 0; i < threads; ++i) {
        long lo = b_lo + rows * i / threads, hi = b_lo + rows * (i + 1) / threads - 1;
        ranges.emplace_back(lo, hi);
    }
    if (threads == 1) {
        run_band(fam, opts, plan, ranges[0].first, ranges[0].second, bands[0]);
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < threads; ++i)
            pool.emplace_back([&, i] { run_band(fam, opts, plan, ranges[static_cast<size_t>(i)].first, ranges[static_cast<size_t>(i)].second, bands[static_cast<size_t>(i)]); });
        for (auto& th : pool) th.join();
    }
    EnumStats total;
    total.a_max = plan.a_max;
    total.b_max = plan.b_max;
    for (auto& band : bands) {
        total.box_points += band.stats.box_points;
        total.candidates += band.stats.candidates;
        total.emitted += band.stats.emitted;
        total.degenerate += band.stats.degenerate;
        for (const auto& p : band.points) sink(p);
    }
    return total;
}

std::vector<ParamPoint> collect_points(const FamilySpec& fam, const EnumOptions& opts, EnumStats* stats) {
    std::vector<ParamPoint> out;
    EnumStats s = enum_points(fam, opts, [&](const ParamPoint& p) { out.push_back(p); });
    if (stats) *stats = s;
    return out;
}

std::vector<ParamPoint> brute_force_points(const FamilySpec& fam, const EnumOptions& opts, long a_bound, long b_bound) {
    const int delta = effective_delta(fam, opts);
    std::vector<ParamPoint> out;
    for (long b = -b_bound; b <= b_bound; ++b)
        for (long a = -a_bound; a <= a_bound; ++a) {
            if (a == 0 && b == 0) continue;
            Int ai(a), bi(b);
            if (opts.sign_normalization && !sign_normalized(ai, bi, fam.upsilon, fam.tau)) continue;
            // Direct prime-by-prime membership test.
            bool member = true;
            Int g;
            mpz_gcd(g.get_mpz_t(), ai.get_mpz_t(), bi.get_mpz_t());
            for (long p = 2; p <= std::max(std::labs(a), std::labs(b)); ++p) {
                if (!is_prime(Int(p))) continue;
                long pa = 1, pb = 1;
                for (int i = 0; i < fam.upsilon * fam.tau; ++i) pa *= p;
                for (int i = 0; i < fam.upsilon; ++i) pb *= p;
                if (a % pa == 0 && b % pb == 0) {
                    member = false;
                    break;
                }
            }
            if (!member) continue;
            ParamPoint pt;
            pt.a = ai;
            pt.b = bi;
            pt.A = fam.A.eval_int(ai, bi);
            pt.B = fam.B.eval_int(ai, bi);
            pt.Delta = 4 * pt.A * pt.A * pt.A + 27 * pt.B * pt.B;
            if (pt.Delta == 0) continue;
            pt.e = m_of(pt.A, pt.B);
            Int h0 = height_h0(pt.A, pt.B);
            Int lim = delta == 1 ? opts.N * ipow(pt.e, 12) : opts.N;
            if (h0 > lim) continue;
            pt.H = Rat(h0) / Rat(ipow(pt.e, 12));
            pt.H.canonicalize();
            out.push_back(std::move(pt));
        }
    std::sort(out.begin(), out.end(), [](const ParamPoint& x, const ParamPoint& y) {
        return x.b != y.b ? x.b < y.b : x.a < y.a;
    });
    return out;
}

void write_points_csv(std::ostream& out, const std::vector<ParamPoint>& points) {
    out << "a,b,A,B,Delta,e,H\n";
    for (const auto& p : points)
        out << p.a << ',' << p.b << ',' << p.A << ',' << p.B << ',' << p.Delta << ',' << p.e << ',' << to_string(p.H)
            << '\n';
}

// ---------------------------------------------------------------------------
// Congruences

std::string CongruenceClass::str() const {
    if (q == 1) return "all";
    if (projective) return "[" + to_string(a1) + ":" + to_string(b1) + "] mod " + to_string(q);
    return "(" + to_string(a1) + "," + to_string(b1) + ") mod " + to_string(q);
}

std::vector<CongruenceClass> projective_classes(const Int& q) {
    if (q == 1) return {CongruenceClass{}};
    if (!is_prime(q)) throw DomainError("projective classes need a prime modulus");
    std::vector<CongruenceClass> out;
    for (Int t = 0; t < q; ++t) out.push_back({q, true, t, Int(1)});
    out.push_back({q, true, Int(1), Int(0)});
    return out;
}

namespace {

Int mod_pos(const Int& v, const Int& m) {
    Int r = v % m;
    if (r < 0) r += m;
    return r;
}

// Class of (a, b) in P^1(Z/q) under t = a / b^tau; q prime. Returns false for (0, 0) mod q.
bool projective_match(const Int& a, const Int& b, int tau, const CongruenceClass& c, bool& has_class) {
    const Int& q = c.q;
    Int am = mod_pos(a, q), bm = mod_pos(b, q);
    has_class = !(am == 0 && bm == 0);
    if (!has_class) return false;
    Int bt = int_pow_mod(bm, static_cast<unsigned long>(tau), q);
    Int c_a = mod_pos(c.a1, q), c_b = mod_pos(c.b1, q);
    // [am : bt] == [c_a : c_b]  iff  am * c_b == bt * c_a mod q.
    return mod_pos(am * c_b - bt * c_a, q) == 0;
}

}  // namespace

DensityReport count_congruence(const FamilySpec& fam, const std::vector<ParamPoint>& points, const CongruenceClass& cls,
                               int delta) {
    DensityReport rep;
    const Int& q = cls.q;
    if (q < 1) throw DomainError("modulus must be positive");
    if (cls.projective) {
        if (q != 1 && !is_prime(q)) throw DomainError("projective classes need a prime modulus");
        if (q != 1 && mod_pos(cls.a1, q) == 0 && mod_pos(cls.b1, q) == 0)
            throw DomainError("[0:0] is not a point of P^1");
    }
    const bool homogeneous_case = fam.tau == 1 && fam.upsilon == 1;
    if (delta == 0) {
        if (!cls.projective) throw InapplicableError("delta = 0 predictions use projective classes");
        rep.regime = "projective";
        Rat pred = q == 1 ? Rat(1) : Rat(Int(1), q + 1);
        rep.predicted_exact = pred;
    } else if (fam.cls == AdmissibilityClass::A3) {
        if (!cls.projective || !homogeneous_case) throw InapplicableError("class A3 predictions use projective classes");
        rep.regime = "local-density";
        if (q != 1) {
            Int A1 = fam.A.eval_int(cls.a1, cls.b1), B1 = fam.B.eval_int(cls.a1, cls.b1);
            Int g;
            Int a3 = A1 * A1 * A1, b2 = B1 * B1;
            mpz_gcd(g.get_mpz_t(), a3.get_mpz_t(), b2.get_mpz_t());
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), q.get_mpz_t());
            if (g != 1) throw InapplicableError("gcd(A(a1,b1)^3, B(a1,b1)^2, q) != 1");
        }
        double lam = 1, lo = 1, hi = 1;
        bool exact = true;
        if (q != 1)
            for (const auto& [p, e] : factor_integer(q).factors) {
                (void)e;
                auto li = lambda_p(fam, p, 3);
                lo *= li.lower;
                hi *= li.upper;
                exact = exact && li.exact;
            }
        lam = (lo + hi) / 2;
        double base = q == 1 ? 1.0 : 1.0 / to_double(Rat(q + 1));
        rep.exact = exact;
        rep.predicted = base * lam;
        rep.error_bound = base * (hi - lo) / 2;
        if (exact) rep.predicted_exact = Rat(rep.predicted);
    } else {
        if (cls.projective && q != 1) throw InapplicableError("coprime delta = 1 predictions use affine classes");
        rep.regime = "affine";
        Int g;
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), fam.lambda.exact_value.get_mpz_t());
        if (g != 1) throw InapplicableError("gcd(q, Lambda) != 1");
        Int g2;
        mpz_gcd(g2.get_mpz_t(), cls.a1.get_mpz_t(), cls.b1.get_mpz_t());
        mpz_gcd(g2.get_mpz_t(), g2.get_mpz_t(), q.get_mpz_t());
        if (q != 1 && g2 != 1) throw InapplicableError("gcd(a1, b1, q) != 1");
        Rat pred = 1;
        if (q != 1)
            for (const auto& [p, e] : factor_integer(q).factors) {
                (void)e;
                Rat pp(p);
                Rat loc = 1 / (pp * pp) / (1 - 1 / rpow(pp, fam.upsilon * (1 + fam.tau)));
                pred *= loc;
            }
        rep.predicted_exact = pred;
    }
    if (rep.exact) rep.predicted = to_double(rep.predicted_exact);

    for (const auto& pt : points) {
        if (q == 1) {
            ++rep.total;
            ++rep.observed;
            continue;
        }
        if (cls.projective) {
            bool has;
            bool hit = projective_match(pt.a, pt.b, fam.tau, cls, has);
            if (!has) continue;
            ++rep.total;
            if (hit) ++rep.observed;
        } else {
            ++rep.total;
            if (mod_pos(pt.a - cls.a1, q) == 0 && mod_pos(pt.b - cls.b1, q) == 0) ++rep.observed;
        }
    }
    rep.ratio = rep.total ? static_cast<double>(rep.observed) / static_cast<double>(rep.total) : 0.0;
    return rep;
}

DensityReport count_congruence(const FamilySpec& fam, const EnumOptions& opts, const CongruenceClass& cls) {
    auto points = collect_points(fam, opts);
    return count_congruence(fam, points, cls, effective_delta(fam, opts));
}

// ---------------------------------------------------------------------------
// Local densities

int nu_exponent(int r, int vR, int k) {
    if (r != 1 && r != 2 && r != 3 && r != 4 && r != 6 && r != 12) throw DomainError("r must divide 12");
    if (k < 1 || vR < 0) throw DomainError("nu needs k >= 1 and v_p(R) >= 0");
    return std::max((12 * k + r - 1) / r, vR);
}

Int psi(const Int& n, int r, const std::function<int(const Int&)>& vR_of) {
    if (n < 1) throw DomainError("psi needs n >= 1");
    if (r != 2 && r != 3 && r != 4 && r != 6 && r != 12) throw DomainError("psi needs r in {2,3,4,6,12}");
    Int out = 1;
    for (const auto& [p, k] : factor_integer(n).factors)
        out *= ipow(p, static_cast<unsigned long>(nu_exponent(r, vR_of(p), k)));
    return out;
}

namespace {

void require_homogeneous(const FamilySpec& fam) {
    if (fam.tau != 1 || fam.upsilon != 1) throw InapplicableError("local densities need tau = upsilon = 1");
}

}  // namespace

namespace {

// Coefficients of c(t + x) in x, reduced mod `mod`.
std::vector<Int> taylor_shift(const std::vector<Int>& c, const Int& t, const Int& mod) {
    std::vector<Int> out(c);
    const size_t n = out.size();
    for (size_t i = 0; i + 1 < n; ++i)
        for (size_t j = n - 1; j > i; --j) out[j - 1] = (out[j - 1] + t * out[j]) % mod;
    for (auto& v : out) {
        v %= mod;
        if (v < 0) v += mod;
    }
    return out;
}

// On the ball t + p^j Z_p: 1 if p^target divides the form everywhere, -1 if nowhere, 0 if undecided.
int ball_status(const std::vector<Int>& c, const Int& t, int j, int target, const Int& p, const Int& mod) {
    auto sh = taylor_shift(c, t, mod);
    auto val = [&](const Int& v) { return v == 0 ? target : std::min(target, valuation(v, p)); };
    int v0 = val(sh[0]);
    int rest = target;
    for (size_t i = 1; i < sh.size(); ++i) rest = std::min(rest, val(sh[i]) + static_cast<int>(i) * j);
    if (v0 >= target && rest >= target) return 1;
    if (v0 < std::min(rest, target)) return -1;
    return 0;
}

}  // namespace

Rat rho_local(const FamilySpec& fam, const Int& p, int k) {
    require_homogeneous(fam);
    if (k < 1) throw DomainError("rho_local needs k >= 1");
    if (!is_prime(p)) throw DomainError("rho_local needs a prime");
    const int tA = 4 * k, tB = 6 * k;
    const Int mod = ipow(p, static_cast<unsigned long>(tB));
    auto at = fam.A.dehom().int_coeffs(), bt = fam.B.dehom().int_coeffs();
    auto as = reversed_coeffs(fam.A), bs = reversed_coeffs(fam.B);
    Rat measure = 0;
    // Ball t + p^j Z_p; membership is decided once j reaches 6k.
    std::function<void(const std::vector<Int>&, const std::vector<Int>&, const Int&, int, const Int&)> dfs =
        [&](const std::vector<Int>& ac, const std::vector<Int>& bc, const Int& t, int j, const Int& pj) {
            int sa = ball_status(ac, t, j, tA, p, mod);
            if (sa < 0) return;
            int sb = ball_status(bc, t, j, tB, p, mod);
            if (sb < 0) return;
            if (sa > 0 && sb > 0) {
                measure += Rat(Int(1), pj);
                return;
            }
            if (j >= tB) throw DomainError("ball undecided at full depth");
            Int next = pj * p;
            for (Int d = 0; d < p; ++d) dfs(ac, bc, t + d * pj, j + 1, next);
        };
    dfs(at, bt, Int(0), 0, Int(1));
    dfs(as, bs, Int(0), 1, p);
    // P^1(Z_p) has total measure 1 + 1/p in these charts.
    Rat out = measure / (1 + Rat(1) / Rat(p));
    out.canonicalize();
    return out;
}

Rat rho_local_bruteforce(const FamilySpec& fam, const Int& p, int k) {
    require_homogeneous(fam);
    int r = fam.cls == AdmissibilityClass::A3 ? fam.r : 12;
    int vR = 0;
    if (fam.cls == AdmissibilityClass::A3) vR = valuation(a3_bound(fam).resultant, p);
    Int modulus = ipow(p, static_cast<unsigned long>(std::max(nu_exponent(r, vR, k), 6 * k)));
    if (modulus > 100000) throw ResourceError("psi = " + to_string(modulus) + " exceeds the brute-force limit 1e5");
    Int pk4 = ipow(p, static_cast<unsigned long>(4 * k)), pk6 = ipow(p, static_cast<unsigned long>(6 * k));
    Int hits = 0, total = 0;
    auto test = [&](const Int& a, const Int& b) {
        ++total;
        if (fam.A.eval_int(a, b) % pk4 == 0 && fam.B.eval_int(a, b) % pk6 == 0) ++hits;
    };
    for (Int t = 0; t < modulus; ++t) test(t, Int(1));
    for (Int s = 0; s < modulus; s += p) test(Int(1), s);
    Rat out = Rat(hits) / Rat(total);
    out.canonicalize();
    return out;
}

LambdaInterval lambda_p(const FamilySpec& fam, const Int& p, int k_max) {
    if (k_max < 1) throw DomainError("lambda_p needs k_max >= 1");
    require_homogeneous(fam);
    const double pd = to_double(Rat(p));
    const double m = fam.m;
    double sum = 0, last_term = 0, prev_term = 0;
    Rat last_rho = 0;
    for (int k = 1; k <= k_max; ++k) {
        last_rho = rho_local(fam, p, k);
        prev_term = last_term;
        last_term = std::pow(pd, 2.0 * k / m) * to_double(last_rho);
        sum += last_term;
        if (last_rho == 0) break;
    }
    const double scale = 1 - std::pow(pd, -2.0 / m);
    LambdaInterval out;
    double S = 1 + scale * sum;
    if (last_rho == 0) {
        out.lower = out.upper = 1 / S;
        return out;
    }
    // Geometric tail: the decay rate p^(2/m - 12/r) for class A3, otherwise the last observed ratio.
    double q;
    if (fam.cls == AdmissibilityClass::A3) {
        q = std::pow(pd, 2.0 / m - 12.0 / fam.r);
    } else {
        if (k_max < 2 || prev_term <= 0) throw InapplicableError("tail estimate needs k_max >= 2 outside class A3");
        q = last_term / prev_term;
    }
    if (!(q < 1)) throw InapplicableError("local density series does not visibly converge");
    const double tail = last_term * q / (1 - q);
    out.exact = false;
    out.upper = 1 / S;
    out.lower = 1 / (S + scale * tail);
    return out;
}

// ---------------------------------------------------------------------------
// Volume

VolumeEstimate region_volume(const FamilySpec& fam, std::uint64_t samples, std::uint64_t seed) {
    if (samples < 10000) throw SampleError("region_volume needs at least 1e4 samples");
    RegionBox box = region_box(fam);
    FormD A(fam.A), B(fam.B);
    const double xm = box.x1 * kInflate, ym = box.y1 * kInflate;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(-xm, xm), uy(-ym, ym);
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < samples; ++i)
        if (h0_double(A, B, ux(rng), uy(rng)) <= 1) ++hits;
    const double area = 4 * xm * ym;
    const double frac = static_cast<double>(hits) / static_cast<double>(samples);
    if (hits == 0) throw DomainError("no sample fell inside the region");
    VolumeEstimate out;
    out.samples = samples;
    out.value = area * frac;
    out.half_width = 1.96 * area * std::sqrt(frac * (1 - frac) / static_cast<double>(samples));
    return out;
}

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double eps, int depth) {
    std::function<double(double, double, double, double, double, double, int)> rec =
        [&](double lo, double hi, double flo, double fmid, double fhi, double whole, int d) {
            double mid = (lo + hi) / 2, lm = (lo + mid) / 2, rm = (mid + hi) / 2;
            double flm = f(lm), frm = f(rm);
            double left = (mid - lo) / 6 * (flo + 4 * flm + fmid), right = (hi - mid) / 6 * (fmid + 4 * frm + fhi);
            double delta = left + right - whole;
            if (d <= 0 || std::fabs(delta) <= 15 * eps) return left + right + delta / 15;
            return rec(lo, mid, flo, flm, fmid, left, d - 1) + rec(mid, hi, fmid, frm, fhi, right, d - 1);
        };
    double fa = f(a), fb = f(b), fm = f((a + b) / 2);
    double whole = (b - a) / 6 * (fa + 4 * fm + fb);
    return rec(a, b, fa, fm, fb, whole, depth);
}

}  // namespace

double region_volume_quadrature(const FamilySpec& fam) {
    FormD A(fam.A), B(fam.B);
    const double e = (fam.tau + 1.0) / (6.0 * fam.varsigma);
    auto piece = [&](double x, double y) {
        double h = h0_double(A, B, x, y);
        if (!(h > 0)) throw DomainError("H0 vanishes on the integration path");
        return std::pow(h, -e);
    };
    double mid = adaptive_simpson([&](double t) { return piece(t, 1.0); }, -1, 1, 1e-12, 40);
    double pos = adaptive_simpson([&](double s) { return piece(1.0, s); }, 0, 1, 1e-12, 40);
    double neg = adaptive_simpson([&](double s) { return piece(-1.0, s); }, 0, 1, 1e-12, 40);
    return 2.0 / (fam.tau + 1) * (mid + fam.tau * (pos + neg));
}

}  // namespace selmer
