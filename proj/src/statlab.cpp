#include "selmer/statlab.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <set>
#include <thread>

#include "selmer/arith.hpp"
#include "selmer/curves.hpp"
#include "selmer/errors.hpp"
#include "selmer/modpoly.hpp"

namespace selmer {

namespace {

Int value_num(const WHomPoly& P, const Int& a, const Int& b) {
    Rat v = P.eval(Rat(a), Rat(b));
    v.canonicalize();
    return v.get_num();
}

bool divides(const Int& p, const Int& v) { return mpz_divisible_p(v.get_mpz_t(), p.get_mpz_t()) != 0; }

// Residues mod p of the deciding values.
struct Residues {
    std::uint64_t A, B, Dp, Dm, Dp1, Dp2, Dm1, Dm2;
};

int y_circ_residues(int ell, const Residues& r, std::uint64_t p) {
    if (r.A == 0 && r.B == 0) return 0;
    if (r.Dp == 0 && r.Dm == 0) return 0;
    const int leg = legendre_u64(static_cast<std::int64_t>((6 * (r.B % p)) % p), p);
    if (ell >= 3) {
        if (r.Dp == 0 && leg == 1) return 1;
        if (r.Dm == 0 && leg == 1) return -1;
        return 0;
    }
    if (r.Dp1 == 0 || (r.Dp2 == 0 && leg == 1)) return 1;
    if (r.Dm1 == 0 || (r.Dm2 == 0 && leg == 1)) return -1;
    return 0;
}

std::uint64_t mod_u64(const Int& v, std::uint64_t p) { return mpz_fdiv_ui(v.get_mpz_t(), p); }

Residues residues_of(const PointValues& v, std::uint64_t p) {
    return {mod_u64(v.A, p),   mod_u64(v.B, p),   mod_u64(v.Dplus, p),   mod_u64(v.Dminus, p),
            mod_u64(v.Dplus1, p), mod_u64(v.Dplus2, p), mod_u64(v.Dminus1, p), mod_u64(v.Dminus2, p)};
}

// A weighted form reduced mod p, evaluated row by row.
struct ModForm {
    std::vector<std::uint64_t> c;
    int w = 0, tau = 1;
    std::uint64_t p = 0;
    std::vector<std::uint64_t> row;

    ModForm(const WHomPoly& P, std::uint64_t prime) : w(P.weighted_degree()), tau(P.tau()), p(prime) {
        for (const auto& x : P.dehom().coeffs()) {
            auto r = modp::reduce(x, p);
            if (!r) throw DomainError("denominator divisible by " + std::to_string(p));
            c.push_back(*r);
        }
        row.resize(c.size());
    }
    void set_b(std::uint64_t b) {
        for (size_t i = 0; i < c.size(); ++i) {
            std::uint64_t e = static_cast<std::uint64_t>(w - static_cast<int>(i) * tau), acc = 1, base = b;
            while (e) {
                if (e & 1) acc = modp::mulmod(acc, base, p);
                base = modp::mulmod(base, base, p);
                e >>= 1;
            }
            row[i] = modp::mulmod(c[i], acc, p);
        }
    }
    std::uint64_t at(std::uint64_t a) const {
        std::uint64_t acc = 0;
        for (size_t i = row.size(); i-- > 0;) acc = (modp::mulmod(acc, a, p) + row[i]) % p;
        return acc;
    }
};

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y, double* intercept) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double den = n * sxx - sx * sx;
    if (den == 0) {
        if (intercept) *intercept = 0;
        return 0;
    }
    double slope = (n * sxy - sx * sy) / den;
    if (intercept) *intercept = (sy - slope * sx) / n;
    return slope;
}

std::vector<Int> factor_value_primes(const Int& v) {
    if (v == 0) return {};
    Int a = abs(v);
    if (a == 1) return {};
    try {
        return prime_divisors(a);
    } catch (const ResourceError& e) {
        throw ResourceError("cannot factor " + to_string(a) + ": " + e.what());
    }
}

}  // namespace

PointValues point_values(const FamilySpec& fam, const Int& a, const Int& b) {
    const auto& s = fam.split;
    PointValues v;
    v.A = fam.A.eval_int(a, b);
    v.B = fam.B.eval_int(a, b);
    v.Dplus = value_num(s.Dplus, a, b);
    v.Dminus = value_num(s.Dminus, a, b);
    v.Dplus1 = value_num(s.Dplus1, a, b);
    v.Dplus2 = value_num(s.Dplus2, a, b);
    v.Dminus1 = value_num(s.Dminus1, a, b);
    v.Dminus2 = value_num(s.Dminus2, a, b);
    v.R = value_num(s.radical, a, b);
    return v;
}

int y_circ_mod_p(int ell, const PointValues& v, std::uint64_t p) { return y_circ_residues(ell, residues_of(v, p), p); }

LocalExponent local_exponent(const FamilySpec& fam, const PointValues& v, const Int& p) {
    LocalExponent out;
    auto exclude = [&](const std::string& why) {
        out.excluded = true;
        out.reason = why;
        return out;
    };
    if (fam.is_bad(p)) return exclude("excluded prime");
    const bool dp = divides(p, v.Dplus), dm = divides(p, v.Dminus);
    if (dp && dm) return exclude("divides gcd(D+, D-)");
    const bool pa = divides(p, v.A), pb = divides(p, v.B);
    if (pa && pb) {
        if (fam.ell <= 3) return exclude("divides gcd(A, B)");
        if (v.A != 0 && v.B != 0) {
            int va = valuation(v.A, p), vb = valuation(v.B, p);
            Int disc = 4 * v.A * v.A * v.A + 27 * v.B * v.B;
            if (3 * va == 2 * vb && 3 * va != valuation(disc, p) && va % 4 == 0) return exclude("non-minimal model at p");
        }
        return out;
    }
    if (fam.ell == 2 && v.R != 0 && divides(p * p, v.R)) return exclude("square hit");
    const int leg = legendre(6 * v.B, p);
    if (fam.ell >= 3) {
        if (dp && leg == 1) out.value = 1;
        else if (dm && leg == 1) out.value = -1;
        return out;
    }
    if (divides(p, v.Dplus1) || (divides(p, v.Dplus2) && leg == 1)) out.value = 1;
    else if (divides(p, v.Dminus1) || (divides(p, v.Dminus2) && leg == 1)) out.value = -1;
    return out;
}

LocalExponent local_exponent(const FamilySpec& fam, const Int& a, const Int& b, const Int& p) {
    if (!is_prime(p)) throw DomainError("local_exponent needs a prime");
    return local_exponent(fam, point_values(fam, a, b), p);
}

CurveRecord curve_exponent_sum(const FamilySpec& fam, const ParamPoint& pt) {
    if (pt.Delta == 0) throw DomainError("curve_exponent_sum needs Delta(a, b) != 0");
    CurveRecord rec;
    rec.point = pt;
    PointValues v = point_values(fam, pt.a, pt.b);
    std::set<Int> primes;
    for (const auto* list : {&fam.split.plus_factors, &fam.split.minus_factors})
        for (const auto& [P, e] : *list) {
            (void)e;
            for (const auto& q : factor_value_primes(value_num(P, pt.a, pt.b))) primes.insert(q);
        }
    for (const auto& q : fam.bad_primes)
        if (divides(q, pt.Delta)) primes.insert(q);
    for (const auto& p : primes) {
        LocalExponent le = local_exponent(fam, v, p);
        if (le.excluded) {
            rec.excluded_hits.emplace_back(p, le.reason);
            continue;
        }
        if (le.value != 0) {
            rec.local_exponents.emplace_back(p, le.value);
            rec.exponent_sum += le.value;
            (le.value > 0 ? rec.n_plus : rec.n_minus)++;
        }
    }
    return rec;
}

CurveModel codomain_model(const FamilySpec& fam, const Int& a, const Int& b) {
    Rat Ap = fam.Aprime.eval(Rat(a), Rat(b)), Bp = fam.Bprime.eval(Rat(a), Rat(b));
    Ap.canonicalize();
    Bp.canonicalize();
    Int u;
    mpz_lcm(u.get_mpz_t(), Ap.get_den().get_mpz_t(), Bp.get_den().get_mpz_t());
    Rat A4 = Ap * Rat(ipow(u, 4)), B6 = Bp * Rat(ipow(u, 6));
    A4.canonicalize();
    B6.canonicalize();
    return CurveModel(A4.get_num(), B6.get_num());
}

OracleResult oracle_cross_check(const FamilySpec& fam, const Int& a, const Int& b, const Int& p) {
    OracleResult out;
    if (p <= 3) {
        out.note = "p <= 3";
        return out;
    }
    CurveModel E(fam.A.eval_int(a, b), fam.B.eval_int(a, b));
    if (E.singular()) throw DomainError("singular domain curve");
    LocalData d = local_data(E, p);
    if (!d.type.multiplicative()) {
        out.note = d.type.kind == Reduction::Additive ? "additive" : "good";
        return out;
    }
    CurveModel Ep = codomain_model(fam, a, b);
    if (Ep.singular()) throw DomainError("singular codomain curve");
    LocalData dp = local_data(Ep, p);
    if (!dp.type.multiplicative() || !d.tamagawa || !dp.tamagawa) {
        out.note = "codomain reduction type differs";
        out.applicable = true;
        out.agree = false;
        return out;
    }
    const Int ell(fam.ell);
    const Int cp(*d.tamagawa), cpp(*dp.tamagawa);
    Int num = cpp, den = cp;
    int v = 0;
    while (divides(ell, num) && num != 0) {
        num /= ell;
        ++v;
    }
    while (divides(ell, den) && den != 0) {
        den /= ell;
        --v;
    }
    out.ratio_valuation = v;
    LocalExponent le = local_exponent(fam, a, b, p);
    out.exponent = le.value;
    if (le.excluded) {
        out.note = "excluded: " + le.reason;
        return out;
    }
    out.applicable = true;
    // The ratio must be a power of ell.
    out.agree = num == den && v == le.value;
    if (!out.agree)
        out.note = "c_p = " + to_string(cp) + ", c_p' = " + to_string(cpp) + ", exponent " + std::to_string(le.value);
    return out;
}

OracleSummary oracle_sweep(const FamilySpec& fam, const std::vector<ParamPoint>& points, int threads) {
    const int nt = std::max(1, threads);
    std::vector<OracleSummary> parts(static_cast<size_t>(nt));
    auto work = [&](int idx) {
        OracleSummary& s = parts[static_cast<size_t>(idx)];
        const size_t lo = points.size() * static_cast<size_t>(idx) / static_cast<size_t>(nt);
        const size_t hi = points.size() * static_cast<size_t>(idx + 1) / static_cast<size_t>(nt);
        for (size_t i = lo; i < hi; ++i) {
            const auto& pt = points[i];
            ++s.curves;
            CurveRecord rec = curve_exponent_sum(fam, pt);
            std::set<Int> primes;
            for (const auto* list : {&fam.split.plus_factors, &fam.split.minus_factors, &fam.split.t_factors})
                for (const auto& [P, e] : *list) {
                    (void)e;
                    for (const auto& q : factor_value_primes(value_num(P, pt.a, pt.b))) primes.insert(q);
                }
            for (const auto& q : fam.bad_primes)
                if (divides(q, pt.Delta)) primes.insert(q);
            int resolved = 0;
            for (const auto& p : primes) {
                if (p <= 3) continue;
                OracleResult r = oracle_cross_check(fam, pt.a, pt.b, p);
                if (r.note == "additive") ++s.skipped_additive;
                if (r.note.rfind("excluded", 0) == 0) {
                    ++s.excluded_reported;
                    resolved += r.ratio_valuation;
                    continue;
                }
                if (!r.applicable) continue;
                ++s.checks;
                if (r.agree) {
                    ++s.agreements;
                } else if (s.disagreements.size() < 10) {
                    s.disagreements.push_back("(" + to_string(pt.a) + "," + to_string(pt.b) + ") p=" + to_string(p) + ": " +
                                              r.note + ", ratio exponent " + std::to_string(r.ratio_valuation));
                }
            }
            if (std::abs(resolved) > static_cast<int>(rec.excluded_hits.size())) ++s.sandwich_violations;
        }
    };
    if (nt == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < nt; ++i) pool.emplace_back(work, i);
        for (auto& t : pool) t.join();
    }
    OracleSummary total;
    for (auto& s : parts) {
        total.curves += s.curves;
        total.checks += s.checks;
        total.agreements += s.agreements;
        total.skipped_additive += s.skipped_additive;
        total.excluded_reported += s.excluded_reported;
        total.sandwich_violations += s.sandwich_violations;
        for (auto& d : s.disagreements)
            if (total.disagreements.size() < 10) total.disagreements.push_back(d);
    }
    return total;
}

Profile theoretical_profile(const FamilySpec& fam, std::uint64_t p_cut) {
    if (p_cut > 1000) throw DomainError("theoretical_profile needs p_cut <= 1000");
    Profile out;
    std::vector<double> xs, yp, ym;
    Rat cum_plus = 0, cum_minus = 0;
    for (std::uint32_t p32 : primes_up_to(static_cast<std::uint32_t>(p_cut))) {
        const std::uint64_t p = p32;
        if (p < 5 || fam.is_bad(Int(static_cast<unsigned long>(p)))) continue;
        const auto& s = fam.split;
        ModForm fA(fam.A, p), fB(fam.B, p), fDp(s.Dplus, p), fDm(s.Dminus, p), fDp1(s.Dplus1, p), fDp2(s.Dplus2, p),
            fDm1(s.Dminus1, p), fDm2(s.Dminus2, p);
        PrimeDensity d;
        d.p = p;
        for (std::uint64_t b = 0; b < p; ++b) {
            for (ModForm* f : {&fA, &fB, &fDp, &fDm, &fDp1, &fDp2, &fDm1, &fDm2}) f->set_b(b);
            for (std::uint64_t a = 0; a < p; ++a) {
                if (a == 0 && b == 0) continue;
                Residues r{fA.at(a), fB.at(a), fDp.at(a), fDm.at(a), fDp1.at(a), fDp2.at(a), fDm1.at(a), fDm2.at(a)};
                int y = y_circ_residues(fam.ell, r, p);
                if (y > 0) ++d.plus;
                else if (y < 0) ++d.minus;
            }
        }
        const Int classes = Int(static_cast<unsigned long>(p * p - 1));
        d.d_plus = Rat(Int(static_cast<unsigned long>(d.plus)), classes);
        d.d_minus = Rat(Int(static_cast<unsigned long>(d.minus)), classes);
        d.d_plus.canonicalize();
        d.d_minus.canonicalize();
        cum_plus += d.d_plus;
        cum_minus += d.d_minus;
        out.primes.push_back(d);
        if (p >= 30) {
            xs.push_back(std::log(std::log(static_cast<double>(p))));
            yp.push_back(to_double(cum_plus));
            ym.push_back(to_double(cum_minus));
        }
    }
    out.slope_plus = least_squares_slope(xs, yp, &out.intercept_plus);
    out.slope_minus = least_squares_slope(xs, ym, &out.intercept_minus);
    return out;
}

std::vector<CurveRecord> curve_records(const FamilySpec& fam, const std::vector<ParamPoint>& points, int threads) {
    const int nt = std::max(1, threads);
    std::vector<std::vector<CurveRecord>> parts(static_cast<size_t>(nt));
    auto work = [&](int idx) {
        const size_t lo = points.size() * static_cast<size_t>(idx) / static_cast<size_t>(nt);
        const size_t hi = points.size() * static_cast<size_t>(idx + 1) / static_cast<size_t>(nt);
        for (size_t i = lo; i < hi; ++i) parts[static_cast<size_t>(idx)].push_back(curve_exponent_sum(fam, points[i]));
    };
    if (nt == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < nt; ++i) pool.emplace_back(work, i);
        for (auto& t : pool) t.join();
    }
    std::vector<CurveRecord> out;
    out.reserve(points.size());
    for (auto& part : parts)
        for (auto& r : part) out.push_back(std::move(r));
    return out;
}

std::vector<CurveRecord> curve_records(const FamilySpec& fam, const EnumOptions& enum_opts, std::uint64_t max_curves,
                                       std::uint64_t seed) {
    auto points = collect_points(fam, enum_opts);
    if (max_curves > 0 && points.size() > max_curves) {
        std::mt19937_64 rng(seed);
        std::vector<size_t> idx(points.size());
        for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::shuffle(idx.begin(), idx.end(), rng);
        idx.resize(max_curves);
        std::sort(idx.begin(), idx.end());
        std::vector<ParamPoint> kept;
        kept.reserve(max_curves);
        for (size_t i : idx) kept.push_back(points[i]);
        points.swap(kept);
    }
    return curve_records(fam, points, enum_opts.threads);
}

std::map<int, double> convolve_laws(const std::vector<PrimeDensity>& laws) {
    std::map<int, double> dist{{0, 1.0}};
    for (const auto& law : laws) {
        const double dp = to_double(law.d_plus), dm = to_double(law.d_minus), d0 = 1 - dp - dm;
        std::map<int, double> next;
        for (const auto& [s, w] : dist) {
            if (dp > 0) next[s + 1] += w * dp;
            if (dm > 0) next[s - 1] += w * dm;
            if (d0 > 0) next[s] += w * d0;
        }
        dist.swap(next);
    }
    return dist;
}

double convolution_tv(const std::map<int, std::uint64_t>& histogram, const std::vector<PrimeDensity>& laws) {
    std::uint64_t n = 0;
    for (const auto& [s, c] : histogram) n += c;
    if (n == 0) throw SampleError("empty histogram");
    auto model = convolve_laws(laws);
    std::set<int> support;
    for (const auto& [s, c] : histogram) support.insert(s);
    for (const auto& [s, w] : model) support.insert(s);
    double tv = 0;
    for (int s : support) {
        auto it = histogram.find(s);
        double emp = it == histogram.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(n);
        auto jt = model.find(s);
        double mod = jt == model.end() ? 0.0 : jt->second;
        tv += std::fabs(emp - mod);
    }
    return tv / 2;
}

Rat average_power(const FamilySpec& fam, const std::vector<CurveRecord>& records, int k) {
    if (k < 1) throw DomainError("average_power needs k >= 1");
    if (records.empty()) throw SampleError("average_power over an empty family slice");
    Rat total = 0;
    const Rat ell(fam.ell);
    for (const auto& r : records) total += rpow(ell, static_cast<long>(k) * r.exponent_sum);
    Rat out = total / Rat(Int(static_cast<unsigned long>(records.size())));
    out.canonicalize();
    return out;
}

Rat average_power(const FamilySpec& fam, const Int& N, int k, int threads) {
    EnumOptions o;
    o.N = N;
    o.threads = threads;
    return average_power(fam, curve_records(fam, o, 0, 0), k);
}

TailResult tail_count(const FamilySpec& fam, const std::vector<CurveRecord>& records, const Int& N, const Rat& A) {
    if (N < 16) throw DomainError("tail_count needs N >= 16");
    TailResult out;
    out.total = records.size();
    out.threshold = to_double(A) * std::log(std::log(to_double(Rat(N))));
    for (const auto& r : records)
        if (r.exponent_sum >= out.threshold) ++out.count;
    out.ratio = out.total ? static_cast<double>(out.count) / static_cast<double>(out.total) : 0.0;
    try {
        out.reference_exponent = delta_of_A(family_constants(fam, fam.split), A);
        out.has_reference = true;
    } catch (const Error&) {
        out.has_reference = false;
    }
    return out;
}

TailResult tail_count(const FamilySpec& fam, const Int& N, const Rat& A, int threads) {
    EnumOptions o;
    o.N = N;
    o.threads = threads;
    return tail_count(fam, curve_records(fam, o, 0, 0), N, A);
}

namespace {

Moments moments_of(const std::vector<int>& xs) {
    Moments m;
    if (xs.empty()) return m;
    Int s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    for (int x : xs) {
        Int v(x);
        s1 += v;
        s2 += v * v;
        s3 += v * v * v;
        s4 += v * v * v * v;
    }
    const Rat n(Int(static_cast<unsigned long>(xs.size())));
    const Rat mean = Rat(s1) / n, e2 = Rat(s2) / n, e3 = Rat(s3) / n, e4 = Rat(s4) / n;
    const Rat m2 = e2 - mean * mean;
    const Rat m3 = e3 - 3 * mean * e2 + 2 * mean * mean * mean;
    const Rat m4 = e4 - 4 * mean * e3 + 6 * mean * mean * e2 - 3 * mean * mean * mean * mean;
    m.mean = to_double(mean);
    m.variance = to_double(m2);
    if (m2 > 0) {
        m.skewness = to_double(m3) / std::pow(to_double(m2), 1.5);
        Rat kurt = m4 / (m2 * m2) - 3;
        m.excess_kurtosis = to_double(kurt);
    }
    return m;
}

}  // namespace

ExperimentSummary summarize_records(const FamilySpec& fam, const ExperimentOptions& opts, std::vector<CurveRecord> records) {
    if (records.empty()) throw SampleError("no curves to summarize");
    ExperimentSummary s;
    s.family = fam.name;
    s.N = opts.N;
    s.curve_count = records.size();
    const double n = static_cast<double>(records.size());

    std::vector<int> sums;
    sums.reserve(records.size());
    for (const auto& r : records) sums.push_back(r.exponent_sum);
    s.moments = moments_of(sums);

    Profile prof = theoretical_profile(fam, opts.p_cut);
    std::vector<std::uint64_t> plus(prof.primes.size(), 0), minus(prof.primes.size(), 0);
    std::vector<int> truncated;
    truncated.reserve(records.size());
    for (const auto& r : records) {
        PointValues v = point_values(fam, r.point.a, r.point.b);
        int t = 0;
        for (size_t i = 0; i < prof.primes.size(); ++i) {
            int y = y_circ_mod_p(fam.ell, v, prof.primes[i].p);
            if (y > 0) ++plus[i];
            if (y < 0) ++minus[i];
            t += y;
        }
        truncated.push_back(t);
        ++s.truncated_histogram[t];
    }
    s.truncated = moments_of(truncated);
    std::uint64_t consistent = 0;
    for (size_t i = 0; i < prof.primes.size(); ++i) {
        PrimeFrequency f;
        f.p = prof.primes[i].p;
        f.plus = plus[i];
        f.minus = minus[i];
        f.d_plus = to_double(prof.primes[i].d_plus);
        f.d_minus = to_double(prof.primes[i].d_minus);
        auto within = [&](std::uint64_t count, double d) {
            double se = std::sqrt(d * (1 - d) / n);
            return std::fabs(static_cast<double>(count) / n - d) <= 3 * se + 1e-12;
        };
        f.consistent = within(f.plus, f.d_plus) && within(f.minus, f.d_minus);
        if (f.consistent) ++consistent;
        s.predicted_truncated_mean += f.d_plus - f.d_minus;
        s.predicted_truncated_variance += f.d_plus + f.d_minus - (f.d_plus - f.d_minus) * (f.d_plus - f.d_minus);
        s.frequencies.push_back(f);
    }
    s.consistent_fraction = prof.primes.empty() ? 1.0 : static_cast<double>(consistent) / static_cast<double>(prof.primes.size());
    s.total_variation = convolution_tv(s.truncated_histogram, prof.primes);

    FamilyConstants k = family_constants(fam, fam.split);
    s.loglog_N = opts.N > 15 ? std::log(std::log(to_double(Rat(opts.N)))) : 0.0;
    if (s.loglog_N > 0 && k.sigma_sq > 0)
        s.standardized_mean = (s.moments.mean - to_double(k.mu) * s.loglog_N) / std::sqrt(to_double(k.sigma_sq) * s.loglog_N);
    for (int kk : opts.ks) {
        s.average_power.emplace_back(kk, average_power(fam, records, kk));
        s.rho_reference.emplace_back(kk, to_double(rho_exponent(k, fam.ell, kk)));
    }
    if (opts.N >= 16)
        for (const auto& A : opts.tail_As) s.tail_counts.emplace_back(A, tail_count(fam, records, opts.N, A).count);
    s.records = std::move(records);
    return s;
}

ExperimentSummary distribution_experiment(const FamilySpec& fam, const ExperimentOptions& opts) {
    EnumOptions eo;
    eo.N = opts.N;
    eo.threads = opts.threads;
    auto records = curve_records(fam, eo, opts.max_curves, opts.seed);
    if (records.size() < 1000)
        throw SampleError("distribution experiment needs at least 1000 curves, got " + std::to_string(records.size()));
    return summarize_records(fam, opts, std::move(records));
}

void write_records_csv(std::ostream& out, const std::vector<CurveRecord>& records) {
    out << "a,b,H,exponent_sum,n_plus,n_minus,n_excluded\n";
    for (const auto& r : records)
        out << r.point.a << ',' << r.point.b << ',' << to_string(r.point.H) << ',' << r.exponent_sum << ',' << r.n_plus << ','
            << r.n_minus << ',' << r.excluded_hits.size() << '\n';
}

namespace {

Json moments_json(const Moments& m) {
    return Json{{"mean", m.mean}, {"variance", m.variance}, {"skewness", m.skewness}, {"excess_kurtosis", m.excess_kurtosis}};
}

}  // namespace

Json summary_to_json(const ExperimentSummary& s) {
    Json j;
    j["family"] = s.family;
    j["N"] = to_string(s.N);
    j["curve_count"] = s.curve_count;
    j["quantity"] = "Tamagawa-ratio exponent sum";
    j["moments"] = moments_json(s.moments);
    j["truncated_moments"] = moments_json(s.truncated);
    j["predicted_truncated_mean"] = s.predicted_truncated_mean;
    j["predicted_truncated_variance"] = s.predicted_truncated_variance;
    j["loglog_N"] = s.loglog_N;
    j["standardized_mean"] = s.standardized_mean;
    Json ap = Json::array();
    for (size_t i = 0; i < s.average_power.size(); ++i)
        ap.push_back({{"k", s.average_power[i].first},
                      {"average", to_string(s.average_power[i].second)},
                      {"average_decimal", to_double(s.average_power[i].second)},
                      {"rho", s.rho_reference[i].second}});
    j["average_power"] = ap;
    Json tails = Json::array();
    for (const auto& [A, c] : s.tail_counts) tails.push_back({{"A", to_string(A)}, {"count", c}});
    j["tail_counts"] = tails;
    Json freq = Json::array();
    for (const auto& f : s.frequencies)
        freq.push_back({{"p", f.p},
                        {"plus", f.plus},
                        {"minus", f.minus},
                        {"d_plus", f.d_plus},
                        {"d_minus", f.d_minus},
                        {"consistent", f.consistent}});
    j["per_prime"] = freq;
    j["consistent_fraction"] = s.consistent_fraction;
    j["total_variation"] = s.total_variation;
    Json hist = Json::object();
    for (const auto& [v, c] : s.truncated_histogram) hist[std::to_string(v)] = c;
    j["truncated_histogram"] = hist;
    return j;
}

Json profile_to_json(const Profile& p) {
    Json j;
    Json rows = Json::array();
    for (const auto& d : p.primes)
        rows.push_back({{"p", d.p}, {"plus", d.plus}, {"minus", d.minus}, {"d_plus", to_string(d.d_plus)}, {"d_minus", to_string(d.d_minus)}});
    j["primes"] = rows;
    j["slope_plus"] = p.slope_plus;
    j["slope_minus"] = p.slope_minus;
    j["intercept_plus"] = p.intercept_plus;
    j["intercept_minus"] = p.intercept_minus;
    return j;
}

}  // namespace selmer
