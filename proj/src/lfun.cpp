#include "onan/lfun.hpp"

#include "onan/qforms.hpp"
#include "onan/traces.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace onan {

namespace {
constexpr double kPi = 3.141592653589793;
} // namespace

Real dirichlet_L1(const Discriminant& d, int digits, std::int64_t max_terms) {
    if (d.value() >= -4)
        throw domain_error("dirichlet_L1: need D < -4");
    if (!d.fundamental())
        throw domain_error("dirichlet_L1: D must be fundamental");
    if (digits < 1 || digits > 15)
        throw domain_error("dirichlet_L1: digits out of range (1..15)");

    std::int64_t q = -d.value();
    std::vector<int> chi(static_cast<std::size_t>(q));
    for (std::int64_t r = 0; r < q; ++r)
        chi[static_cast<std::size_t>(r)] = kronecker(d.value(), r);

    // Abel bound: after a whole number of periods the partial character sum
    // is 0, so |tail after N| <= B/(N+1), B = max |partial sum| in a period.
    std::int64_t run = 0, bmax = 0;
    for (std::int64_t r = 0; r < q; ++r) {
        run += chi[static_cast<std::size_t>(r)];
        bmax = std::max(bmax, run < 0 ? -run : run);
    }
    if (run != 0)
        throw std::logic_error("dirichlet_L1: character sum over period nonzero");

    double target = std::pow(10.0, -digits);
    std::int64_t periods =
        static_cast<std::int64_t>(std::ceil(2.0 * bmax / (target * q))) + 1;
    std::int64_t n_terms = periods * q;
    if (n_terms > max_terms) {
        std::ostringstream msg;
        msg << "dirichlet_L1: " << n_terms << " terms needed for 10^-" << digits
            << " but capped at " << max_terms;
        throw std::runtime_error(msg.str());
    }

    double sum = 0.0;
    for (std::int64_t n = 1; n <= n_terms; ++n) {
        int c = chi[static_cast<std::size_t>(n % q)];
        if (c) sum += static_cast<double>(c) / static_cast<double>(n);
    }
    // double-rounding bound: partial sums stay below ~4, one rounding each
    double rounding = 1.2e-16 * static_cast<double>(n_terms) * 4.0;
    double tail = static_cast<double>(bmax) / static_cast<double>(n_terms + 1);

    Real out = Real::from_double(sum, Real::bits_for_digits(digits + 4));
    out.add_err(Mag::from_double(tail + rounding));
    return out;
}

ClassNumberEstimate class_number_from_L(const Discriminant& d) {
    double sq = std::sqrt(static_cast<double>(-d.value()));
    // keep the propagated L error under ~0.045 in class-number units so the
    // reported bound (observed distance + propagation) stays below 0.1
    double target = 0.04 * kPi / sq;
    int digits = std::max(1, static_cast<int>(std::ceil(-std::log10(target))));
    Real l = dirichlet_L1(d, digits);
    double est = sq * l.to_double() / kPi;
    double h = std::floor(est + 0.5);
    ClassNumberEstimate r;
    r.h = static_cast<std::int64_t>(h);
    r.error_bound =
        std::fabs(est - h) + sq * l.err().to_double() / kPi + 1e-9;
    return r;
}

namespace {

struct Family {
    int n0;
    std::int64_t ca, cb; // short model coefficients at D = 1
};

const Family* family_data(int family) {
    static const Family f11{11, -13392, -1080432};
    static const Family f14{14, 5805, -285714};
    static const Family f15{15, -12987, -263466};
    static const Family f19{19, -12096, -544752};
    switch (family) {
        case 11: return &f11;
        case 14: return &f14;
        case 15: return &f15;
        case 19: return &f19;
        default: return nullptr;
    }
}

} // namespace

CurveSpec curve(int family, const Discriminant& d) {
    const Family* f = family_data(family);
    if (!f) throw domain_error("curve: family must be 11, 14, 15 or 19");
    if (d.value() >= 0) throw domain_error("curve: D must be negative");
    mpz_class dd(static_cast<long>(d.value()));
    CurveSpec e;
    e.family = family;
    e.d = d.value();
    e.a = mpz_class(static_cast<long>(f->ca)) * dd * dd;
    e.b = mpz_class(static_cast<long>(f->cb)) * dd * dd * dd;
    e.conductor = mpz_class(family) * dd * dd;
    e.conductor_heuristic =
        std::gcd(-d.value(), static_cast<std::int64_t>(6 * family)) != 1;
    return e;
}

CurveSpec make_curve(const mpz_class& a, const mpz_class& b,
                     const mpz_class& conductor) {
    if (4 * a * a * a + 27 * b * b == 0)
        throw domain_error("make_curve: curve is singular");
    if (conductor <= 0)
        throw domain_error("make_curve: conductor must be positive");
    CurveSpec e;
    e.a = a;
    e.b = b;
    e.conductor = conductor;
    return e;
}

long count_points(const mpz_class& a, const mpz_class& b, std::uint64_t p) {
    if (!is_prime(p) || p < 5)
        throw domain_error("count_points: p must be a prime >= 5");
    if (p > 100000)
        throw domain_error("count_points: p > 100000 not supported");
    std::int64_t ip = static_cast<std::int64_t>(p);
    std::int64_t pa =
        static_cast<std::int64_t>(mpz_fdiv_ui(a.get_mpz_t(), p));
    std::int64_t pb =
        static_cast<std::int64_t>(mpz_fdiv_ui(b.get_mpz_t(), p));

    // quadratic residue table: chi[v] = legendre(v|p)
    std::vector<int> chi(p, -1);
    chi[0] = 0;
    for (std::int64_t y = 1; y <= ip / 2; ++y)
        chi[static_cast<std::size_t>(y * y % ip)] = 1;

    auto fx = [&](std::int64_t x) {
        return ((x * x % ip) * x % ip + pa * x % ip + pb) % ip;
    };

    std::int64_t disc = ((4 * pa % ip) * pa % ip * pa % ip +
                         (27 * pb % ip) * pb % ip) % ip;
    if (disc != 0) {
        long s = 0;
        for (std::int64_t x = 0; x < ip; ++x)
            s += chi[static_cast<std::size_t>(fx(x))];
        return -s;
    }
    // singular reduction: locate the repeated root e of x^3 + ax + b,
    // the other root is -2e; node slopes split iff 3e is a square.
    for (std::int64_t x = 0; x < ip; ++x) {
        if (fx(x) == 0 && (3 * x % ip * x % ip + pa) % ip == 0) {
            return chi[static_cast<std::size_t>(3 * x % ip)];
        }
    }
    throw std::logic_error("count_points: singular curve without repeated root");
}

namespace {

// Long Weierstrass model [a1,a2,a3,a4,a6] and point counts over F_2/F_3.
struct LongModel {
    std::int64_t a1, a2, a3, a4, a6;
};

// Recover the integral model whose (c4, c6) match the family's short model
// scaled by u = 6. All four families land exactly on integral models; the
// round-trip is asserted.
LongModel base_model(const Family& f) {
    std::int64_t c4 = -48 * f.ca, c6 = -864 * f.cb;
    if (c4 % 1296 != 0 || c6 % 46656 != 0)
        throw std::logic_error("base_model: u = 6 scaling not exact");
    std::int64_t c4p = c4 / 1296, c6p = c6 / 46656;
    std::int64_t b2 = mod_floor(-c6p, 12);
    if (b2 > 6) b2 -= 12;
    if ((b2 * b2 - c4p) % 24 != 0)
        throw std::logic_error("base_model: b4 not integral");
    std::int64_t b4 = (b2 * b2 - c4p) / 24;
    if ((-b2 * b2 * b2 + 36 * b2 * b4 - c6p) % 216 != 0)
        throw std::logic_error("base_model: b6 not integral");
    std::int64_t b6 = (-b2 * b2 * b2 + 36 * b2 * b4 - c6p) / 216;
    LongModel m;
    m.a1 = mod_floor(b2, 2);
    m.a2 = (b2 - m.a1) / 4;
    m.a3 = mod_floor(b6, 2);
    m.a6 = (b6 - m.a3) / 4;
    m.a4 = (b4 - m.a1 * m.a3) / 2;
    // round-trip
    std::int64_t rb2 = m.a1 * m.a1 + 4 * m.a2;
    std::int64_t rb4 = 2 * m.a4 + m.a1 * m.a3;
    std::int64_t rb6 = m.a3 * m.a3 + 4 * m.a6;
    if (rb2 != b2 || rb4 != b4 || rb6 != b6 ||
        rb2 * rb2 - 24 * rb4 != c4p ||
        -rb2 * rb2 * rb2 + 36 * rb2 * rb4 - 216 * rb6 != c6p)
        throw std::logic_error("base_model: round-trip failed");
    return m;
}

std::int64_t long_model_disc(const LongModel& m) {
    std::int64_t b2 = m.a1 * m.a1 + 4 * m.a2;
    std::int64_t b4 = 2 * m.a4 + m.a1 * m.a3;
    std::int64_t b6 = m.a3 * m.a3 + 4 * m.a6;
    std::int64_t b8 = m.a1 * m.a1 * m.a6 + 4 * m.a2 * m.a6 -
                      m.a1 * m.a3 * m.a4 + m.a2 * m.a3 * m.a3 - m.a4 * m.a4;
    return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
}

// a_p over F_p for p in {2, 3} on the long model, all reduction types.
long ap_small(const LongModel& m, std::int64_t p) {
    auto md = [&](std::int64_t v) { return mod_floor(v, p); };
    std::int64_t count = 0;
    for (std::int64_t x = 0; x < p; ++x)
        for (std::int64_t y = 0; y < p; ++y) {
            std::int64_t lhs = md(y * y + m.a1 * x * y + m.a3 * y);
            std::int64_t rhs =
                md(x * x * x + m.a2 * x * x + m.a4 * x + m.a6);
            if (lhs == rhs) ++count;
        }
    if (md(long_model_disc(m)) != 0) return p + 1 - (count + 1);

    // singular point, then the tangent cone t^2 + a1 u t + c u^2
    for (std::int64_t x0 = 0; x0 < p; ++x0)
        for (std::int64_t y0 = 0; y0 < p; ++y0) {
            std::int64_t f = md(y0 * y0 + m.a1 * x0 * y0 + m.a3 * y0 -
                                (x0 * x0 * x0 + m.a2 * x0 * x0 + m.a4 * x0 +
                                 m.a6));
            std::int64_t fy = md(2 * y0 + m.a1 * x0 + m.a3);
            std::int64_t fxm = md(m.a1 * y0 - 3 * x0 * x0 - 2 * m.a2 * x0 -
                                  m.a4);
            if (f != 0 || fy != 0 || fxm != 0) continue;
            std::int64_t c = md(-(3 * x0 + m.a2));
            if (p == 2) {
                if (md(m.a1) == 0) return 0;        // cusp
                return c == 0 ? 1 : -1;             // split / nonsplit
            }
            std::int64_t delta = md(m.a1 * m.a1 - 4 * c);
            if (delta == 0) return 0;
            return delta == 1 ? 1 : -1; // squares mod 3 are {0, 1}
        }
    throw std::logic_error("ap_small: singular fiber without singular point");
}

} // namespace

LSeriesData l_value_at_1(const CurveSpec& e, double target) {
    if (target < 1e-10 || target > 0.1)
        throw domain_error("l_value_at_1: target out of range");
    double n = mpz_get_d(e.conductor.get_mpz_t());
    double sqrtn = std::sqrt(n);
    const double ahi = 1.2;
    double cmin = 2.0 * kPi / (ahi * sqrtn);

    // cutoff from the crude tail majorant sum_{k>M} k^(3/2) e^{-c k} / k
    long m = 64;
    auto tail_bound = [&](long mm) {
        double g = std::exp(-cmin);
        double g1 = g / (1.0 - g);
        double g2 = g / ((1.0 - g) * (1.0 - g));
        return std::exp(-cmin * mm) *
               (std::sqrt(static_cast<double>(mm)) * g1 + g2);
    };
    while (tail_bound(m) > target / 8.0) {
        m *= 2;
        if (m > 5'000'000)
            throw std::runtime_error("l_value_at_1: cutoff cap exceeded");
    }

    LSeriesData out;
    out.cutoff = m;

    // local data at 2 and 3
    long a2 = 0, a3 = 0;
    int eps2 = 0, eps3 = 0;
    if (e.family != 0 && !e.conductor_heuristic) {
        const Family* f = family_data(e.family);
        LongModel base = base_model(*f);
        a2 = kronecker(e.d, 2) * ap_small(base, 2);
        a3 = kronecker(e.d, 3) * ap_small(base, 3);
        eps2 = f->n0 % 2 != 0;
        eps3 = f->n0 % 3 != 0;
        out.local23_exact = true;
    } else {
        eps2 = mpz_fdiv_ui(e.conductor.get_mpz_t(), 2) != 0;
        eps3 = mpz_fdiv_ui(e.conductor.get_mpz_t(), 3) != 0;
        out.local23_exact = false;
    }

    // a_n by the Euler-product recurrence over a smallest-prime-factor sieve
    std::vector<std::int32_t> spf(static_cast<std::size_t>(m) + 1, 0);
    for (long i = 2; i <= m; ++i) {
        if (spf[i] != 0) continue;
        for (long j = i; j <= m; j += i)
            if (spf[j] == 0) spf[j] = static_cast<std::int32_t>(i);
    }
    std::vector<double> an(static_cast<std::size_t>(m) + 1, 0.0);
    an[1] = 1.0;
    std::vector<double> eps(static_cast<std::size_t>(m) + 1, 0.0);
    for (long p = 2; p <= m; ++p) {
        if (spf[p] != p) continue;
        long ap;
        if (p == 2) {
            ap = a2;
        } else if (p == 3) {
            ap = a3;
        } else {
            ap = count_points(e.a, e.b, static_cast<std::uint64_t>(p));
        }
        an[p] = static_cast<double>(ap);
        eps[p] = mpz_fdiv_ui(e.conductor.get_mpz_t(),
                             static_cast<unsigned long>(p)) != 0
                     ? 1.0
                     : 0.0;
        out.ap.emplace_back(static_cast<std::uint64_t>(p), ap);
    }
    for (long v = 2; v <= m; ++v) {
        long p = spf[v];
        if (p == v) continue;
        long w = v / p;
        an[v] = an[p] * an[w];
        if (w % p == 0) an[v] -= eps[p] * p * an[w / p];
    }

    auto smoothed = [&](double a) {
        double c = 2.0 * kPi * a / sqrtn;
        double s = 0.0;
        for (long k = m; k >= 1; --k)
            if (an[k] != 0.0) s += an[k] / k * std::exp(-c * k);
        return s;
    };

    double s1 = smoothed(1.0);
    double s2 = smoothed(ahi);
    double s3 = smoothed(1.0 / ahi);
    double denom = s3 - s1;
    double tail = tail_bound(m);
    if (std::fabs(denom) < std::max(10.0 * tail, 1e-12)) {
        throw std::runtime_error(
            "l_value_at_1: two-point system is ill-conditioned");
    }
    double w = (s1 - s2) / denom;
    out.root_number = w;
    out.l1 = s1 * (1.0 + w);
    double werr = 2.0 * tail * (1.0 + std::fabs(w)) / std::fabs(denom);
    out.l1_error = tail * (1.0 + std::fabs(w)) + std::fabs(s1) * werr + 1e-12;
    return out;
}

SelmerIndicator selmer_indicator(int p, const Discriminant& d) {
    if (p != 11 && p != 19)
        throw domain_error("selmer_indicator: p must be 11 or 19");
    if (d.value() >= 0)
        throw domain_error("selmer_indicator: D must be negative");
    SelmerIndicator r;
    r.p = p;
    r.d = d.value();
    r.applicable = !is_square_mod(d.value(), static_cast<std::uint64_t>(p));
    r.a = trace(d).a;
    r.class_count =
        static_cast<std::int64_t>(class_representatives(d).size());
    r.weighted_term = weighted_class_term(d);
    r.a_mod_p = static_cast<long>(
        mpz_fdiv_ui(r.a.get_mpz_t(), static_cast<unsigned long>(p)));
    r.term_mod_p = static_cast<long>(mod_floor(r.weighted_term, p));
    r.congruent = r.a_mod_p == r.term_mod_p;
    r.predicted_nontrivial = r.applicable && r.congruent;
    CurveSpec e = curve(p, d);
    r.curve_heuristic = e.conductor_heuristic;
    r.l = l_value_at_1(e);
    return r;
}

} // namespace onan
