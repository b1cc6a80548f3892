#include "onan/modfun.hpp"

#include "onan/arith.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>

namespace onan {

namespace {

using Series = std::vector<mpz_class>; // index = exponent, starts at q^0

Series mul(const Series& x, const Series& y, std::size_t len) {
    Series r(len, mpz_class(0));
    for (std::size_t i = 0; i < x.size() && i < len; ++i) {
        if (x[i] == 0) continue;
        std::size_t jmax = std::min(y.size(), len - i);
        for (std::size_t j = 0; j < jmax; ++j) {
            if (y[j] == 0) continue;
            r[i + j] += x[i] * y[j];
        }
    }
    return r;
}

// 1/x for series with constant term 1.
Series inverse(const Series& x, std::size_t len) {
    Series r(len, mpz_class(0));
    r[0] = 1;
    for (std::size_t n = 1; n < len; ++n) {
        mpz_class acc = 0;
        std::size_t kmax = std::min(n, x.size() - 1);
        for (std::size_t k = 1; k <= kmax; ++k)
            acc += x[k] * r[n - k];
        r[n] = -acc;
    }
    return r;
}

// Euler product prod (1-q^n) by the pentagonal number theorem.
Series euler_product(std::size_t len) {
    Series r(len, mpz_class(0));
    r[0] = 1;
    for (std::int64_t k = 1;; ++k) {
        std::int64_t e1 = k * (3 * k - 1) / 2;
        std::int64_t e2 = k * (3 * k + 1) / 2;
        if (e1 >= static_cast<std::int64_t>(len) &&
            e2 >= static_cast<std::int64_t>(len))
            break;
        mpz_class s = (k % 2 == 0) ? 1 : -1;
        if (e1 < static_cast<std::int64_t>(len)) r[e1] += s;
        if (e2 < static_cast<std::int64_t>(len)) r[e2] += s;
    }
    return r;
}

Series sigma_series(int power, mpz_class scale, std::size_t len) {
    Series r(len, mpz_class(0));
    r[0] = 1;
    // sieve sigma_k(n) by summing d^k into multiples of d
    for (std::size_t d = 1; d < len; ++d) {
        mpz_class dk;
        mpz_ui_pow_ui(dk.get_mpz_t(), d, power);
        dk *= scale;
        for (std::size_t n = d; n < len; n += d)
            r[n] += dk;
    }
    return r;
}

// Coefficients of j*q = E4^3 / (Delta/q), exact.
Series jq_series(std::size_t len) {
    Series p = euler_product(len);
    Series p2 = mul(p, p, len);
    Series p4 = mul(p2, p2, len);
    Series p8 = mul(p4, p4, len);
    Series p16 = mul(p8, p8, len);
    Series delta_q = mul(p16, p8, len);
    Series e4 = sigma_series(3, 240, len);
    Series e4_3 = mul(mul(e4, e4, len), e4, len);
    Series jq = mul(e4_3, inverse(delta_q, len), len);
    if (jq[0] != 1 || (len > 1 && jq[1] != 744))
        throw std::logic_error("jq_series: normalization check failed");
    return jq;
}

std::mutex table_mutex;
std::shared_ptr<const std::vector<mpz_class>> table_cache;

} // namespace

std::shared_ptr<const std::vector<mpz_class>> j_coefficient_table(int n_max) {
    if (n_max < 1) n_max = 1;
    std::lock_guard<std::mutex> lock(table_mutex);
    std::size_t need = static_cast<std::size_t>(n_max) + 2; // c(-1)..c(n_max)
    if (table_cache && table_cache->size() >= need) return table_cache;
    std::size_t len = std::max(need, table_cache ? table_cache->size() * 2
                                                 : std::size_t{64});
    Series jq = jq_series(len); // jq[k] = coeff of q^k in j*q
    auto t = std::make_shared<std::vector<mpz_class>>(len);
    (*t)[0] = 1; // c(-1)
    (*t)[1] = 0; // c(0) after subtracting the constant
    for (std::size_t k = 2; k < len; ++k)
        (*t)[k] = jq[k];
    table_cache = t;
    return t;
}

mpz_class j_coefficient(int n) {
    if (n < -1) throw domain_error("j_coefficient: n >= -1 required");
    auto t = j_coefficient_table(n < 1 ? 1 : n);
    return (*t)[static_cast<std::size_t>(n) + 1];
}

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kPi = 3.141592653589793;

// log2 of the certified tail bound for sum_{n>N} |c(n)| r^n with
// r = exp(-pi sqrt|D| / A), using |c(n)| <= exp(4 pi sqrt n) and the
// concavity of sqrt at N. +inf when the majorant does not contract yet.
double tail_l2(std::int64_t absd, std::int64_t a, int n) {
    double lnr = -kPi * std::sqrt(static_cast<double>(absd)) / a;
    double sq = std::sqrt(static_cast<double>(n));
    double lnrho = 2.0 * kPi / sq + lnr;
    if (lnrho > -1e-3) return std::numeric_limits<double>::infinity();
    double rho = std::exp(lnrho);
    double ln_tail = 4.0 * kPi * sq + n * lnr + lnrho - std::log1p(-rho);
    return ln_tail / kLn2;
}

} // namespace

Complex evaluate_J(const CMPoint& z, int digits, int min_terms) {
    if (z.two_a <= 0 || z.two_a % 2 != 0 || z.abs_disc <= 0)
        throw domain_error("evaluate_J: malformed CM point");
    std::int64_t a = z.two_a / 2;
    mpfr_prec_t prec = Real::bits_for_digits(digits);

    // Truncation: tail (with safety factor 10) at or below the rounding
    // floor of the leading q^-1 term.
    double lead_l2 = kPi * std::sqrt(static_cast<double>(z.abs_disc)) / a / kLn2;
    double target_l2 = lead_l2 - static_cast<double>(prec) + 8;
    double log2_10 = 3.321928094887362;
    int n = std::max(min_terms, 4);
    while (tail_l2(z.abs_disc, a, n) + log2_10 > target_l2) {
        n += 1 + n / 8;
        if (n > 200000)
            throw std::runtime_error("evaluate_J: truncation does not certify");
    }

    auto table = j_coefficient_table(n);

    Real pi = Real::pi(prec);
    Real angle = pi.mul_si(z.neg_b).div_si(a); // 2 pi re(z)
    Real sqrt_d = Real::sqrt_of(Real::from_si(z.abs_disc, prec));
    Real radius = Real::exp_of((pi * sqrt_d).div_si(a).neg());
    Complex q(radius * Real::cos_of(angle), radius * Real::sin_of(angle));

    Complex s = q.reciprocal(); // c(-1) = 1
    Complex pw = q;
    for (int k = 1; k <= n; ++k) {
        const mpz_class& c = (*table)[static_cast<std::size_t>(k) + 1];
        if (c != 0) s = s + pw.mul_z(c);
        if (k < n) pw = pw * q;
    }
    Mag tail = Mag::from_l2(tail_l2(z.abs_disc, a, n) + log2_10);
    s.re.add_err(tail);
    s.im.add_err(tail);
    return s;
}

Complex J_onan(const Complex& x) {
    mpfr_prec_t prec = x.re.prec();
    Complex c(Real::from_si(393768, prec), Real::from_si(0, prec));
    return x * x - x - c;
}

Real theta(const Real& v, int digits) {
    if (v.sign() <= 0 || v.to_double() < 1e-3)
        throw domain_error("theta: v must be >= 1e-3");
    mpfr_prec_t prec = std::max(v.prec(), Real::bits_for_digits(digits));
    double target_l2 = -digits * 3.321928094887362 - 4;

    Real pi = Real::pi(prec);
    Real t = Real::exp_of((pi * v).neg());
    Real t2 = t * t;
    Real sum = Real::from_si(1, prec) + t.mul_si(2);
    Real cur = t;
    Real step = t;
    double vlow = v.to_double() * (1.0 - 1e-12);
    int n = 1;
    for (;;) {
        // tail <= 2 exp(-pi v (n+1)^2) / (1 - exp(-2 pi v (n+1)))
        double e = kPi * vlow * (n + 1);
        double ln_tail = kLn2 - e * (n + 1) - std::log1p(-std::exp(-2.0 * e));
        if (ln_tail / kLn2 <= target_l2) {
            sum.add_err(Mag::from_l2(ln_tail / kLn2));
            return sum;
        }
        ++n;
        step = step * t2;  // t^(2n-1)
        cur = cur * step;  // t^(n^2)
        sum = sum + cur.mul_si(2);
        if (n > 100000)
            throw std::runtime_error("theta: series does not certify");
    }
}

} // namespace onan
