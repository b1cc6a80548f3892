#include "onan/bigfloat.hpp"

#include "onan/arith.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <vector>

namespace onan {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kPosInf = std::numeric_limits<double>::infinity();

// mpfr caches pi internally; the cache update is not guaranteed reentrant.
std::mutex pi_mutex;
} // namespace

Mag Mag::zero() { return Mag{kNegInf}; }
Mag Mag::inf() { return Mag{kPosInf}; }
Mag Mag::from_l2(double l2) { return Mag{l2}; }

Mag Mag::from_double(double x) {
    if (x == 0.0) return zero();
    double a = std::fabs(x);
    if (std::isinf(a) || std::isnan(a)) return inf();
    return Mag{std::log2(a)};
}

bool Mag::is_inf() const { return std::isinf(l2) && l2 > 0; }
bool Mag::is_zero() const { return std::isinf(l2) && l2 < 0; }
double Mag::to_double() const { return std::exp2(l2); }

Mag operator+(Mag a, Mag b) {
    if (a.is_inf() || b.is_inf()) return Mag::inf();
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    double hi = a.l2 > b.l2 ? a.l2 : b.l2;
    double lo = a.l2 > b.l2 ? b.l2 : a.l2;
    // log2(2^hi + 2^lo), exact to double rounding; always an upper bound
    // after the tiny padding.
    return Mag{hi + std::log1p(std::exp2(lo - hi)) / 0.6931471805599453 +
               1e-9};
}

Mag operator*(Mag a, Mag b) {
    if (a.is_zero() || b.is_zero()) return Mag::zero();
    if (a.is_inf() || b.is_inf()) return Mag::inf();
    return Mag{a.l2 + b.l2};
}

Real::Real(mpfr_prec_t prec) : prec_(prec), err_(Mag::zero()) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
}

Real::Real(const Real& o) : prec_(o.prec_), err_(o.err_) {
    mpfr_init2(v_, o.prec_);
    mpfr_set(v_, o.v_, MPFR_RNDN);
}

Real::Real(Real&& o) noexcept : prec_(o.prec_), err_(o.err_) {
    mpfr_init2(v_, o.prec_);
    mpfr_swap(v_, o.v_);
}

Real& Real::operator=(const Real& o) {
    if (this != &o) {
        mpfr_set_prec(v_, o.prec_);
        mpfr_set(v_, o.v_, MPFR_RNDN);
        prec_ = o.prec_;
        err_ = o.err_;
    }
    return *this;
}

Real& Real::operator=(Real&& o) noexcept {
    if (this != &o) {
        mpfr_swap(v_, o.v_);
        prec_ = o.prec_;
        err_ = o.err_;
    }
    return *this;
}

Real::~Real() { mpfr_clear(v_); }

mpfr_prec_t Real::bits_for_digits(int digits) {
    if (digits < 1) digits = 1;
    return static_cast<mpfr_prec_t>(digits * 3.3219280948873626 + 64);
}

Mag Real::half_ulp() const {
    if (mpfr_zero_p(v_)) return Mag::zero();
    if (!mpfr_number_p(v_)) return Mag::inf();
    return Mag::from_l2(
        static_cast<double>(mpfr_get_exp(v_)) - static_cast<double>(prec_) - 1);
}

Real Real::pi(mpfr_prec_t prec) {
    Real r(prec);
    {
        std::lock_guard<std::mutex> lock(pi_mutex);
        mpfr_const_pi(r.v_, MPFR_RNDN);
    }
    r.err_ = r.half_ulp();
    return r;
}

Real Real::from_si(long v, mpfr_prec_t prec) {
    Real r(prec);
    int t = mpfr_set_si(r.v_, v, MPFR_RNDN);
    r.err_ = t == 0 ? Mag::zero() : r.half_ulp();
    return r;
}

Real Real::from_z(const mpz_class& v, mpfr_prec_t prec) {
    Real r(prec);
    int t = mpfr_set_z(r.v_, v.get_mpz_t(), MPFR_RNDN);
    r.err_ = t == 0 ? Mag::zero() : r.half_ulp();
    return r;
}

Real Real::from_ratio(long num, long den, mpfr_prec_t prec) {
    if (den == 0) throw domain_error("Real::from_ratio: zero denominator");
    Real r = from_si(num, prec);
    int t = mpfr_div_si(r.v_, r.v_, den, MPFR_RNDN);
    r.err_ = t == 0 ? Mag::zero() : r.half_ulp();
    return r;
}

Real Real::from_double(double v, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_set_d(r.v_, v, MPFR_RNDN);
    r.err_ = Mag::zero(); // doubles embed exactly at prec >= 53
    return r;
}

int Real::sign() const { return mpfr_sgn(v_); }

double Real::to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

double Real::exp2_upper() const {
    if (mpfr_zero_p(v_)) return kNegInf;
    if (!mpfr_number_p(v_)) return kPosInf;
    return static_cast<double>(mpfr_get_exp(v_));
}

std::string Real::str(int digits) const {
    std::vector<char> buf(static_cast<size_t>(digits) + 32);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
    return std::string(buf.data());
}

// The rounding term is skipped when mpfr reports the result exact (ternary
// 0), so exact integer pipelines keep a zero bound.
Real operator+(const Real& a, const Real& b) {
    Real r(a.prec_);
    int t = mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    r.err_ = a.err_ + b.err_;
    if (t != 0) r.err_ = r.err_ + r.half_ulp();
    return r;
}

Real operator-(const Real& a, const Real& b) {
    Real r(a.prec_);
    int t = mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    r.err_ = a.err_ + b.err_;
    if (t != 0) r.err_ = r.err_ + r.half_ulp();
    return r;
}

Real operator*(const Real& a, const Real& b) {
    Real r(a.prec_);
    int t = mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    r.err_ = Mag::from_l2(a.exp2_upper()) * b.err_ +
             Mag::from_l2(b.exp2_upper()) * a.err_ + a.err_ * b.err_;
    if (t != 0) r.err_ = r.err_ + r.half_ulp();
    return r;
}

Real operator/(const Real& a, const Real& b) {
    Real r(a.prec_);
    int t = mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    if (mpfr_zero_p(b.v_) || b.err_.l2 >= b.exp2_upper() - 2) {
        r.err_ = Mag::inf(); // denominator not certainly bounded away from 0
        return r;
    }
    double denom_low_l2 = b.exp2_upper() - 2;
    Mag num = a.err_ + Mag::from_l2(r.exp2_upper()) * b.err_;
    r.err_ = Mag::from_l2(num.l2 - denom_low_l2 + 1);
    if (t != 0) r.err_ = r.err_ + r.half_ulp();
    return r;
}

Real Real::neg() const {
    Real r(prec_);
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    r.err_ = err_;
    return r;
}

Real Real::mul_si(long k) const {
    Real r(prec_);
    int t = mpfr_mul_si(r.v_, v_, k, MPFR_RNDN);
    double kl2 = k == 0 ? kNegInf : std::log2(std::fabs(static_cast<double>(k)));
    r.err_ = err_ * Mag::from_l2(kl2);
    if (t != 0) r.err_ = r.err_ + r.half_ulp();
    return r;
}

Real Real::div_si(long k) const {
    if (k == 0) throw domain_error("Real::div_si: zero divisor");
    Real r(prec_);
    int t = mpfr_div_si(r.v_, v_, k, MPFR_RNDN);
    double kl2 = std::log2(std::fabs(static_cast<double>(k)));
    r.err_ = err_ * Mag::from_l2(-kl2);
    if (t != 0) r.err_ = r.err_ + r.half_ulp();
    return r;
}

Real Real::mul_z(const mpz_class& k) const {
    Real r(prec_);
    int t = mpfr_mul_z(r.v_, v_, k.get_mpz_t(), MPFR_RNDN);
    double kl2;
    if (k == 0) {
        kl2 = kNegInf;
    } else {
        kl2 = static_cast<double>(mpz_sizeinbase(k.get_mpz_t(), 2));
    }
    r.err_ = err_ * Mag::from_l2(kl2);
    if (t != 0) r.err_ = r.err_ + r.half_ulp();
    return r;
}

Real Real::sqrt_of(const Real& x) {
    if (x.sign() < 0) throw domain_error("Real::sqrt_of: negative argument");
    Real r(x.prec_);
    int t = mpfr_sqrt(r.v_, x.v_, MPFR_RNDN);
    if (x.err_.is_zero()) {
        r.err_ = t == 0 ? Mag::zero() : r.half_ulp();
    } else if (x.err_.l2 >= x.exp2_upper() - 2) {
        r.err_ = Mag::inf();
    } else {
        // |sqrt x - sqrt y| <= |x-y| / sqrt(y); sqrt(y) >= 2^(exp_r - 1) / 2
        r.err_ = Mag::from_l2(x.err_.l2 - (r.exp2_upper() - 2)) + r.half_ulp();
    }
    return r;
}

Real Real::exp_of(const Real& x) {
    Real r(x.prec_);
    int t = mpfr_exp(r.v_, x.v_, MPFR_RNDN);
    if (x.err_.is_zero()) {
        r.err_ = t == 0 ? Mag::zero() : r.half_ulp();
    } else if (x.err_.l2 > -1.0) {
        r.err_ = Mag::inf(); // e^err - 1 no longer ~err
    } else {
        r.err_ = Mag::from_l2(r.exp2_upper() + x.err_.l2 + 1) + r.half_ulp();
    }
    return r;
}

Real Real::sin_of(const Real& x) {
    Real r(x.prec_);
    int t = mpfr_sin(r.v_, x.v_, MPFR_RNDN);
    r.err_ = x.err_; // |sin'| <= 1
    if (t != 0) r.err_ = r.err_ + r.half_ulp();
    return r;
}

Real Real::cos_of(const Real& x) {
    Real r(x.prec_);
    int t = mpfr_cos(r.v_, x.v_, MPFR_RNDN);
    r.err_ = x.err_;
    if (t != 0) r.err_ = r.err_ + r.half_ulp();
    return r;
}

void Real::round_nearest(mpz_class& out, double& dist) const {
    mpfr_t tmp;
    mpfr_init2(tmp, prec_);
    mpfr_get_z(out.get_mpz_t(), v_, MPFR_RNDN);
    mpfr_sub_z(tmp, v_, out.get_mpz_t(), MPFR_RNDN);
    mpfr_abs(tmp, tmp, MPFR_RNDU);
    dist = mpfr_get_d(tmp, MPFR_RNDU);
    mpfr_clear(tmp);
}

Complex operator+(const Complex& a, const Complex& b) {
    return Complex(a.re + b.re, a.im + b.im);
}

Complex operator-(const Complex& a, const Complex& b) {
    return Complex(a.re - b.re, a.im - b.im);
}

Complex operator*(const Complex& a, const Complex& b) {
    return Complex(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
}

Complex Complex::scaled(const Real& s) const {
    return Complex(re * s, im * s);
}

Complex Complex::mul_z(const mpz_class& k) const {
    return Complex(re.mul_z(k), im.mul_z(k));
}

Complex Complex::reciprocal() const {
    Real n2 = re * re + im * im;
    return Complex(re / n2, (im / n2).neg());
}

} // namespace onan
