#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

namespace onan {

// Absolute-error magnitude tracked in log2 space, so bounds survive far
// outside double range (tails ~1e-400 at high precision, slop ~1e+600 on
// deliberately-underprecise first attempts). +inf means "no bound".
struct Mag {
    double l2;

    static Mag zero();
    static Mag inf();
    static Mag from_l2(double l2);
    static Mag from_double(double x);

    bool is_inf() const;
    bool is_zero() const;
    double to_double() const; // may under/overflow at the extremes

    // Sum and product of two bounds.
    friend Mag operator+(Mag a, Mag b);
    friend Mag operator*(Mag a, Mag b);
};

// MPFR value with working precision and a certified absolute error bound.
// Every operation rounds at the precision of its left operand and folds
// rounding plus input error into the result's bound.
class Real {
public:
    explicit Real(mpfr_prec_t prec);
    Real(const Real& o);
    Real(Real&& o) noexcept;
    Real& operator=(const Real& o);
    Real& operator=(Real&& o) noexcept;
    ~Real();

    static mpfr_prec_t bits_for_digits(int digits);

    static Real pi(mpfr_prec_t prec);
    static Real from_si(long v, mpfr_prec_t prec);
    static Real from_z(const mpz_class& v, mpfr_prec_t prec);
    static Real from_ratio(long num, long den, mpfr_prec_t prec);
    static Real from_double(double v, mpfr_prec_t prec);

    mpfr_prec_t prec() const { return prec_; }
    Mag err() const { return err_; }
    void add_err(Mag m) { err_ = err_ + m; }

    int sign() const;            // sign of the center value
    double to_double() const;
    double exp2_upper() const;   // upper bound on log2 |center|; -inf for 0
    std::string str(int digits) const;

    friend Real operator+(const Real& a, const Real& b);
    friend Real operator-(const Real& a, const Real& b);
    friend Real operator*(const Real& a, const Real& b);
    friend Real operator/(const Real& a, const Real& b);
    Real neg() const;
    Real mul_si(long k) const;
    Real div_si(long k) const;
    Real mul_z(const mpz_class& k) const;

    static Real sqrt_of(const Real& x);
    static Real exp_of(const Real& x);
    static Real sin_of(const Real& x);
    static Real cos_of(const Real& x);

    // Nearest integer and the rounding distance |x - T| (as a double with
    // a hair of upward slop folded in by the caller via err()).
    void round_nearest(mpz_class& out, double& dist) const;

    mpfr_srcptr raw() const { return v_; }

private:
    Mag half_ulp() const;

    mpfr_t v_;
    mpfr_prec_t prec_;
    Mag err_;
};

struct Complex {
    Real re, im;

    explicit Complex(mpfr_prec_t prec) : re(prec), im(prec) {}
    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

    friend Complex operator+(const Complex& a, const Complex& b);
    friend Complex operator-(const Complex& a, const Complex& b);
    friend Complex operator*(const Complex& a, const Complex& b);
    Complex scaled(const Real& s) const;
    Complex mul_z(const mpz_class& k) const;
    Complex reciprocal() const;
};

} // namespace onan
