#pragma once

#include "onan/arith.hpp"

#include <cstdint>
#include <vector>

namespace onan {

// Integral binary quadratic form A x^2 + B xy + C y^2, positive definite
// in every caller here (A > 0, discriminant < 0).
struct QuadraticForm {
    std::int64_t a, b, c;

    std::int64_t disc() const { return b * b - 4 * a * c; }
    bool positive_definite() const { return a > 0 && disc() < 0; }
    // Reduced: |B| <= A <= C, with B >= 0 when |B| = A or A = C.
    bool is_reduced() const;
    std::int64_t content() const; // gcd(A, B, C)

    friend bool operator==(const QuadraticForm&, const QuadraticForm&) = default;
    friend auto operator<=>(const QuadraticForm&, const QuadraticForm&) = default;
};

// 2x2 integer matrix, det +1 in all uses below.
struct Mat2 {
    std::int64_t m[2][2];

    static Mat2 identity();
    static Mat2 T(std::int64_t k); // [[1,k],[0,1]]
    static Mat2 S();               // [[0,-1],[1,0]]
    std::int64_t det() const;
    Mat2 inverse_unimodular() const; // requires det +1
    friend Mat2 operator*(const Mat2& x, const Mat2& y);
    friend bool operator==(const Mat2&, const Mat2&) = default;
};

// Right action Q|M: substitute (x,y) -> (ax+by, cx+dy).
QuadraticForm apply(const QuadraticForm& q, const Mat2& m);

// Gauss reduction. Throws on non-positive-definite input.
QuadraticForm reduce(const QuadraticForm& q);
// Same, also yielding U with apply(q, U) == result.
QuadraticForm reduce_with_transform(const QuadraticForm& q, Mat2& u);

// All reduced forms of discriminant D (imprimitive ones included when D is
// not fundamental), sorted by (A, B, C).
std::vector<QuadraticForm> class_representatives(const Discriminant& d);

// h(D) for fundamental D < 0; rejects non-fundamental D.
std::int64_t class_number(const Discriminant& d);

// Automorph count: 6 for A=B=C, 4 for B=0
// with A=C, else 2 (forms need not be reduced; scaling is irrelevant).
int weight(const QuadraticForm& q);

// CM point z = (-B + i sqrt|D|) / 2A in the upper half plane, kept exact:
// re = neg_b / two_a, im = sqrt(abs_disc) / two_a.
struct CMPoint {
    std::int64_t neg_b;
    std::int64_t two_a;
    std::int64_t abs_disc;

    std::int64_t re_num() const; // reduced fraction re = re_num/re_den
    std::int64_t re_den() const;
};

CMPoint cm_point(const QuadraticForm& q);

// Class count under the index-(p+1) congruence subgroup of level p, prime.
// For non-fundamental D the underlying SL2 classes include imprimitive
// forms, same convention as class_representatives.
std::int64_t gamma0_class_number(const Discriminant& d, std::uint64_t p);

} // namespace onan
