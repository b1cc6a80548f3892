#include "onan/qforms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace onan {

bool QuadraticForm::is_reduced() const {
    std::int64_t ab = b < 0 ? -b : b;
    if (!(ab <= a && a <= c)) return false;
    if ((ab == a || a == c) && b < 0) return false;
    return true;
}

std::int64_t QuadraticForm::content() const {
    std::int64_t g = std::gcd(std::gcd(a, b), c);
    return g < 0 ? -g : g;
}

Mat2 Mat2::identity() { return Mat2{{{1, 0}, {0, 1}}}; }
Mat2 Mat2::T(std::int64_t k) { return Mat2{{{1, k}, {0, 1}}}; }
Mat2 Mat2::S() { return Mat2{{{0, -1}, {1, 0}}}; }

std::int64_t Mat2::det() const {
    return m[0][0] * m[1][1] - m[0][1] * m[1][0];
}

Mat2 Mat2::inverse_unimodular() const {
    return Mat2{{{m[1][1], -m[0][1]}, {-m[1][0], m[0][0]}}};
}

Mat2 operator*(const Mat2& x, const Mat2& y) {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r.m[i][j] = x.m[i][0] * y.m[0][j] + x.m[i][1] * y.m[1][j];
    return r;
}

QuadraticForm apply(const QuadraticForm& q, const Mat2& m) {
    std::int64_t a = m.m[0][0], b = m.m[0][1], c = m.m[1][0], d = m.m[1][1];
    QuadraticForm r;
    r.a = q.a * a * a + q.b * a * c + q.c * c * c;
    r.c = q.a * b * b + q.b * b * d + q.c * d * d;
    r.b = 2 * q.a * a * b + q.b * (a * d + b * c) + 2 * q.c * c * d;
    return r;
}

QuadraticForm reduce_with_transform(const QuadraticForm& q, Mat2& u) {
    if (!q.positive_definite())
        throw domain_error("reduce: form must be positive definite");
    QuadraticForm f = q;
    u = Mat2::identity();
    for (;;) {
        // Normalize: shift B into (-A, A] by T^k.
        if (f.b > f.a || f.b <= -f.a) {
            // want b + 2ak in (-a, a]: k = floor((a - b) / 2a)
            std::int64_t k = (f.a - f.b) / (2 * f.a);
            if ((f.a - f.b) % (2 * f.a) < 0) --k; // floor for negatives
            Mat2 t = Mat2::T(k);
            f = apply(f, t);
            u = u * t;
        }
        if (f.a > f.c) {
            Mat2 s = Mat2::S();
            f = apply(f, s);
            u = u * s;
            continue;
        }
        if (f.a == f.c && f.b < 0) {
            Mat2 s = Mat2::S();
            f = apply(f, s);
            u = u * s;
        }
        if (f.is_reduced()) return f;
    }
}

QuadraticForm reduce(const QuadraticForm& q) {
    Mat2 u;
    return reduce_with_transform(q, u);
}

std::vector<QuadraticForm> class_representatives(const Discriminant& d) {
    std::int64_t disc = d.value();
    if (disc >= 0)
        throw domain_error("class_representatives: discriminant must be negative");
    std::vector<QuadraticForm> out;
    std::int64_t absd = -disc;
    // |B| <= A <= sqrt(|D|/3); enumerate A then B.
    for (std::int64_t a = 1; 3 * a * a <= absd; ++a) {
        for (std::int64_t b = -a + 1; b <= a; ++b) {
            std::int64_t num = b * b + absd;
            if (num % (4 * a) != 0) continue;
            std::int64_t c = num / (4 * a);
            QuadraticForm f{a, b, c};
            if (f.is_reduced()) out.push_back(f);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::int64_t class_number(const Discriminant& d) {
    if (!d.fundamental())
        throw domain_error("class_number: discriminant must be fundamental");
    if (d.value() >= 0)
        throw domain_error("class_number: discriminant must be negative");
    return static_cast<std::int64_t>(class_representatives(d).size());
}

int weight(const QuadraticForm& q) {
    if (!q.positive_definite())
        throw domain_error("weight: form must be positive definite");
    QuadraticForm f = reduce(q);
    if (f.a == f.b && f.b == f.c) return 6;
    if (f.b == 0 && f.a == f.c) return 4;
    return 2;
}

std::int64_t CMPoint::re_num() const {
    if (neg_b == 0) return 0;
    std::int64_t g = std::gcd(neg_b < 0 ? -neg_b : neg_b, two_a);
    return neg_b / g;
}

std::int64_t CMPoint::re_den() const {
    if (neg_b == 0) return 1;
    std::int64_t g = std::gcd(neg_b < 0 ? -neg_b : neg_b, two_a);
    return two_a / g;
}

CMPoint cm_point(const QuadraticForm& q) {
    if (!q.positive_definite())
        throw domain_error("cm_point: form must be positive definite");
    return CMPoint{-q.b, 2 * q.a, -q.disc()};
}

namespace {

// Automorphs mod +-1 of a reduced positive definite form.
std::vector<Mat2> automorphs(const QuadraticForm& f) {
    std::vector<Mat2> out{Mat2::identity()};
    if (f.a == f.c && f.b == 0) {
        out.push_back(Mat2::S());
    } else if (f.a == f.b && f.b == f.c) {
        Mat2 u{{{0, -1}, {1, 1}}}; // order 3 in PSL2
        out.push_back(u);
        out.push_back(u * u);
    }
    return out;
}

} // namespace

std::int64_t gamma0_class_number(const Discriminant& d, std::uint64_t p) {
    if (!is_prime(p))
        throw domain_error("gamma0_class_number: p must be prime");
    std::int64_t ip = static_cast<std::int64_t>(p);

    // Left-coset reps of the level-p subgroup: I and T^j S, j = 0..p-1.
    std::vector<Mat2> cosets;
    cosets.push_back(Mat2::identity());
    for (std::int64_t j = 0; j < ip; ++j)
        cosets.push_back(Mat2::T(j) * Mat2::S());
    const std::size_t n = cosets.size();

    std::vector<Mat2> inv(n);
    for (std::size_t i = 0; i < n; ++i)
        inv[i] = cosets[i].inverse_unimodular();

    std::int64_t total = 0;
    for (const QuadraticForm& r : class_representatives(d)) {
        std::vector<Mat2> aut = automorphs(r);
        // Union-find over coset indices; i ~ j iff some automorph a has
        // (c_i^-1 a c_j) lower-triangular mod p.
        std::vector<std::size_t> parent(n);
        for (std::size_t i = 0; i < n; ++i) parent[i] = i;
        auto find = [&](std::size_t x) {
            while (parent[x] != x) {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            return x;
        };
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                bool fuse = false;
                for (const Mat2& a : aut) {
                    Mat2 w = inv[i] * a * cosets[j];
                    if (mod_floor(w.m[1][0], ip) == 0) { fuse = true; break; }
                }
                if (fuse) {
                    std::size_t ri = find(i), rj = find(j);
                    if (ri != rj) parent[ri] = rj;
                }
            }
        }
        std::int64_t comps = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (find(i) == i) ++comps;
        total += comps;
    }
    return total;
}

} // namespace onan
