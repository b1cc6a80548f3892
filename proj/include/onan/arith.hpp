#pragma once

#include <cstdint>
#include <stdexcept>

namespace onan {

// Thrown when an argument violates a documented precondition.
struct domain_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// x mod m in [0, m), m > 0.
std::int64_t mod_floor(std::int64_t x, std::int64_t m);

// Deterministic Miller-Rabin, valid for all 64-bit n.
bool is_prime(std::uint64_t n);

// Squarefree test by trial division; m != 0.
bool is_squarefree(std::int64_t m);

// Fundamental discriminant: m ≡ 1 mod 4 squarefree, or m = 4k with
// k ≡ 2,3 mod 4 squarefree. Returns false for anything else, including
// values not ≡ 0,1 mod 4.
bool is_fundamental(std::int64_t m);

// Kronecker symbol (a|n), full generality (n may be 0 or negative).
int kronecker(std::int64_t a, std::int64_t n);

// A discriminant: nonzero, ≡ 0 or 1 mod 4. Negative throughout this
// codebase's callers, but the type itself is sign-agnostic.
class Discriminant {
public:
    explicit Discriminant(std::int64_t value);

    std::int64_t value() const { return value_; }
    bool fundamental() const { return fundamental_; }

    friend bool operator==(const Discriminant&, const Discriminant&) = default;

private:
    std::int64_t value_;
    bool fundamental_;
};

// chi_D(p) = (D|p) for prime p. Rejects non-prime p.
int kronecker_chi(const Discriminant& d, std::uint64_t p);

// True iff D mod p is a square residue mod p (0 counts as a square).
// Rejects non-prime p.
bool is_square_mod(std::int64_t d, std::uint64_t p);

} // namespace onan
