#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <climits>
#include <cstdint>
#include <iterator>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "padicrot/errors.hpp"

namespace padicrot {

namespace mp = boost::multiprecision;

// Units live below p^N; the fixed width keeps products of two units on the
// stack. max_precision() reports the largest N that fits for a given prime.
using BigInt = mp::number<mp::cpp_int_backend<512, 512, mp::signed_magnitude, mp::unchecked, void>>;
using Integer = mp::cpp_int;
using Rational = mp::cpp_rational;

inline constexpr int kInfiniteValuation = INT_MAX;
inline constexpr int kDefaultPrecision = 32;

bool is_prime(unsigned long long n);
int max_precision(unsigned p);
const BigInt& pow_p(unsigned p, int k);
Rational rational_pow(unsigned p, int e);

// p-adic valuation of an exact integer or rational; kInfiniteValuation for 0.
int valuation_of(const Integer& n, unsigned p);
int valuation_of(const Rational& q, unsigned p);
int valuation_of(const BigInt& n, unsigned p);

// Inverse of a unit modulo p^k.
BigInt inverse_mod_pk(const BigInt& unit, unsigned p, int k);

std::string rational_to_string(const Rational& q);
Rational parse_rational(const std::string& text);

// A p-adic number known to a fixed number of significant digits.
//
// Three shapes exist: an exact zero (valuation +inf), an inexact zero O(p^a)
// that is indistinguishable from zero at absolute precision a, and a nonzero
// value p^v * unit with unit known modulo p^relprec. Values built from
// integers or rationals additionally keep their exact rational so that
// arithmetic among exact inputs stays exact.
class PAdic {
public:
    PAdic() = default;

    static PAdic zero(unsigned p, int prec = kDefaultPrecision);
    static PAdic one(unsigned p, int prec = kDefaultPrecision);
    static PAdic from_integer(unsigned p, const Integer& n, int prec = kDefaultPrecision);
    static PAdic from_int(unsigned p, long long n, int prec = kDefaultPrecision);
    static PAdic from_rational(unsigned p, const Rational& q, int prec = kDefaultPrecision);
    // Value r known modulo p^absprec.
    static PAdic from_residue(unsigned p, const BigInt& r, int absprec, int prec = kDefaultPrecision);
    static PAdic from_unit(unsigned p, int valuation, const BigInt& unit, int relprec,
                           int prec = kDefaultPrecision);
    static PAdic inexact_zero(unsigned p, int absprec, int prec = kDefaultPrecision);
    // Accepts "num/den", an integer, or the compact form "v:[d0,d1,...]@p".
    static PAdic parse(unsigned p, const std::string& text, int prec = kDefaultPrecision);

    unsigned prime() const { return p_; }
    int precision() const { return prec_; }
    int relprec() const { return zero_ ? 0 : rel_; }
    int absprec() const;
    bool is_exact() const { return exact_.has_value(); }
    bool is_exact_zero() const { return zero_ && exact_.has_value(); }
    bool is_zero() const { return zero_; }
    int valuation() const;
    const BigInt& unit() const { return unit_; }
    const std::optional<Rational>& exact_value() const { return exact_; }

    Rational abs() const;
    Rational to_rational() const;
    std::vector<unsigned> digits() const;
    bool is_integral() const;
    bool is_unit() const;
    // x mod p^k for x in Z_p; needs k <= absprec.
    BigInt residue(int k) const;
    std::uint64_t residue_u64(int k) const;

    PAdic operator-() const;
    PAdic inv() const;
    PAdic truncated(int relprec) const;
    PAdic with_precision(int prec) const;

    friend PAdic operator+(const PAdic& x, const PAdic& y);
    friend PAdic operator-(const PAdic& x, const PAdic& y);
    friend PAdic operator*(const PAdic& x, const PAdic& y);
    friend PAdic operator/(const PAdic& x, const PAdic& y);
    PAdic& operator+=(const PAdic& y) { return *this = *this + y; }
    PAdic& operator-=(const PAdic& y) { return *this = *this - y; }
    PAdic& operator*=(const PAdic& y) { return *this = *this * y; }

    // Equality to joint precision.
    friend bool operator==(const PAdic& x, const PAdic& y);

    std::string to_compact() const;
    std::string to_expansion() const;
    std::string to_string() const;

private:
    BigInt unit_mod(int k) const;
    void drop_oversized_exact();

    unsigned p_ = 0;
    int prec_ = kDefaultPrecision;
    bool zero_ = true;
    int val_ = kInfiniteValuation;
    int rel_ = 0;
    BigInt unit_ = 0;
    std::optional<Rational> exact_ = Rational(0);
};

PAdic pow(const PAdic& x, int e);

// Square root by Hensel lifting. For p>2 the root whose first digit is at
// most (p-1)/2 is returned; for p=2 the root congruent to 1 mod 4, which is
// known to one digit less than the input.
PAdic hensel_sqrt(const PAdic& x);

struct SquareClass {
    unsigned p = 0;
    // Canonical representative: 1, u, p, up for p>2; +-1, +-2, +-5, +-10 for p=2.
    long long rep = 1;

    friend bool operator==(const SquareClass&, const SquareClass&) = default;
};

SquareClass square_class(const PAdic& x);
bool is_square(const PAdic& x);
SquareClass class_mul(const SquareClass& a, const SquareClass& b);
std::vector<SquareClass> all_square_classes(unsigned p);
std::string square_class_name(const SquareClass& c);

long long nonresidue_u(unsigned p);
long long structure_v(unsigned p);
PAdic canonical_u(unsigned p, int prec = kDefaultPrecision);
PAdic canonical_v(unsigned p, int prec = kDefaultPrecision);

// The ball {x : |x - center|_p <= p^k}.
struct Ball {
    PAdic center;
    int k = 0;

    bool contains(const PAdic& x) const;
};

Rational measure_ball(const Ball& b);
Rational mult_haar_measure(unsigned p, int shell);

class ResidueRange {
public:
    class iterator {
    public:
        using iterator_category = std::forward_iterator_tag;
        using value_type = std::uint64_t;
        using difference_type = std::ptrdiff_t;
        using pointer = const std::uint64_t*;
        using reference = std::uint64_t;

        explicit iterator(std::uint64_t v) : v_(v) {}
        std::uint64_t operator*() const { return v_; }
        iterator& operator++() { ++v_; return *this; }
        iterator operator++(int) { auto t = *this; ++v_; return t; }
        friend bool operator==(const iterator&, const iterator&) = default;

    private:
        std::uint64_t v_;
    };

    ResidueRange(unsigned p, int k);
    iterator begin() const { return iterator(0); }
    iterator end() const { return iterator(count_); }
    std::uint64_t size() const { return count_; }

private:
    std::uint64_t count_;
};

ResidueRange enumerate_residues(unsigned p, int k);

PAdic sample_uniform_Zp(unsigned p, std::mt19937_64& rng, int prec = kDefaultPrecision);

// Small-modulus helpers shared by the enumeration back ends.
std::uint64_t upow(std::uint64_t base, int e);
long long legendre(long long a, unsigned p);

}  // namespace padicrot
