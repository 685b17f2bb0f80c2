#pragma once

// Test-only reference implementations. None of these call into the library's
// arithmetic; they work on plain integers and exact rationals so that the
// library can be checked against them.

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;
using i128 = __int128;

inline int valuation(Integer n, unsigned p) {
    if (n == 0) return 1 << 20;
    int e = 0;
    while (n % p == 0) {
        n /= p;
        ++e;
    }
    return e;
}

inline int valuation(const Rational& q, unsigned p) {
    if (q == 0) return 1 << 20;
    return valuation(boost::multiprecision::numerator(q), p) - valuation(boost::multiprecision::denominator(q), p);
}

inline Rational ppow(unsigned p, int e) {
    Rational r = 1;
    for (int i = 0; i < (e < 0 ? -e : e); ++i) r *= p;
    return e < 0 ? 1 / r : r;
}

inline std::uint64_t upow(std::uint64_t p, int e) {
    std::uint64_t r = 1;
    while (e-- > 0) r *= p;
    return r;
}

inline long long pmod(i128 x, i128 m) {
    x %= m;
    return static_cast<long long>(x < 0 ? x + m : x);
}

inline long long first_nonresidue(unsigned p) {
    for (long long u = 2;; ++u) {
        long long acc = 1;
        for (unsigned i = 0; i < (p - 1) / 2; ++i) acc = acc * u % p;
        if (acc == p - 1) return u;
    }
}

// ---------------------------------------------------------------------------
// SO(2)_kappa: mass of the annulus |alpha| = p^m under d(alpha)/|1 + kappa alpha^2|,
// by splitting residue cells until the valuation of 1 + kappa alpha^2 is fixed.

inline Rational so2_cell_mass(unsigned p, const Rational& kappa, int m, const Integer& r, int depth) {
    Rational x = 1 + kappa * ppow(p, -2 * m) * Rational(r * r);
    int w = valuation(x, p);
    int bound = valuation(kappa, p) - 2 * m + depth + (p == 2 ? 1 : 0);
    if (w < bound) return ppow(p, m - depth) * ppow(p, w);
    Rational sum = 0;
    Integer step = Integer(upow(p, depth));
    for (unsigned t = 0; t < p; ++t) sum += so2_cell_mass(p, kappa, m, r + step * t, depth + 1);
    return sum;
}

inline Rational so2_annulus_mass(unsigned p, const Rational& kappa, int m) {
    Rational sum = 0;
    for (unsigned r = 1; r < p; ++r) sum += so2_cell_mass(p, kappa, m, r, 1);
    return sum;
}

// Annuli |m| <= depth by enumeration, the rest as geometric tails. Needs
// v(kappa) >= 0 and 2 * depth > v(kappa).
inline Rational so2_total_mass(unsigned p, const Rational& kappa, int depth) {
    Rational sum = 0;
    for (int m = -depth; m <= depth; ++m) sum += so2_annulus_mass(p, kappa, m);
    int vk = valuation(kappa, p);
    return sum + ppow(p, vk - depth - 1) + ppow(p, -depth - 1);
}

// ---------------------------------------------------------------------------
// Quaternion algebra (a, b): i^2 = a, j^2 = b, K = ij. The library's basis
// (1, i, j, k) has k = -K for p > 2 (a = v, b = -p) and k = K for p = 2
// (a = b = -1).

template <class T>
struct AlgebraB {
    T a, b;

    std::array<T, 4> mul(const std::array<T, 4>& x, const std::array<T, 4>& y) const {
        return {x[0] * y[0] + a * x[1] * y[1] + b * x[2] * y[2] - a * b * x[3] * y[3],
                x[0] * y[1] + x[1] * y[0] - b * x[2] * y[3] + b * x[3] * y[2],
                x[0] * y[2] + x[2] * y[0] + a * x[1] * y[3] - a * x[3] * y[1],
                x[0] * y[3] + x[3] * y[0] + x[1] * y[2] - x[2] * y[1]};
    }

    static std::array<T, 4> conj(const std::array<T, 4>& x) { return {x[0], -x[1], -x[2], -x[3]}; }

    T norm(const std::array<T, 4>& x) const { return mul(x, conj(x))[0]; }
};

template <class T>
struct LibraryBasis {
    AlgebraB<T> alg;
    bool flip_k;

    static LibraryBasis for_prime(unsigned p, long long v) {
        if (p == 2) return {{T(-1), T(-1)}, false};
        return {{T(v), T(-static_cast<long long>(p))}, true};
    }

    std::array<T, 4> to_b(std::array<T, 4> x) const {
        if (flip_k) x[3] = -x[3];
        return x;
    }

    std::array<T, 4> from_b(std::array<T, 4> x) const { return to_b(x); }

    std::array<T, 4> mul(const std::array<T, 4>& x, const std::array<T, 4>& y) const {
        return from_b(alg.mul(to_b(x), to_b(y)));
    }

    T nrd(const std::array<T, 4>& x) const { return alg.norm(to_b(x)); }

    // Column j of the conjugation matrix on pure quaternions, unnormalized:
    // the (i, j, k) coordinates of x e_{j+1} conj(x).
    std::array<std::array<T, 3>, 3> conjugation_columns(const std::array<T, 4>& x) const {
        std::array<std::array<T, 3>, 3> cols{};
        std::array<T, 4> xc = {x[0], -x[1], -x[2], -x[3]};
        for (int j = 0; j < 3; ++j) {
            std::array<T, 4> e{T(0), T(0), T(0), T(0)};
            e[static_cast<std::size_t>(j + 1)] = T(1);
            auto w = mul(mul(x, e), xc);
            cols[static_cast<std::size_t>(j)] = {w[1], w[2], w[3]};
        }
        return cols;
    }
};

// ---------------------------------------------------------------------------
// SO(3) at depth 1: the image of |nrd(x)|^-2 dx / (1 - 1/p) on S under
// conjugation, by enumerating x mod p^k with k large enough to fix v(nrd).

struct So3Oracle {
    Rational total = 0;
    std::map<std::array<std::uint32_t, 9>, Rational> cells;
};

inline So3Oracle so3_depth1_oracle(unsigned p, long long v) {
    const int k = p == 2 ? 3 : 2;
    const long long mod = static_cast<long long>(upow(p, k));
    auto basis = LibraryBasis<i128>::for_prime(p, v);
    std::map<std::array<std::uint32_t, 9>, Integer> counts;  // scaled by p^(4k) p^-2e
    So3Oracle out;
    Integer scale = Integer(upow(p, 4 * k));
    std::array<i128, 4> x{};
    for (long long a = 0; a < mod; ++a)
        for (long long b = 0; b < mod; ++b)
            for (long long c = 0; c < mod; ++c)
                for (long long d = 0; d < mod; ++d) {
                    if (a % p == 0 && b % p == 0 && c % p == 0 && d % p == 0) continue;
                    x = {a, b, c, d};
                    long long n = pmod(basis.nrd(x), mod);
                    if (n == 0) throw std::logic_error("oracle depth too small to fix v(nrd)");
                    int e = 0;
                    while (n % p == 0) {
                        n /= p;
                        ++e;
                    }
                    long long pe = static_cast<long long>(upow(p, e));
                    long long inv = 1;
                    while ((n % p) * inv % p != 1) ++inv;
                    auto cols = basis.conjugation_columns(x);
                    std::array<std::uint32_t, 9> key{};
                    for (int r = 0; r < 3; ++r)
                        for (int cc = 0; cc < 3; ++cc) {
                            long long num = pmod(cols[static_cast<std::size_t>(cc)][static_cast<std::size_t>(r)], mod);
                            if (num % pe != 0) throw std::logic_error("non-integral conjugation matrix");
                            key[static_cast<std::size_t>(3 * r + cc)] =
                                static_cast<std::uint32_t>(pmod(static_cast<i128>(num / pe) * inv, p));
                        }
                    counts[key] += Integer(upow(p, 2 * e));
                }
    Rational factor = Rational(p, p - 1) / Rational(scale);
    for (const auto& [key, c] : counts) {
        Rational m = factor * Rational(c);
        out.cells[key] = m;
        out.total += m;
    }
    return out;
}

// Brute-force square roots of x modulo m.
inline std::vector<long long> sqrt_mod(long long x, long long m) {
    std::vector<long long> out;
    x = pmod(x, m);
    for (long long y = 0; y < m; ++y)
        if (static_cast<i128>(y) * y % m == x) out.push_back(y);
    return out;
}

}  // namespace oracle
