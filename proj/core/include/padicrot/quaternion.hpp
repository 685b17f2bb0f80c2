#pragma once

#include <array>
#include <map>
#include <random>

#include "padicrot/matrix.hpp"
#include "padicrot/padic.hpp"

namespace padicrot {

// An element q0 + q1 i + q2 j + q3 k of the quaternion division algebra over
// Q_p. For p > 2 the basis satisfies i^2 = v, j^2 = -p, k^2 = pv with ij = -k;
// for p = 2 it is Hamilton's table and v is fixed to -1.
struct Quaternion {
    unsigned p = 0;
    PAdic v;
    std::array<PAdic, 4> q;

    const PAdic& operator[](std::size_t i) const { return q[i]; }
};

Quaternion make_quaternion(unsigned p, const std::array<PAdic, 4>& coords);
Quaternion quaternion_from_ints(unsigned p, const std::array<long long, 4>& coords, int prec = kDefaultPrecision);
Quaternion quaternion_from_rationals(unsigned p, const std::array<Rational, 4>& coords,
                                     int prec = kDefaultPrecision);
Quaternion quat_scalar(unsigned p, const PAdic& a);

Quaternion quat_mul(const Quaternion& x, const Quaternion& y);
Quaternion quat_add(const Quaternion& x, const Quaternion& y);
Quaternion quat_sub(const Quaternion& x, const Quaternion& y);
Quaternion quat_scale(const PAdic& a, const Quaternion& x);
Quaternion conj(const Quaternion& x);
PAdic nrd(const Quaternion& x);
Quaternion quat_inv(const Quaternion& x);
bool quat_is_zero(const Quaternion& x);
bool quat_equal(const Quaternion& x, const Quaternion& y);

// a + b*sqrt(d) in the unramified (p > 2) or Gaussian (p = 2) quadratic
// extension used by the 2x2 representation.
struct QuadExtElem {
    unsigned p = 0;
    PAdic d;
    PAdic a, b;
};

QuadExtElem operator+(const QuadExtElem& x, const QuadExtElem& y);
QuadExtElem operator-(const QuadExtElem& x, const QuadExtElem& y);
QuadExtElem operator*(const QuadExtElem& x, const QuadExtElem& y);
bool operator==(const QuadExtElem& x, const QuadExtElem& y);

using QuadExtMatrix = std::array<QuadExtElem, 4>;  // row-major 2x2

QuadExtMatrix matrix_rep(const Quaternion& x);
QuadExtMatrix quadext_mul(const QuadExtMatrix& x, const QuadExtMatrix& y);
QuadExtElem quadext_det(const QuadExtMatrix& m);

// Matrices of eta -> x*eta and eta -> eta*x in the basis (1, i, j, k).
PMatrix left_translation_jacobian(const Quaternion& x);
PMatrix right_translation_matrix(const Quaternion& x);
PAdic jac_det(const Quaternion& x);

// S: quaternions with integral coordinates, at least one a unit.
bool sphere_membership(const Quaternion& x);
Quaternion sample_sphere(unsigned p, std::mt19937_64& rng, int prec = kDefaultPrecision);
// A quaternion whose reduced norm is the representative of eps.
Quaternion sphere_eps(const SquareClass& eps, std::mt19937_64& rng, int prec = kDefaultPrecision);

// An element of the pair group: two quaternions with equal reduced norm.
struct QuaternionPair {
    Quaternion xi;
    Quaternion rho;
};

QuaternionPair make_quaternion_pair(const Quaternion& xi, const Quaternion& rho);
QuaternionPair pair_mul(const QuaternionPair& x, const QuaternionPair& y);
QuaternionPair pair_inv(const QuaternionPair& x);
// xi uniform on S; rho a rescaled S-sample of the same norm class, with a
// uniformly random sign.
QuaternionPair pair_sample(unsigned p, std::mt19937_64& rng, int prec = kDefaultPrecision);

// Counts of square classes of nrd over n samples from S, keyed by the class
// representative.
std::map<long long, std::size_t> nrd_class_census(unsigned p, std::size_t n, std::mt19937_64& rng,
                                                  int prec = kDefaultPrecision);

}  // namespace padicrot
