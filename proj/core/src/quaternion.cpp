#include "padicrot/quaternion.hpp"

namespace padicrot {

namespace {

void require_same_structure(const Quaternion& x, const Quaternion& y) {
    if (x.p != y.p) throw StructureMismatch("quaternions over different primes");
    if (!(x.v == y.v)) throw StructureMismatch("quaternions with different structure constants");
}

int working_precision(const Quaternion& x) {
    return x.q[0].prime() ? x.q[0].precision() : kDefaultPrecision;
}

}  // namespace

Quaternion make_quaternion(unsigned p, const std::array<PAdic, 4>& coords) {
    if (!is_prime(p)) throw InvalidArgument("p must be prime");
    int prec = kDefaultPrecision;
    for (const auto& c : coords) {
        if (c.prime() != 0 && c.prime() != p) throw PrimeMismatch("coordinate over a different prime");
        if (c.prime() != 0) prec = c.precision();
    }
    Quaternion x{p, p == 2 ? PAdic::from_int(2, -1, prec) : canonical_v(p, prec), coords};
    for (auto& c : x.q)
        if (c.prime() == 0) c = PAdic::zero(p, prec);
    return x;
}

Quaternion quaternion_from_ints(unsigned p, const std::array<long long, 4>& coords, int prec) {
    std::array<PAdic, 4> c;
    for (int i = 0; i < 4; ++i) c[i] = PAdic::from_int(p, coords[i], prec);
    return make_quaternion(p, c);
}

Quaternion quaternion_from_rationals(unsigned p, const std::array<Rational, 4>& coords, int prec) {
    std::array<PAdic, 4> c;
    for (int i = 0; i < 4; ++i) c[i] = PAdic::from_rational(p, coords[i], prec);
    return make_quaternion(p, c);
}

Quaternion quat_scalar(unsigned p, const PAdic& a) {
    PAdic z = PAdic::zero(p, a.precision());
    return make_quaternion(p, {a, z, z, z});
}

Quaternion quat_mul(const Quaternion& x, const Quaternion& y) {
    require_same_structure(x, y);
    const auto& [a0, a1, a2, a3] = x.q;
    const auto& [b0, b1, b2, b3] = y.q;
    Quaternion z{x.p, x.v, {}};
    if (x.p == 2) {
        z.q[0] = a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3;
        z.q[1] = a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2;
        z.q[2] = a0 * b2 + a2 * b0 + a3 * b1 - a1 * b3;
        z.q[3] = a0 * b3 + a3 * b0 + a1 * b2 - a2 * b1;
        return z;
    }
    PAdic pp = PAdic::from_int(x.p, x.p, working_precision(x));
    const PAdic& v = x.v;
    z.q[0] = a0 * b0 + v * (a1 * b1) - pp * (a2 * b2) + pp * v * (a3 * b3);
    z.q[1] = a0 * b1 + a1 * b0 + pp * (a3 * b2 - a2 * b3);
    z.q[2] = a0 * b2 + a2 * b0 + v * (a3 * b1 - a1 * b3);
    z.q[3] = a0 * b3 + a3 * b0 - a1 * b2 + a2 * b1;
    return z;
}

Quaternion quat_add(const Quaternion& x, const Quaternion& y) {
    require_same_structure(x, y);
    Quaternion z = x;
    for (int i = 0; i < 4; ++i) z.q[i] = x.q[i] + y.q[i];
    return z;
}

Quaternion quat_sub(const Quaternion& x, const Quaternion& y) {
    require_same_structure(x, y);
    Quaternion z = x;
    for (int i = 0; i < 4; ++i) z.q[i] = x.q[i] - y.q[i];
    return z;
}

Quaternion quat_scale(const PAdic& a, const Quaternion& x) {
    Quaternion z = x;
    for (auto& c : z.q) c = a * c;
    return z;
}

Quaternion conj(const Quaternion& x) {
    Quaternion z = x;
    for (int i = 1; i < 4; ++i) z.q[i] = -x.q[i];
    return z;
}

PAdic nrd(const Quaternion& x) {
    const auto& [a0, a1, a2, a3] = x.q;
    if (x.p == 2) return a0 * a0 + a1 * a1 + a2 * a2 + a3 * a3;
    PAdic pp = PAdic::from_int(x.p, x.p, working_precision(x));
    return a0 * a0 - x.v * (a1 * a1) + pp * (a2 * a2 - x.v * (a3 * a3));
}

Quaternion quat_inv(const Quaternion& x) {
    PAdic n = nrd(x);
    if (n.is_zero()) throw DivisionByZero("quaternion has zero reduced norm");
    return quat_scale(n.inv(), conj(x));
}

bool quat_is_zero(const Quaternion& x) {
    for (const auto& c : x.q)
        if (!c.is_zero()) return false;
    return true;
}

bool quat_equal(const Quaternion& x, const Quaternion& y) {
    if (x.p != y.p) return false;
    for (int i = 0; i < 4; ++i)
        if (!(x.q[i] == y.q[i])) return false;
    return true;
}

// ---------------------------------------------------------------------------

QuadExtElem operator+(const QuadExtElem& x, const QuadExtElem& y) {
    return {x.p, x.d, x.a + y.a, x.b + y.b};
}

QuadExtElem operator-(const QuadExtElem& x, const QuadExtElem& y) {
    return {x.p, x.d, x.a - y.a, x.b - y.b};
}

QuadExtElem operator*(const QuadExtElem& x, const QuadExtElem& y) {
    if (!(x.d == y.d)) throw StructureMismatch("elements of different quadratic extensions");
    return {x.p, x.d, x.a * y.a + x.d * (x.b * y.b), x.a * y.b + x.b * y.a};
}

bool operator==(const QuadExtElem& x, const QuadExtElem& y) {
    return x.p == y.p && x.a == y.a && x.b == y.b;
}

QuadExtMatrix matrix_rep(const Quaternion& x) {
    const auto& [a, b, c, e] = x.q;
    PAdic d = x.p == 2 ? PAdic::from_int(2, -1, working_precision(x)) : x.v;
    auto el = [&](const PAdic& r, const PAdic& s) { return QuadExtElem{x.p, d, r, s}; };
    if (x.p == 2) return {el(a, b), el(c, e), el(-c, e), el(a, -b)};
    PAdic pp = PAdic::from_int(x.p, x.p, working_precision(x));
    return {el(a, b), el(-c, e), el(pp * c, pp * e), el(a, -b)};
}

QuadExtMatrix quadext_mul(const QuadExtMatrix& x, const QuadExtMatrix& y) {
    return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
            x[2] * y[1] + x[3] * y[3]};
}

QuadExtElem quadext_det(const QuadExtMatrix& m) {
    return m[0] * m[3] - m[1] * m[2];
}

// ---------------------------------------------------------------------------

namespace {

Quaternion basis(const Quaternion& like, int i) {
    int prec = working_precision(like);
    std::array<PAdic, 4> c;
    for (int j = 0; j < 4; ++j) c[j] = PAdic::from_int(like.p, i == j ? 1 : 0, prec);
    return Quaternion{like.p, like.v, c};
}

PMatrix columns_to_matrix(const std::array<Quaternion, 4>& cols) {
    std::vector<std::vector<PAdic>> rows(4, std::vector<PAdic>(4));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) rows[i][j] = cols[j].q[i];
    return PMatrix::from_rows(rows);
}

}  // namespace

PMatrix left_translation_jacobian(const Quaternion& x) {
    std::array<Quaternion, 4> cols;
    for (int j = 0; j < 4; ++j) cols[j] = quat_mul(x, basis(x, j));
    return columns_to_matrix(cols);
}

PMatrix right_translation_matrix(const Quaternion& x) {
    std::array<Quaternion, 4> cols;
    for (int j = 0; j < 4; ++j) cols[j] = quat_mul(basis(x, j), x);
    return columns_to_matrix(cols);
}

PAdic jac_det(const Quaternion& x) {
    return determinant(left_translation_jacobian(x));
}

// ---------------------------------------------------------------------------

bool sphere_membership(const Quaternion& x) {
    bool unit = false;
    for (const auto& c : x.q) {
        if (!c.is_integral()) return false;
        unit = unit || c.is_unit();
    }
    return unit;
}

Quaternion sample_sphere(unsigned p, std::mt19937_64& rng, int prec) {
    for (;;) {
        std::array<PAdic, 4> c;
        bool unit = false;
        for (auto& x : c) {
            x = sample_uniform_Zp(p, rng, prec);
            unit = unit || x.is_unit();
        }
        if (unit) return make_quaternion(p, c);
    }
}

Quaternion sphere_eps(const SquareClass& eps, std::mt19937_64& rng, int prec) {
    unsigned p = eps.p;
    PAdic target = PAdic::from_int(p, eps.rep, prec);
    for (;;) {
        Quaternion x = sample_sphere(p, rng, prec);
        PAdic n = nrd(x);
        if (!(square_class(n) == eps)) continue;
        return quat_scale(hensel_sqrt(target / n), x);
    }
}

QuaternionPair make_quaternion_pair(const Quaternion& xi, const Quaternion& rho) {
    require_same_structure(xi, rho);
    if (quat_is_zero(xi) || quat_is_zero(rho)) throw ZeroQuaternion("pair entries must be invertible");
    if (!(nrd(xi) == nrd(rho)))
        throw NormMismatch("nrd(xi) = " + nrd(xi).to_string() + " differs from nrd(rho) = " + nrd(rho).to_string());
    return {xi, rho};
}

QuaternionPair pair_mul(const QuaternionPair& x, const QuaternionPair& y) {
    return {quat_mul(x.xi, y.xi), quat_mul(x.rho, y.rho)};
}

QuaternionPair pair_inv(const QuaternionPair& x) {
    return {quat_inv(x.xi), quat_inv(x.rho)};
}

QuaternionPair pair_sample(unsigned p, std::mt19937_64& rng, int prec) {
    Quaternion xi = sample_sphere(p, rng, prec);
    PAdic n = nrd(xi);
    SquareClass cls = square_class(n);
    for (;;) {
        Quaternion r = sample_sphere(p, rng, prec);
        PAdic m = nrd(r);
        if (!(square_class(m) == cls)) continue;
        PAdic c = hensel_sqrt(n / m);
        if (rng() & 1) c = -c;
        return {xi, quat_scale(c, r)};
    }
}

std::map<long long, std::size_t> nrd_class_census(unsigned p, std::size_t n, std::mt19937_64& rng, int prec) {
    std::map<long long, std::size_t> counts;
    for (std::size_t i = 0; i < n; ++i) ++counts[square_class(nrd(sample_sphere(p, rng, prec))).rep];
    return counts;
}

}  // namespace padicrot
