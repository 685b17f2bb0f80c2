#include "padicrot/rotation.hpp"

namespace padicrot {

QuadraticForm rotation3_form(unsigned p, int prec) {
    return pure_norm_form(p, prec);
}

QuadraticForm rotation4_form(unsigned p, int prec) {
    return norm_form(p, prec);
}

Rotation3 kappa3(const Quaternion& x) {
    if (quat_is_zero(x)) throw ZeroQuaternion("kappa3 is undefined at 0");
    const auto& [q0, q1, q2, q3] = x.q;
    unsigned p = x.p;
    int prec = q0.precision();
    PAdic two = PAdic::from_int(p, 2, prec);
    PAdic s0 = q0 * q0, s1 = q1 * q1, s2 = q2 * q2, s3 = q3 * q3;
    std::vector<std::vector<PAdic>> k;
    if (p == 2) {
        k = {{s0 + s1 - s2 - s3, two * (q1 * q2 - q3 * q0), two * (q2 * q0 + q3 * q1)},
             {two * (q1 * q2 + q0 * q3), s0 - s1 + s2 - s3, two * (q2 * q3 - q1 * q0)},
             {two * (q1 * q3 - q2 * q0), two * (q1 * q0 + q2 * q3), s0 - s1 - s2 + s3}};
    } else {
        const PAdic& v = x.v;
        PAdic pp = PAdic::from_int(p, p, prec);
        PAdic vs1 = v * s1, ps2 = pp * s2, pvs3 = pp * v * s3;
        k = {{s0 - vs1 - ps2 + pvs3, two * pp * (q0 * q3 + q1 * q2), -(two * pp * (q0 * q2 + v * (q1 * q3)))},
             {two * v * (q0 * q3 - q1 * q2), s0 + vs1 + ps2 + pvs3, -(two * v * (q0 * q1 + pp * (q2 * q3)))},
             {two * (q0 * q2 - v * (q1 * q3)), two * (pp * (q2 * q3) - q0 * q1), s0 + vs1 - ps2 - pvs3}};
    }
    return {p, PMatrix::from_rows(k).scaled(nrd(x).inv())};
}

Rotation4 kappa4(const QuaternionPair& pair) {
    PAdic n = nrd(pair.xi);
    if (quat_is_zero(pair.xi) || quat_is_zero(pair.rho)) throw ZeroQuaternion("kappa4 needs invertible entries");
    if (!(n == nrd(pair.rho))) throw NormMismatch("the pair entries have different reduced norms");
    PMatrix m = left_translation_jacobian(pair.xi) * right_translation_matrix(conj(pair.rho));
    return {pair.xi.p, m.scaled(n.inv())};
}

OrthogonalityReport verify_special_orthogonal(const PMatrix& m, const QuadraticForm& form) {
    if (m.rows() != m.cols() || m.rows() != form.dim())
        throw DimensionMismatch("matrix size does not match the form dimension");
    PMatrix a = form.matrix();
    OrthogonalityReport r;
    r.precision = m(0, 0).precision();
    PMatrix dev = m.transpose() * a * m - a;
    r.form_deviation = min_entry_valuation(dev);
    PAdic d = determinant(m) - PAdic::one(form.p, r.precision);
    r.det_deviation = d.is_zero() ? (d.is_exact() ? kInfiniteValuation : d.absprec()) : d.valuation();
    r.vanishes = d.is_zero();
    for (std::size_t i = 0; i < dev.rows(); ++i)
        for (std::size_t j = 0; j < dev.cols(); ++j) r.vanishes = r.vanishes && dev(i, j).is_zero();
    return r;
}

std::vector<PAdic> act(const PMatrix& m, const std::vector<PAdic>& w) {
    if (w.size() != m.cols()) throw DimensionMismatch("vector length does not match the matrix");
    return m.apply(w);
}

}  // namespace padicrot
