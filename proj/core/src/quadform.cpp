#include "padicrot/quadform.hpp"

#include <cmath>

namespace padicrot {

PMatrix QuadraticForm::matrix() const {
    return PMatrix::diagonal(coeffs);
}

QuadraticForm make_form(unsigned p, const std::vector<Rational>& coeffs, std::string name, int prec) {
    QuadraticForm q{p, std::move(name), {}};
    for (const auto& c : coeffs) {
        if (c == 0) throw InvalidArgument("quadratic form coefficients must be nonzero");
        q.coeffs.push_back(PAdic::from_rational(p, c, prec));
    }
    return q;
}

QuadraticForm make_form(unsigned p, const std::vector<long long>& coeffs, std::string name, int prec) {
    std::vector<Rational> c(coeffs.begin(), coeffs.end());
    return make_form(p, c, std::move(name), prec);
}

std::vector<Rational> kappa_catalog(unsigned p) {
    if (p == 2) return {1, 2, -2, 5, -5, 10, -10};
    long long v = structure_v(p), u = nonresidue_u(p);
    return {Rational(-v), Rational(p), Rational(p, u)};
}

std::vector<QuadraticForm> catalog(unsigned p, int dim, int prec) {
    if (dim < 2 || dim > 4) throw UnsupportedDimension("no definite forms in dimension " + std::to_string(dim));
    std::vector<QuadraticForm> out;
    if (dim == 2) {
        if (p == 2) {
            for (const Rational& k : kappa_catalog(2))
                out.push_back(make_form(2, std::vector<Rational>{1, k}, "Q_" + rational_to_string(k), prec));
            return out;
        }
        long long v = structure_v(p), u = nonresidue_u(p), pp = p;
        out.push_back(make_form(p, std::vector<long long>{1, -v}, "Q_-v", prec));
        out.push_back(make_form(p, std::vector<long long>{1, pp}, "Q_p", prec));
        out.push_back(make_form(p, std::vector<long long>{u, pp}, "Q_p/u", prec));
        return out;
    }
    if (dim == 3) {
        if (p == 2) return {make_form(2, std::vector<long long>{1, 1, 1}, "Q_+", prec)};
        long long v = structure_v(p), pp = p;
        return {make_form(p, std::vector<long long>{1, -v, pp}, "Q_+", prec)};
    }
    return {norm_form(p, prec)};
}

QuadraticForm norm_form(unsigned p, int prec) {
    if (p == 2) return make_form(2, std::vector<long long>{1, 1, 1, 1}, "Q_(4)", prec);
    long long v = structure_v(p), pp = p;
    return make_form(p, std::vector<long long>{1, -v, pp, -pp * v}, "Q_(4)", prec);
}

QuadraticForm pure_norm_form(unsigned p, int prec) {
    if (p == 2) return make_form(2, std::vector<long long>{1, 1, 1}, "Q_(4)|pure", prec);
    long long v = structure_v(p), pp = p;
    return make_form(p, std::vector<long long>{-v, pp, -pp * v}, "Q_(4)|pure", prec);
}

PAdic evaluate(const QuadraticForm& q, const std::vector<PAdic>& x) {
    if (x.size() != q.dim()) throw DimensionMismatch("vector length " + std::to_string(x.size()) +
                                                     " does not match form dimension " + std::to_string(q.dim()));
    PAdic s;
    for (std::size_t i = 0; i < x.size(); ++i) s += q.coeffs[i] * x[i] * x[i];
    if (s.prime() == 0) return PAdic::zero(q.p);
    return s;
}

PAdic bilinear(const QuadraticForm& q, const std::vector<PAdic>& x, const std::vector<PAdic>& y) {
    if (x.size() != q.dim() || y.size() != q.dim())
        throw DimensionMismatch("vector length does not match form dimension");
    PAdic s;
    for (std::size_t i = 0; i < x.size(); ++i) s += q.coeffs[i] * x[i] * y[i];
    if (s.prime() == 0) return PAdic::zero(q.p);
    return s;
}

int default_anisotropy_depth(unsigned p) {
    return p == 2 ? 3 : 2;
}

AnisotropyResult anisotropy_witness(const QuadraticForm& q, int k) {
    if (k < 1) throw InvalidArgument("anisotropy depth must be at least 1");
    unsigned p = q.p;
    std::size_t n = q.dim();
    if (n * k * std::log2(static_cast<double>(p)) > 40)
        throw InvalidArgument("anisotropy search space too large");
    std::uint64_t mod = upow(p, k);
    std::vector<std::uint64_t> c(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!q.coeffs[i].is_integral()) throw InvalidArgument("anisotropy search needs p-integral coefficients");
        c[i] = q.coeffs[i].residue_u64(k);
    }
    std::vector<std::uint64_t> x(n, 0);
    std::uint64_t total = upow(mod, static_cast<int>(n));
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::uint64_t t = idx;
        bool primitive = false;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = t % mod;
            t /= mod;
            primitive = primitive || (x[i] % p != 0);
        }
        if (!primitive) continue;
        unsigned __int128 s = 0;
        for (std::size_t i = 0; i < n; ++i) s += static_cast<unsigned __int128>(c[i]) * (x[i] * x[i] % mod);
        if (s % mod == 0) {
            AnisotropyResult r{false, {}};
            for (auto xi : x) r.counterexample.push_back(static_cast<long long>(xi));
            return r;
        }
    }
    return {};
}

}  // namespace padicrot
