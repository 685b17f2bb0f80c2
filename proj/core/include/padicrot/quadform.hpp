#pragma once

#include <optional>
#include <string>
#include <vector>

#include "padicrot/matrix.hpp"
#include "padicrot/padic.hpp"

namespace padicrot {

// A diagonal quadratic form sum c_i x_i^2 over Q_p.
struct QuadraticForm {
    unsigned p = 0;
    std::string name;
    std::vector<PAdic> coeffs;

    std::size_t dim() const { return coeffs.size(); }
    PMatrix matrix() const;
};

QuadraticForm make_form(unsigned p, const std::vector<long long>& coeffs, std::string name = "",
                        int prec = kDefaultPrecision);
QuadraticForm make_form(unsigned p, const std::vector<Rational>& coeffs, std::string name = "",
                        int prec = kDefaultPrecision);

// The definite forms: three binary forms for p>2 and seven for p=2, and a
// single ternary and quaternary form.
std::vector<QuadraticForm> catalog(unsigned p, int dim, int prec = kDefaultPrecision);

// The quaternary norm form and its restriction to the pure quaternions.
QuadraticForm norm_form(unsigned p, int prec = kDefaultPrecision);
QuadraticForm pure_norm_form(unsigned p, int prec = kDefaultPrecision);

// The kappa values indexing the binary catalog, as exact rationals.
std::vector<Rational> kappa_catalog(unsigned p);

PAdic evaluate(const QuadraticForm& q, const std::vector<PAdic>& x);
PAdic bilinear(const QuadraticForm& q, const std::vector<PAdic>& x, const std::vector<PAdic>& y);

struct AnisotropyResult {
    bool confirmed = true;
    std::vector<long long> counterexample;  // residues mod p^k when not confirmed
};

// Searches every primitive vector mod p^k for Q(x) = 0 mod p^k. The form's
// coefficients must be p-integral.
AnisotropyResult anisotropy_witness(const QuadraticForm& q, int k);
int default_anisotropy_depth(unsigned p);

}  // namespace padicrot
