#pragma once

#include <vector>

#include "padicrot/matrix.hpp"
#include "padicrot/quadform.hpp"
#include "padicrot/quaternion.hpp"

namespace padicrot {

struct Rotation3 {
    unsigned p = 0;
    PMatrix m;
};

struct Rotation4 {
    unsigned p = 0;
    PMatrix m;
};

// The forms the two groups preserve: the reduced norm on pure quaternions and
// on all of H.
QuadraticForm rotation3_form(unsigned p, int prec = kDefaultPrecision);
QuadraticForm rotation4_form(unsigned p, int prec = kDefaultPrecision);

// Conjugation eta -> x eta x^-1 on the pure quaternions, in the basis (i, j, k).
Rotation3 kappa3(const Quaternion& x);
// eta -> xi eta rho^-1 on H, in the basis (1, i, j, k).
Rotation4 kappa4(const QuaternionPair& pair);

struct OrthogonalityReport {
    int precision = 0;
    // Valuations of the largest entry of M^T A M - A and of det M - 1. An
    // inexact zero reports its absolute precision.
    int form_deviation = 0;
    int det_deviation = 0;
    // Whether both differences vanish to the precision the arithmetic carried.
    bool vanishes = false;

    bool passes(int slack) const {
        return vanishes && form_deviation >= precision - slack && det_deviation >= precision - slack;
    }
};

OrthogonalityReport verify_special_orthogonal(const PMatrix& m, const QuadraticForm& form);
std::vector<PAdic> act(const PMatrix& m, const std::vector<PAdic>& w);

}  // namespace padicrot
