#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "padicrot/matrix.hpp"
#include "padicrot/padic.hpp"
#include "padicrot/quaternion.hpp"
#include "padicrot/rotation.hpp"
#include "padicrot/so2.hpp"

namespace padicrot {

// ---------------------------------------------------------------------------
// Chart densities

// A group given in one chart: compose(g, x) returns the coordinates of g*h(x).
struct ChartGroup {
    std::string name;
    unsigned p = 0;
    int dim = 0;
    int prec = kDefaultPrecision;
    std::vector<PAdic> identity;
    std::function<std::vector<PAdic>(const std::vector<PAdic>&, const std::vector<PAdic>&)> compose;
};

ChartGroup so2_chart_group(unsigned p, const Rational& kappa, int prec = kDefaultPrecision);
ChartGroup quaternion_chart_group(unsigned p, int prec = kDefaultPrecision);
// Pairs (a, b) with nrd(a) = nrd(b), charted by (a1, a2, a3, b0, b1, b2, b3);
// a0 is recovered as sheet * sqrt(nrd(b) + v a1^2 - p a2^2 + p v a3^2).
ChartGroup pair_chart_group(unsigned p, int sheet = 1, int prec = kDefaultPrecision);

// |det d(compose(g, x))/dx at x = identity|^-1, by symmetric differences.
Rational chart_density(const ChartGroup& g, const std::vector<PAdic>& point);

// Closed forms the chart densities are checked against.
Rational quaternion_density(const Quaternion& x);
Rational pair_density(const QuaternionPair& g);

// ---------------------------------------------------------------------------
// Fiber integrals over the scalars Q_p^x with measure d(alpha)/|alpha|

struct FiberWindow {
    int min_shell = 0;
    int max_shell = 0;
};

// Sums f(p^m r q) * p^-depth over shells m in the window and unit residues r
// mod p^depth. Without a window one is centered on the shell that moves q onto
// S, padded by two shells each side; the outermost shells must contribute 0.
Rational fiber_integrate(const std::function<Rational(const Quaternion&)>& f, const Quaternion& q,
                         std::optional<FiberWindow> window = std::nullopt, int depth = 1);
Rational fiber_integrate_pair(const std::function<Rational(const QuaternionPair&)>& f, const QuaternionPair& g,
                              std::optional<FiberWindow> window = std::nullopt, int depth = 1);

// The weights 1_S / (1 - 1/p) and 1_S' / (1 - 1/p).
Rational wmb_weight(const Quaternion& x);
Rational wmb_weight_pair(const QuaternionPair& g);
bool pair_sphere_membership(const QuaternionPair& g);

// ---------------------------------------------------------------------------
// Cylinder functions on SO(3) and SO(4)

struct EntryConstraint {
    int row = 0;
    int col = 0;
    std::uint32_t residue = 0;
};

// A function of the entries mod p^depth. With constraints it is `weight` times
// the indicator of the matrices meeting all of them; otherwise it is read from
// `values`, with `fallback` elsewhere.
struct MatrixCylinder {
    unsigned p = 0;
    int n = 3;
    int depth = 1;
    std::map<ResidueMatrix, Rational> values;
    std::vector<EntryConstraint> constraints;
    Rational weight = 1;
    Rational fallback = 0;

    Rational at(const ResidueMatrix& m) const;
};

MatrixCylinder constant_cylinder(unsigned p, int n, const Rational& c);
MatrixCylinder entry_cylinder(unsigned p, int n, int depth, std::vector<EntryConstraint> constraints);

// The image of the lifted Haar measure on the residue matrices mod p^depth.
// Every cell carries its exact raw mass.
struct RotationHistogram {
    unsigned p = 0;
    int n = 0;
    int depth = 0;
    std::unordered_map<ResidueMatrix, Rational, ResidueMatrixHash> mass;

    Rational total() const;
};

RotationHistogram so3_histogram(unsigned p, int depth, unsigned threads = 1);
// Needs p > 2.
RotationHistogram so4_histogram(unsigned p, int depth, unsigned threads = 1);

// Cached by (group, p, depth).
const RotationHistogram& cached_histogram(int n, unsigned p, int depth, unsigned threads = 1);

// Sum of mass * f(translate * cell); translate = g^-1 gives the integral of the
// left translate of f by g.
Rational integrate_histogram(const RotationHistogram& h, const MatrixCylinder& f,
                             const std::optional<ResidueMatrix>& translate = std::nullopt);

Rational so3_raw_mass(unsigned p);
Rational so4_raw_mass(unsigned p);

// Residue matrices of kappa3 and kappa4, for translations.
ResidueMatrix so3_residue(const Quaternion& x, int depth);
ResidueMatrix so4_residue(const QuaternionPair& g, int depth);

// ---------------------------------------------------------------------------
// Monte Carlo

struct Estimate {
    double value = 0;
    double stderr_ = 0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
};

// A draw with its importance weight, scaled so that the sample mean of
// weight * f(key) estimates the raw integral of f.
struct WeightedSample {
    ResidueMatrix key;
    double weight = 0;
};

std::vector<WeightedSample> so3_mc_samples(unsigned p, int depth, std::size_t n, std::uint64_t seed,
                                           unsigned threads = 1);
std::vector<WeightedSample> so4_mc_samples(unsigned p, int depth, std::size_t n, std::uint64_t seed,
                                           unsigned threads = 1);
Estimate mc_estimate(const std::vector<WeightedSample>& samples, const MatrixCylinder& f, std::uint64_t seed,
                     const std::optional<ResidueMatrix>& translate = std::nullopt);

// ---------------------------------------------------------------------------
// Integration front end

enum class Mode { Exact, MonteCarlo };

struct IntegrationParams {
    Mode mode = Mode::Exact;
    int depth = 1;
    std::size_t samples = 100000;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    bool normalized = false;
};

struct IntegrationResult {
    std::optional<Rational> value;
    std::optional<Estimate> estimate;
    int depth = 0;
    // Set for the pair sampler, whose weights are justified by the invariance
    // checks rather than by construction.
    bool validated_by_invariance = false;
};

IntegrationResult integrate_so3(const MatrixCylinder& f, const IntegrationParams& params);
IntegrationResult integrate_so4(const MatrixCylinder& f, const IntegrationParams& params);

Rational haar_mass(const std::string& group, unsigned p, const Rational& kappa = 1);

// ---------------------------------------------------------------------------
// Invariance

struct InvarianceReport {
    Rational base;
    std::vector<Rational> translated;
    std::vector<Rational> deviations;
    bool invariant = true;
};

InvarianceReport so2_invariance(const So2Integrator& integ, const So2Cylinder& f,
                                const std::vector<So2Translation>& translations);
InvarianceReport so3_invariance(const MatrixCylinder& f, const std::vector<Quaternion>& translations,
                                unsigned threads = 1);
InvarianceReport so4_invariance(const MatrixCylinder& f, const std::vector<QuaternionPair>& translations,
                                unsigned threads = 1);

struct McInvarianceReport {
    Rational exact;
    std::vector<Estimate> estimates;
    std::vector<double> sigmas;  // |estimate - exact| / stderr
    double max_sigma = 0;
};

// Monte Carlo estimates of the integrals of the translates against the exact
// integral of f.
McInvarianceReport so3_mc_invariance(const MatrixCylinder& f, const std::vector<Quaternion>& translations,
                                     std::size_t samples, std::uint64_t seed, unsigned threads = 1);

// ---------------------------------------------------------------------------
// Change of variables

struct Monomial {
    long long coeff = 0;
    std::vector<int> exps;
};

// A polynomial map Z_p^n -> Z_p^n with integer coefficients.
struct PolyMap {
    int n = 0;
    std::vector<std::vector<Monomial>> components;

    std::vector<Integer> eval(const std::vector<Integer>& x) const;
    std::vector<std::vector<Integer>> jacobian(const std::vector<Integer>& x) const;
};

PolyMap linear_map(const std::vector<std::vector<long long>>& a);
// x -> A x + p Q(x) + c with det A a unit, Q quadratic; a bijection of Z_p^n.
PolyMap random_unit_jacobian_map(unsigned p, int n, std::mt19937_64& rng);
PolyMap quaternion_left_multiplication(const Quaternion& x);

// U = base + p^radius Z_p^n.
struct CylinderRegion {
    std::vector<std::uint64_t> base;
    int radius = 0;
};

// A function of the residues mod p^depth, flattened with coordinate 0 fastest.
struct ResidueFunction {
    int n = 0;
    int depth = 0;
    std::vector<Rational> values;

    Rational at(const std::vector<std::uint64_t>& residues, std::uint64_t modulus) const;
};

ResidueFunction random_residue_function(unsigned p, int n, int depth, std::mt19937_64& rng);

struct CovReport {
    Rational lhs;  // integral of f over the image
    Rational rhs;  // integral of f(xi) |det D xi| over U
    int jacobian_valuation = 0;
    bool equal = false;
};

// Both sides by residue enumeration at the given depth. The Jacobian
// valuation must be constant on U and at most depth.
CovReport change_of_variables_check(unsigned p, const PolyMap& xi, const CylinderRegion& u,
                                    const ResidueFunction& f, int depth);

}  // namespace padicrot
