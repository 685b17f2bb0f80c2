#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "padicrot/matrix.hpp"
#include "padicrot/padic.hpp"

namespace padicrot {

// An element of SO(2,Q_p)_kappa given by its projective parameter; an empty
// parameter is the point at infinity, which is -I.
struct Rotation2 {
    PAdic kappa;
    std::optional<PAdic> param;

    bool is_infinite() const { return !param.has_value(); }
};

Rotation2 make_rotation2(const PAdic& kappa, std::optional<PAdic> param);
PMatrix so2_matrix(const Rotation2& r);
PMatrix kappa_form_matrix(const PAdic& kappa);
Rotation2 compose(const Rotation2& a, const Rotation2& b);
Rotation2 so2_inverse(const Rotation2& r);
Rational haar_density(const Rotation2& r);
Rotation2 sample_haar(unsigned p, const Rational& kappa, std::mt19937_64& rng, int prec = kDefaultPrecision);

// A ball of the projective line: {alpha : v(alpha - c) >= s}, or when `co`
// is set its complement together with infinity.
struct P1Ball {
    bool co = false;
    Rational c = 0;
    int s = 0;
};

// Locally constant function on the parameter line. The annulus |alpha| = p^m
// (m in [annulus_min, annulus_max]) is cut into cells alpha = p^-m (r + p^depth Z_p)
// with r a unit residue mod p^depth; `tail` covers |alpha| > p^annulus_max and
// infinity, `inner` covers |alpha| < p^annulus_min. Unlisted cells are 0.
struct So2Cylinder {
    unsigned p = 0;
    Rational kappa = 1;
    int depth = 1;
    int annulus_min = 0;
    int annulus_max = 0;
    std::map<std::pair<int, std::uint64_t>, Rational> values;
    std::optional<Rational> tail = Rational(0);
    Rational inner = 0;

    Rational value_of(int m, std::uint64_t r) const;
};

// Left translation by R(beta); beta empty means the point at infinity.
struct So2Translation {
    std::optional<Rational> beta;
};

class So2Integrator {
public:
    So2Integrator(unsigned p, Rational kappa);

    unsigned prime() const { return p_; }
    const Rational& kappa() const { return kappa_; }
    Rational total_mass() const { return total_; }
    Rational ball_mass(const P1Ball& b) const;

    // Integral of f, or of its left translate f(g^-1 . alpha) when t is given.
    Rational integrate(const So2Cylinder& f, const std::optional<So2Translation>& t = std::nullopt) const;

    // Haar mass of the preimage of every cell of f's layout under the
    // translation; keys are (m, r), with (INT_MAX, 0) the tail and
    // (INT_MIN, 0) the inner ball.
    std::map<std::pair<int, std::uint64_t>, Rational> atom_masses(
        const So2Cylinder& layout, const std::optional<So2Translation>& t = std::nullopt) const;

    // Constant-density pieces of Z_p with their density, used by the sampler.
    std::vector<std::pair<P1Ball, Rational>> unit_ball_pieces() const;

private:
    using AtomTable = std::map<std::pair<int, std::uint64_t>, Rational>;
    struct AtomCache;

    std::shared_ptr<const AtomTable> cached_atoms(const So2Cylinder& layout,
                                                  const std::optional<So2Translation>& t) const;
    AtomTable compute_atoms(const So2Cylinder& layout, const std::optional<So2Translation>& t) const;
    Rational finite_mass(const Rational& c, int s, int depth) const;
    void collect_pieces(const Rational& c, int s, int depth, std::vector<std::pair<P1Ball, Rational>>& out) const;
    int vp(const Rational& q) const { return valuation_of(q, p_); }

    unsigned p_;
    Rational kappa_;
    int vkappa_;
    Rational total_;
    // Atom tables depend only on the layout and the translation, so they are
    // shared by every function with that layout. Copies share the cache.
    std::shared_ptr<AtomCache> cache_;
};

Rational so2_total_mass(unsigned p, const Rational& kappa);

}  // namespace padicrot
