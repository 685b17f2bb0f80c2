#include "padicrot/so2.hpp"

#include <climits>
#include <functional>
#include <mutex>
#include <tuple>

namespace padicrot {

namespace {

constexpr int kMaxSplitDepth = 256;

struct Mobius {
    Rational a = 1, b = 0, c = 0, d = 1;
};

Mobius inverse_translation(const Rational& kappa, const So2Translation& t) {
    if (!t.beta) return {0, -1, kappa, 0};
    return {1, -*t.beta, kappa * *t.beta, 1};
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t m) {
    __int128 g = static_cast<__int128>(m), x = 0, x1 = 1, r = static_cast<__int128>(a % m);
    while (r) {
        __int128 q = g / r, t = g - q * r;
        g = r;
        r = t;
        t = x - q * x1;
        x = x1;
        x1 = t;
    }
    if (g != 1) throw DivisionByZero("residue is not a unit");
    __int128 mm = static_cast<__int128>(m);
    return static_cast<std::uint64_t>(((x % mm) + mm) % mm);
}

// w mod p^k for a p-adic unit w given as a rational.
std::uint64_t unit_residue(const Rational& w, std::uint64_t modulus) {
    Integer m(modulus);
    Integer n = mp::numerator(w) % m, d = mp::denominator(w) % m;
    if (n < 0) n += m;
    return mulmod(n.convert_to<std::uint64_t>(), inverse_mod(d.convert_to<std::uint64_t>(), modulus), modulus);
}

using AtomKey = std::pair<int, std::uint64_t>;
const AtomKey kTailKey{INT_MAX, 0};
const AtomKey kInnerKey{INT_MIN, 0};

}  // namespace

Rational So2Cylinder::value_of(int m, std::uint64_t r) const {
    auto it = values.find({m, r});
    return it == values.end() ? Rational(0) : it->second;
}

// ---------------------------------------------------------------------------
// Group elements

Rotation2 make_rotation2(const PAdic& kappa, std::optional<PAdic> param) {
    if (kappa.is_zero()) throw InvalidArgument("kappa must be nonzero");
    if (is_square(-kappa))
        throw InvalidArgument("-kappa is a square, so 1 + kappa*alpha^2 has a zero and the form is isotropic");
    return {kappa, std::move(param)};
}

PMatrix kappa_form_matrix(const PAdic& kappa) {
    return PMatrix::diagonal({PAdic::one(kappa.prime(), kappa.precision()), kappa});
}

PMatrix so2_matrix(const Rotation2& r) {
    unsigned p = r.kappa.prime();
    int prec = r.kappa.precision();
    if (r.is_infinite()) return PMatrix::identity(p, 2, prec).scaled(PAdic::from_int(p, -1, prec));
    const PAdic& a = *r.param;
    PAdic ka2 = r.kappa * a * a;
    PAdic one = PAdic::one(p, prec), two = PAdic::from_int(p, 2, prec);
    PAdic den = (one + ka2).inv();
    PAdic diag = (one - ka2) * den;
    return PMatrix::from_rows({{diag, -(two * r.kappa * a * den)}, {two * a * den, diag}});
}

Rotation2 compose(const Rotation2& x, const Rotation2& y) {
    if (!(x.kappa == y.kappa)) throw KappaMismatch("cannot compose rotations with different kappa");
    unsigned p = x.kappa.prime();
    int prec = x.kappa.precision();
    if (x.is_infinite() && y.is_infinite()) return {x.kappa, PAdic::zero(p, prec)};
    if (x.is_infinite() || y.is_infinite()) {
        const PAdic& b = x.is_infinite() ? *y.param : *x.param;
        if (b.is_exact_zero()) return {x.kappa, std::nullopt};
        return {x.kappa, -(x.kappa * b).inv()};
    }
    const PAdic& a = *x.param;
    const PAdic& b = *y.param;
    PAdic den = PAdic::one(p, prec) - x.kappa * a * b;
    if (den.is_exact_zero()) return {x.kappa, std::nullopt};
    return {x.kappa, (a + b) / den};
}

Rotation2 so2_inverse(const Rotation2& r) {
    if (r.is_infinite()) return r;
    return {r.kappa, -*r.param};
}

Rational haar_density(const Rotation2& r) {
    if (r.is_infinite()) throw InfinityPoint("the density is not defined at the chart point infinity (-I)");
    const PAdic& a = *r.param;
    PAdic d = PAdic::one(r.kappa.prime(), r.kappa.precision()) + r.kappa * a * a;
    return rational_pow(r.kappa.prime(), d.valuation());
}

// ---------------------------------------------------------------------------
// Exact integration

struct So2Integrator::AtomCache {
    // Layout depth and annulus range, then 0 for no translation, 1 for R(beta)
    // and 2 for the point at infinity.
    using Key = std::tuple<int, int, int, int, Rational>;
    static constexpr std::size_t kCapacity = 4096;

    std::mutex lock;
    std::map<Key, std::shared_ptr<const AtomTable>> tables;
};

So2Integrator::So2Integrator(unsigned p, Rational kappa)
    : p_(p), kappa_(std::move(kappa)), cache_(std::make_shared<AtomCache>()) {
    if (!is_prime(p)) throw InvalidArgument("p must be prime");
    if (kappa_ == 0) throw InvalidArgument("kappa must be nonzero");
    if (is_square(PAdic::from_rational(p, -kappa_)))
        throw InvalidArgument("-kappa is a square, so 1 + kappa*alpha^2 has a zero and the form is isotropic");
    vkappa_ = vp(kappa_);
    // For |alpha| = p^m beyond m0 the kappa*alpha^2 term dominates, the density
    // is p^(v(kappa) - 2m), and the shells sum to a geometric series.
    int m0 = std::max(0, (vkappa_ + 1) / 2);
    total_ = finite_mass(0, -m0, 0) + rational_pow(p_, vkappa_ - m0 - 1);
}

Rational So2Integrator::finite_mass(const Rational& c, int s, int depth) const {
    if (depth > kMaxSplitDepth) throw DepthInsufficient("density refinement did not terminate");
    int dv = vp(1 + kappa_ * c * c);
    int vc = vp(c);
    long long v2 = p_ == 2 ? 1 : 0;
    long long spread = (vc == kInfiniteValuation) ? 2LL * s : std::min(v2 + vc + s, 2LL * s);
    if (dv < vkappa_ + spread) return rational_pow(p_, dv - s);
    Rational sum = 0;
    Rational step = rational_pow(p_, s);
    for (unsigned j = 0; j < p_; ++j) sum += finite_mass(c + step * j, s + 1, depth + 1);
    return sum;
}

Rational So2Integrator::ball_mass(const P1Ball& b) const {
    Rational f = finite_mass(b.c, b.s, 0);
    return b.co ? total_ - f : f;
}

void So2Integrator::collect_pieces(const Rational& c, int s, int depth,
                                   std::vector<std::pair<P1Ball, Rational>>& out) const {
    if (depth > kMaxSplitDepth) throw DepthInsufficient("density refinement did not terminate");
    int dv = vp(1 + kappa_ * c * c);
    int vc = vp(c);
    long long v2 = p_ == 2 ? 1 : 0;
    long long spread = (vc == kInfiniteValuation) ? 2LL * s : std::min(v2 + vc + s, 2LL * s);
    if (dv < vkappa_ + spread) {
        out.push_back({P1Ball{false, c, s}, rational_pow(p_, dv)});
        return;
    }
    Rational step = rational_pow(p_, s);
    for (unsigned j = 0; j < p_; ++j) collect_pieces(c + step * j, s + 1, depth + 1, out);
}

std::vector<std::pair<P1Ball, Rational>> So2Integrator::unit_ball_pieces() const {
    std::vector<std::pair<P1Ball, Rational>> out;
    int m0 = std::max(0, (vkappa_ + 1) / 2);
    collect_pieces(0, -m0, 0, out);
    return out;
}

namespace {

P1Ball image_of_finite(const Mobius& t, const Rational& x0, int s, unsigned p) {
    auto vp = [p](const Rational& q) { return valuation_of(q, p); };
    Rational det = t.a * t.d - t.b * t.c;
    if (t.c == 0) return {false, (t.a * x0 + t.b) / t.d, s + vp(t.a / t.d)};
    Rational pole = -t.d / t.c;
    if (vp(pole - x0) >= s) return {true, t.a / t.c, vp(det) - 2 * vp(t.c) - s + 1};
    Rational den = t.c * x0 + t.d;
    return {false, (t.a * x0 + t.b) / den, s + vp(det) - 2 * vp(den)};
}

P1Ball image_of(const Mobius& t, const P1Ball& b, unsigned p) {
    P1Ball img = image_of_finite(t, b.c, b.s, p);
    if (b.co) img.co = !img.co;
    return img;
}

std::optional<AtomKey> atom_of(const So2Cylinder& f, const P1Ball& x, unsigned p) {
    int vc = valuation_of(x.c, p);
    if (x.co) {
        if (x.s <= -f.annulus_max && vc >= x.s) return kTailKey;
        return std::nullopt;
    }
    if (vc >= x.s) {
        if (x.s >= 1 - f.annulus_min) return kInnerKey;
        return std::nullopt;
    }
    int m = -vc;
    if (m > f.annulus_max) return kTailKey;
    if (m < f.annulus_min) return kInnerKey;
    if (x.s < f.depth - m) return std::nullopt;
    std::uint64_t modulus = upow(p, f.depth);
    return AtomKey{m, unit_residue(x.c * rational_pow(p, m), modulus)};
}

}  // namespace

std::map<std::pair<int, std::uint64_t>, Rational> So2Integrator::atom_masses(
    const So2Cylinder& layout, const std::optional<So2Translation>& t) const {
    return *cached_atoms(layout, t);
}

std::shared_ptr<const So2Integrator::AtomTable> So2Integrator::cached_atoms(
    const So2Cylinder& layout, const std::optional<So2Translation>& t) const {
    if (layout.p != p_) throw PrimeMismatch("cylinder function is over a different prime");
    if (layout.kappa != kappa_) throw KappaMismatch("cylinder function is for a different kappa");
    if (layout.depth < 1) throw InvalidArgument("cylinder depth must be at least 1");
    if (layout.annulus_min > layout.annulus_max) throw InvalidArgument("annulus_min exceeds annulus_max");
    int kind = !t ? 0 : t->beta ? 1 : 2;
    AtomCache::Key key{layout.depth, layout.annulus_min, layout.annulus_max, kind,
                       kind == 1 ? *t->beta : Rational(0)};
    {
        std::lock_guard<std::mutex> g(cache_->lock);
        auto it = cache_->tables.find(key);
        if (it != cache_->tables.end()) return it->second;
    }
    auto table = std::make_shared<const AtomTable>(compute_atoms(layout, t));
    std::lock_guard<std::mutex> g(cache_->lock);
    if (cache_->tables.size() >= AtomCache::kCapacity) cache_->tables.clear();
    cache_->tables.emplace(key, table);
    return table;
}

So2Integrator::AtomTable So2Integrator::compute_atoms(const So2Cylinder& layout,
                                                      const std::optional<So2Translation>& t) const {
    Mobius map = t ? inverse_translation(kappa_, *t) : Mobius{};
    std::map<AtomKey, Rational> acc;
    std::function<void(const P1Ball&, int)> visit = [&](const P1Ball& b, int depth) {
        if (auto key = atom_of(layout, image_of(map, b, p_), p_)) {
            acc[*key] += ball_mass(b);
            return;
        }
        if (depth > kMaxSplitDepth) throw DepthInsufficient("translated cylinder did not resolve");
        if (b.co) {
            visit(P1Ball{true, b.c, b.s - 1}, depth + 1);
            Rational step = rational_pow(p_, b.s - 1);
            for (unsigned j = 1; j < p_; ++j) visit(P1Ball{false, b.c + step * j, b.s}, depth + 1);
        } else {
            Rational step = rational_pow(p_, b.s);
            for (unsigned j = 0; j < p_; ++j) visit(P1Ball{false, b.c + step * j, b.s + 1}, depth + 1);
        }
    };
    visit(P1Ball{false, 0, 0}, 0);
    visit(P1Ball{true, 0, 0}, 0);
    return acc;
}

Rational So2Integrator::integrate(const So2Cylinder& f, const std::optional<So2Translation>& t) const {
    if (!f.tail) throw TailNotConstant("the function has no constant tail beyond annulus " +
                                       std::to_string(f.annulus_max));
    Rational sum = 0;
    for (const auto& [key, mass] : *cached_atoms(f, t)) {
        if (key == kTailKey) sum += *f.tail * mass;
        else if (key == kInnerKey) sum += f.inner * mass;
        else sum += f.value_of(key.first, key.second) * mass;
    }
    return sum;
}

Rational so2_total_mass(unsigned p, const Rational& kappa) {
    return So2Integrator(p, kappa).total_mass();
}

Rotation2 sample_haar(unsigned p, const Rational& kappa, std::mt19937_64& rng, int prec) {
    thread_local std::map<std::pair<unsigned, Rational>, std::pair<std::vector<std::pair<P1Ball, Rational>>, Rational>>
        cache;
    auto key = std::make_pair(p, kappa);
    auto it = cache.find(key);
    if (it == cache.end()) {
        So2Integrator integ(p, kappa);
        it = cache.emplace(key, std::make_pair(integ.unit_ball_pieces(), integ.total_mass())).first;
    }
    const auto& pieces = it->second.first;
    const Rational& total = it->second.second;
    int vk = valuation_of(kappa, p);
    int m0 = std::max(0, (vk + 1) / 2);
    PAdic k = PAdic::from_rational(p, kappa, prec);

    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double u = unif(rng) * total.convert_to<double>();
    for (const auto& [ball, density] : pieces) {
        double mass = (density * rational_pow(p, -ball.s)).convert_to<double>();
        if (u < mass) {
            PAdic z = sample_uniform_Zp(p, rng, prec);
            PAdic alpha = PAdic::from_rational(p, ball.c, prec) + PAdic::from_rational(p, rational_pow(p, ball.s), prec) * z;
            return {k, alpha};
        }
        u -= mass;
    }
    // Shells beyond m0 carry mass proportional to p^-m.
    int m = m0 + 1;
    std::bernoulli_distribution stop(1.0 - 1.0 / p);
    while (!stop(rng)) ++m;
    PAdic z = sample_uniform_Zp(p, rng, prec);
    while (!z.is_unit()) z = sample_uniform_Zp(p, rng, prec);
    return {k, PAdic::from_rational(p, rational_pow(p, -m), prec) * z};
}

}  // namespace padicrot
