#include "padicrot/haar.hpp"

#include <cmath>
#include <memory>
#include <mutex>
#include <set>
#include <tuple>

#include "padicrot/parallel.hpp"

namespace padicrot {

namespace {

using i128 = __int128;

i128 pos_mod(i128 x, i128 m) {
    x %= m;
    return x < 0 ? x + m : x;
}

std::uint64_t inverse_mod_u64(std::uint64_t a, std::uint64_t m) {
    i128 g = m, x = 0, x1 = 1, r = a % m;
    while (r) {
        i128 q = g / r, t = g - q * r;
        g = r;
        r = t;
        t = x - q * x1;
        x = x1;
        x1 = t;
    }
    if (g != 1) throw DivisionByZero("residue is not a unit");
    return static_cast<std::uint64_t>(pos_mod(x, m));
}

int valuation_i128(i128 x, unsigned p) {
    if (x == 0) return kInfiniteValuation;
    int e = 0;
    while (x % p == 0) {
        x /= p;
        ++e;
    }
    return e;
}

// Exact integer quaternions, for the enumeration back ends.
struct IQuat {
    std::array<i128, 4> c{};
};

struct IStructure {
    unsigned p;
    i128 v;
};

IStructure istructure(unsigned p) {
    return {p, p == 2 ? -1 : static_cast<i128>(structure_v(p))};
}

IQuat iq_mul(const IQuat& x, const IQuat& y, const IStructure& s) {
    const auto& a = x.c;
    const auto& b = y.c;
    IQuat z;
    if (s.p == 2) {
        z.c[0] = a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3];
        z.c[1] = a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2];
        z.c[2] = a[0] * b[2] + a[2] * b[0] + a[3] * b[1] - a[1] * b[3];
        z.c[3] = a[0] * b[3] + a[3] * b[0] + a[1] * b[2] - a[2] * b[1];
        return z;
    }
    i128 p = s.p, v = s.v;
    z.c[0] = a[0] * b[0] + v * a[1] * b[1] - p * a[2] * b[2] + p * v * a[3] * b[3];
    z.c[1] = a[0] * b[1] + a[1] * b[0] - p * a[2] * b[3] + p * a[3] * b[2];
    z.c[2] = a[0] * b[2] + a[2] * b[0] - v * a[1] * b[3] + v * a[3] * b[1];
    z.c[3] = a[0] * b[3] + a[3] * b[0] - a[1] * b[2] + a[2] * b[1];
    return z;
}

IQuat iq_conj(const IQuat& x) {
    return {{x.c[0], -x.c[1], -x.c[2], -x.c[3]}};
}

i128 iq_nrd(const IQuat& x, const IStructure& s) {
    return iq_mul(x, iq_conj(x), s).c[0];
}

IQuat iq_basis(int i) {
    IQuat e;
    e.c[static_cast<std::size_t>(i)] = 1;
    return e;
}

// kappa3 of an integral quaternion with v(nrd) = e, reduced mod m.
ResidueMatrix iq_kappa3(const IQuat& q, i128 n, int e, const IStructure& s, std::uint64_t m) {
    i128 pe = 1;
    for (int i = 0; i < e; ++i) pe *= s.p;
    std::uint64_t ninv = inverse_mod_u64(static_cast<std::uint64_t>(pos_mod(n / pe, m)), m);
    ResidueMatrix r;
    r.n = 3;
    IQuat qc = iq_conj(q);
    for (int j = 0; j < 3; ++j) {
        IQuat col = iq_mul(iq_mul(q, iq_basis(j + 1), s), qc, s);
        for (int i = 0; i < 3; ++i) {
            i128 x = col.c[static_cast<std::size_t>(i + 1)];
            if (x % pe != 0) throw ChartDomainExceeded("kappa3 entry is not integral");
            r.at(i, j) = static_cast<std::uint32_t>(pos_mod(pos_mod(x / pe, m) * ninv, m));
        }
    }
    return r;
}

// kappa4 of (a, b) with nrd(a) = nrd(b) a unit, reduced mod m.
ResidueMatrix iq_kappa4(const IQuat& a, const IQuat& b, i128 n, const IStructure& s, std::uint64_t m) {
    std::uint64_t ninv = inverse_mod_u64(static_cast<std::uint64_t>(pos_mod(n, m)), m);
    ResidueMatrix r;
    r.n = 4;
    IQuat bc = iq_conj(b);
    for (int j = 0; j < 4; ++j) {
        IQuat col = iq_mul(iq_mul(a, iq_basis(j), s), bc, s);
        for (int i = 0; i < 4; ++i) {
            i128 x = pos_mod(col.c[static_cast<std::size_t>(i)], m);
            r.at(i, j) = static_cast<std::uint32_t>(pos_mod(x * ninv, m));
        }
    }
    return r;
}

Rational sphere_normalizer(unsigned p) {
    return Rational(p, p - 1);
}

void check_modulus(unsigned p, int depth) {
    if (depth < 1) throw InvalidArgument("depth must be at least 1");
    if (depth * std::log2(static_cast<double>(p)) > 30) throw InvalidArgument("p^depth too large for residue keys");
}

}  // namespace

// ---------------------------------------------------------------------------
// Chart densities

ChartGroup so2_chart_group(unsigned p, const Rational& kappa, int prec) {
    PAdic k = PAdic::from_rational(p, kappa, prec);
    ChartGroup g{"so2", p, 1, prec, {PAdic::zero(p, prec)}, {}};
    g.compose = [k, p, prec](const std::vector<PAdic>& a, const std::vector<PAdic>& x) {
        return std::vector<PAdic>{(a[0] + x[0]) / (PAdic::one(p, prec) - k * a[0] * x[0])};
    };
    return g;
}

ChartGroup quaternion_chart_group(unsigned p, int prec) {
    PAdic z = PAdic::zero(p, prec);
    ChartGroup g{"quaternions", p, 4, prec, {PAdic::one(p, prec), z, z, z}, {}};
    g.compose = [p](const std::vector<PAdic>& a, const std::vector<PAdic>& x) {
        Quaternion r = quat_mul(make_quaternion(p, {a[0], a[1], a[2], a[3]}), make_quaternion(p, {x[0], x[1], x[2], x[3]}));
        return std::vector<PAdic>(r.q.begin(), r.q.end());
    };
    return g;
}

namespace {

QuaternionPair pair_from_chart(unsigned p, const std::vector<PAdic>& c, int sheet) {
    PAdic z = PAdic::zero(p, c[0].precision());
    Quaternion b = make_quaternion(p, {c[3], c[4], c[5], c[6]});
    Quaternion pure = make_quaternion(p, {z, c[0], c[1], c[2]});
    PAdic a0 = hensel_sqrt(nrd(b) - nrd(pure));
    if (sheet < 0) a0 = -a0;
    return {make_quaternion(p, {a0, c[0], c[1], c[2]}), b};
}

}  // namespace

ChartGroup pair_chart_group(unsigned p, int sheet, int prec) {
    PAdic z = PAdic::zero(p, prec), one = PAdic::one(p, prec);
    ChartGroup g{"pairs", p, 7, prec, {z, z, z, one, z, z, z}, {}};
    g.compose = [p, sheet](const std::vector<PAdic>& a, const std::vector<PAdic>& x) {
        QuaternionPair r = pair_mul(pair_from_chart(p, a, sheet), pair_from_chart(p, x, 1));
        return std::vector<PAdic>{r.xi.q[1], r.xi.q[2], r.xi.q[3], r.rho.q[0], r.rho.q[1], r.rho.q[2], r.rho.q[3]};
    };
    return g;
}

Rational chart_density(const ChartGroup& g, const std::vector<PAdic>& point) {
    if (static_cast<int>(point.size()) != g.dim) throw DimensionMismatch("chart point has the wrong dimension");
    unsigned p = g.p;
    int half = g.prec / 2;
    PAdic h = PAdic::from_rational(p, rational_pow(p, half), g.prec);
    PAdic two_h = PAdic::from_int(p, 2, g.prec) * h;
    std::vector<std::vector<PAdic>> rows(static_cast<std::size_t>(g.dim), std::vector<PAdic>(static_cast<std::size_t>(g.dim)));
    for (int k = 0; k < g.dim; ++k) {
        std::vector<PAdic> plus = g.identity, minus = g.identity;
        plus[static_cast<std::size_t>(k)] += h;
        minus[static_cast<std::size_t>(k)] -= h;
        std::vector<PAdic> fp = g.compose(point, plus), fm = g.compose(point, minus);
        for (int j = 0; j < g.dim; ++j)
            rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] =
                (fp[static_cast<std::size_t>(j)] - fm[static_cast<std::size_t>(j)]) / two_h;
    }
    PAdic det = determinant(PMatrix::from_rows(rows));
    if (det.is_zero()) throw SingularJacobian("the chart Jacobian vanishes to working precision");
    return rational_pow(p, det.valuation());
}

Rational quaternion_density(const Quaternion& x) {
    PAdic n = nrd(x);
    if (n.is_zero()) throw ZeroQuaternion("the density is undefined at 0");
    return rational_pow(x.p, 2 * n.valuation());
}

Rational pair_density(const QuaternionPair& g) {
    PAdic n = nrd(g.xi);
    if (n.is_zero() || g.xi.q[0].is_zero()) throw ChartDomainExceeded("the pair lies outside the identity chart");
    return rational_pow(g.xi.p, g.xi.q[0].valuation() + 3 * n.valuation());
}

// ---------------------------------------------------------------------------
// Fiber integrals

namespace {

int min_coordinate_valuation(const Quaternion& x) {
    int m = kInfiniteValuation;
    for (const auto& c : x.q)
        if (!c.is_zero()) m = std::min(m, c.valuation());
    return m;
}

template <class Arg, class Scale>
Rational fiber_sum(unsigned p, const std::function<Rational(const Arg&)>& f, const Arg& x, int center,
                   std::optional<FiberWindow> window, int depth, Scale scale) {
    if (depth < 1) throw InvalidArgument("fiber depth must be at least 1");
    FiberWindow w = window ? *window : FiberWindow{center - 2, center + 2};
    if (w.min_shell > w.max_shell) throw InvalidArgument("empty fiber window");
    std::uint64_t modulus = upow(p, depth);
    Rational cell = rational_pow(p, -depth);
    Rational sum = 0;
    for (int m = w.min_shell; m <= w.max_shell; ++m) {
        Rational shell = 0;
        for (std::uint64_t r = 1; r < modulus; ++r) {
            if (r % p == 0) continue;
            PAdic alpha = PAdic::from_rational(p, rational_pow(p, m) * Rational(static_cast<long long>(r)));
            shell += f(scale(alpha, x)) * cell;
        }
        if ((m == w.min_shell || m == w.max_shell) && shell != 0)
            throw DivergentFiber("shell " + std::to_string(m) + " at the edge of the window contributes");
        sum += shell;
    }
    return sum;
}

}  // namespace

Rational fiber_integrate(const std::function<Rational(const Quaternion&)>& f, const Quaternion& q,
                         std::optional<FiberWindow> window, int depth) {
    if (quat_is_zero(q)) throw ZeroQuaternion("the fiber of 0 is not a class");
    return fiber_sum<Quaternion>(q.p, f, q, -min_coordinate_valuation(q), window, depth,
                                 [](const PAdic& a, const Quaternion& x) { return quat_scale(a, x); });
}

Rational fiber_integrate_pair(const std::function<Rational(const QuaternionPair&)>& f, const QuaternionPair& g,
                              std::optional<FiberWindow> window, int depth) {
    if (quat_is_zero(g.xi) || quat_is_zero(g.rho)) throw ZeroQuaternion("the fiber of 0 is not a class");
    int center = -std::min(min_coordinate_valuation(g.xi), min_coordinate_valuation(g.rho));
    return fiber_sum<QuaternionPair>(g.xi.p, f, g, center, window, depth, [](const PAdic& a, const QuaternionPair& x) {
        return QuaternionPair{quat_scale(a, x.xi), quat_scale(a, x.rho)};
    });
}

Rational wmb_weight(const Quaternion& x) {
    return sphere_membership(x) ? sphere_normalizer(x.p) : Rational(0);
}

bool pair_sphere_membership(const QuaternionPair& g) {
    bool unit = false;
    for (const Quaternion* x : {&g.xi, &g.rho})
        for (const auto& c : x->q) {
            if (!c.is_integral()) return false;
            unit = unit || c.is_unit();
        }
    return unit;
}

Rational wmb_weight_pair(const QuaternionPair& g) {
    return pair_sphere_membership(g) ? sphere_normalizer(g.xi.p) : Rational(0);
}

// ---------------------------------------------------------------------------
// Cylinders and histograms

Rational MatrixCylinder::at(const ResidueMatrix& m) const {
    if (!constraints.empty()) {
        for (const auto& c : constraints)
            if (m.at(c.row, c.col) != c.residue) return 0;
        return weight;
    }
    auto it = values.find(m);
    return it == values.end() ? fallback : it->second;
}

MatrixCylinder constant_cylinder(unsigned p, int n, const Rational& c) {
    MatrixCylinder f;
    f.p = p;
    f.n = n;
    f.fallback = c;
    return f;
}

MatrixCylinder entry_cylinder(unsigned p, int n, int depth, std::vector<EntryConstraint> constraints) {
    if (constraints.empty()) throw InvalidArgument("an entry cylinder needs at least one constraint");
    std::uint64_t m = upow(p, depth);
    for (const auto& c : constraints)
        if (c.row < 0 || c.col < 0 || c.row >= n || c.col >= n || c.residue >= m)
            throw InvalidArgument("entry constraint out of range");
    MatrixCylinder f;
    f.p = p;
    f.n = n;
    f.depth = depth;
    f.constraints = std::move(constraints);
    return f;
}

Rational RotationHistogram::total() const {
    Rational t = 0;
    for (const auto& [k, m] : mass) t += m;
    return t;
}

namespace {

// Counts keyed by cell, bucketed by the exponent x of their weight p^-x.
using CountTable = std::unordered_map<ResidueMatrix, std::map<int, std::uint64_t>, ResidueMatrixHash>;

void merge_into(CountTable& dst, const CountTable& src) {
    for (const auto& [k, buckets] : src)
        for (const auto& [x, c] : buckets) dst[k][x] += c;
}

RotationHistogram finish(unsigned p, int n, int depth, const CountTable& counts, const Rational& scale) {
    RotationHistogram h{p, n, depth, {}};
    for (const auto& [k, buckets] : counts) {
        Rational m = 0;
        for (const auto& [x, c] : buckets) m += Rational(Integer(c)) * rational_pow(p, -x);
        h.mass.emplace(k, m * scale);
    }
    return h;
}

}  // namespace

RotationHistogram so3_histogram(unsigned p, int depth, unsigned threads) {
    if (!is_prime(p)) throw InvalidArgument("p must be prime");
    check_modulus(p, depth);
    IStructure s = istructure(p);
    std::uint64_t mk = upow(p, depth);
    int cap = depth + (p == 2 ? 2 : 1) + 3;
    std::uint64_t top = upow(p, 4);
    unsigned stripes = std::max(1u, threads);
    std::vector<CountTable> parts(stripes);

    parallel_for(stripes, stripes, [&](std::size_t stripe) {
        CountTable& out = parts[stripe];
        std::function<void(const IQuat&, int, i128)> refine = [&](const IQuat& q, int d, i128 pd) {
            i128 n = iq_nrd(q, s);
            if (pos_mod(n, pd) != 0) {
                int e = valuation_i128(n, p);
                if (d >= depth + e) {
                    out[iq_kappa3(q, n, e, s, mk)][4 * d - 2 * e] += 1;
                    return;
                }
            }
            if (d >= cap) throw DepthInsufficient("nrd valuation undetermined at depth " + std::to_string(cap));
            for (std::uint64_t t = 0; t < top; ++t) {
                IQuat c = q;
                std::uint64_t u = t;
                for (auto& x : c.c) {
                    x += pd * static_cast<i128>(u % p);
                    u /= p;
                }
                refine(c, d + 1, pd * p);
            }
        };
        for (std::uint64_t t = 1 + stripe; t < top; t += stripes) {
            IQuat q;
            std::uint64_t u = t;
            for (auto& x : q.c) {
                x = static_cast<i128>(u % p);
                u /= p;
            }
            refine(q, 1, p);
        }
    });
    CountTable all;
    for (const auto& part : parts) merge_into(all, part);
    return finish(p, 3, depth, all, sphere_normalizer(p));
}

RotationHistogram so4_histogram(unsigned p, int depth, unsigned threads) {
    if (!is_prime(p)) throw InvalidArgument("p must be prime");
    if (p == 2) throw ChartDomainExceeded("the identity chart of the pair group is only implemented for p > 2");
    check_modulus(p, depth);
    if (7 * depth * std::log2(static_cast<double>(p)) > 34) throw InvalidArgument("too many chart cells to enumerate");
    IStructure s = istructure(p);
    std::uint64_t mk = upow(p, depth);
    const i128 m = mk;

    std::vector<std::int64_t> root(mk, -1);
    for (std::uint64_t x = 1; x < mk; ++x)
        if (x % p) root[static_cast<std::size_t>(static_cast<std::uint64_t>(pos_mod(static_cast<i128>(x) * x, m)))] =
            static_cast<std::int64_t>(x);

    // Right translation by (i, i) carries the cells with a1 a unit and a0 in pZ
    // onto the identity chart; (j/p, j/p) does the same for a0, a1 both in pZ.
    auto exact_pair = [p](std::array<long long, 4> c) {
        Quaternion q = quaternion_from_ints(p, c);
        return QuaternionPair{q, q};
    };
    ResidueMatrix i_inv = so4_residue(pair_inv(exact_pair({0, 1, 0, 0})), depth);
    ResidueMatrix j_inv = so4_residue(pair_inv(exact_pair({0, 0, 1, 0})), depth);

    std::uint64_t outer = mk;  // split on a1
    std::uint64_t inner = upow(mk, 6);
    unsigned stripes = std::max(1u, threads);
    std::vector<CountTable> parts(stripes);
    parallel_for(stripes, stripes, [&](std::size_t stripe) {
        std::unordered_map<ResidueMatrix, std::uint64_t, ResidueMatrixHash> local;
        for (std::uint64_t a1 = stripe; a1 < outer; a1 += stripes) {
            bool a1_in_p = a1 % p == 0;
            for (std::uint64_t idx = 0; idx < inner; ++idx) {
                IQuat a, b;
                a.c[1] = a1;
                std::uint64_t u = idx;
                for (int i = 2; i < 4; ++i) {
                    a.c[static_cast<std::size_t>(i)] = static_cast<i128>(u % mk);
                    u /= mk;
                }
                for (auto& x : b.c) {
                    x = static_cast<i128>(u % mk);
                    u /= mk;
                }
                i128 nb = iq_nrd(b, s);
                a.c[0] = 0;
                i128 r = pos_mod(nb - iq_nrd(a, s), m);
                std::int64_t a0 = root[static_cast<std::size_t>(r)];
                if (a0 < 0) continue;
                for (int sheet : {1, -1}) {
                    a.c[0] = sheet * static_cast<i128>(a0);
                    ResidueMatrix k = iq_kappa4(a, b, nb, s, mk);
                    local[k] += 1;
                    local[residue_product(k, j_inv, mk)] += 1;
                    if (a1_in_p) {
                        ResidueMatrix ki = residue_product(k, i_inv, mk);
                        local[ki] += 1;
                        local[residue_product(ki, j_inv, mk)] += 1;
                    }
                }
            }
        }
        for (const auto& [k, c] : local) parts[stripe][k][7 * depth] += c;
    });
    CountTable all;
    for (const auto& part : parts) merge_into(all, part);
    return finish(p, 4, depth, all, sphere_normalizer(p));
}

const RotationHistogram& cached_histogram(int n, unsigned p, int depth, unsigned threads) {
    static std::mutex mutex;
    static std::map<std::tuple<int, unsigned, int>, std::unique_ptr<RotationHistogram>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_tuple(n, p, depth);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
    if (n != 3 && n != 4) throw UnsupportedDimension("histograms exist for SO(3) and SO(4)");
    auto h = std::make_unique<RotationHistogram>(n == 3 ? so3_histogram(p, depth, threads)
                                                        : so4_histogram(p, depth, threads));
    return *cache.emplace(key, std::move(h)).first->second;
}

Rational integrate_histogram(const RotationHistogram& h, const MatrixCylinder& f,
                             const std::optional<ResidueMatrix>& translate) {
    if (f.p != h.p) throw PrimeMismatch("cylinder function is over a different prime");
    if (f.n != h.n) throw DimensionMismatch("cylinder function has the wrong matrix size");
    if (f.depth != h.depth) throw InvalidArgument("cylinder depth differs from the histogram depth");
    std::uint64_t mk = upow(h.p, h.depth);
    Rational sum = 0;
    for (const auto& [k, m] : h.mass) {
        Rational v = f.at(translate ? residue_product(*translate, k, mk) : k);
        if (v != 0) sum += v * m;
    }
    return sum;
}

Rational so3_raw_mass(unsigned p) {
    return cached_histogram(3, p, 1).total();
}

Rational so4_raw_mass(unsigned p) {
    return cached_histogram(4, p, 1).total();
}

ResidueMatrix so3_residue(const Quaternion& x, int depth) {
    return reduce(kappa3(x).m, depth);
}

ResidueMatrix so4_residue(const QuaternionPair& g, int depth) {
    return reduce(kappa4(g).m, depth);
}

// ---------------------------------------------------------------------------
// Monte Carlo

namespace {

constexpr std::size_t kChunk = 4096;

template <class Draw>
std::vector<WeightedSample> chunked_samples(std::size_t n, std::uint64_t seed, unsigned threads, Draw draw) {
    std::vector<WeightedSample> out(n);
    std::size_t chunks = (n + kChunk - 1) / kChunk;
    parallel_for(chunks, std::max(1u, threads), [&](std::size_t c) {
        std::mt19937_64 rng = make_rng(seed, c);
        std::size_t end = std::min(n, (c + 1) * kChunk);
        for (std::size_t i = c * kChunk; i < end; ++i) out[i] = draw(rng);
    });
    return out;
}

double sphere_volume(unsigned p) {
    return 1.0 - std::pow(static_cast<double>(p), -4.0);
}

}  // namespace

std::vector<WeightedSample> so3_mc_samples(unsigned p, int depth, std::size_t n, std::uint64_t seed,
                                           unsigned threads) {
    check_modulus(p, depth);
    double scale = sphere_volume(p) * p / (p - 1.0);
    int prec = depth + 8;
    return chunked_samples(n, seed, threads, [=](std::mt19937_64& rng) {
        Quaternion x = sample_sphere(p, rng, prec);
        int e = nrd(x).valuation();
        return WeightedSample{so3_residue(x, depth), scale * std::pow(static_cast<double>(p), 2.0 * e)};
    });
}

std::vector<WeightedSample> so4_mc_samples(unsigned p, int depth, std::size_t n, std::uint64_t seed,
                                           unsigned threads) {
    if (p == 2) throw ChartDomainExceeded("the pair sampler weights are only derived for p > 2");
    check_modulus(p, depth);
    double scale = sphere_volume(p) * (1.0 + 1.0 / p) * p / (p - 1.0);
    int prec = depth + 10;
    return chunked_samples(n, seed, threads, [=](std::mt19937_64& rng) {
        QuaternionPair g = pair_sample(p, rng, prec);
        int e = nrd(g.xi).valuation();
        return WeightedSample{so4_residue(g, depth), scale * std::pow(static_cast<double>(p), 2.0 * e)};
    });
}

Estimate mc_estimate(const std::vector<WeightedSample>& samples, const MatrixCylinder& f, std::uint64_t seed,
                     const std::optional<ResidueMatrix>& translate) {
    if (samples.empty()) throw InvalidArgument("no samples");
    std::uint64_t mk = upow(f.p, f.depth);
    std::map<ResidueMatrix, double> memo;
    double sum = 0, sum_sq = 0;
    for (const auto& s : samples) {
        ResidueMatrix k = translate ? residue_product(*translate, s.key, mk) : s.key;
        auto it = memo.find(k);
        if (it == memo.end()) it = memo.emplace(k, f.at(k).convert_to<double>()).first;
        double x = s.weight * it->second;
        sum += x;
        sum_sq += x * x;
    }
    double n = static_cast<double>(samples.size());
    double mean = sum / n;
    double var = n > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1)) : 0.0;
    return {mean, std::sqrt(var / n), samples.size(), seed};
}

// ---------------------------------------------------------------------------
// Front end

namespace {

IntegrationResult integrate_rotation(int n, const MatrixCylinder& f, const IntegrationParams& params) {
    if (f.n != n) throw DimensionMismatch("cylinder function has the wrong matrix size");
    IntegrationResult r;
    r.depth = f.depth;
    Rational mass = n == 3 ? so3_raw_mass(f.p) : so4_raw_mass(f.p);
    if (params.mode == Mode::Exact) {
        Rational v = integrate_histogram(cached_histogram(n, f.p, f.depth, params.threads), f);
        r.value = params.normalized ? v / mass : v;
        return r;
    }
    auto samples = n == 3 ? so3_mc_samples(f.p, f.depth, params.samples, params.seed, params.threads)
                          : so4_mc_samples(f.p, f.depth, params.samples, params.seed, params.threads);
    Estimate e = mc_estimate(samples, f, params.seed);
    if (params.normalized) {
        double m = mass.convert_to<double>();
        e.value /= m;
        e.stderr_ /= m;
    }
    r.estimate = e;
    r.validated_by_invariance = n == 4;
    return r;
}

}  // namespace

IntegrationResult integrate_so3(const MatrixCylinder& f, const IntegrationParams& params) {
    return integrate_rotation(3, f, params);
}

IntegrationResult integrate_so4(const MatrixCylinder& f, const IntegrationParams& params) {
    return integrate_rotation(4, f, params);
}

Rational haar_mass(const std::string& group, unsigned p, const Rational& kappa) {
    if (group == "so2") return so2_total_mass(p, kappa);
    if (group == "so3") return so3_raw_mass(p);
    if (group == "so4") return so4_raw_mass(p);
    throw InvalidArgument("unknown group '" + group + "' (expected so2, so3 or so4)");
}

// ---------------------------------------------------------------------------
// Invariance

namespace {

void add_deviation(InvarianceReport& r, const Rational& v) {
    r.translated.push_back(v);
    r.deviations.push_back(v - r.base);
    r.invariant = r.invariant && v == r.base;
}

}  // namespace

InvarianceReport so2_invariance(const So2Integrator& integ, const So2Cylinder& f,
                                const std::vector<So2Translation>& translations) {
    InvarianceReport r;
    r.base = integ.integrate(f);
    for (const auto& t : translations) add_deviation(r, integ.integrate(f, t));
    return r;
}

InvarianceReport so3_invariance(const MatrixCylinder& f, const std::vector<Quaternion>& translations,
                                unsigned threads) {
    const RotationHistogram& h = cached_histogram(3, f.p, f.depth, threads);
    InvarianceReport r;
    r.base = integrate_histogram(h, f);
    for (const auto& x : translations) add_deviation(r, integrate_histogram(h, f, so3_residue(conj(x), f.depth)));
    return r;
}

InvarianceReport so4_invariance(const MatrixCylinder& f, const std::vector<QuaternionPair>& translations,
                                unsigned threads) {
    const RotationHistogram& h = cached_histogram(4, f.p, f.depth, threads);
    InvarianceReport r;
    r.base = integrate_histogram(h, f);
    for (const auto& g : translations)
        add_deviation(r, integrate_histogram(h, f, so4_residue({conj(g.xi), conj(g.rho)}, f.depth)));
    return r;
}

McInvarianceReport so3_mc_invariance(const MatrixCylinder& f, const std::vector<Quaternion>& translations,
                                     std::size_t samples, std::uint64_t seed, unsigned threads) {
    McInvarianceReport r;
    r.exact = integrate_histogram(cached_histogram(3, f.p, f.depth, threads), f);
    auto draws = so3_mc_samples(f.p, f.depth, samples, seed, threads);
    double exact = r.exact.convert_to<double>();
    for (const auto& x : translations) {
        Estimate e = mc_estimate(draws, f, seed, so3_residue(conj(x), f.depth));
        double sigma = e.stderr_ > 0 ? std::abs(e.value - exact) / e.stderr_ : (e.value == exact ? 0.0 : INFINITY);
        r.estimates.push_back(e);
        r.sigmas.push_back(sigma);
        r.max_sigma = std::max(r.max_sigma, sigma);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Change of variables

std::vector<Integer> PolyMap::eval(const std::vector<Integer>& x) const {
    std::vector<Integer> y;
    y.reserve(components.size());
    for (const auto& comp : components) {
        Integer s = 0;
        for (const auto& m : comp) {
            Integer t = m.coeff;
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < m.exps[static_cast<std::size_t>(i)]; ++k) t *= x[static_cast<std::size_t>(i)];
            s += t;
        }
        y.push_back(s);
    }
    return y;
}

std::vector<std::vector<Integer>> PolyMap::jacobian(const std::vector<Integer>& x) const {
    std::vector<std::vector<Integer>> j(components.size(), std::vector<Integer>(static_cast<std::size_t>(n), 0));
    for (std::size_t r = 0; r < components.size(); ++r)
        for (const auto& m : components[r])
            for (int c = 0; c < n; ++c) {
                int e = m.exps[static_cast<std::size_t>(c)];
                if (e == 0) continue;
                Integer t = Integer(m.coeff) * e;
                for (int i = 0; i < n; ++i) {
                    int k = m.exps[static_cast<std::size_t>(i)] - (i == c ? 1 : 0);
                    for (int l = 0; l < k; ++l) t *= x[static_cast<std::size_t>(i)];
                }
                j[r][static_cast<std::size_t>(c)] += t;
            }
    return j;
}

PolyMap linear_map(const std::vector<std::vector<long long>>& a) {
    PolyMap f;
    f.n = static_cast<int>(a.size());
    for (const auto& row : a) {
        if (static_cast<int>(row.size()) != f.n) throw DimensionMismatch("linear map must be square");
        std::vector<Monomial> comp;
        for (int j = 0; j < f.n; ++j) {
            if (row[static_cast<std::size_t>(j)] == 0) continue;
            Monomial m{row[static_cast<std::size_t>(j)], std::vector<int>(static_cast<std::size_t>(f.n), 0)};
            m.exps[static_cast<std::size_t>(j)] = 1;
            comp.push_back(m);
        }
        f.components.push_back(comp);
    }
    return f;
}

namespace {

Integer integer_det(std::vector<std::vector<Integer>> a) {
    std::size_t n = a.size();
    if (n == 1) return a[0][0];
    Integer d = 0;
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<std::vector<Integer>> minor;
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<Integer> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != c) row.push_back(a[r][k]);
            minor.push_back(row);
        }
        Integer t = a[0][c] * integer_det(minor);
        d += (c % 2 == 0) ? t : Integer(-t);
    }
    return d;
}

}  // namespace

PolyMap random_unit_jacobian_map(unsigned p, int n, std::mt19937_64& rng) {
    std::uniform_int_distribution<long long> small(-5, 5), tiny(-3, 3);
    std::uniform_int_distribution<long long> shift(0, static_cast<long long>(p * p) - 1);
    std::vector<std::vector<long long>> a;
    for (;;) {
        a.assign(static_cast<std::size_t>(n), std::vector<long long>(static_cast<std::size_t>(n)));
        std::vector<std::vector<Integer>> ai(static_cast<std::size_t>(n), std::vector<Integer>(static_cast<std::size_t>(n)));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) ai[i][j] = a[i][j] = small(rng);
        if (integer_det(ai) % p != 0) break;
    }
    PolyMap f = linear_map(a);
    for (int i = 0; i < n; ++i) {
        auto& comp = f.components[static_cast<std::size_t>(i)];
        for (int j = 0; j < n; ++j)
            for (int k = j; k < n; ++k) {
                long long c = tiny(rng);
                if (c == 0) continue;
                Monomial m{c * static_cast<long long>(p), std::vector<int>(static_cast<std::size_t>(n), 0)};
                m.exps[static_cast<std::size_t>(j)] += 1;
                m.exps[static_cast<std::size_t>(k)] += 1;
                comp.push_back(m);
            }
        comp.push_back({shift(rng), std::vector<int>(static_cast<std::size_t>(n), 0)});
    }
    return f;
}

PolyMap quaternion_left_multiplication(const Quaternion& x) {
    PMatrix l = left_translation_jacobian(x);
    std::vector<std::vector<long long>> a(4, std::vector<long long>(4));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const PAdic& e = l(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            if (!e.is_exact()) throw InvalidArgument("left multiplication map needs an exact integer quaternion");
            Rational q = *e.exact_value();
            if (mp::denominator(q) != 1) throw InvalidArgument("left multiplication map needs integer coordinates");
            a[i][j] = mp::numerator(q).convert_to<long long>();
        }
    return linear_map(a);
}

Rational ResidueFunction::at(const std::vector<std::uint64_t>& residues, std::uint64_t modulus) const {
    std::size_t idx = 0, stride = 1;
    for (int i = 0; i < n; ++i) {
        idx += static_cast<std::size_t>(residues[static_cast<std::size_t>(i)] % modulus) * stride;
        stride *= modulus;
    }
    return values.at(idx);
}

ResidueFunction random_residue_function(unsigned p, int n, int depth, std::mt19937_64& rng) {
    ResidueFunction f{n, depth, {}};
    std::uniform_int_distribution<int> dist(0, 9);
    f.values.resize(upow(upow(p, depth), n));
    for (auto& v : f.values) v = dist(rng);
    return f;
}

CovReport change_of_variables_check(unsigned p, const PolyMap& xi, const CylinderRegion& u,
                                    const ResidueFunction& f, int depth) {
    int n = xi.n;
    if (static_cast<int>(u.base.size()) != n || f.n != n || static_cast<int>(xi.components.size()) != n)
        throw DimensionMismatch("map, region and function dimensions differ");
    if (f.depth > depth) throw InvalidArgument("function depth exceeds the enumeration depth");
    if (u.radius > depth || u.radius < 0) throw InvalidArgument("region radius must lie in [0, depth]");
    std::uint64_t fmod = upow(p, f.depth);
    std::uint64_t cells_per_axis = upow(p, depth - u.radius);
    std::uint64_t total = upow(cells_per_axis, n);
    Integer pr = Integer(upow(p, u.radius));
    Integer pd = Integer(upow(p, depth));

    CovReport r;
    std::optional<int> e_common;
    std::set<std::vector<std::uint64_t>> image;
    Integer out_mod;
    std::vector<std::uint64_t> res(static_cast<std::size_t>(n));
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::vector<Integer> x(static_cast<std::size_t>(n));
        std::uint64_t t = idx;
        for (int i = 0; i < n; ++i) {
            x[static_cast<std::size_t>(i)] = Integer(u.base[static_cast<std::size_t>(i)]) + pr * (t % cells_per_axis);
            t /= cells_per_axis;
        }
        auto jac = xi.jacobian(x);
        Integer det = integer_det(jac);
        if (det == 0) throw SingularJacobian("the Jacobian vanishes at a cell representative");
        int e = valuation_of(det, p);
        if (!e_common) {
            e_common = e;
            if (e > depth) throw InvalidArgument("Jacobian valuation exceeds the enumeration depth");
            out_mod = Integer(upow(p, depth + e));
        } else if (*e_common != e) {
            throw InvalidArgument("the Jacobian valuation is not constant on the region");
        }
        std::vector<Integer> y = xi.eval(x);
        for (int i = 0; i < n; ++i) {
            Integer v = y[static_cast<std::size_t>(i)] % Integer(fmod);
            if (v < 0) v += fmod;
            res[static_cast<std::size_t>(i)] = v.convert_to<std::uint64_t>();
        }
        r.rhs += f.at(res, fmod) * rational_pow(p, -e - n * depth);

        std::uint64_t pe = upow(p, e);
        std::uint64_t shifts = upow(pe, n);
        for (std::uint64_t s = 0; s < shifts; ++s) {
            std::vector<Integer> tv(static_cast<std::size_t>(n));
            std::uint64_t w = s;
            for (int i = 0; i < n; ++i) {
                tv[static_cast<std::size_t>(i)] = w % pe;
                w /= pe;
            }
            std::vector<std::uint64_t> cell(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) {
                Integer v = y[static_cast<std::size_t>(i)];
                for (int j = 0; j < n; ++j) v += pd * jac[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                                                 tv[static_cast<std::size_t>(j)];
                v %= out_mod;
                if (v < 0) v += out_mod;
                cell[static_cast<std::size_t>(i)] = v.convert_to<std::uint64_t>();
            }
            image.insert(cell);
        }
    }
    r.jacobian_valuation = e_common.value_or(0);
    Rational cell_mass = rational_pow(p, -n * (depth + r.jacobian_valuation));
    for (const auto& y : image) r.lhs += f.at(y, fmod) * cell_mass;
    r.equal = r.lhs == r.rhs;
    return r;
}

}  // namespace padicrot
