#include <gtest/gtest.h>

#include "oracles.hpp"
#include "padicrot/parallel.hpp"
#include "padicrot/quaternion.hpp"

using namespace padicrot;

namespace {

const unsigned kPrimes[] = {2, 3, 5, 7};

long long oracle_v(unsigned p) {
    if (p == 2) return -1;
    return p % 4 == 3 ? -1 : -oracle::first_nonresidue(p);
}

std::array<long long, 4> small_coords(std::mt19937_64& rng) {
    std::array<long long, 4> c{};
    for (auto& x : c) x = static_cast<long long>(rng() % 41) - 20;
    if (c == std::array<long long, 4>{}) c[0] = 1;
    return c;
}

std::array<Rational, 4> as_rationals(const std::array<long long, 4>& c) {
    return {Rational(c[0]), Rational(c[1]), Rational(c[2]), Rational(c[3])};
}

TEST(Quaternion, BasisRelations) {
    for (unsigned p : {3u, 5u, 7u}) {
        auto i = quaternion_from_ints(p, {0, 1, 0, 0}), j = quaternion_from_ints(p, {0, 0, 1, 0}),
             k = quaternion_from_ints(p, {0, 0, 0, 1});
        PAdic v = PAdic::from_int(p, oracle_v(p)), pp = PAdic::from_int(p, p);
        EXPECT_TRUE(quat_equal(quat_mul(i, i), quat_scalar(p, v)));
        EXPECT_TRUE(quat_equal(quat_mul(j, j), quat_scalar(p, -pp)));
        EXPECT_TRUE(quat_equal(quat_mul(k, k), quat_scalar(p, pp * v)));
        EXPECT_TRUE(quat_equal(quat_mul(i, j), quat_scale(PAdic::from_int(p, -1), k)));
        EXPECT_TRUE(quat_equal(quat_mul(j, i), k));
    }
    auto i = quaternion_from_ints(2, {0, 1, 0, 0}), j = quaternion_from_ints(2, {0, 0, 1, 0}),
         k = quaternion_from_ints(2, {0, 0, 0, 1});
    EXPECT_TRUE(quat_equal(quat_mul(i, j), k));
    EXPECT_TRUE(quat_equal(quat_mul(k, k), quat_scalar(2, PAdic::from_int(2, -1))));
}

// Products of integer quaternions against the (a, b)-algebra table.
TEST(Quaternion, MultiplicationMatchesAlgebraOracle) {
    for (unsigned p : kPrimes) {
        auto basis = oracle::LibraryBasis<Rational>::for_prime(p, oracle_v(p));
        auto rng = make_rng(41, p);
        for (int n = 0; n < 500; ++n) {
            auto a = small_coords(rng), b = small_coords(rng);
            auto expect = basis.mul(as_rationals(a), as_rationals(b));
            Quaternion got = quat_mul(quaternion_from_ints(p, a), quaternion_from_ints(p, b));
            for (int t = 0; t < 4; ++t) EXPECT_EQ(got.q[t].to_rational(), expect[t]);
            EXPECT_EQ(nrd(quaternion_from_ints(p, a)).to_rational(), basis.nrd(as_rationals(a)));
        }
    }
}

TEST(Quaternion, ReducedNormIsTheNormForm) {
    EXPECT_EQ(nrd(quaternion_from_ints(7, {1, 1, 0, 0})).to_rational(), Rational(2));
    EXPECT_EQ(nrd(quaternion_from_ints(7, {0, 0, 1, 1})).to_rational(), Rational(14));
    EXPECT_EQ(nrd(quaternion_from_ints(2, {1, 1, 1, 1})).to_rational(), Rational(4));
}

TEST(Quaternion, NormIsMultiplicativeAndInverseWorks) {
    for (unsigned p : kPrimes) {
        auto rng = make_rng(42, p);
        for (int n = 0; n < 500; ++n) {
            Quaternion x = sample_sphere(p, rng), y = sample_sphere(p, rng);
            EXPECT_TRUE(nrd(quat_mul(x, y)) == nrd(x) * nrd(y));
            Quaternion e = quat_mul(x, quat_inv(x));
            EXPECT_TRUE(e.q[0] == PAdic::one(p));
            for (int t = 1; t < 4; ++t) EXPECT_TRUE(e.q[t].is_zero());
            EXPECT_TRUE(quat_equal(conj(quat_mul(x, y)), quat_mul(conj(y), conj(x))));
        }
        EXPECT_THROW(quat_inv(quaternion_from_ints(p, {0, 0, 0, 0})), DivisionByZero);
    }
}

TEST(Quaternion, TwoByTwoRepresentationIsMultiplicative) {
    for (unsigned p : kPrimes) {
        auto rng = make_rng(43, p);
        for (int n = 0; n < 300; ++n) {
            Quaternion x = sample_sphere(p, rng), y = sample_sphere(p, rng);
            QuadExtMatrix lhs = matrix_rep(quat_mul(x, y)), rhs = quadext_mul(matrix_rep(x), matrix_rep(y));
            for (int t = 0; t < 4; ++t) EXPECT_TRUE(lhs[t] == rhs[t]);
            QuadExtElem d = quadext_det(matrix_rep(x));
            EXPECT_TRUE(d.a == nrd(x));
            EXPECT_TRUE(d.b.is_zero());
        }
    }
}

TEST(Quaternion, LeftTranslationJacobianDeterminant) {
    for (unsigned p : kPrimes) {
        auto rng = make_rng(44, p);
        for (int n = 0; n < 300; ++n) {
            Quaternion x = sample_sphere(p, rng);
            EXPECT_TRUE(jac_det(x) == nrd(x) * nrd(x));
            EXPECT_TRUE(determinant(right_translation_matrix(x)) == nrd(x) * nrd(x));
        }
    }
}

TEST(Quaternion, StructureMismatch) {
    EXPECT_THROW(quat_mul(quaternion_from_ints(3, {1, 0, 0, 0}), quaternion_from_ints(5, {1, 0, 0, 0})),
                 StructureMismatch);
    EXPECT_THROW(make_quaternion(7, {PAdic::one(5), PAdic(), PAdic(), PAdic()}), PrimeMismatch);
}

TEST(Sphere, SamplesAreOnTheSphere) {
    for (unsigned p : kPrimes) {
        auto rng = make_rng(45, p);
        for (int n = 0; n < 300; ++n) EXPECT_TRUE(sphere_membership(sample_sphere(p, rng)));
        EXPECT_FALSE(sphere_membership(quaternion_from_ints(p, {static_cast<long long>(p), 0, 0, 0})));
        EXPECT_FALSE(sphere_membership(quaternion_from_rationals(p, {Rational(1, p), 0, 0, 0})));
    }
}

TEST(Sphere, PrescribedNormClass) {
    for (unsigned p : kPrimes) {
        auto rng = make_rng(46, p);
        for (const auto& c : all_square_classes(p)) {
            Quaternion x = sphere_eps(c, rng);
            EXPECT_TRUE(nrd(x) == PAdic::from_int(p, c.rep));
        }
    }
}

// Every square class occurs as a reduced norm from S.
TEST(Sphere, NormClassCensus) {
    for (unsigned p : kPrimes) {
        auto rng = make_rng(47, p);
        auto counts = nrd_class_census(p, 4000, rng);
        EXPECT_EQ(counts.size(), p == 2 ? 8u : 4u);
    }
}

TEST(Pairs, ConstructionChecksNorms) {
    auto a = quaternion_from_ints(7, {1, 1, 0, 0}), b = quaternion_from_ints(7, {1, 0, 0, 0});
    EXPECT_THROW(make_quaternion_pair(a, b), NormMismatch);
    EXPECT_THROW(make_quaternion_pair(quaternion_from_ints(7, {0, 0, 0, 0}), b), ZeroQuaternion);
    auto g = make_quaternion_pair(a, quaternion_from_ints(7, {1, -1, 0, 0}));
    EXPECT_TRUE(nrd(g.xi) == nrd(g.rho));
}

TEST(Pairs, SamplesFormAGroup) {
    for (unsigned p : kPrimes) {
        auto rng = make_rng(48, p);
        for (int n = 0; n < 200; ++n) {
            QuaternionPair x = pair_sample(p, rng), y = pair_sample(p, rng);
            EXPECT_TRUE(nrd(x.xi) == nrd(x.rho));
            EXPECT_TRUE(sphere_membership(x.xi));
            QuaternionPair xy = pair_mul(x, y);
            EXPECT_TRUE(nrd(xy.xi) == nrd(xy.rho));
            QuaternionPair e = pair_mul(x, pair_inv(x));
            EXPECT_TRUE(e.xi.q[0] == PAdic::one(p));
            EXPECT_TRUE(e.rho.q[0] == PAdic::one(p));
        }
    }
}

}  // namespace
