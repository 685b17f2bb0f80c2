#include <gtest/gtest.h>

#include "oracles.hpp"
#include "padicrot/padic.hpp"
#include "padicrot/parallel.hpp"

using namespace padicrot;

namespace {

const unsigned kPrimes[] = {2, 3, 5, 7};

PAdic random_unit(unsigned p, std::mt19937_64& rng, int prec = kDefaultPrecision) {
    for (;;) {
        PAdic x = sample_uniform_Zp(p, rng, prec);
        if (x.is_unit()) return x;
    }
}

TEST(PAdic, RingAxiomsOnRandomElements) {
    for (unsigned p : kPrimes) {
        auto rng = make_rng(11, p);
        for (int i = 0; i < 500; ++i) {
            PAdic a = sample_uniform_Zp(p, rng), b = sample_uniform_Zp(p, rng), c = sample_uniform_Zp(p, rng);
            EXPECT_TRUE(a * (b + c) == a * b + a * c);
            EXPECT_TRUE((a * b) * c == a * (b * c));
            EXPECT_TRUE(a + b == b + a);
            EXPECT_TRUE((a - b) + b == a);
        }
    }
}

TEST(PAdic, InverseOfUnitsAndNonUnits) {
    for (unsigned p : kPrimes) {
        auto rng = make_rng(12, p);
        for (int i = 0; i < 300; ++i) {
            PAdic u = random_unit(p, rng);
            PAdic x = u * PAdic::from_int(p, static_cast<long long>(p) * p);
            EXPECT_TRUE(u * u.inv() == PAdic::one(p));
            EXPECT_TRUE(x * x.inv() == PAdic::one(p));
            EXPECT_EQ(x.inv().valuation(), -2);
        }
        EXPECT_THROW(PAdic::zero(p).inv(), DivisionByZero);
    }
}

TEST(PAdic, ValuationAndAbsoluteValue) {
    EXPECT_EQ(PAdic::from_rational(7, Rational(49, 3)).valuation(), 2);
    EXPECT_EQ(PAdic::from_rational(7, Rational(3, 49)).valuation(), -2);
    EXPECT_EQ(PAdic::from_rational(2, Rational(3, 8)).abs(), Rational(8));
    EXPECT_EQ(PAdic::from_int(5, 75).abs(), Rational(1, 25));
    EXPECT_EQ(PAdic::zero(3).abs(), Rational(0));
}

TEST(PAdic, ExactRationalsRoundTrip) {
    for (unsigned p : kPrimes) {
        for (long long num : {-17LL, -1LL, 1LL, 2LL, 49LL, 1000LL})
            for (long long den : {1LL, 3LL, 7LL, 8LL}) {
                Rational q(num, den);
                EXPECT_EQ(PAdic::from_rational(p, q).to_rational(), q);
            }
    }
}

TEST(PAdic, DigitsOfMinusOne) {
    PAdic m = PAdic::from_int(5, -1, 6);
    std::vector<unsigned> d = m.digits();
    ASSERT_EQ(d.size(), 6u);
    for (unsigned x : d) EXPECT_EQ(x, 4u);
}

TEST(PAdic, CompactFormParsesBack) {
    for (unsigned p : kPrimes) {
        auto rng = make_rng(13, p);
        for (int i = 0; i < 100; ++i) {
            PAdic x = random_unit(p, rng) * PAdic::from_rational(p, rational_pow(p, static_cast<int>(rng() % 7) - 3));
            PAdic y = PAdic::parse(p, x.to_compact());
            EXPECT_TRUE(x == y) << x.to_compact();
            EXPECT_EQ(x.valuation(), y.valuation());
        }
    }
    EXPECT_THROW(PAdic::parse(5, "0:[1,2]@7"), PrimeMismatch);
    EXPECT_THROW(PAdic::parse(5, "0:[1,7]@5"), InvalidArgument);
}

TEST(PAdic, BigOTermsAreInexactZeros) {
    PAdic z = PAdic::parse(3, "O(3^5)");
    EXPECT_TRUE(z.is_zero());
    EXPECT_FALSE(z.is_exact());
    EXPECT_EQ(z.absprec(), 5);
    PAdic x = PAdic::from_int(3, 1) + z;
    EXPECT_EQ(x.absprec(), 5);
}

TEST(PAdic, PrimeMismatchIsReported) {
    EXPECT_THROW(PAdic::one(3) + PAdic::one(5), PrimeMismatch);
    EXPECT_THROW(PAdic::zero(4), InvalidArgument);
}

// Brute force modulo p^2 (and p^4 for p = 2) against Hensel lifting.
TEST(HenselSqrt, AgreesWithBruteForceModuloSmallPowers) {
    for (unsigned p : kPrimes) {
        auto rng = make_rng(14, p);
        long long mod = static_cast<long long>(oracle::upow(p, p == 2 ? 4 : 2));
        for (int i = 0; i < 200; ++i) {
            PAdic t = sample_uniform_Zp(p, rng);
            PAdic x = p == 2 ? PAdic::one(p) + PAdic::from_int(p, 8) * t : PAdic::one(p) + PAdic::from_int(p, p) * t;
            PAdic r = hensel_sqrt(x);
            EXPECT_TRUE(r * r == x);
            long long xr = static_cast<long long>(x.residue_u64(p == 2 ? 4 : 2));
            long long rr = static_cast<long long>(r.residue_u64(p == 2 ? 3 : 2));
            auto roots = oracle::sqrt_mod(xr, mod);
            bool found = false;
            for (long long y : roots) found = found || y % static_cast<long long>(oracle::upow(p, p == 2 ? 3 : 2)) == rr;
            EXPECT_TRUE(found) << "p=" << p << " x=" << xr;
        }
    }
}

TEST(HenselSqrt, SquaresOfRandomElements) {
    for (unsigned p : kPrimes) {
        auto rng = make_rng(15, p);
        for (int i = 0; i < 300; ++i) {
            PAdic y = random_unit(p, rng) * PAdic::from_rational(p, rational_pow(p, static_cast<int>(rng() % 5) - 2));
            PAdic r = hensel_sqrt(y * y);
            EXPECT_TRUE(r * r == y * y);
            EXPECT_TRUE(r == y || r == -y);
        }
    }
}

TEST(HenselSqrt, RejectsNonSquares) {
    EXPECT_THROW(hensel_sqrt(PAdic::from_int(7, 3)), NotASquare);
    EXPECT_THROW(hensel_sqrt(PAdic::from_int(7, 7)), NotASquare);
    EXPECT_THROW(hensel_sqrt(PAdic::from_int(2, 5)), NotASquare);
    EXPECT_THROW(hensel_sqrt(PAdic::from_int(2, 3)), NotASquare);
    EXPECT_TRUE(hensel_sqrt(PAdic::zero(5)).is_zero());
}

TEST(SquareClass, GroupStructure) {
    EXPECT_EQ(all_square_classes(7).size(), 4u);
    EXPECT_EQ(all_square_classes(2).size(), 8u);
    for (unsigned p : kPrimes) {
        auto classes = all_square_classes(p);
        for (const auto& a : classes) {
            EXPECT_EQ(class_mul(a, a).rep, 1);
            for (const auto& b : classes) EXPECT_EQ(class_mul(a, b), class_mul(b, a));
        }
    }
}

TEST(SquareClass, ClassOfProductIsProductOfClasses) {
    for (unsigned p : kPrimes) {
        auto rng = make_rng(16, p);
        for (int i = 0; i < 300; ++i) {
            PAdic a = random_unit(p, rng) * PAdic::from_int(p, rng() % 2 ? p : 1);
            PAdic b = random_unit(p, rng) * PAdic::from_int(p, rng() % 2 ? p : 1);
            EXPECT_EQ(square_class(a * b), class_mul(square_class(a), square_class(b)));
            EXPECT_TRUE(is_square(a * a));
        }
    }
    EXPECT_THROW(square_class(PAdic::zero(3)), ZeroHasNoClass);
}

TEST(SquareClass, RepresentativesAreTheirOwnClass) {
    for (unsigned p : kPrimes)
        for (const auto& c : all_square_classes(p)) EXPECT_EQ(square_class(PAdic::from_int(p, c.rep)), c);
}

TEST(Measure, BallsAndShells) {
    EXPECT_EQ(measure_ball(Ball{PAdic::zero(5), 0}), Rational(1));
    EXPECT_EQ(measure_ball(Ball{PAdic::zero(5), -2}), Rational(1, 25));
    EXPECT_EQ(measure_ball(Ball{PAdic::one(3), 2}), Rational(9));
    EXPECT_EQ(mult_haar_measure(7, 0), Rational(6, 7));
    Ball b{PAdic::from_int(3, 4), -1};
    EXPECT_TRUE(b.contains(PAdic::from_int(3, 7)));
    EXPECT_FALSE(b.contains(PAdic::from_int(3, 5)));
}

TEST(Measure, ResidueEnumerationCoversTheRing) {
    EXPECT_EQ(enumerate_residues(3, 3).size(), 27u);
    std::uint64_t count = 0;
    for (auto r : enumerate_residues(5, 2)) {
        EXPECT_EQ(r, count);
        ++count;
    }
    EXPECT_EQ(count, 25u);
}

TEST(Sampling, UniformDigitsAreBalanced) {
    auto rng = make_rng(17, 0);
    std::array<int, 5> counts{};
    const int n = 20000;
    for (int i = 0; i < n; ++i) ++counts[sample_uniform_Zp(5, rng).residue_u64(1)];
    for (int c : counts) EXPECT_NEAR(c, n / 5.0, 5 * std::sqrt(n * 0.2 * 0.8));
}

TEST(Sampling, SeedsAreReproducible) {
    auto a = make_rng(99, 3), b = make_rng(99, 3), c = make_rng(99, 4);
    EXPECT_EQ(a(), b());
    EXPECT_NE(make_rng(99, 3)(), c());
}

}  // namespace
