#include <gtest/gtest.h>

#include "padicrot/parallel.hpp"
#include "padicrot/quadform.hpp"

using namespace padicrot;

namespace {

const unsigned kPrimes[] = {2, 3, 5, 7};

std::vector<PAdic> primitive_vector(unsigned p, std::size_t n, std::mt19937_64& rng) {
    for (;;) {
        std::vector<PAdic> x;
        bool unit = false;
        for (std::size_t i = 0; i < n; ++i) {
            x.push_back(sample_uniform_Zp(p, rng));
            unit = unit || x.back().is_unit();
        }
        if (unit) return x;
    }
}

TEST(Catalog, SizesPerPrime) {
    EXPECT_EQ(catalog(7, 2).size(), 3u);
    EXPECT_EQ(catalog(2, 2).size(), 7u);
    EXPECT_EQ(catalog(5, 3).size(), 1u);
    EXPECT_EQ(catalog(3, 4).size(), 1u);
    EXPECT_THROW(catalog(3, 5), UnsupportedDimension);
}

TEST(Catalog, KappaValuesMatchBinaryForms) {
    for (unsigned p : kPrimes) {
        auto forms = catalog(p, 2);
        auto kappas = kappa_catalog(p);
        ASSERT_EQ(forms.size(), kappas.size());
        for (std::size_t i = 0; i < forms.size(); ++i) {
            EXPECT_TRUE(forms[i].coeffs[1] / forms[i].coeffs[0] == PAdic::from_rational(p, kappas[i]));
        }
    }
}

TEST(Catalog, NormFormIsTheQuaternaryEntry) {
    for (unsigned p : kPrimes) {
        auto q = catalog(p, 4)[0], n = norm_form(p);
        for (int i = 0; i < 4; ++i) EXPECT_TRUE(q.coeffs[i] == n.coeffs[i]);
        auto pure = pure_norm_form(p);
        ASSERT_EQ(pure.dim(), 3u);
        for (int i = 0; i < 3; ++i) EXPECT_TRUE(pure.coeffs[i] == n.coeffs[i + 1]);
    }
}

TEST(Evaluate, IsHomogeneousOfDegreeTwo) {
    for (unsigned p : kPrimes)
        for (int dim : {2, 3, 4})
            for (const auto& q : catalog(p, dim)) {
                auto rng = make_rng(21, p * 10 + dim);
                for (int i = 0; i < 100; ++i) {
                    auto x = primitive_vector(p, q.dim(), rng);
                    PAdic l = sample_uniform_Zp(p, rng) + PAdic::from_int(p, 1);
                    std::vector<PAdic> lx;
                    for (const auto& c : x) lx.push_back(l * c);
                    EXPECT_TRUE(evaluate(q, lx) == l * l * evaluate(q, x));
                }
            }
}

TEST(Evaluate, PolarizationMatchesBilinearForm) {
    auto rng = make_rng(22, 0);
    for (unsigned p : kPrimes) {
        auto q = norm_form(p);
        for (int i = 0; i < 50; ++i) {
            auto x = primitive_vector(p, 4, rng), y = primitive_vector(p, 4, rng);
            std::vector<PAdic> s;
            for (int k = 0; k < 4; ++k) s.push_back(x[k] + y[k]);
            EXPECT_TRUE(evaluate(q, s) - evaluate(q, x) - evaluate(q, y) == PAdic::from_int(p, 2) * bilinear(q, x, y));
        }
    }
}

// Definite forms never vanish on primitive vectors, and for p > 2 the
// valuation in dimension 3 and 4 is at most 1.
TEST(Evaluate, DefiniteOnRandomPrimitiveVectors) {
    for (unsigned p : kPrimes)
        for (int dim : {2, 3, 4})
            for (const auto& q : catalog(p, dim)) {
                auto rng = make_rng(23, p * 10 + dim);
                int worst = 0;
                for (int i = 0; i < 10000; ++i) {
                    PAdic v = evaluate(q, primitive_vector(p, q.dim(), rng));
                    ASSERT_FALSE(v.is_zero());
                    worst = std::max(worst, v.valuation());
                }
                if (p > 2 && dim >= 3) {
                    EXPECT_LE(worst, 1) << "p=" << p << " dim=" << dim;
                }
            }
}

TEST(Anisotropy, NoPrimitiveZerosModuloTheDefaultDepth) {
    for (unsigned p : {2u, 3u, 5u})
        for (int dim : {2, 3, 4})
            for (const auto& q : catalog(p, dim)) {
                auto r = anisotropy_witness(q, default_anisotropy_depth(p));
                EXPECT_TRUE(r.confirmed) << q.name;
            }
}

TEST(Anisotropy, IsotropicFormIsCaught) {
    auto q = make_form(5, std::vector<long long>{1, 1}, "x^2+y^2");
    auto r = anisotropy_witness(q, 2);
    EXPECT_FALSE(r.confirmed);
    ASSERT_EQ(r.counterexample.size(), 2u);
    long long a = r.counterexample[0], b = r.counterexample[1];
    EXPECT_EQ((a * a + b * b) % 25, 0);
}

TEST(Matrix, DiagonalView) {
    auto q = catalog(7, 2)[1];
    PMatrix m = q.matrix();
    EXPECT_TRUE(m(0, 0) == q.coeffs[0]);
    EXPECT_TRUE(m(1, 1) == q.coeffs[1]);
    EXPECT_TRUE(m(0, 1).is_zero());
}

TEST(Evaluate, DimensionMismatch) {
    auto q = norm_form(3);
    EXPECT_THROW(evaluate(q, {PAdic::one(3)}), DimensionMismatch);
}

}  // namespace
