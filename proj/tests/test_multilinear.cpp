#include "doctest.h"

#include "akc/multilinear.hpp"

using namespace akc;

namespace {

struct Lcg {
    std::uint64_t s;
    long long operator()()
    {
        s = s * 6364136223846793005ull + 1442695040888963407ull;
        return (long long)(s >> 33);
    }
};

template <class F>
RLinearMap<F> random_map(const LocalAlgebra<F>& R, Index t, Index s, Lcg& rng)
{
    auto f = RLinearMap<F>::zero(R, t, s);
    for (auto& e : f.entries)
        for (Index k = 0; k < e.size(); ++k)
            e(k) = F(rng() % 7 - 3);
    return f;
}

}  // namespace

TEST_CASE("basis sizes and ordering")
{
    for (int n = 0; n <= 6; ++n)
        for (int i = 0; i <= 6; ++i) {
            ExteriorBasis e(n, i);
            CHECK(e.size() == binomial(n, i));
            for (Index k = 0; k < e.size(); ++k)
                CHECK(e.index(e.at(k)) == k);
            MonomialBasis m(n, i);
            CHECK(m.size() == (n == 0 ? (i == 0 ? 1 : 0) : binomial(n + i - 1, i)));
            for (Index k = 0; k < m.size(); ++k)
                CHECK(m.index(m.at(k)) == k);
            for (Index k = 1; k < m.size(); ++k)
                CHECK(m.exponents(k - 1) < m.exponents(k));
        }
    MonomialBasis g(2, 3);
    CHECK(g.divided_label(g.index({0, 0, 1})) == "x1^[2].x2");
    CHECK(g.sym_label(g.index({0, 0, 1})) == "x1^2.x2");
    ExteriorBasis w(3, 2);
    CHECK(w.label(0) == "e1^e2");
    CHECK(w.size() == 3);
    CHECK(ExteriorBasis(2, 3).size() == 0);
}

TEST_CASE("exterior powers of a diagonal map")
{
    auto R = field_algebra<Rational>();
    Matrix<Rational> m = Matrix<Rational>::Zero(3, 3);
    m(0, 0) = 2;
    m(1, 1) = 3;
    m(2, 2) = 5;
    auto l2 = flatten(*R, exterior_map(*R, scalar_map(*R, m), 2));
    Matrix<Rational> expect = Matrix<Rational>::Zero(3, 3);
    expect(0, 0) = 6;
    expect(1, 1) = 10;
    expect(2, 2) = 15;
    CHECK(l2 == expect);
}

TEST_CASE("functoriality of the three powers")
{
    FpContext ctx(5);
    auto R = truncated_polynomial_algebra<Fp>(1, 2);
    Lcg rng{3};
    for (int trial = 0; trial < 6; ++trial) {
        auto f = random_map(*R, 3, 2, rng);
        auto g = random_map(*R, 2, 3, rng);
        auto gf = compose(*R, g, f);
        for (int i = 0; i <= 3; ++i) {
            CHECK(exterior_map(*R, gf, i) == compose(*R, exterior_map(*R, g, i), exterior_map(*R, f, i)));
            CHECK(divided_power_map(*R, gf, i) ==
                  compose(*R, divided_power_map(*R, g, i), divided_power_map(*R, f, i)));
            CHECK(sym_power_map(*R, gf, i) == compose(*R, sym_power_map(*R, g, i), sym_power_map(*R, f, i)));
        }
        auto id = RLinearMap<Fp>::identity(*R, 3);
        CHECK(exterior_map(*R, id, 2) == RLinearMap<Fp>::identity(*R, 3));
        CHECK(divided_power_map(*R, id, 2) == RLinearMap<Fp>::identity(*R, 6));
    }
}

TEST_CASE("comultiplication")
{
    auto R = field_algebra<Rational>();
    // Rank one: x^[q] ↦ x ⊗ x^[q−1].
    auto e1 = eta(*R, 1, 3);
    CHECK(flatten(*R, e1) == Matrix<Rational>::Identity(1, 1));
    // η(x1 x2) = x1 ⊗ x2 + x2 ⊗ x1.
    auto e2 = eta(*R, 2, 2);
    MonomialBasis g2(2, 2), g1(2, 1);
    Matrix<Rational> m = flatten(*R, e2);
    Index src = g2.index({0, 1});
    CHECK(m(0 * 2 + g1.index({1}), src) == Rational(1));
    CHECK(m(1 * 2 + g1.index({0}), src) == Rational(1));
    CHECK(m.col(src).sum() == Rational(2));
    // η(x1^[2]) = x1 ⊗ x1.
    Index sq = g2.index({0, 0});
    CHECK(m(g1.index({0}), sq) == Rational(1));
    CHECK(m.col(sq).sum() == Rational(1));
}

TEST_CASE("divided powers versus symmetric powers")
{
    auto R = field_algebra<Rational>();
    auto g = flatten(*R, gamma_to_sym(*R, 2, 2));
    MonomialBasis b(2, 2);
    CHECK(g(b.index({0, 1}), b.index({0, 1})) == Rational(2));
    CHECK(g(b.index({0, 0}), b.index({0, 0})) == Rational(1));
    CHECK(flatten(*R, gamma_to_sym(*R, 3, 1)) == Matrix<Rational>::Identity(3, 3));
    auto round = compose(*R, gamma_to_sym(*R, 3, 3), sym_to_gamma(*R, 3, 3));
    CHECK(round == RLinearMap<Rational>::identity(*R, MonomialBasis(3, 3).size()));

    FpContext ctx(3);
    auto F3 = field_algebra<Fp>();
    CHECK_THROWS_AS(sym_to_gamma(*F3, 2, 3), std::domain_error);
    CHECK_NOTHROW(sym_to_gamma(*F3, 2, 2));
}

TEST_CASE("wedge product")
{
    auto R = field_algebra<Rational>();
    auto m = flatten(*R, wedge_mult(*R, 2, 1, 1));
    // e1 ⊗ e2 ↦ e12, e2 ⊗ e1 ↦ −e12, e1 ⊗ e1 ↦ 0.
    CHECK(m(0, 0 * 2 + 1) == Rational(1));
    CHECK(m(0, 1 * 2 + 0) == Rational(-1));
    CHECK(m(0, 0) == Rational(0));

    // Associativity on Λ^1 ⊗ Λ^1 ⊗ Λ^1 of rank 4.
    int n = 4;
    ExteriorBasis b1(n, 1), b2(n, 2), b3(n, 3);
    auto w11 = flatten(*R, wedge_mult(*R, n, 1, 1));
    auto w21 = flatten(*R, wedge_mult(*R, n, 2, 1));
    auto w12 = flatten(*R, wedge_mult(*R, n, 1, 2));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                Vector<Rational> left = Vector<Rational>::Zero(b3.size());
                Vector<Rational> right = Vector<Rational>::Zero(b3.size());
                for (Index k = 0; k < b2.size(); ++k) {
                    left += w11(k, a * n + b) * w21.col(k * n + c);
                    right += w11(k, b * n + c) * w12.col(a * b2.size() + k);
                }
                CHECK(left == right);
            }
}
