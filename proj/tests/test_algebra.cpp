#include "doctest.h"

#include "akc/algebra.hpp"

using namespace akc;

namespace {

Vector<Fp> vec(std::initializer_list<long long> xs)
{
    Vector<Fp> v(Index(xs.size()));
    Index i = 0;
    for (auto x : xs)
        v(i++) = Fp(x);
    return v;
}

}  // namespace

TEST_CASE("dual numbers over F_3")
{
    FpContext ctx(3);
    auto R = truncated_polynomial_algebra<Fp>(1, 2);
    REQUIRE(R->dim() == 2);
    CHECK(R->labels()[1] == "y1");
    CHECK(verify_algebra(*R).ok);

    auto inv = unit_inverse(*R, vec({1, 1}));
    REQUIRE(inv);
    CHECK(*inv == vec({1, 2}));
    CHECK_FALSE(is_unit(*R, vec({0, 1})));
    CHECK_FALSE(is_unit(*R, vec({0, 0})));

    CHECK(is_nonzerodivisor(*R, vec({2, 0})));
    CHECK_FALSE(is_nonzerodivisor(*R, vec({0, 1})));
    CHECK_FALSE(is_nonzerodivisor(*R, integer_element(*R, 3)));

    CHECK(factorial_invertible(*R, 0));
    CHECK(factorial_invertible(*R, 1));
    CHECK(factorial_invertible(*R, 2));
    CHECK_FALSE(factorial_invertible(*R, 3));
}

TEST_CASE("flatten multiplication by y")
{
    FpContext ctx(3);
    auto R = truncated_polynomial_algebra<Fp>(1, 2);
    auto f = RLinearMap<Fp>::zero(*R, 1, 1);
    f.at(0, 0) = vec({0, 1});
    Matrix<Fp> m = flatten(*R, f);
    Matrix<Fp> expect(2, 2);
    expect << Fp(0), Fp(0), Fp(1), Fp(0);
    CHECK(m == expect);
    CHECK(flatten(*R, RLinearMap<Fp>::identity(*R, 2)) == Matrix<Fp>::Identity(4, 4));
    CHECK(is_zero_matrix<Fp>(flatten(*R, RLinearMap<Fp>::zero(*R, 2, 3))));
}

TEST_CASE("flatten is a functor")
{
    FpContext ctx(5);
    auto R = truncated_polynomial_algebra<Fp>(2, 2);
    std::uint64_t s = 7;
    auto next = [&] {
        s = s * 6364136223846793005ull + 1442695040888963407ull;
        return (long long)(s >> 33);
    };
    for (int trial = 0; trial < 20; ++trial) {
        auto f = RLinearMap<Fp>::zero(*R, 2, 3);
        auto g = RLinearMap<Fp>::zero(*R, 3, 2);
        for (auto& e : f.entries)
            for (Index k = 0; k < e.size(); ++k)
                e(k) = Fp(next());
        for (auto& e : g.entries)
            for (Index k = 0; k < e.size(); ++k)
                e(k) = Fp(next());
        Matrix<Fp> lhs = flatten(*R, compose(*R, g, f));
        Matrix<Fp> rhs = flatten(*R, g) * flatten(*R, f);
        CHECK(lhs == rhs);
        auto back = unflatten(*R, flatten_sparse(*R, f), 2, 3);
        REQUIRE(back);
        CHECK(*back == f);
    }
}

TEST_CASE("non-local algebra F_2 x F_2 fails locality")
{
    FpContext ctx(2);
    std::vector<std::vector<Vector<Fp>>> st{{vec({1, 0}), vec({0, 0})}, {vec({0, 0}), vec({0, 1})}};
    LocalAlgebra<Fp> R(FieldDesc::prime(2), {"e1", "e2"}, st, vec({1, 1}));
    auto rep = verify_algebra(R);
    CHECK_FALSE(rep.ok);
    CHECK(rep.law == "locality");
}

TEST_CASE("base field is a local algebra")
{
    auto R = field_algebra<Rational>();
    CHECK(verify_algebra(*R).ok);
}

TEST_CASE("nonzerodivisors are units in local artinian algebras")
{
    FpContext ctx(3);
    auto R = truncated_polynomial_algebra<Fp>(2, 3);
    REQUIRE(verify_algebra(*R).ok);
    std::uint64_t s = 99;
    for (int trial = 0; trial < 50; ++trial) {
        Vector<Fp> a(R->dim());
        for (Index k = 0; k < a.size(); ++k) {
            s = s * 6364136223846793005ull + 1442695040888963407ull;
            a(k) = Fp((long long)(s >> 33));
        }
        CHECK(is_unit(*R, a) == is_nonzerodivisor(*R, a));
    }
}
