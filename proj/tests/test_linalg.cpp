#include "doctest.h"

#include "akc/linalg.hpp"

using namespace akc;

TEST_CASE("rref over F_3")
{
    FpContext ctx(3);
    Matrix<Fp> a(2, 2);
    a << Fp(1), Fp(2), Fp(2), Fp(1);
    auto r = rref<Fp>(a);
    CHECK(r.rank == 1);
    CHECK(r.reduced(0, 0) == Fp(1));
    CHECK(r.reduced(0, 1) == Fp(2));
    CHECK(r.reduced(1, 0) == Fp(0));
    CHECK(r.reduced(1, 1) == Fp(0));
}

TEST_CASE("kernel over Q")
{
    Matrix<Rational> a(1, 2);
    a << Rational(1), Rational(1);
    Matrix<Rational> k = kernel_basis<Rational>(a);
    REQUIRE(k.cols() == 1);
    CHECK(k(0, 0) == Rational(-1));
    CHECK(k(1, 0) == Rational(1));
    CHECK(is_zero_matrix<Rational>(Matrix<Rational>(a * k)));
}

TEST_CASE("solve over F_5")
{
    FpContext ctx(5);
    Matrix<Fp> a(1, 1);
    a << Fp(2);
    Vector<Fp> b(1);
    b << Fp(1);
    auto x = solve<Fp>(a, b);
    REQUIRE(x);
    CHECK((*x)(0) == Fp(3));
}

TEST_CASE("inconsistent system has no solution")
{
    Matrix<Rational> a = Matrix<Rational>::Zero(2, 1);
    a(0, 0) = 1;
    a(1, 0) = 2;
    Vector<Rational> b(2);
    b << Rational(1), Rational(1);
    CHECK_FALSE(solve<Rational>(a, b));
}

TEST_CASE("dense inverse round trip over F_7")
{
    FpContext ctx(7);
    Matrix<Fp> a(2, 2);
    a << Fp(2), Fp(3), Fp(1), Fp(4);
    auto inv = inverse<Fp>(a);
    REQUIRE(inv);
    Matrix<Fp> prod = a * *inv;
    CHECK(prod == Matrix<Fp>::Identity(2, 2));
    Matrix<Fp> sing(2, 2);
    sing << Fp(1), Fp(2), Fp(2), Fp(4);
    CHECK_FALSE(inverse<Fp>(sing));
}

TEST_CASE("sparse kernel and rank agree with dense")
{
    FpContext ctx(5);
    std::uint64_t state = 12345;
    auto next = [&] {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        return (long long)(state >> 33);
    };
    for (int trial = 0; trial < 40; ++trial) {
        int rows = 1 + int(next() % 6), cols = 1 + int(next() % 6);
        Matrix<Fp> d = Matrix<Fp>::Zero(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                if (next() % 3 == 0)
                    d(i, j) = Fp(next());
        SpMat<Fp> s = to_sparse<Fp>(d);
        CHECK(rank<Fp>(s) == rank<Fp>(d));
        auto ker = kernel<Fp>(s);
        CHECK(int(ker.size()) == cols - rank<Fp>(d));
        for (const auto& v : ker)
            CHECK(apply<Fp>(s, v).empty());
    }
}

TEST_CASE("echelon reduce recovers coefficients")
{
    Echelon<Rational> e(4);
    SparseVec<Rational> a{{0, 1}, {2, 1}};
    SparseVec<Rational> b{{1, 2}, {2, 1}, {3, 1}};
    e.insert(a);
    e.insert(b);
    SparseVec<Rational> v = a;
    axpy(v, Rational(3), b);
    axpy(v, Rational(5), unit_vector<Rational>(1));
    SparseVec<Rational> coeffs;
    auto res = e.reduce(v, &coeffs);
    SparseVec<Rational> back = res;
    for (const auto& [s, c] : coeffs)
        axpy(back, c, e.vectors()[s]);
    CHECK(back == v);
    for (const auto& [i, c] : res)
        CHECK_FALSE(e.is_pivot(i));
    CHECK(e.contains(b));
    CHECK_FALSE(e.contains(unit_vector<Rational>(1)));
}
