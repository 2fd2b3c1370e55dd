#include "doctest.h"

#include "akc/derham.hpp"

using namespace akc;

namespace {

DeRhamModel model(std::uint32_t p, int n, int N = 1, Flavor f = Flavor::Affine)
{
    return derham(DeRhamSpec{p, n, N, f});
}

}  // namespace

TEST_CASE("one-variable fiber at p = 3")
{
    FpContext ctx(3);
    auto M = model(3, 1);
    const auto& K = M.cdga.complex;
    CHECK(K.term(0).dim == 3);
    CHECK(K.term(1).dim == 3);
    auto H = cohomology(K);
    CHECK(H.dims == std::vector<Index>{1, 1});
    CHECK(H.reps[1][0] == M.form({2}, {0}));
    CHECK(M.cdga.label(1, M.form({2}, {0})[0].first) == "x1^2*dx1");
}

TEST_CASE("two variables at p = 3: Künneth dimensions")
{
    FpContext ctx(3);
    auto M = model(3, 2);
    const auto& K = M.cdga.complex;
    for (int i = 0; i <= 2; ++i)
        CHECK(K.term(i).dim == 9 * binomial(2, i));
    CHECK(cohomology(K).dims == std::vector<Index>{1, 2, 1});
    auto r = verify_akc(M.cdga);
    CHECK(r.cdga.ok);
    CHECK(r.cdga.method == "generators");
    CHECK(r.c1.ok);
    CHECK(r.c2.ok);
    CHECK(r.c3.ok);
}

TEST_CASE("carry rule over F_2[y]/y^2")
{
    FpContext ctx(2);
    auto M = model(2, 1, 2);
    const auto& R = M.R();
    CHECK(R.dim() == 2);
    auto x = M.form({1}, {});
    auto xx = multiply(M.cdga, 0, x, 0, x);
    // y · 1 is the flattened index 1 of K^0.
    CHECK(xx == SparseVec<Fp>{{1, Fp(1)}});
    auto r = verify_akc(M.cdga);
    CHECK(r.ok());
    CHECK(r.c2_detail.h1_rank == 1);
    CHECK(cohomology(M.cdga.complex).dims == std::vector<Index>{2, 2});
}

TEST_CASE("jets and torus models satisfy the axioms")
{
    {
        FpContext ctx(3);
        auto r = verify_akc(model(3, 2, 2).cdga);
        CHECK(r.ok());
        auto t = verify_akc(model(3, 2, 1, Flavor::Torus).cdga);
        CHECK(t.ok());
        CHECK_THROWS_AS(model(3, 1, 2, Flavor::Torus), std::invalid_argument);
    }
    FpContext ctx(5);
    auto M = model(5, 2, 2);
    auto r = verify_akc(M.cdga);
    CHECK(r.ok());
    CHECK(r.c2_detail.h_dims == std::vector<Index>{3, 6, 3});
}

TEST_CASE("size guard and spec validation")
{
    FpContext ctx(3);
    CHECK_THROWS_AS(model(4, 1), std::invalid_argument);
    CHECK_THROWS_AS(model(3, 0), std::invalid_argument);
    CHECK_THROWS_AS(model(3, 12), std::length_error);
    CHECK(DeRhamSpec{5, 3, 1, Flavor::Affine}.total_dim() == 1000);
    CHECK(DeRhamSpec{3, 2, 2, Flavor::Affine}.total_dim() == 36 * 3);
}

TEST_CASE("Cartier classes and the canonical splitting")
{
    FpContext ctx(3);
    for (int n = 1; n <= 3; ++n) {
        auto M = model(3, n);
        auto c = cartier_basis(M);
        CHECK(c.ok);
        for (int q = 0; q <= n; ++q)
            CHECK(c.rank[q] == binomial(n, q));
        auto s = canonical_splitting(M);
        CHECK(s.check.verdict);
        // ∂ ∘ s^0 = 0
        CHECK(is_zero_matrix<Fp>(product<Fp>(M.cdga.complex.diff(0), s.s.f[0])));
    }
    auto J = model(3, 2, 2);
    CHECK(cartier_basis(J).ok);
    CHECK(canonical_splitting(J).check.verdict);
}

TEST_CASE("the n-variable model is the tensor power of the one-variable model")
{
    FpContext ctx(3);
    auto A = model(3, 1);
    auto B = model(3, 2);
    // x^a dx_S ↦ (x1^{a1} dx1^{s1}) ⊗ (x2^{a2} dx2^{s2}), no sign.
    struct Elt {
        int deg;
        Index idx;
    };
    auto split = [&](int deg, Index idx) {
        (void)deg;
        Index pn = B.mult->monomials();
        Index s = idx / pn, a = idx % pn;
        unsigned mask = B.mult->mask(deg, s);
        const auto& dg = B.mult->digits(a);
        std::array<Elt, 2> out{};
        for (int j = 0; j < 2; ++j) {
            int dj = (mask >> j) & 1;
            out[j] = {dj, A.mult->index(dj, dj, dg[j], 0)};
        }
        return out;
    };
    SparseVec<Fp> buf;
    bool ok = true;
    for (int i = 0; i <= 2; ++i)
        for (int j = 0; i + j <= 2; ++j)
            for (Index a = 0; a < B.cdga.complex.ambient(i); ++a)
                for (Index b = 0; b < B.cdga.complex.ambient(j); ++b) {
                    auto u = split(i, a), v = split(j, b);
                    // (u0⊗u1)(v0⊗v1) = (−1)^{|u1||v0|} u0v0 ⊗ u1v1
                    SparseVec<Fp> p0, p1;
                    basis_product(A.cdga, u[0].deg, u[0].idx, v[0].deg, v[0].idx, p0);
                    basis_product(A.cdga, u[1].deg, u[1].idx, v[1].deg, v[1].idx, p1);
                    basis_product(B.cdga, i, a, j, b, buf);
                    SparseVec<Fp> want;
                    if (!p0.empty() && !p1.empty()) {
                        Fp c = p0[0].second * p1[0].second * Fp(koszul_sign(u[1].deg, v[0].deg));
                        int d0 = u[0].deg + v[0].deg, d1 = u[1].deg + v[1].deg;
                        // Reassemble the index in the two-variable model.
                        Index m0 = p0[0].first % 3, m1 = p1[0].first % 3;
                        unsigned mask = unsigned(d0) | (unsigned(d1) << 1);
                        want = {{B.mult->index(d0 + d1, mask, m0 * 3 + m1, 0), c}};
                    }
                    ok = ok && buf == want;
                }
    CHECK(ok);
}

TEST_CASE("jets base-change to the fiber")
{
    FpContext ctx(3);
    auto J = model(3, 2, 2);
    auto Fb = model(3, 2, 1);
    Index d = J.R().dim();
    SparseVec<Fp> bj, bf;
    bool ok = true;
    for (int i = 0; i <= 2; ++i) {
        // Differentials agree on the ρ = 0 slice.
        auto dj = to_dense<Fp>(J.cdga.complex.diff(i));
        auto df = to_dense<Fp>(Fb.cdga.complex.diff(i));
        for (Index r = 0; r < df.rows(); ++r)
            for (Index c = 0; c < df.cols(); ++c)
                ok = ok && dj(r * d, c * d) == df(r, c);
        for (int j = 0; i + j <= 2; ++j)
            for (Index a = 0; a < Fb.cdga.complex.ambient(i); ++a)
                for (Index b = 0; b < Fb.cdga.complex.ambient(j); ++b) {
                    basis_product(J.cdga, i, a * d, j, b * d, bj);
                    basis_product(Fb.cdga, i, a, j, b, bf);
                    SparseVec<Fp> reduced;
                    for (const auto& [k, v] : bj)
                        if (k % d == 0)
                            reduced.emplace_back(k / d, v);
                    ok = ok && reduced == bf;
                }
    }
    CHECK(ok);
}
