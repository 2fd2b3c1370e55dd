#include "doctest.h"

#include "akc/derham.hpp"
#include "akc/reconstruct.hpp"
#include "akc/generators.hpp"

using namespace akc;

namespace {

DeRhamModel model(std::uint32_t p, int n, int N = 1)
{
    return derham(DeRhamSpec{p, n, N, Flavor::Affine});
}

}  // namespace

TEST_CASE("boundary map of the one-variable fiber")
{
    FpContext ctx(3);
    auto M = model(3, 1);
    auto bd = boundary_map(M.cdga);
    CHECK(bd.T.rankP == 3);
    CHECK(bd.T.rankQ == 3);
    auto u = flatten(M.R(), bd.T.u);
    CHECK(rank<Fp>(u) == 2);
    // The Z^1 basis starts with d(x) = dx and d(x^2) = 2x dx.
    CHECK(bd.Q[0] == M.form({0}, {0}));
    CHECK(bd.Q[1] == SparseVec<Fp>{{M.form({1}, {0})[0].first, Fp(2)}});
}

TEST_CASE("boundary map of jets has free terms of rank p^n and p^n − 1 + n")
{
    FpContext ctx(3);
    auto bd = boundary_map(model(3, 2, 2).cdga);
    CHECK(bd.T.rankP == 9);
    CHECK(bd.T.rankQ == 10);
    CHECK(bd.T.R->dim() == 3);
}

TEST_CASE("hypothesis gate refuses before construction")
{
    FpContext ctx(3);
    auto M = model(3, 3);
    auto r32 = theorem_map(M.cdga, 3, 2, {false});
    CHECK(r32.status == Status::Refused);
    CHECK(r32.clause == "m+1");
    auto r33 = theorem_map(M.cdga, 3, 3, {false});
    CHECK(r33.status == Status::Refused);
    CHECK(r33.clause == "m!");
    auto r12 = theorem_map(M.cdga, 1, 2, {false});
    CHECK(r12.clause == "range");
    CHECK_FALSE(r33.mu.source);
}

TEST_CASE("theorem map on small de Rham models")
{
    FpContext ctx(3);
    {
        auto M = model(3, 2);
        auto r = theorem_map(M.cdga, 2, 1);
        CHECK(r.status == Status::Verified);
        CHECK(r.bottom.ran);
        CHECK(r.bottom.identity_ok);
        CHECK(r.qi.cone_acyclic);
        CHECK(r.qi.induced_iso.value_or(false));
        auto q1 = theorem_map(M.cdga, 1, 1);
        CHECK(q1.status == Status::Verified);
        CHECK_FALSE(q1.bottom.ran);
    }
    {
        auto M = model(3, 3);
        auto r = theorem_map(M.cdga, 2, 2, {false});
        CHECK(r.status == Status::Verified);
        CHECK_FALSE(r.bottom.ran);
        auto r31 = theorem_map(M.cdga, 3, 1, {false});
        CHECK(r31.status == Status::Verified);
    }
    {
        auto J = model(3, 2, 2);
        CHECK(theorem_map(J.cdga, 2, 1).status == Status::Verified);
        CHECK(theorem_map(J.cdga, 2, 2).status == Status::Verified);
    }
}

TEST_CASE("top component of μ is the multiplication of cocycles")
{
    FpContext ctx(3);
    auto M = model(3, 2);
    auto r = theorem_map(M.cdga, 2, 1, {false});
    auto bd = boundary_map(M.cdga);
    ExteriorBasis eb(int(bd.Q.size()), 2);
    SpMat<Fp> top = r.mu.at(2);
    bool ok = true;
    for (Index I = 0; I < eb.size(); ++I) {
        auto c = eb.at(I);
        auto direct = multiply(M.cdga, 1, bd.Q[std::size_t(c[1])], 1, bd.Q[std::size_t(c[0])]);
        ok = ok && column<Fp>(top, I) == direct;
    }
    CHECK(ok);
}

TEST_CASE("μ on cohomology agrees with the C2 maps")
{
    FpContext ctx(3);
    auto M = model(3, 2);
    auto r = theorem_map(M.cdga, 2, 2, {false});
    REQUIRE(r.status == Status::Verified);
    // Both induce isomorphisms onto H^i; compare ranks of the combined images.
    auto c2 = check_C2(M.cdga);
    CohomologyCoords<Fp> cc(M.cdga.complex);
    for (int i = 0; i <= 2; ++i) {
        auto HS = cohomology_at(coordinatize(*r.source).k, i);
        Echelon<Fp> img(cc.at(i).dim());
        auto Cs = coordinatize(*r.source);
        for (Index k = 0; k < HS.dim(); ++k) {
            auto v = apply<Fp>(r.mu.at(i), Cs.at(i).lift(HS.rep(k)));
            auto c = cc(i, v);
            REQUIRE(c);
            img.insert(*c);
        }
        CHECK(img.rank() == c2.mu[std::size_t(i)].rows());
    }
}

TEST_CASE("decomposition witnesses with the canonical splitting")
{
    FpContext ctx(3);
    for (int N : {1, 2}) {
        auto M = model(3, 2, N);
        auto s = canonical_splitting(M).s;
        for (int a = 0; a <= 2; ++a)
            for (int b = a; b <= 2 && b - a < 2; ++b) {
                auto r = decompose_range(M.cdga, a, b, s, {false});
                CHECK(r.status == Status::Verified);
                CHECK(r.factors.value_or(false));
            }
        auto r00 = decompose_range(M.cdga, 0, 0, s, {false});
        CHECK(equal<Fp>(r00.witness.at(0), s.at(0)));
        auto r01 = tau_leq_m_decompose(M.cdga, 1, s, {false});
        CHECK(equal<Fp>(r01.witness.at(0), s.at(0)));
        CHECK(equal<Fp>(r01.witness.at(1), s.at(1)));
    }
    auto M = model(3, 2);
    auto s = canonical_splitting(M).s;
    CHECK(tau_leq_m_decompose(M.cdga, 2, s).status == Status::Verified);
    auto r3 = tau_leq_m_decompose(M.cdga, 3, s, {false});
    CHECK(r3.status == Status::Refused);
    CHECK(r3.clause == "m!");
}

TEST_CASE("a splitting that is not a quasi-isomorphism is refused")
{
    FpContext ctx(3);
    auto M = model(3, 2);
    auto s = canonical_splitting(M).s;
    s.f[1] = SpMat<Fp>(s.f[1].rows(), s.f[1].cols());
    auto r = decompose_range(M.cdga, 0, 1, s, {false});
    CHECK(r.status == Status::Refused);
    CHECK(r.clause == "splitting");
}

TEST_CASE("cohomology splitting over a non-field base")
{
    FpContext ctx(3);
    auto J = model(3, 2, 2);
    auto s = cohomology_splitting(J.cdga);
    CHECK(is_quasi_iso(s).verdict);
    CHECK(decompose_range(J.cdga, 1, 2, s, {false}).status == Status::Verified);
}

TEST_CASE("table mutations are caught by validation or by μ")
{
    FpContext ctx(3);
    auto M = model(3, 2);
    auto base = to_table(M.cdga);
    gen::Rng rng(7);
    int caught = 0, valid = 0, trials = 15;
    for (int t = 0; t < trials; ++t) {
        auto tab = std::make_shared<TableMult<Fp>>(*base);
        int i = std::uniform_int_distribution<int>(0, 2)(rng);
        int j = std::uniform_int_distribution<int>(0, 2 - i)(rng);
        const auto& C = M.cdga.complex;
        Index a = std::uniform_int_distribution<Index>(0, C.ambient(i) - 1)(rng);
        Index b = std::uniform_int_distribution<Index>(0, C.ambient(j) - 1)(rng);
        Index c = std::uniform_int_distribution<Index>(0, C.ambient(i + j) - 1)(rng);
        SparseVec<Fp> cur;
        tab->product(i, a, j, b, cur);
        axpy(cur, Fp(1), SparseVec<Fp>{{c, Fp(1)}});
        tab->set(i, a, j, b, cur);
        auto K = M.cdga;
        K.mult = tab;
        if (!validate_cdga(K).ok) {
            ++caught;
            continue;
        }
        auto r = theorem_map(K, 2, 1);
        if (r.status != Status::Verified)
            ++caught;
        else
            ++valid;
    }
    CHECK(caught + valid == trials);
    CHECK(caught >= trials - 1);
}
