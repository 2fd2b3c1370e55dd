#include "doctest.h"

#include "akc/complex.hpp"

using namespace akc;

namespace {

// One-variable de Rham fiber at p: 1, x, .., x^{p−1} → dx, .., x^{p−1}dx.
Complex<Fp> fiber(std::uint32_t p)
{
    auto R = field_algebra<Fp>();
    std::vector<SparseVec<Fp>> cols(p);
    for (std::uint32_t a = 1; a < p; ++a)
        cols[a] = {{Index(a - 1), Fp(a)}};
    return free_complex<Fp>(R, 0, {Index(p), Index(p)}, {from_columns<Fp>(Index(p), cols)});
}

}  // namespace

TEST_CASE("cohomology of the one-variable fiber")
{
    FpContext ctx(3);
    auto K = fiber(3);
    CHECK(validate_complex(K).ok);
    auto H = cohomology(K);
    CHECK(H.dims == std::vector<Index>{1, 1});
    REQUIRE(H.reps[1].size() == 1);
    // The class of x^2 dx.
    CHECK(H.reps[1][0] == SparseVec<Fp>{{2, Fp(1)}});
}

TEST_CASE("identity complex and zero differential")
{
    FpContext ctx(5);
    auto R = truncated_polynomial_algebra<Fp>(1, 2);
    auto K = free_complex<Fp>(R, 0, {1, 1}, {sparse_identity<Fp>(2)});
    CHECK(cohomology(K).dims == std::vector<Index>{0, 0});
    auto Z = free_complex<Fp>(R, 0, {2, 1}, {SpMat<Fp>(2, 4)});
    CHECK(cohomology(Z).dims == std::vector<Index>{4, 2});
}

TEST_CASE("tensor square of the fiber")
{
    FpContext ctx(3);
    auto V = fiber(3);
    auto T = tensor(V, V);
    REQUIRE(T.terms.size() == 3);
    CHECK(T.terms[0].dim == 9);
    CHECK(T.terms[1].dim == 18);
    CHECK(T.terms[2].dim == 9);
    CHECK(validate_complex(T).ok);
    CHECK(cohomology(T).dims == std::vector<Index>{1, 2, 1});

    auto R = field_algebra<Fp>();
    auto unit = free_complex<Fp>(R, 0, {1}, {});
    auto VU = tensor(V, unit);
    CHECK(cohomology(VU).dims == cohomology(V).dims);
}

TEST_CASE("truncations keep cohomology in range")
{
    FpContext ctx(3);
    auto V = fiber(3);
    auto T = tensor(V, V);
    auto lo = tau_leq(T, 1);
    CHECK(validate_complex(lo).ok);
    CHECK(cohomology(lo).dims == std::vector<Index>{1, 2});
    auto hi = tau_geq(T, 1);
    CHECK(validate_complex(hi).ok);
    CHECK(cohomology(hi).dims == std::vector<Index>{2, 1});
    auto mid = tau_range(T, 1, 2);
    CHECK(cohomology(mid).dims == std::vector<Index>{2, 1});
    auto single = tau_range(T, 1, 1);
    CHECK(cohomology(single).dims == std::vector<Index>{2});
    CHECK_THROWS(tau_range(T, 2, 1));
}

TEST_CASE("quasi-isomorphisms and cones")
{
    FpContext ctx(3);
    auto V = std::make_shared<Complex<Fp>>(fiber(3));
    auto id = identity_map<Fp>(V);
    CHECK(validate_chain_map(id).ok);
    auto r = is_quasi_iso(id);
    CHECK(r.verdict);
    CHECK(r.cone_acyclic);
    CHECK(r.induced_iso == true);

    ChainMap<Fp> zero{V, V, 0, {SpMat<Fp>(3, 3), SpMat<Fp>(3, 3)}};
    auto z = is_quasi_iso(zero);
    CHECK_FALSE(z.verdict);
    CHECK_FALSE(z.cone_acyclic);

    // τ≤1 K → K is an inclusion and a quasi-isomorphism.
    auto T = std::make_shared<Complex<Fp>>(tensor(*V, *V));
    auto L = std::make_shared<Complex<Fp>>(tau_leq(*T, 2));
    auto inc = identity_map<Fp>(T);
    inc.source = L;
    CHECK(is_quasi_iso(inc).verdict);

    // Sum of cohomology is idempotent up to dimensions.
    auto S = sum_of_cohomology(*T);
    CHECK(cohomology(S).dims == cohomology(*T).dims);
    auto S2 = sum_of_cohomology(S);
    CHECK(cohomology(S2).dims == cohomology(*T).dims);
}

TEST_CASE("shift and direct sum")
{
    FpContext ctx(3);
    auto V = fiber(3);
    auto W = shift(V, -2);
    CHECK(W.lo == 2);
    CHECK(cohomology(W).dims == std::vector<Index>{1, 1});
    auto D = direct_sum(V, W);
    CHECK(D.lo == 0);
    CHECK(cohomology(D).dims == std::vector<Index>{1, 1, 1, 1});
}

TEST_CASE("freeness criterion")
{
    FpContext ctx(3);
    auto R = truncated_polynomial_algebra<Fp>(1, 2);
    auto M = PresentedModule<Fp>::free(2, 2);
    auto f = free_basis(*R, M);
    CHECK(f.free);
    CHECK(f.generators == 2);
    // R/(y): the quotient of R by yR.
    PresentedModule<Fp> Q{1, 2, std::nullopt, {{{1, Fp(1)}}}};
    auto q = free_basis(*R, Q);
    CHECK_FALSE(q.free);
    CHECK(q.dim == 1);
    CHECK(q.generators == 1);
}
