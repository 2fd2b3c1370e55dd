#include "doctest.h"

#include "akc/derham.hpp"
#include "akc/generators.hpp"

using namespace akc;

namespace {

// Λ(R^n) with zero differential, generated by e_1..e_n and the R-basis.
CDGA<Fp> exterior_cdga(AlgebraPtr<Fp> R, int n)
{
    Index d = R->dim();
    CDGA<Fp> K;
    std::vector<Index> ranks;
    std::vector<SpMat<Fp>> ds;
    for (int i = 0; i <= n; ++i)
        ranks.push_back(ExteriorBasis(n, i).size());
    for (int i = 0; i < n; ++i)
        ds.push_back(SpMat<Fp>(ranks[i + 1] * d, ranks[i] * d));
    K.complex = free_complex<Fp>(R, 0, ranks, ds);
    auto t = std::make_shared<TableMult<Fp>>();
    for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n; ++j) {
            ExteriorBasis a(n, i), b(n, j), c(n, i + j);
            for (Index x = 0; x < a.size(); ++x)
                for (Index y = 0; y < b.size(); ++y) {
                    int s = merge_sign(a.at(x), b.at(y));
                    if (s == 0)
                        continue;
                    auto u = a.at(x);
                    u.insert(u.end(), b.at(y).begin(), b.at(y).end());
                    std::sort(u.begin(), u.end());
                    for (Index r = 0; r < d; ++r)
                        for (Index q = 0; q < d; ++q) {
                            SparseVec<Fp> v;
                            for (const auto& [l, cf] : R->basis_product(r, q))
                                v.emplace_back(c.index(u) * d + l, Fp(s) * cf);
                            t->set(i, x * d + r, j, y * d + q, v);
                        }
                }
        }
    K.mult = t;
    K.unit = {{0, Fp(1)}};
    for (int j = 0; j < n; ++j)
        K.generators.emplace_back(1, Index(j) * d);
    for (Index r = 1; r < d; ++r)
        K.generators.emplace_back(0, r);
    return K;
}

// Single-degree cdga with the given R-algebra table on ambient k^dim.
CDGA<Fp> degree_zero(AlgebraPtr<Fp> R, PresentedModule<Fp> term, const std::vector<std::vector<SparseVec<Fp>>>& tab,
                     SparseVec<Fp> unit)
{
    CDGA<Fp> K;
    K.complex.R = R;
    K.complex.terms = {std::move(term)};
    auto t = std::make_shared<TableMult<Fp>>();
    for (std::size_t a = 0; a < tab.size(); ++a)
        for (std::size_t b = 0; b < tab[a].size(); ++b)
            t->set(0, Index(a), 0, Index(b), tab[a][b]);
    K.mult = t;
    K.unit = std::move(unit);
    return K;
}

}  // namespace

TEST_CASE("exterior algebras satisfy C1-C3")
{
    FpContext ctx(3);
    for (int order : {1, 2}) {
        auto R = truncated_polynomial_algebra<Fp>(1, order);
        for (int n = 1; n <= 3; ++n) {
            auto K = exterior_cdga(R, n);
            auto r = verify_akc(K);
            CHECK(r.cdga.ok);
            CHECK(r.c1.ok);
            CHECK(r.c2.ok);
            CHECK(r.c3.ok);
            CHECK(r.c2_detail.h1_rank == n);
            auto E = K;
            E.generators.clear();
            CHECK(validate_cdga(E).method == "exhaustive");
            CHECK(validate_cdga(E).ok);
        }
    }
}

TEST_CASE("C1 failures and successes in degree zero")
{
    FpContext ctx(3);
    auto k = field_algebra<Fp>();
    // k × k: two idempotents.
    auto prod = degree_zero(k, PresentedModule<Fp>::free(2, 1),
                            {{{{0, Fp(1)}}, {}}, {{}, {{1, Fp(1)}}}}, {{0, Fp(1)}, {1, Fp(1)}});
    CHECK(validate_cdga(prod).ok);
    CHECK_FALSE(check_C1(prod).ok);
    auto one = degree_zero(k, PresentedModule<Fp>::free(1, 1), {{{{0, Fp(1)}}}}, {{0, Fp(1)}});
    CHECK(check_C1(one).ok);
    CHECK(verify_akc(one).ok());
}

TEST_CASE("K^0 = R/(y) over F_3[y]/y^2 fails C3")
{
    FpContext ctx(3);
    auto R = truncated_polynomial_algebra<Fp>(1, 2);
    PresentedModule<Fp> M{1, 2, std::nullopt, {{{1, Fp(1)}}}};
    std::vector<std::vector<SparseVec<Fp>>> tab(2, std::vector<SparseVec<Fp>>(2));
    for (Index a = 0; a < 2; ++a)
        for (Index b = 0; b < 2; ++b)
            tab[a][b] = R->basis_product(a, b);
    auto K = degree_zero(R, M, tab, {{0, Fp(1)}});
    CHECK(validate_cdga(K).ok);
    auto c3 = check_C3(K);
    CHECK_FALSE(c3.verdict.ok);
    CHECK(c3.verdict.detail.find("K^0") != std::string::npos);
    CHECK(c3.modules[0].second.dim == 1);
}

TEST_CASE("an extra H^2 summand fails C2 at q = 2")
{
    FpContext ctx(3);
    auto k = field_algebra<Fp>();
    CDGA<Fp> K;
    K.complex = free_complex<Fp>(k, 0, {1, 1, 1}, {SpMat<Fp>(1, 1), SpMat<Fp>(1, 1)});
    auto t = std::make_shared<TableMult<Fp>>();
    for (int i = 0; i <= 2; ++i)
        t->set(0, 0, i, 0, {{0, Fp(1)}}), t->set(i, 0, 0, 0, {{0, Fp(1)}});
    K.mult = t;
    K.unit = {{0, Fp(1)}};
    auto r = verify_akc(K);
    CHECK(r.cdga.ok);
    CHECK(r.c1.ok);
    CHECK_FALSE(r.c2.ok);
    CHECK(r.c2_detail.failed_degree == 2);
}

TEST_CASE("a corrupted table entry is caught with a witness")
{
    FpContext ctx(3);
    auto M = derham(DeRhamSpec{3, 2, 1, Flavor::Affine});
    auto t = to_table(M.cdga);
    auto K = M.cdga;
    // x1 · dx1 := 2 x1 dx1
    auto x1 = M.form({1, 0}, {})[0].first;
    auto dx1 = M.form({0, 0}, {0})[0].first;
    auto x1dx1 = M.form({1, 0}, {0})[0].first;
    t->set(0, x1, 1, dx1, {{x1dx1, Fp(2)}});
    K.mult = t;
    auto r = validate_cdga(K);
    CHECK_FALSE(r.ok);
    CHECK_FALSE(r.structural);
    CHECK_FALSE(r.witness.empty());
    K.generators.clear();
    CHECK_FALSE(validate_cdga(K).ok);
}

TEST_CASE("generator certificate and exhaustive checks agree on random mutations")
{
    FpContext ctx(2);
    auto M = derham(DeRhamSpec{2, 2, 1, Flavor::Affine});
    gen::Rng rng(23);
    auto base = to_table(M.cdga);
    int agree = 0, trials = 40;
    for (int t = 0; t < trials; ++t) {
        auto tab = std::make_shared<TableMult<Fp>>(*base);
        std::uniform_int_distribution<int> deg(0, 2);
        int i = deg(rng), j = std::uniform_int_distribution<int>(0, 2 - i)(rng);
        Index a = std::uniform_int_distribution<Index>(0, M.cdga.complex.ambient(i) - 1)(rng);
        Index b = std::uniform_int_distribution<Index>(0, M.cdga.complex.ambient(j) - 1)(rng);
        Index c = std::uniform_int_distribution<Index>(0, M.cdga.complex.ambient(i + j) - 1)(rng);
        SparseVec<Fp> cur;
        tab->product(i, a, j, b, cur);
        axpy(cur, Fp(1), SparseVec<Fp>{{c, Fp(1)}});
        tab->set(i, a, j, b, cur);
        auto K = M.cdga;
        K.mult = tab;
        bool g = validate_cdga(K).ok;
        K.generators.clear();
        bool e = validate_cdga(K).ok;
        agree += g == e;
    }
    CHECK(agree == trials);
}

TEST_CASE("structural errors are distinguished from law violations")
{
    FpContext ctx(3);
    auto M = derham(DeRhamSpec{3, 1, 1, Flavor::Affine});
    auto t = to_table(M.cdga);
    t->set(0, 0, 1, 0, {{99, Fp(1)}});
    auto K = M.cdga;
    K.mult = t;
    auto r = validate_cdga(K);
    CHECK_FALSE(r.ok);
    CHECK(r.structural);
}
