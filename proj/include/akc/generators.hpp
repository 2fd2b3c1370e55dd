#pragma once

// Seeded random inputs for property checks.

#include <random>

#include "akc/cdga.hpp"
#include "akc/koszul.hpp"
#include "akc/specseq.hpp"

namespace akc::gen {

using Rng = std::mt19937_64;

template <class F>
F scalar(Rng& rng, int spread = 3)
{
    std::uniform_int_distribution<int> u(-spread, spread);
    return F(u(rng));
}

template <class F>
Vector<F> element(const LocalAlgebra<F>& R, Rng& rng)
{
    Vector<F> v(R.dim());
    for (Index i = 0; i < R.dim(); ++i)
        v(i) = scalar<F>(rng);
    return v;
}

// Element of the maximal ideal: no constant term in the monomial basis.
template <class F>
Vector<F> nilpotent(const LocalAlgebra<F>& R, Rng& rng)
{
    Vector<F> v = element(R, rng);
    v(0) = F(0);
    return v;
}

template <class F>
RLinearMap<F> map(const LocalAlgebra<F>& R, Rng& rng, Index t, Index s)
{
    auto m = RLinearMap<F>::zero(R, t, s);
    for (auto& e : m.entries)
        e = element(R, rng);
    return m;
}

// Product of elementary matrices, so always invertible.
template <class F>
RLinearMap<F> invertible(const LocalAlgebra<F>& R, Rng& rng, Index n)
{
    auto m = RLinearMap<F>::identity(R, n);
    if (n < 2)
        return m;
    std::uniform_int_distribution<Index> pick(0, n - 1);
    for (Index step = 0; step < 3 * n; ++step) {
        Index i = pick(rng), j = pick(rng);
        if (i == j)
            continue;
        auto e = RLinearMap<F>::identity(R, n);
        e.at(i, j) = element(R, rng);
        m = compose(R, e, m);
    }
    return m;
}

// u = A · diag(1, .., 1, 0, ..) · B with the given rank: ker, im and coker free.
template <class F>
RLinearMap<F> split_map(const LocalAlgebra<F>& R, Rng& rng, Index t, Index s, Index r)
{
    auto D = RLinearMap<F>::zero(R, t, s);
    for (Index i = 0; i < r; ++i)
        D.at(i, i) = R.unit();
    return compose(R, invertible(R, rng, t), compose(R, D, invertible(R, rng, s)));
}

template <class F>
TwoTermComplex<F> two_term(AlgebraPtr<F> R, const RLinearMap<F>& u)
{
    return {R, u.source_rank, u.target_rank, u};
}

template <class F>
RLinearMap<F> inverse_map(const LocalAlgebra<F>& R, const RLinearMap<F>& a)
{
    auto inv = inverse<F>(flatten(R, a));
    if (!inv)
        throw std::invalid_argument("inverse_map: not invertible");
    return *unflatten(R, to_sparse<F>(*inv), a.source_rank, a.target_rank);
}

// [P → Q] → [P ⊕ R^e → Q ⊕ R^e] adding the acyclic summand 1: R^e → R^e,
// followed by random changes of basis of the target terms.
template <class F>
TwoTermMorphism<F> quasi_iso(AlgebraPtr<F> R, Rng& rng, Index t, Index s, Index extra)
{
    auto u = map(*R, rng, t, s);
    auto wide = block_diagonal(*R, u, RLinearMap<F>::identity(*R, extra));
    auto incP = RLinearMap<F>::zero(*R, s + extra, s), incQ = RLinearMap<F>::zero(*R, t + extra, t);
    for (Index i = 0; i < s; ++i)
        incP.at(i, i) = R->unit();
    for (Index i = 0; i < t; ++i)
        incQ.at(i, i) = R->unit();
    auto A = invertible(*R, rng, s + extra), B = invertible(*R, rng, t + extra);
    auto u2 = compose(*R, B, compose(*R, wide, inverse_map(*R, A)));
    return {two_term(R, u), two_term(R, u2), compose(*R, A, incP), compose(*R, B, incQ)};
}

// Filtered complex of total dimension ≤ max_dim in degrees 0..degrees−1 with
// levels 0..levels−1: a sum of points and intervals x → y (level y ≥ level x)
// conjugated by random filtered automorphisms.
template <class F>
FilteredComplex<F> filtered_complex(Rng& rng, int degrees, int levels, Index max_dim)
{
    std::uniform_int_distribution<int> deg(0, degrees - 1), lev(0, levels - 1), coin(0, 2);
    std::vector<std::vector<int>> level(static_cast<std::size_t>(degrees));
    std::vector<std::tuple<int, Index, Index, F>> arrows;  // degree, source, target, coefficient
    Index total = 0;
    std::uniform_int_distribution<Index> pieces(1, std::max<Index>(1, max_dim / 2));
    Index count = pieces(rng);
    for (Index k = 0; k < count && total < max_dim; ++k) {
        int n = deg(rng), a = lev(rng);
        if (coin(rng) > 0 && n + 1 < degrees && total + 2 <= max_dim) {
            int b = std::uniform_int_distribution<int>(a, levels - 1)(rng);
            F c = scalar<F>(rng);
            if (is_zero(c))
                c = F(1);
            arrows.emplace_back(n, Index(level[n].size()), Index(level[n + 1].size()), c);
            level[n].push_back(a);
            level[n + 1].push_back(b);
            total += 2;
        } else {
            level[n].push_back(a);
            total += 1;
        }
    }
    KComplex<F> k;
    k.lo = 0;
    for (const auto& l : level)
        k.dims.push_back(Index(l.size()));
    std::vector<Matrix<F>> d;
    for (int n = 0; n + 1 < degrees; ++n)
        d.push_back(Matrix<F>::Zero(k.dims[n + 1], k.dims[n]));
    for (const auto& [n, x, y, c] : arrows)
        d[std::size_t(n)](y, x) = c;
    // g_n: triangular for the order (level, index), entries only upward in level.
    std::vector<Matrix<F>> g, ginv;
    for (int n = 0; n < degrees; ++n) {
        Index m = k.dims[n];
        Matrix<F> a = Matrix<F>::Identity(m, m);
        for (Index r = 0; r < m; ++r)
            for (Index c = 0; c < m; ++c) {
                int lr = level[n][r], lc = level[n][c];
                if (r == c) {
                    F x = scalar<F>(rng);
                    a(r, c) = is_zero(x) ? F(1) : x;
                } else if (lr > lc || (lr == lc && r > c)) {
                    a(r, c) = scalar<F>(rng);
                }
            }
        g.push_back(a);
        ginv.push_back(*inverse<F>(a));
    }
    for (int n = 0; n + 1 < degrees; ++n)
        k.d.push_back(to_sparse<F>(Matrix<F>(g[n + 1] * d[std::size_t(n)] * ginv[n])));
    return make_filtered(std::move(k), std::move(level));
}

// Three columns, three rows; the zigzag a → (e, b) → c gives d_2(a) = 3c,
// with inert classes f at (0, 0) and g at (2, 2).
template <class F>
Bicomplex<F> zigzag()
{
    Bicomplex<F> B(3, 3);
    for (auto& col : B.dims)
        for (auto& x : col)
            x = 0;
    B.dims[0][0] = B.dims[0][1] = B.dims[1][0] = B.dims[1][1] = B.dims[2][0] = B.dims[2][2] = 1;
    B.dh[0][1] = Matrix<F>::Constant(1, 1, F(2));   // d_h a = 2e
    B.dv[1][0] = Matrix<F>::Constant(1, 1, F(-2));  // d_v b = −2e
    B.dh[1][0] = Matrix<F>::Constant(1, 1, F(3));   // d_h b = 3c
    return B;
}

// Random Hodge table on [0, size)², each entry nonzero with probability 1/density.
inline HodgeTable hodge_table(Rng& rng, int size, int density = 3)
{
    HodgeTable h;
    std::uniform_int_distribution<int> pick(0, density - 1), val(1, 4);
    for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j)
            if (pick(rng) == 0)
                h[{i, j}] = val(rng);
    return h;
}

struct Mutation {
    int i, j;
    Index a, b, target;
};

// Adds one basis vector to a single product; the result is a new table.
template <class F>
std::shared_ptr<TableMult<F>> mutate(const CDGA<F>& K, const TableMult<F>& base, Rng& rng, Mutation& where)
{
    const auto& C = K.complex;
    int top = K.top();
    auto tab = std::make_shared<TableMult<F>>(base);
    do {
        where.i = std::uniform_int_distribution<int>(0, top)(rng);
        where.j = std::uniform_int_distribution<int>(0, top - where.i)(rng);
    } while (C.ambient(where.i) == 0 || C.ambient(where.j) == 0 || C.ambient(where.i + where.j) == 0);
    where.a = std::uniform_int_distribution<Index>(0, C.ambient(where.i) - 1)(rng);
    where.b = std::uniform_int_distribution<Index>(0, C.ambient(where.j) - 1)(rng);
    where.target = std::uniform_int_distribution<Index>(0, C.ambient(where.i + where.j) - 1)(rng);
    SparseVec<F> cur;
    tab->product(where.i, where.a, where.j, where.b, cur);
    axpy(cur, F(1), SparseVec<F>{{where.target, F(1)}});
    tab->set(where.i, where.a, where.j, where.b, cur);
    return tab;
}

}  // namespace akc::gen
