#pragma once

// Spectral sequences of finite filtered complexes over a field.
//
// A filtered complex is stored in an adapted basis: each basis vector of K^n
// carries a level, and F^p K^n is spanned by the vectors of level ≥ p. Pages
// are indexed E_r^{p,q} with total degree p + q and d_r of bidegree (r, 1 − r).

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "akc/complex.hpp"

namespace akc {

template <class F>
struct FilteredComplex {
    KComplex<F> k;
    std::vector<std::vector<int>> level;  // per degree (offset by k.lo), per basis vector

    int level_of(int n, Index i) const { return level[std::size_t(n - k.lo)][std::size_t(i)]; }

    std::pair<int, int> level_range() const
    {
        int lo = 0, hi = -1;
        bool any = false;
        for (const auto& ls : level)
            for (int l : ls) {
                lo = any ? std::min(lo, l) : l;
                hi = any ? std::max(hi, l) : l;
                any = true;
            }
        return {lo, hi};
    }
};

// Checks shape, d² = 0 and d F^p ⊆ F^p.
template <class F>
FilteredComplex<F> make_filtered(KComplex<F> k, std::vector<std::vector<int>> level)
{
    if (level.size() != k.dims.size())
        throw std::invalid_argument("make_filtered: one level list per degree expected");
    for (std::size_t n = 0; n < level.size(); ++n)
        if (Index(level[n].size()) != k.dims[n])
            throw std::invalid_argument("make_filtered: level list of degree " + std::to_string(k.lo + int(n)) +
                                        " has the wrong length");
    FilteredComplex<F> f{std::move(k), std::move(level)};
    for (int n = f.k.lo; n < f.k.hi(); ++n) {
        SpMat<F> d = f.k.diff(n);
        for (Index c = 0; c < d.outerSize(); ++c)
            for (typename SpMat<F>::InnerIterator it(d, c); it; ++it)
                if (!is_zero(it.value()) && f.level_of(n + 1, it.row()) < f.level_of(n, c))
                    throw std::invalid_argument("make_filtered: d does not preserve the filtration in degree " +
                                                std::to_string(n));
        if (n + 1 < f.k.hi() && !is_zero_matrix<F>(to_dense<F>(product<F>(f.k.diff(n + 1), d))))
            throw std::invalid_argument("make_filtered: d² ≠ 0 in degree " + std::to_string(n));
    }
    return f;
}

template <class F>
struct SSCell {
    Index dim = 0;
    std::vector<SparseVec<F>> reps;  // in K^{p+q}
};

template <class F>
struct SSPage {
    int r = 0;
    std::map<std::pair<int, int>, SSCell<F>> cells;  // (p, q), nonzero cells only
    std::map<std::pair<int, int>, Matrix<F>> d;      // d_r out of (p, q), nonzero only

    Index dim(int p, int q) const
    {
        auto it = cells.find({p, q});
        return it == cells.end() ? 0 : it->second.dim;
    }
    bool differential_zero() const { return d.empty(); }
};

namespace detail {

// Z_r^p in degree n: x ∈ F^p K^n with dx ∈ F^{p+r} K^{n+1}.
template <class F>
std::vector<SparseVec<F>> ss_cycles(const FilteredComplex<F>& f, int n, int p, int r)
{
    const auto& k = f.k;
    Index dim = k.dim(n);
    std::vector<Index> cols;
    for (Index i = 0; i < dim; ++i)
        if (f.level_of(n, i) >= p)
            cols.push_back(i);
    std::vector<SparseVec<F>> out;
    if (cols.empty())
        return out;
    Matrix<F> d = to_dense<F>(k.diff(n));
    std::vector<Index> rows;
    for (Index j = 0; j < k.dim(n + 1); ++j)
        if (f.level_of(n + 1, j) < p + r)
            rows.push_back(j);
    Matrix<F> sub = Matrix<F>::Zero(Index(rows.size()), Index(cols.size()));
    for (std::size_t a = 0; a < rows.size(); ++a)
        for (std::size_t b = 0; b < cols.size(); ++b)
            sub(Index(a), Index(b)) = d(rows[a], cols[b]);
    Matrix<F> ker = kernel_basis<F>(sub);
    for (Index c = 0; c < ker.cols(); ++c) {
        SparseVec<F> v;
        for (std::size_t b = 0; b < cols.size(); ++b)
            if (!is_zero(ker(Index(b), c)))
                v.emplace_back(cols[b], ker(Index(b), c));
        out.push_back(canonicalize(std::move(v)));
    }
    return out;
}

// The denominator Z_{r−1}^{p+1} + d Z_{r−1}^{p−r+1}, in degree n.
template <class F>
std::vector<SparseVec<F>> ss_boundaries(const FilteredComplex<F>& f, int n, int p, int r)
{
    auto out = ss_cycles(f, n, p + 1, r - 1);
    if (f.k.has(n - 1)) {
        SpMat<F> d = f.k.diff(n - 1);
        for (const auto& z : ss_cycles(f, n - 1, p - r + 1, r - 1))
            out.push_back(apply<F>(d, z));
    }
    return out;
}

template <class F>
struct CellCoords {
    Echelon<F> ech;
    Index den = 0;  // number of denominator insertions
    Index dim = 0;
    std::vector<SparseVec<F>> reps;

    explicit CellCoords(Index ambient) : ech(ambient, true) {}

    // Coordinates of a vector of Z_r^p modulo the denominator.
    std::optional<SparseVec<F>> operator()(const SparseVec<F>& v) const
    {
        auto e = ech.express(v);
        if (!e)
            return std::nullopt;
        SparseVec<F> out;
        for (const auto& [id, x] : *e)
            if (id >= den)
                out.emplace_back(id - den, x);
        return out;
    }
};

template <class F>
CellCoords<F> ss_cell(const FilteredComplex<F>& f, int n, int p, int r)
{
    CellCoords<F> c(f.k.dim(n));
    for (const auto& b : ss_boundaries(f, n, p, r)) {
        c.ech.insert(b);
        ++c.den;
    }
    // Only independent cycles are inserted as representatives, so insertion
    // ids past den are representative indices.
    Echelon<F> probe = c.ech;
    for (const auto& z : ss_cycles(f, n, p, r))
        if (probe.insert(z) >= 0) {
            c.ech.insert(z);
            c.reps.push_back(z);
        }
    c.dim = Index(c.reps.size());
    return c;
}

}  // namespace detail

// E_r computed directly from the Z/B description, with d_r on representatives.
template <class F>
SSPage<F> page(const FilteredComplex<F>& f, int r)
{
    if (r < 1)
        throw std::invalid_argument("page: r must be at least 1");
    SSPage<F> pg;
    pg.r = r;
    auto [plo, phi] = f.level_range();
    std::map<std::pair<int, int>, detail::CellCoords<F>> coords;
    for (int n = f.k.lo; n <= f.k.hi(); ++n)
        for (int p = plo; p <= phi; ++p) {
            auto c = detail::ss_cell(f, n, p, r);
            if (c.dim == 0)
                continue;
            pg.cells[{p, n - p}] = SSCell<F>{c.dim, c.reps};
            coords.emplace(std::make_pair(p, n - p), std::move(c));
        }
    for (const auto& [pq, cell] : pg.cells) {
        auto [p, q] = pq;
        int n = p + q;
        auto tgt = coords.find({p + r, q - r + 1});
        if (tgt == coords.end())
            continue;
        Matrix<F> m = Matrix<F>::Zero(tgt->second.dim, cell.dim);
        SpMat<F> d = f.k.diff(n);
        for (Index j = 0; j < cell.dim; ++j) {
            auto c = tgt->second(apply<F>(d, cell.reps[std::size_t(j)]));
            if (!c)
                throw std::logic_error("page: d of a representative leaves Z_r");
            for (const auto& [i, x] : *c)
                m(i, j) = x;
        }
        if (!is_zero_matrix<F>(m))
            pg.d[pq] = std::move(m);
    }
    return pg;
}

// Pages 1..r_max.
template <class F>
std::vector<SSPage<F>> pages(const FilteredComplex<F>& f, int r_max)
{
    if (r_max < 1)
        throw std::invalid_argument("pages: r_max must be at least 1");
    std::vector<SSPage<F>> out;
    for (int r = 1; r <= r_max; ++r)
        out.push_back(page(f, r));
    return out;
}

// Every d_r with r past the filtration length vanishes.
template <class F>
int stabilization_page(const FilteredComplex<F>& f)
{
    auto [lo, hi] = f.level_range();
    return std::max(1, hi - lo + 1);
}

template <class F>
SSPage<F> e_infinity(const FilteredComplex<F>& f)
{
    return page(f, stabilization_page(f));
}

struct PageCheck {
    bool squares_zero = true;
    bool transition = true;
    std::string detail;
};

// d_r ∘ d_r = 0, and dim E_{r+1} = dim ker d_r − dim im d_r at every cell.
template <class F>
PageCheck check_transition(const SSPage<F>& e, const SSPage<F>& next)
{
    PageCheck out;
    int r = e.r;
    auto dmat = [&](int p, int q) -> const Matrix<F>* {
        auto it = e.d.find({p, q});
        return it == e.d.end() ? nullptr : &it->second;
    };
    std::set<std::pair<int, int>> spots;
    for (const auto& [pq, c] : e.cells)
        spots.insert(pq);
    for (const auto& [pq, c] : next.cells)
        spots.insert(pq);
    for (auto [p, q] : spots) {
        const Matrix<F>* out_m = dmat(p, q);
        const Matrix<F>* in_m = dmat(p - r, q + r - 1);
        if (out_m && in_m && !is_zero_matrix<F>(Matrix<F>(*out_m * *in_m))) {
            out.squares_zero = false;
            out.detail = "d_" + std::to_string(r) + "² ≠ 0 at (" + std::to_string(p) + "," + std::to_string(q) + ")";
        }
        Index dim = e.dim(p, q);
        Index ker = dim - (out_m ? rank<F>(*out_m) : 0);
        Index im = in_m ? rank<F>(*in_m) : 0;
        if (ker - im != next.dim(p, q)) {
            out.transition = false;
            out.detail = "E_" + std::to_string(r + 1) + " at (" + std::to_string(p) + "," + std::to_string(q) +
                         ") has dimension " + std::to_string(next.dim(p, q)) + ", homology of d_" +
                         std::to_string(r) + " gives " + std::to_string(ker - im);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Constructions

// F^p = τ≤−p K: in degree n the cocycles get level −n, a complement −n − 1.
template <class F>
FilteredComplex<F> canonical_filtration(const KComplex<F>& K)
{
    KComplex<F> out;
    out.lo = K.lo;
    out.dims = K.dims;
    std::vector<Matrix<F>> T, Tinv;
    std::vector<std::vector<int>> level;
    for (int n = K.lo; n <= K.hi(); ++n) {
        Index dim = K.dim(n);
        Matrix<F> z = kernel_basis<F>(to_dense<F>(K.diff(n)));
        Matrix<F> t(dim, dim);
        Index c = 0;
        for (; c < z.cols(); ++c)
            t.col(c) = z.col(c);
        std::vector<int> lv(std::size_t(z.cols()), -n);
        for (Index e = 0; e < dim && c < dim; ++e) {
            Matrix<F> trial = t.leftCols(c + 1);
            trial.col(c) = Vector<F>::Unit(dim, e);
            if (rank<F>(trial) == c + 1) {
                t.col(c++) = Vector<F>::Unit(dim, e);
                lv.push_back(-n - 1);
            }
        }
        T.push_back(t);
        Tinv.push_back(*inverse<F>(t));
        level.push_back(std::move(lv));
    }
    for (int n = K.lo; n < K.hi(); ++n) {
        std::size_t a = std::size_t(n - K.lo);
        out.d.push_back(to_sparse<F>(Matrix<F>(Tinv[a + 1] * to_dense<F>(K.diff(n)) * T[a])));
    }
    return make_filtered(std::move(out), std::move(level));
}

template <class F>
FilteredComplex<F> canonical_filtration(const Complex<F>& K)
{
    return canonical_filtration(coordinatize(K).k);
}

// First-quadrant bicomplex with d = d_h + d_v, d_h d_v + d_v d_h = 0.
template <class F>
struct Bicomplex {
    int cols = 0, rows = 0;
    std::vector<std::vector<Index>> dims;        // [a][b]
    std::vector<std::vector<Matrix<F>>> dh, dv;  // K^{a,b} → K^{a+1,b} and → K^{a,b+1}

    Bicomplex(int c, int r) : cols(c), rows(r)
    {
        dims.assign(std::size_t(c), std::vector<Index>(std::size_t(r), 0));
        dh.assign(std::size_t(c), std::vector<Matrix<F>>(std::size_t(r)));
        dv.assign(std::size_t(c), std::vector<Matrix<F>>(std::size_t(r)));
    }
    Index dim(int a, int b) const { return a < 0 || b < 0 || a >= cols || b >= rows ? 0 : dims[a][b]; }
    Matrix<F> h(int a, int b) const
    {
        const auto& m = dh[std::size_t(a)][std::size_t(b)];
        return m.size() ? m : Matrix<F>::Zero(dim(a + 1, b), dim(a, b));
    }
    Matrix<F> v(int a, int b) const
    {
        const auto& m = dv[std::size_t(a)][std::size_t(b)];
        return m.size() ? m : Matrix<F>::Zero(dim(a, b + 1), dim(a, b));
    }
};

// Total complex filtered by columns: level of K^{a,b} is a.
template <class F>
FilteredComplex<F> total_complex(const Bicomplex<F>& B)
{
    int top = B.cols + B.rows - 2;
    KComplex<F> k;
    k.lo = 0;
    std::vector<std::vector<int>> level;
    std::vector<std::vector<Index>> offset(std::size_t(B.cols), std::vector<Index>(std::size_t(B.rows), 0));
    for (int n = 0; n <= top; ++n) {
        Index off = 0;
        std::vector<int> lv;
        for (int a = 0; a < B.cols; ++a) {
            int b = n - a;
            if (b < 0 || b >= B.rows)
                continue;
            offset[a][b] = off;
            off += B.dim(a, b);
            lv.insert(lv.end(), std::size_t(B.dim(a, b)), a);
        }
        k.dims.push_back(off);
        level.push_back(std::move(lv));
    }
    for (int n = 0; n < top; ++n) {
        Matrix<F> d = Matrix<F>::Zero(k.dims[n + 1], k.dims[n]);
        for (int a = 0; a < B.cols; ++a) {
            int b = n - a;
            if (b < 0 || b >= B.rows || B.dim(a, b) == 0)
                continue;
            if (a + 1 < B.cols && B.dim(a + 1, b) > 0)
                d.block(offset[a + 1][b], offset[a][b], B.dim(a + 1, b), B.dim(a, b)) = B.h(a, b);
            if (b + 1 < B.rows && B.dim(a, b + 1) > 0)
                d.block(offset[a][b + 1], offset[a][b], B.dim(a, b + 1), B.dim(a, b)) = B.v(a, b);
        }
        k.d.push_back(to_sparse<F>(d));
    }
    return make_filtered(std::move(k), std::move(level));
}

// ---------------------------------------------------------------------------
// Degeneration by a gap in the Hodge table

using HodgeTable = std::map<std::pair<int, int>, std::int64_t>;

struct DifferentialCandidate {
    int i, j, r;
    bool operator==(const DifferentialCandidate& o) const { return i == o.i && j == o.j && r == o.r; }
    bool operator<(const DifferentialCandidate& o) const { return std::tie(i, j, r) < std::tie(o.i, o.j, o.r); }
};

struct DegenerationVerdict {
    bool degenerates = false;                    // degenerates-by-gap
    std::vector<DifferentialCandidate> witness;  // d_r: (i,j) → (i+r, j−r+1), r ≥ max(2, p), both ends nonzero
};

// With d_r = 0 for 2 ≤ r < p, the only possible differentials are those
// with r ≥ p between nonzero entries.
DegenerationVerdict degeneration_gate(const HodgeTable& h, std::uint32_t p);

}  // namespace akc
