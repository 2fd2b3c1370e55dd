#pragma once

// Exact linear algebra over a field F.
//
// Dense routines work on Eigen matrices and serve small objects (structure
// constants, filtered complexes, R-linear maps). Complexes are stored as
// Eigen sparse matrices; their ranks, kernels and quotient coordinates are
// computed with Echelon, an incremental sparse basis whose vectors are keyed
// by their largest nonzero index.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "akc/scalar.hpp"

namespace akc {

using Index = int;
using Count = std::int64_t;

template <class F>
using Matrix = Eigen::Matrix<F, Eigen::Dynamic, Eigen::Dynamic>;
template <class F>
using Vector = Eigen::Matrix<F, Eigen::Dynamic, 1>;
template <class F>
using SpMat = Eigen::SparseMatrix<F, Eigen::ColMajor, Index>;

// ---------------------------------------------------------------------------
// Dense

template <class F>
struct RrefResult {
    Matrix<F> reduced;
    std::vector<Index> pivots;
    Index rank = 0;
};

template <class F>
RrefResult<F> rref(Matrix<F> a)
{
    RrefResult<F> out;
    Index row = 0;
    for (Index col = 0; col < a.cols() && row < a.rows(); ++col) {
        Index piv = -1;
        for (Index r = row; r < a.rows(); ++r)
            if (!is_zero(a(r, col))) {
                piv = r;
                break;
            }
        if (piv < 0)
            continue;
        a.row(piv).swap(a.row(row));
        F inv = inverse(a(row, col));
        for (Index c = col; c < a.cols(); ++c)
            a(row, c) *= inv;
        for (Index r = 0; r < a.rows(); ++r) {
            if (r == row || is_zero(a(r, col)))
                continue;
            F f = a(r, col);
            for (Index c = col; c < a.cols(); ++c)
                a(r, c) -= f * a(row, c);
        }
        out.pivots.push_back(col);
        ++row;
    }
    out.rank = row;
    out.reduced = std::move(a);
    return out;
}

template <class F>
Index rank(const Matrix<F>& a)
{
    return rref<F>(a).rank;
}

// Columns form a basis of ker a, one per free column of the rref.
template <class F>
Matrix<F> kernel_basis(const Matrix<F>& a)
{
    auto r = rref<F>(a);
    std::vector<bool> is_pivot(a.cols(), false);
    for (Index c : r.pivots)
        is_pivot[c] = true;
    Matrix<F> k = Matrix<F>::Zero(a.cols(), a.cols() - r.rank);
    Index out = 0;
    for (Index free = 0; free < a.cols(); ++free) {
        if (is_pivot[free])
            continue;
        k(free, out) = F(1);
        for (Index i = 0; i < r.rank; ++i)
            k(r.pivots[i], out) = -r.reduced(i, free);
        ++out;
    }
    return k;
}

// The pivot columns of a, which form a basis of its column space.
template <class F>
Matrix<F> image_basis(const Matrix<F>& a)
{
    auto r = rref<F>(a);
    Matrix<F> out(a.rows(), r.rank);
    for (Index i = 0; i < r.rank; ++i)
        out.col(i) = a.col(r.pivots[i]);
    return out;
}

template <class F>
std::optional<Vector<F>> solve(const Matrix<F>& a, const Vector<F>& b)
{
    if (b.size() != a.rows())
        throw std::invalid_argument("solve: dimension mismatch");
    Matrix<F> aug(a.rows(), a.cols() + 1);
    aug << a, b;
    auto r = rref<F>(aug);
    if (!r.pivots.empty() && r.pivots.back() == a.cols())
        return std::nullopt;
    Vector<F> x = Vector<F>::Zero(a.cols());
    for (Index i = 0; i < r.rank; ++i)
        x(r.pivots[i]) = r.reduced(i, a.cols());
    return x;
}

template <class F>
std::optional<Matrix<F>> inverse(const Matrix<F>& a)
{
    if (a.rows() != a.cols())
        return std::nullopt;
    Index n = a.rows();
    Matrix<F> aug(n, 2 * n);
    aug << a, Matrix<F>::Identity(n, n);
    auto r = rref<F>(aug);
    if (r.rank < n || (n > 0 && r.pivots[n - 1] >= n))
        return std::nullopt;
    return Matrix<F>(r.reduced.rightCols(n));
}

template <class F>
bool is_zero_matrix(const Matrix<F>& a)
{
    for (Index c = 0; c < a.cols(); ++c)
        for (Index r = 0; r < a.rows(); ++r)
            if (!is_zero(a(r, c)))
                return false;
    return true;
}

// ---------------------------------------------------------------------------
// Sparse vectors: sorted by index, no stored zeros.

template <class F>
using SparseVec = std::vector<std::pair<Index, F>>;

// y += c * x
template <class F>
void axpy(SparseVec<F>& y, const F& c, const SparseVec<F>& x)
{
    if (is_zero(c) || x.empty())
        return;
    SparseVec<F> out;
    out.reserve(y.size() + x.size());
    auto i = y.begin();
    auto j = x.begin();
    while (i != y.end() || j != x.end()) {
        if (j == x.end() || (i != y.end() && i->first < j->first)) {
            out.push_back(*i++);
        } else if (i == y.end() || j->first < i->first) {
            out.emplace_back(j->first, c * j->second);
            ++j;
        } else {
            F v = i->second + c * j->second;
            if (!is_zero(v))
                out.emplace_back(i->first, v);
            ++i;
            ++j;
        }
    }
    y = std::move(out);
}

template <class F>
SparseVec<F> scaled(SparseVec<F> x, const F& c)
{
    if (is_zero(c))
        return {};
    for (auto& e : x)
        e.second *= c;
    return x;
}

// Builds a canonical sparse vector from unsorted (index, value) terms.
template <class F>
SparseVec<F> canonicalize(SparseVec<F> terms)
{
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    SparseVec<F> out;
    out.reserve(terms.size());
    for (auto& t : terms) {
        if (!out.empty() && out.back().first == t.first)
            out.back().second += t.second;
        else
            out.push_back(t);
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const auto& e) { return is_zero(e.second); }),
              out.end());
    return out;
}

template <class F>
F coefficient(const SparseVec<F>& x, Index i)
{
    auto it = std::lower_bound(x.begin(), x.end(), i,
                               [](const auto& e, Index k) { return e.first < k; });
    return (it != x.end() && it->first == i) ? it->second : F(0);
}

template <class F>
SparseVec<F> unit_vector(Index i)
{
    return {{i, F(1)}};
}

template <class F>
SparseVec<F> column(const SpMat<F>& m, Index j)
{
    SparseVec<F> out;
    for (typename SpMat<F>::InnerIterator it(m, j); it; ++it)
        if (!is_zero(it.value()))
            out.emplace_back(it.row(), it.value());
    return out;
}

template <class F>
SparseVec<F> apply(const SpMat<F>& m, const SparseVec<F>& x)
{
    SparseVec<F> terms;
    for (const auto& [j, c] : x)
        for (typename SpMat<F>::InnerIterator it(m, j); it; ++it)
            terms.emplace_back(it.row(), c * it.value());
    return canonicalize(std::move(terms));
}

// Appends sorted columns left to right.
template <class F>
class ColumnBuilder {
public:
    ColumnBuilder(Index rows, Index cols, Count nnz_hint = 0) : m_(rows, cols)
    {
        if (nnz_hint > 0)
            m_.reserve(nnz_hint);
    }

    void push(const SparseVec<F>& col)
    {
        if (next_ >= m_.cols())
            throw std::out_of_range("ColumnBuilder: too many columns");
        m_.startVec(next_);
        for (const auto& [i, v] : col) {
            if (i < 0 || i >= m_.rows())
                throw std::out_of_range("ColumnBuilder: row index out of range");
            m_.insertBack(i, next_) = v;
        }
        ++next_;
    }

    SpMat<F> finish()
    {
        while (next_ < m_.cols())
            push({});
        m_.finalize();
        return std::move(m_);
    }

private:
    SpMat<F> m_;
    Index next_ = 0;
};

template <class F>
SpMat<F> from_columns(Index rows, const std::vector<SparseVec<F>>& cols)
{
    SpMat<F> m(rows, Index(cols.size()));
    Eigen::VectorXi nnz(cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        nnz[Index(j)] = Index(cols[j].size());
    m.reserve(nnz);
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (const auto& [i, v] : cols[j]) {
            if (i < 0 || i >= rows)
                throw std::out_of_range("from_columns: row index out of range");
            m.insert(i, Index(j)) = v;
        }
    m.makeCompressed();
    return m;
}

template <class F>
std::vector<SparseVec<F>> to_columns(const SpMat<F>& m)
{
    std::vector<SparseVec<F>> cols(m.cols());
    for (Index j = 0; j < m.cols(); ++j)
        cols[j] = column(m, j);
    return cols;
}

template <class F>
SpMat<F> pruned(SpMat<F> m)
{
    m.prune([](Index, Index, const F& v) { return !is_zero(v); });
    return m;
}

template <class F>
SpMat<F> product(const SpMat<F>& a, const SpMat<F>& b)
{
    if (a.cols() != b.rows())
        throw std::invalid_argument("product: dimension mismatch");
    SpMat<F> c = a * b;
    return pruned<F>(std::move(c));
}

template <class F>
bool is_zero_matrix(const SpMat<F>& m)
{
    for (Index j = 0; j < m.outerSize(); ++j)
        for (typename SpMat<F>::InnerIterator it(m, j); it; ++it)
            if (!is_zero(it.value()))
                return false;
    return true;
}

template <class F>
bool equal(const SpMat<F>& a, const SpMat<F>& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        return false;
    SpMat<F> diff = a - b;
    return is_zero_matrix<F>(diff);
}

template <class F>
Matrix<F> to_dense(const SpMat<F>& m)
{
    Matrix<F> d = Matrix<F>::Zero(m.rows(), m.cols());
    for (Index j = 0; j < m.outerSize(); ++j)
        for (typename SpMat<F>::InnerIterator it(m, j); it; ++it)
            d(it.row(), j) = it.value();
    return d;
}

template <class F>
SpMat<F> to_sparse(const Matrix<F>& d)
{
    std::vector<SparseVec<F>> cols(d.cols());
    for (Index j = 0; j < d.cols(); ++j)
        for (Index i = 0; i < d.rows(); ++i)
            if (!is_zero(d(i, j)))
                cols[j].emplace_back(i, d(i, j));
    return from_columns<F>(Index(d.rows()), cols);
}

template <class F>
SpMat<F> sparse_identity(Index n)
{
    std::vector<SparseVec<F>> cols(n);
    for (Index j = 0; j < n; ++j)
        cols[j] = unit_vector<F>(j);
    return from_columns<F>(n, cols);
}

// ---------------------------------------------------------------------------
// Echelon: an incrementally built basis of a subspace of F^ambient.
//
// Each stored vector is keyed by its largest index (its pivot); pivots are
// distinct. Optionally each stored vector remembers which combination of the
// inserted vectors produced it, which yields kernels.

template <class F>
class Echelon {
public:
    explicit Echelon(Index ambient, bool track = false)
        : slot_of_pivot_(std::size_t(ambient), -1), track_(track)
    {
    }

    Index ambient() const { return Index(slot_of_pivot_.size()); }
    Index rank() const { return Index(vecs_.size()); }
    const std::vector<SparseVec<F>>& vectors() const { return vecs_; }
    const std::vector<Index>& pivots() const { return pivots_; }
    int tag(Index slot) const { return tags_[slot]; }
    bool is_pivot(Index row) const { return slot_of_pivot_[row] >= 0; }
    Index slot_of_pivot(Index row) const { return slot_of_pivot_[row]; }

    // Inserts v (the id-th inserted vector when tracking). Returns the slot
    // if v was independent, or -1. When v depends on the stored vectors and
    // tracking is on, the dependency (a kernel vector in terms of insertion
    // ids) is written to *relation.
    Index insert(SparseVec<F> v, int tag = 0, SparseVec<F>* relation = nullptr)
    {
        SparseVec<F> combo;
        if (track_)
            combo = unit_vector<F>(inserted_);
        ++inserted_;
        while (!v.empty()) {
            Index piv = v.back().first;
            Index s = slot_of_pivot_[piv];
            if (s < 0)
                break;
            F c = -v.back().second / vecs_[s].back().second;
            axpy(v, c, vecs_[s]);
            if (track_)
                axpy(combo, c, combos_[s]);
        }
        if (v.empty()) {
            if (relation)
                *relation = std::move(combo);
            return -1;
        }
        Index slot = Index(vecs_.size());
        slot_of_pivot_[v.back().first] = slot;
        pivots_.push_back(v.back().first);
        vecs_.push_back(std::move(v));
        tags_.push_back(tag);
        if (track_)
            combos_.push_back(std::move(combo));
        return slot;
    }

    // Eliminates every pivot entry of v. Returns the residual (supported on
    // non-pivot indices); v = residual + sum coeffs[slot] * vectors()[slot].
    SparseVec<F> reduce(SparseVec<F> v, SparseVec<F>* coeffs = nullptr) const
    {
        std::vector<std::pair<Index, F>> used;
        // Walk indices downward; pivot vectors only touch indices <= their pivot.
        Index bound = std::numeric_limits<Index>::max();
        while (true) {
            auto it = std::lower_bound(v.begin(), v.end(), bound,
                                       [](const auto& e, Index k) { return e.first < k; });
            bool found = false;
            while (it != v.begin()) {
                --it;
                Index s = slot_of_pivot_[it->first];
                if (s >= 0) {
                    F c = it->second / vecs_[s].back().second;
                    bound = it->first;
                    used.emplace_back(s, c);
                    axpy(v, -c, vecs_[s]);
                    found = true;
                    break;
                }
            }
            if (!found)
                break;
        }
        if (coeffs)
            *coeffs = canonicalize(std::move(used));
        return v;
    }

    // v as a combination of the inserted vectors (by insertion id); needs
    // tracking. nullopt when v is outside the span.
    std::optional<SparseVec<F>> express(const SparseVec<F>& v) const
    {
        if (!track_)
            throw std::logic_error("Echelon::express needs tracking");
        SparseVec<F> coeffs;
        if (!reduce(v, &coeffs).empty())
            return std::nullopt;
        SparseVec<F> out;
        for (const auto& [s, c] : coeffs)
            axpy(out, c, combos_[s]);
        return out;
    }

    bool contains(const SparseVec<F>& v) const { return leading_residual(v).empty(); }

    // Reduces only until the largest index is not a pivot; enough for
    // membership tests.
    SparseVec<F> leading_residual(SparseVec<F> v) const
    {
        while (!v.empty()) {
            Index s = slot_of_pivot_[v.back().first];
            if (s < 0)
                break;
            axpy(v, -v.back().second / vecs_[s].back().second, vecs_[s]);
        }
        return v;
    }

private:
    std::vector<Index> slot_of_pivot_;
    std::vector<SparseVec<F>> vecs_;
    std::vector<SparseVec<F>> combos_;
    std::vector<Index> pivots_;
    std::vector<int> tags_;
    bool track_;
    Index inserted_ = 0;
};

template <class F>
Index rank(const SpMat<F>& m)
{
    Echelon<F> e(m.rows());
    for (Index j = 0; j < m.cols(); ++j)
        e.insert(column(m, j));
    return e.rank();
}

// Basis of the kernel of m, as sparse vectors in F^cols.
template <class F>
std::vector<SparseVec<F>> kernel(const SpMat<F>& m)
{
    Echelon<F> e(m.rows(), true);
    std::vector<SparseVec<F>> out;
    for (Index j = 0; j < m.cols(); ++j) {
        SparseVec<F> rel;
        if (e.insert(column(m, j), 0, &rel) < 0)
            out.push_back(std::move(rel));
    }
    return out;
}

}  // namespace akc
