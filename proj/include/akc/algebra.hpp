#pragma once

// Finite-dimensional commutative local algebras over a field, given by
// structure constants, and R-linear maps between free modules.
//
// A free module R^N is flattened to k^{N·d} with coordinate e·d + ρ for the
// ρ-th algebra basis element in the e-th summand.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "akc/linalg.hpp"

namespace akc {

template <class F>
class LocalAlgebra {
public:
    // structure[i][j] = b_i·b_j as a coordinate vector.
    LocalAlgebra(FieldDesc base, std::vector<std::string> labels,
                 std::vector<std::vector<Vector<F>>> structure, Vector<F> unit)
        : base_(base), labels_(std::move(labels)), unit_(std::move(unit))
    {
        d_ = Index(labels_.size());
        if (d_ < 1)
            throw std::invalid_argument("LocalAlgebra: dimension must be at least 1");
        if (Index(structure.size()) != d_ || unit_.size() != d_)
            throw std::invalid_argument("LocalAlgebra: structure constants have the wrong shape");
        left_.assign(d_, Matrix<F>::Zero(d_, d_));
        table_.resize(std::size_t(d_) * d_);
        for (Index i = 0; i < d_; ++i) {
            if (Index(structure[i].size()) != d_)
                throw std::invalid_argument("LocalAlgebra: structure constants have the wrong shape");
            for (Index j = 0; j < d_; ++j) {
                if (structure[i][j].size() != d_)
                    throw std::invalid_argument("LocalAlgebra: structure constants have the wrong shape");
                left_[i].col(j) = structure[i][j];
                auto& t = table_[std::size_t(i) * d_ + j];
                for (Index l = 0; l < d_; ++l)
                    if (!is_zero(structure[i][j](l)))
                        t.emplace_back(l, structure[i][j](l));
            }
        }
        unit_sparse_ = sparse_of(unit_);
    }

    const FieldDesc& base() const { return base_; }
    Index dim() const { return d_; }
    const std::vector<std::string>& labels() const { return labels_; }
    const Vector<F>& unit() const { return unit_; }
    const SparseVec<F>& unit_sparse() const { return unit_sparse_; }

    // b_i·b_j
    const SparseVec<F>& basis_product(Index i, Index j) const
    {
        return table_[std::size_t(i) * d_ + j];
    }
    Vector<F> structure(Index i, Index j) const { return left_[i].col(j); }

    // Matrix of x ↦ b_i·x.
    const Matrix<F>& basis_left(Index i) const { return left_[i]; }

    Matrix<F> left_matrix(const Vector<F>& a) const
    {
        Matrix<F> m = Matrix<F>::Zero(d_, d_);
        for (Index i = 0; i < d_; ++i)
            if (!is_zero(a(i)))
                m += a(i) * left_[i];
        return m;
    }

    Vector<F> multiply(const Vector<F>& a, const Vector<F>& b) const { return left_matrix(a) * b; }

    SparseVec<F> multiply(const SparseVec<F>& a, const SparseVec<F>& b) const
    {
        SparseVec<F> terms;
        for (const auto& [i, x] : a)
            for (const auto& [j, y] : b)
                for (const auto& [l, c] : basis_product(i, j))
                    terms.emplace_back(l, x * y * c);
        return canonicalize(std::move(terms));
    }

    Vector<F> scalar(const F& c) const { return c * unit_; }
    Vector<F> basis(Index i) const
    {
        Vector<F> v = Vector<F>::Zero(d_);
        v(i) = F(1);
        return v;
    }

    static SparseVec<F> sparse_of(const Vector<F>& v)
    {
        SparseVec<F> out;
        for (Index i = 0; i < v.size(); ++i)
            if (!is_zero(v(i)))
                out.emplace_back(i, v(i));
        return out;
    }

private:
    FieldDesc base_;
    std::vector<std::string> labels_;
    Vector<F> unit_;
    SparseVec<F> unit_sparse_;
    Index d_ = 0;
    std::vector<Matrix<F>> left_;
    std::vector<SparseVec<F>> table_;
};

template <class F>
using AlgebraPtr = std::shared_ptr<const LocalAlgebra<F>>;

// ---------------------------------------------------------------------------
// Constructors

template <class F>
AlgebraPtr<F> field_algebra()
{
    Vector<F> one(1);
    one(0) = F(1);
    return std::make_shared<LocalAlgebra<F>>(ScalarTraits<F>::desc(), std::vector<std::string>{"1"},
                                             std::vector<std::vector<Vector<F>>>{{one}}, one);
}

// Exponent vectors of monomials in `vars` variables of total degree < order,
// ordered by total degree, then lexicographically descending (y1 before y2).
std::vector<std::vector<int>> truncated_monomials(int vars, int order);

std::string monomial_label(const std::vector<int>& exps, const std::string& var);

// k[y_1..y_n]/(y_1..y_n)^N with the monomial basis.
template <class F>
AlgebraPtr<F> truncated_polynomial_algebra(int vars, int order)
{
    if (vars < 0 || order < 1)
        throw std::invalid_argument("truncated_polynomial_algebra: need vars >= 0, order >= 1");
    auto monos = truncated_monomials(vars, order);
    Index d = Index(monos.size());
    std::vector<std::string> labels;
    for (const auto& m : monos)
        labels.push_back(monomial_label(m, "y"));
    std::vector<std::vector<Vector<F>>> st(d, std::vector<Vector<F>>(d, Vector<F>::Zero(d)));
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j) {
            std::vector<int> e(vars);
            int deg = 0;
            for (int v = 0; v < vars; ++v) {
                e[v] = monos[i][v] + monos[j][v];
                deg += e[v];
            }
            if (deg >= order)
                continue;
            auto it = std::find(monos.begin(), monos.end(), e);
            st[i][j](Index(it - monos.begin())) = F(1);
        }
    Vector<F> unit = Vector<F>::Zero(d);
    unit(0) = F(1);
    return std::make_shared<LocalAlgebra<F>>(ScalarTraits<F>::desc(), labels, st, unit);
}

// ---------------------------------------------------------------------------
// Predicates

struct AlgebraReport {
    bool ok = true;
    std::string law;
    std::string witness;
};

template <class F>
std::string element_text(const LocalAlgebra<F>& R, const Vector<F>& a)
{
    std::string s;
    for (Index i = 0; i < a.size(); ++i) {
        if (is_zero(a(i)))
            continue;
        if (!s.empty())
            s += " + ";
        s += to_text(a(i)) + "*" + R.labels()[i];
    }
    return s.empty() ? "0" : s;
}

template <class F>
std::optional<Vector<F>> unit_inverse(const LocalAlgebra<F>& R, const Vector<F>& a)
{
    return solve<F>(R.left_matrix(a), R.unit());
}

template <class F>
bool is_unit(const LocalAlgebra<F>& R, const Vector<F>& a)
{
    return unit_inverse(R, a).has_value();
}

template <class F>
bool is_nonzerodivisor(const LocalAlgebra<F>& R, const Vector<F>& a)
{
    return rank<F>(R.left_matrix(a)) == R.dim();
}

template <class F>
bool factorial_invertible(const LocalAlgebra<F>& R, int m)
{
    if (m < 0)
        throw std::invalid_argument("factorial_invertible: m must be nonnegative");
    return is_unit(R, R.scalar(from_integer<F>(factorial(unsigned(m)))));
}

template <class F>
Vector<F> integer_element(const LocalAlgebra<F>& R, long long n)
{
    return R.scalar(from_integer<F>(BigInt(n)));
}

namespace detail {

template <class F>
bool is_nilpotent(const LocalAlgebra<F>& R, const Vector<F>& a)
{
    Matrix<F> l = R.left_matrix(a);
    Vector<F> v = R.unit();
    for (Index k = 0; k < R.dim(); ++k)
        v = l * v;
    return is_zero_matrix<F>(Matrix<F>(v));
}

// λ with a − λ nilpotent, if any.
template <class F>
std::optional<F> residue_of(const LocalAlgebra<F>& R, const Vector<F>& a)
{
    Index d = R.dim();
    Matrix<F> l = R.left_matrix(a);
    F tr = l.trace();
    F dd = from_integer<F>(BigInt(d));
    if (!is_zero(dd)) {
        F lambda = tr / dd;
        if (is_nilpotent(R, Vector<F>(a - R.scalar(lambda))))
            return lambda;
        return std::nullopt;
    }
    std::uint32_t p = ScalarTraits<F>::characteristic();
    if (p > 100000)
        throw std::domain_error("locality check: characteristic too large for residue search");
    for (std::uint32_t c = 0; c < p; ++c) {
        F lambda = from_integer<F>(BigInt(c));
        if (is_nilpotent(R, Vector<F>(a - R.scalar(lambda))))
            return lambda;
    }
    return std::nullopt;
}

}  // namespace detail

// Commutativity, associativity and unit on all basis tuples; then locality
// with residue field k: every basis element is λ + nilpotent and b ↦ λ is a
// ring map, so its kernel is the unique maximal ideal.
template <class F>
AlgebraReport verify_algebra(const LocalAlgebra<F>& R)
{
    Index d = R.dim();
    auto lbl = [&](Index i) { return R.labels()[i]; };
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j)
            if (R.basis_product(i, j) != R.basis_product(j, i))
                return {false, "commutativity", lbl(i) + "*" + lbl(j)};
    Matrix<F> lu = R.left_matrix(R.unit());
    for (Index i = 0; i < d; ++i)
        if (Vector<F>(lu.col(i)) != R.basis(i))
            return {false, "unit", "1*" + lbl(i)};
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j) {
            Vector<F> ij = R.structure(i, j);
            Matrix<F> lij = R.left_matrix(ij);
            Matrix<F> comp = R.basis_left(i) * R.basis_left(j);
            if (lij != comp)
                for (Index k = 0; k < d; ++k)
                    if (lij.col(k) != comp.col(k))
                        return {false, "associativity",
                                "(" + lbl(i) + "*" + lbl(j) + ")*" + lbl(k)};
        }
    std::vector<F> lambda(d);
    std::optional<Index> bad;
    for (Index i = 0; i < d && !bad; ++i) {
        auto l = detail::residue_of(R, R.basis(i));
        if (l)
            lambda[i] = *l;
        else
            bad = i;
    }
    if (!bad) {
        auto chi = [&](const Vector<F>& v) {
            F s(0);
            for (Index k = 0; k < d; ++k)
                s += v(k) * lambda[k];
            return s;
        };
        if (chi(R.unit()) != F(1))
            return {false, "locality", "residue map does not preserve the unit"};
        for (Index i = 0; i < d; ++i)
            for (Index j = 0; j < d; ++j)
                if (chi(R.structure(i, j)) != lambda[i] * lambda[j])
                    return {false, "locality", "residue map not multiplicative on " + lbl(i) + "*" + lbl(j)};
        return {};
    }
    // Look for two non-units with a unit sum among basis elements and their
    // complements 1 − b.
    std::vector<Vector<F>> cands;
    for (Index i = 0; i < d; ++i) {
        cands.push_back(R.basis(i));
        cands.push_back(R.unit() - R.basis(i));
    }
    for (std::size_t a = 0; a < cands.size(); ++a)
        for (std::size_t b = a + 1; b < cands.size(); ++b)
            if (!is_unit(R, cands[a]) && !is_unit(R, cands[b]) &&
                is_unit(R, Vector<F>(cands[a] + cands[b])))
                return {false, "locality",
                        "non-units " + element_text(R, cands[a]) + " and " + element_text(R, cands[b]) +
                            " sum to a unit"};
    return {false, "locality",
            "basis element " + lbl(*bad) + " is not a residue scalar plus a nilpotent"};
}

// ---------------------------------------------------------------------------
// Free modules and R-linear maps

// b_σ · v for v in a flattened free module.
template <class F>
SparseVec<F> act(const LocalAlgebra<F>& R, Index sigma, const SparseVec<F>& v)
{
    Index d = R.dim();
    SparseVec<F> terms;
    for (const auto& [idx, c] : v) {
        Index e = idx / d, rho = idx % d;
        for (const auto& [l, s] : R.basis_product(sigma, rho))
            terms.emplace_back(e * d + l, c * s);
    }
    return canonicalize(std::move(terms));
}

// r · v for an arbitrary element r.
template <class F>
SparseVec<F> act(const LocalAlgebra<F>& R, const SparseVec<F>& r, const SparseVec<F>& v)
{
    SparseVec<F> out;
    for (const auto& [sigma, c] : r)
        axpy(out, c, act(R, sigma, v));
    return out;
}

// Sparse matrix of the action of b_σ on R^rank.
template <class F>
SpMat<F> action_matrix(const LocalAlgebra<F>& R, Index sigma, Index rank)
{
    Index d = R.dim();
    std::vector<SparseVec<F>> cols(std::size_t(rank) * d);
    for (Index e = 0; e < rank; ++e)
        for (Index rho = 0; rho < d; ++rho) {
            SparseVec<F> c;
            for (const auto& [l, s] : R.basis_product(sigma, rho))
                c.emplace_back(e * d + l, s);
            cols[e * d + rho] = std::move(c);
        }
    return from_columns<F>(rank * d, cols);
}

template <class F>
struct RLinearMap {
    Index source_rank = 0;
    Index target_rank = 0;
    std::vector<Vector<F>> entries;  // row-major, target_rank × source_rank

    const Vector<F>& at(Index i, Index j) const { return entries[std::size_t(i) * source_rank + j]; }
    Vector<F>& at(Index i, Index j) { return entries[std::size_t(i) * source_rank + j]; }

    static RLinearMap zero(const LocalAlgebra<F>& R, Index t, Index s)
    {
        return {s, t, std::vector<Vector<F>>(std::size_t(t) * s, Vector<F>::Zero(R.dim()))};
    }
    static RLinearMap identity(const LocalAlgebra<F>& R, Index n)
    {
        auto m = zero(R, n, n);
        for (Index i = 0; i < n; ++i)
            m.at(i, i) = R.unit();
        return m;
    }
};

template <class F>
RLinearMap<F> compose(const LocalAlgebra<F>& R, const RLinearMap<F>& g, const RLinearMap<F>& f)
{
    if (g.source_rank != f.target_rank)
        throw std::invalid_argument("compose: rank mismatch");
    auto out = RLinearMap<F>::zero(R, g.target_rank, f.source_rank);
    for (Index i = 0; i < g.target_rank; ++i)
        for (Index j = 0; j < f.source_rank; ++j)
            for (Index k = 0; k < g.source_rank; ++k)
                out.at(i, j) += R.multiply(g.at(i, k), f.at(k, j));
    return out;
}

template <class F>
bool operator==(const RLinearMap<F>& a, const RLinearMap<F>& b)
{
    return a.source_rank == b.source_rank && a.target_rank == b.target_rank && a.entries == b.entries;
}

template <class F>
SpMat<F> flatten_sparse(const LocalAlgebra<F>& R, const RLinearMap<F>& f)
{
    Index d = R.dim();
    std::vector<SparseVec<F>> cols(std::size_t(f.source_rank) * d);
    for (Index j = 0; j < f.source_rank; ++j)
        for (Index rho = 0; rho < d; ++rho) {
            SparseVec<F> c;
            for (Index i = 0; i < f.target_rank; ++i) {
                Vector<F> v = R.basis_left(rho) * f.at(i, j);
                for (Index l = 0; l < d; ++l)
                    if (!is_zero(v(l)))
                        c.emplace_back(i * d + l, v(l));
            }
            cols[j * d + rho] = std::move(c);
        }
    return from_columns<F>(f.target_rank * d, cols);
}

template <class F>
Matrix<F> flatten(const LocalAlgebra<F>& R, const RLinearMap<F>& f)
{
    return to_dense<F>(flatten_sparse(R, f));
}

// Recovers the R-linear map from a flattened k-matrix, if it is R-linear.
template <class F>
std::optional<RLinearMap<F>> unflatten(const LocalAlgebra<F>& R, const SpMat<F>& m, Index t, Index s)
{
    Index d = R.dim();
    if (m.rows() != t * d || m.cols() != s * d)
        throw std::invalid_argument("unflatten: shape mismatch");
    auto f = RLinearMap<F>::zero(R, t, s);
    // Column (j, unit) gives the images of the generators; the unit need not
    // be b_0, so apply the map to the unit vector.
    for (Index j = 0; j < s; ++j) {
        SparseVec<F> u;
        for (const auto& [l, c] : R.unit_sparse())
            u.emplace_back(j * d + l, c);
        for (const auto& [idx, c] : apply<F>(m, u))
            f.at(idx / d, j)(idx % d) = c;
    }
    if (!equal<F>(flatten_sparse(R, f), m))
        return std::nullopt;
    return f;
}

}  // namespace akc
