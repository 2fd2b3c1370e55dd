#pragma once

// Exterior, symmetric and divided powers of free modules with monomial bases.
//
// Λ^i(R^n): strictly increasing index tuples in lexicographic order.
// Γ^j(R^n), Sym^j(R^n): exponent vectors e with |e| = j in lexicographic
// order, stored as sorted index multisets (x1^[2].x3 ↔ {0,0,2}).

#include <map>
#include <string>
#include <vector>

#include "akc/algebra.hpp"

namespace akc {

Count binomial(Count n, Count k);

class ExteriorBasis {
public:
    ExteriorBasis(int n, int i);

    int n() const { return n_; }
    int degree() const { return i_; }
    Index size() const { return Index(elems_.size()); }
    const std::vector<int>& at(Index k) const { return elems_[std::size_t(k)]; }
    // Rank of a strictly increasing tuple.
    Index index(const std::vector<int>& sorted) const;
    std::string label(Index k) const;

private:
    int n_, i_;
    std::vector<std::vector<int>> elems_;
};

class MonomialBasis {
public:
    MonomialBasis(int n, int j);

    int n() const { return n_; }
    int degree() const { return j_; }
    Index size() const { return Index(elems_.size()); }
    // Sorted multiset of variable indices.
    const std::vector<int>& at(Index k) const { return elems_[std::size_t(k)]; }
    Index index(const std::vector<int>& sorted) const;
    std::vector<int> exponents(Index k) const;
    // Π e_l!
    BigInt factorial_weight(Index k) const;
    std::string divided_label(Index k) const;
    std::string sym_label(Index k) const;

private:
    int n_, j_;
    std::vector<std::vector<int>> elems_;
};

// Sign of the permutation sorting the concatenation (a, b) of two increasing
// tuples; 0 when they overlap.
int merge_sign(const std::vector<int>& a, const std::vector<int>& b);

// Multiset with one occurrence of v removed.
std::vector<int> remove_one(const std::vector<int>& m, int v);

// ---------------------------------------------------------------------------

template <class F>
RLinearMap<F> scalar_map(const LocalAlgebra<F>& R, const Matrix<F>& m)
{
    auto out = RLinearMap<F>::zero(R, Index(m.rows()), Index(m.cols()));
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            out.at(i, j) = R.scalar(m(i, j));
    return out;
}

template <class F>
RLinearMap<F> exterior_map(const LocalAlgebra<F>& R, const RLinearMap<F>& f, int i)
{
    ExteriorBasis src(int(f.source_rank), i), tgt(int(f.target_rank), i);
    auto out = RLinearMap<F>::zero(R, tgt.size(), src.size());
    for (Index c = 0; c < src.size(); ++c)
        for (Index r = 0; r < tgt.size(); ++r) {
            // Leibniz expansion of the i×i minor.
            const auto& I = src.at(c);
            const auto& J = tgt.at(r);
            std::vector<int> perm(static_cast<std::size_t>(i));
            for (int k = 0; k < i; ++k)
                perm[k] = k;
            Vector<F> det = Vector<F>::Zero(R.dim());
            do {
                int inv = 0;
                for (int a = 0; a < i; ++a)
                    for (int b = a + 1; b < i; ++b)
                        if (perm[a] > perm[b])
                            ++inv;
                Vector<F> term = R.unit();
                for (int k = 0; k < i && !is_zero_matrix<F>(Matrix<F>(term)); ++k)
                    term = R.multiply(term, f.at(J[perm[k]], I[k]));
                det += (inv % 2 == 0) ? term : Vector<F>(-term);
            } while (std::next_permutation(perm.begin(), perm.end()));
            out.at(r, c) = det;
        }
    return out;
}

namespace detail {

// Elements of Γ(R^n) or Sym(R^n) as sums of monomials with R-coefficients.
template <class F>
using Poly = std::map<std::vector<int>, Vector<F>>;

template <class F>
Poly<F> poly_mul(const LocalAlgebra<F>& R, const Poly<F>& a, const Poly<F>& b, bool divided)
{
    Poly<F> out;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b) {
            std::vector<int> e(ea.size());
            BigInt w = 1;
            for (std::size_t k = 0; k < e.size(); ++k) {
                e[k] = ea[k] + eb[k];
                if (divided)
                    w *= BigInt(binomial(e[k], ea[k]));
            }
            Vector<F> c = R.multiply(ca, cb) * from_integer<F>(w);
            auto it = out.find(e);
            if (it == out.end())
                out.emplace(e, c);
            else
                it->second += c;
        }
    return out;
}

// (Σ a_k y_k)^{[m]} = Σ_{|c| = m} Π a_k^{c_k} y^{[c]}, or the ordinary power.
template <class F>
Poly<F> linear_power(const LocalAlgebra<F>& R, const std::vector<Vector<F>>& a, int m, bool divided)
{
    int t = int(a.size());
    Poly<F> out;
    if (divided) {
        MonomialBasis mb(t, m);
        for (Index k = 0; k < mb.size(); ++k) {
            auto e = mb.exponents(k);
            Vector<F> c = R.unit();
            for (int v = 0; v < t; ++v)
                for (int r = 0; r < e[v]; ++r)
                    c = R.multiply(c, a[v]);
            out.emplace(e, c);
        }
        return out;
    }
    out.emplace(std::vector<int>(std::size_t(t), 0), R.unit());
    Poly<F> lin;
    for (int v = 0; v < t; ++v) {
        std::vector<int> e(std::size_t(t), 0);
        e[v] = 1;
        lin.emplace(e, a[v]);
    }
    for (int r = 0; r < m; ++r)
        out = poly_mul(R, out, lin, false);
    return out;
}

template <class F>
RLinearMap<F> power_map(const LocalAlgebra<F>& R, const RLinearMap<F>& f, int j, bool divided)
{
    int s = int(f.source_rank), t = int(f.target_rank);
    MonomialBasis src(s, j), tgt(t, j);
    auto out = RLinearMap<F>::zero(R, tgt.size(), src.size());
    for (Index c = 0; c < src.size(); ++c) {
        auto e = src.exponents(c);
        Poly<F> acc;
        acc.emplace(std::vector<int>(std::size_t(t), 0), R.unit());
        for (int l = 0; l < s; ++l) {
            if (e[l] == 0)
                continue;
            std::vector<Vector<F>> col;
            for (int r = 0; r < t; ++r)
                col.push_back(f.at(r, l));
            acc = poly_mul(R, acc, linear_power(R, col, e[l], divided), divided);
        }
        for (const auto& [ex, coef] : acc) {
            std::vector<int> tuple;
            for (int v = 0; v < t; ++v)
                for (int r = 0; r < ex[v]; ++r)
                    tuple.push_back(v);
            out.at(tgt.index(tuple), c) += coef;
        }
    }
    return out;
}

}  // namespace detail

template <class F>
RLinearMap<F> divided_power_map(const LocalAlgebra<F>& R, const RLinearMap<F>& f, int j)
{
    return detail::power_map(R, f, j, true);
}

template <class F>
RLinearMap<F> sym_power_map(const LocalAlgebra<F>& R, const RLinearMap<F>& f, int j)
{
    return detail::power_map(R, f, j, false);
}

// η: Γ^q(R^n) → R^n ⊗ Γ^{q−1}(R^n), x^[e] ↦ Σ_{e_l ≥ 1} x_l ⊗ x^[e − e_l].
// Target index l·|Γ^{q−1}| + index(e − e_l).
template <class F>
RLinearMap<F> eta(const LocalAlgebra<F>& R, int n, int q)
{
    if (q < 1)
        throw std::invalid_argument("eta: q must be at least 1");
    MonomialBasis src(n, q), tgt(n, q - 1);
    auto out = RLinearMap<F>::zero(R, Index(n) * tgt.size(), src.size());
    for (Index c = 0; c < src.size(); ++c) {
        const auto& m = src.at(c);
        for (std::size_t k = 0; k < m.size(); ++k) {
            if (k > 0 && m[k] == m[k - 1])
                continue;
            int l = m[k];
            out.at(Index(l) * tgt.size() + tgt.index(remove_one(m, l)), c) = R.unit();
        }
    }
    return out;
}

// Diagonal Γ^j → Sym^j, x^[e] ↦ (j! / Π e_l!) x^e.
template <class F>
RLinearMap<F> gamma_to_sym(const LocalAlgebra<F>& R, int n, int j)
{
    MonomialBasis b(n, j);
    auto out = RLinearMap<F>::zero(R, b.size(), b.size());
    BigInt jf = factorial(unsigned(j));
    for (Index k = 0; k < b.size(); ++k)
        out.at(k, k) = R.scalar(from_integer<F>(jf / b.factorial_weight(k)));
    return out;
}

template <class F>
RLinearMap<F> sym_to_gamma(const LocalAlgebra<F>& R, int n, int j)
{
    if (!factorial_invertible(R, j))
        throw std::domain_error("sym_to_gamma: " + std::to_string(j) + "! is not invertible");
    MonomialBasis b(n, j);
    auto out = RLinearMap<F>::zero(R, b.size(), b.size());
    BigInt jf = factorial(unsigned(j));
    for (Index k = 0; k < b.size(); ++k)
        out.at(k, k) = R.scalar(from_fraction<F>(b.factorial_weight(k), jf));
    return out;
}

// The algebra map Sym^j → Γ^j, x^e ↦ Π x_l^{e_l} = (Π e_l!) x^[e].
template <class F>
RLinearMap<F> sym_to_gamma_natural(const LocalAlgebra<F>& R, int n, int j)
{
    MonomialBasis b(n, j);
    auto out = RLinearMap<F>::zero(R, b.size(), b.size());
    for (Index k = 0; k < b.size(); ++k)
        out.at(k, k) = R.scalar(from_integer<F>(b.factorial_weight(k)));
    return out;
}

// Its inverse x^[e] ↦ x^e / Π e_l!, defined when j! is invertible.
template <class F>
RLinearMap<F> gamma_to_sym_natural(const LocalAlgebra<F>& R, int n, int j)
{
    if (!factorial_invertible(R, j))
        throw std::domain_error("gamma_to_sym_natural: " + std::to_string(j) + "! is not invertible");
    MonomialBasis b(n, j);
    auto out = RLinearMap<F>::zero(R, b.size(), b.size());
    for (Index k = 0; k < b.size(); ++k)
        out.at(k, k) = R.scalar(from_fraction<F>(1, b.factorial_weight(k)));
    return out;
}

// Λ^i ⊗ Λ^j → Λ^{i+j}; source index I·C(n, j) + J.
template <class F>
RLinearMap<F> wedge_mult(const LocalAlgebra<F>& R, int n, int i, int j)
{
    ExteriorBasis a(n, i), b(n, j), c(n, i + j);
    auto out = RLinearMap<F>::zero(R, c.size(), a.size() * b.size());
    for (Index x = 0; x < a.size(); ++x)
        for (Index y = 0; y < b.size(); ++y) {
            int s = merge_sign(a.at(x), b.at(y));
            if (s == 0)
                continue;
            std::vector<int> u = a.at(x);
            u.insert(u.end(), b.at(y).begin(), b.at(y).end());
            std::sort(u.begin(), u.end());
            out.at(c.index(u), x * b.size() + y) = R.scalar(F(s));
        }
    return out;
}

}  // namespace akc
