#pragma once

// Bounded cochain complexes of R-modules presented as subquotients Z/B of
// flattened free modules, chain maps, truncations, tensor products and
// quasi-isomorphism testing.
//
// Every homological question is answered on a coordinate complex: each term
// Z/B is replaced by k^{dim Z/B} via a Subquotient, and the differentials are
// rewritten in those coordinates.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "akc/algebra.hpp"
#include "akc/config.hpp"

namespace akc {

// Coordinates on Z/B ⊆ F^ambient. Z = nullopt means the whole ambient space.
template <class F>
class Subquotient {
public:
    Subquotient() = default;

    Subquotient(Index ambient, const std::optional<std::vector<SparseVec<F>>>& Z,
                const std::vector<SparseVec<F>>& B)
        : ambient_(ambient)
    {
        if (!Z && B.empty()) {
            kind_ = Kind::Full;
            dim_ = ambient;
            return;
        }
        ech_ = std::make_shared<Echelon<F>>(ambient);
        for (const auto& b : B)
            ech_->insert(b, 0);
        if (!Z) {
            kind_ = Kind::Quotient;
            pos_.assign(std::size_t(ambient), -1);
            for (Index r = 0; r < ambient; ++r)
                if (!ech_->is_pivot(r)) {
                    pos_[r] = Index(free_rows_.size());
                    free_rows_.push_back(r);
                }
            dim_ = Index(free_rows_.size());
            return;
        }
        kind_ = Kind::General;
        for (const auto& z : *Z) {
            Index s = ech_->insert(z, 1);
            if (s >= 0) {
                coord_of_slot_.resize(std::size_t(s) + 1, -1);
                coord_of_slot_[s] = Index(rep_slots_.size());
                rep_slots_.push_back(s);
            }
        }
        dim_ = Index(rep_slots_.size());
    }

    Index ambient() const { return ambient_; }
    Index dim() const { return dim_; }
    bool is_full() const { return kind_ == Kind::Full; }

    SparseVec<F> rep(Index k) const
    {
        switch (kind_) {
        case Kind::Full:
            return unit_vector<F>(k);
        case Kind::Quotient:
            return unit_vector<F>(free_rows_[k]);
        default:
            return ech_->vectors()[rep_slots_[k]];
        }
    }

    // Coordinates of v ∈ Z modulo B; nullopt when v ∉ Z.
    std::optional<SparseVec<F>> coords(const SparseVec<F>& v) const
    {
        switch (kind_) {
        case Kind::Full:
            return v;
        case Kind::Quotient: {
            SparseVec<F> res = ech_->reduce(v);
            for (auto& e : res)
                e.first = pos_[e.first];
            return res;
        }
        default: {
            SparseVec<F> coeffs;
            SparseVec<F> res = ech_->reduce(v, &coeffs);
            if (!res.empty())
                return std::nullopt;
            SparseVec<F> out;
            for (const auto& [slot, c] : coeffs)
                if (ech_->tag(slot) == 1)
                    out.emplace_back(coord_of_slot_[slot], c);
            return canonicalize(std::move(out));
        }
        }
    }

    bool in_Z(const SparseVec<F>& v) const
    {
        return kind_ != Kind::General || ech_->contains(v);
    }

    bool in_B(const SparseVec<F>& v) const
    {
        auto c = coords(v);
        return c && c->empty();
    }

    SparseVec<F> lift(const SparseVec<F>& c) const
    {
        if (kind_ == Kind::Full)
            return c;
        SparseVec<F> out;
        for (const auto& [k, x] : c)
            axpy(out, x, rep(k));
        return out;
    }

private:
    enum class Kind { Full, Quotient, General };
    Kind kind_ = Kind::Full;
    Index ambient_ = 0;
    Index dim_ = 0;
    std::shared_ptr<Echelon<F>> ech_;
    std::vector<Index> free_rows_;
    std::vector<Index> pos_;
    std::vector<Index> rep_slots_;
    std::vector<Index> coord_of_slot_;
};

// ---------------------------------------------------------------------------

template <class F>
struct PresentedModule {
    Index rank = 0;  // free rank of the ambient module over R
    Index dim = 0;   // rank · dim R
    std::optional<std::vector<SparseVec<F>>> Z;
    std::vector<SparseVec<F>> B;

    bool is_free() const { return !Z && B.empty(); }

    static PresentedModule free(Index rank, Index d) { return {rank, rank * d, std::nullopt, {}}; }
};

template <class F>
struct Complex {
    AlgebraPtr<F> R;
    int lo = 0;
    std::vector<PresentedModule<F>> terms;
    std::vector<SpMat<F>> d;  // d[k]: terms[k] → terms[k+1]

    int hi() const { return lo + int(terms.size()) - 1; }
    bool has(int i) const { return i >= lo && i <= hi(); }
    const PresentedModule<F>& term(int i) const { return terms.at(std::size_t(i - lo)); }
    Index ambient(int i) const { return has(i) ? term(i).dim : 0; }

    SpMat<F> diff(int i) const
    {
        if (has(i) && has(i + 1))
            return d[std::size_t(i - lo)];
        return SpMat<F>(ambient(i + 1), ambient(i));
    }
};

template <class F>
using ComplexPtr = std::shared_ptr<const Complex<F>>;

// Complex of free modules with the given ranks and flattened differentials.
template <class F>
Complex<F> free_complex(AlgebraPtr<F> R, int lo, const std::vector<Index>& ranks, std::vector<SpMat<F>> d)
{
    Complex<F> K;
    K.R = R;
    K.lo = lo;
    for (Index r : ranks)
        K.terms.push_back(PresentedModule<F>::free(r, R->dim()));
    if (ranks.empty())
        throw std::invalid_argument("free_complex: need at least one term");
    if (d.size() + 1 != ranks.size())
        throw std::invalid_argument("free_complex: wrong number of differentials");
    K.d = std::move(d);
    return K;
}

// ---------------------------------------------------------------------------
// Coordinate complexes

template <class F>
struct KComplex {
    int lo = 0;
    std::vector<Index> dims;
    std::vector<SpMat<F>> d;

    int hi() const { return lo + int(dims.size()) - 1; }
    bool has(int i) const { return i >= lo && i <= hi(); }
    Index dim(int i) const { return has(i) ? dims[std::size_t(i - lo)] : 0; }
    SpMat<F> diff(int i) const
    {
        if (has(i) && has(i + 1))
            return d[std::size_t(i - lo)];
        return SpMat<F>(dim(i + 1), dim(i));
    }
    Count total_dim() const
    {
        Count s = 0;
        for (Index x : dims)
            s += x;
        return s;
    }
};

template <class F>
struct Coordinatized {
    KComplex<F> k;
    std::vector<Subquotient<F>> coords;  // per degree, offset by lo

    const Subquotient<F>& at(int i) const { return coords[std::size_t(i - k.lo)]; }
};

template <class F>
Subquotient<F> subquotient_of(const PresentedModule<F>& M)
{
    return Subquotient<F>(M.dim, M.Z, M.B);
}

// Throws std::domain_error if a differential does not preserve Z.
template <class F>
Coordinatized<F> coordinatize(const Complex<F>& K)
{
    Coordinatized<F> out;
    out.k.lo = K.lo;
    for (const auto& t : K.terms) {
        out.coords.push_back(subquotient_of(t));
        out.k.dims.push_back(out.coords.back().dim());
    }
    for (int i = K.lo; i < K.hi(); ++i) {
        const auto& src = out.at(i);
        const auto& tgt = out.at(i + 1);
        const SpMat<F>& dm = K.d[std::size_t(i - K.lo)];
        if (src.is_full() && tgt.is_full()) {
            out.k.d.push_back(dm);
            continue;
        }
        std::vector<SparseVec<F>> cols(src.dim());
        for (Index j = 0; j < src.dim(); ++j) {
            auto c = tgt.coords(apply<F>(dm, src.rep(j)));
            if (!c)
                throw std::domain_error("differential in degree " + std::to_string(i) +
                                        " does not map Z into Z");
            cols[j] = std::move(*c);
        }
        out.k.d.push_back(from_columns<F>(tgt.dim(), cols));
    }
    return out;
}

template <class F>
std::vector<Index> cohomology_dims(const KComplex<F>& K)
{
    std::vector<Index> out;
    std::vector<Index> ranks;
    for (int i = K.lo - 1; i <= K.hi(); ++i)
        ranks.push_back(i < K.lo ? 0 : rank<F>(K.diff(i)));
    for (int i = K.lo; i <= K.hi(); ++i)
        out.push_back(K.dim(i) - ranks[std::size_t(i - K.lo + 1)] - ranks[std::size_t(i - K.lo)]);
    return out;
}

// H^i as Z = ker d^i, B = im d^{i−1} in coordinates.
template <class F>
Subquotient<F> cohomology_at(const KComplex<F>& K, int i)
{
    auto Z = kernel<F>(K.diff(i));
    auto B = to_columns<F>(K.diff(i - 1));
    return Subquotient<F>(K.dim(i), Z, B);
}

// ---------------------------------------------------------------------------
// Module-level cohomology

template <class F>
struct CohomologyData {
    int lo = 0;
    std::vector<Index> dims;
    std::vector<std::vector<SparseVec<F>>> reps;            // ambient cocycles
    std::vector<std::vector<Matrix<F>>> action;              // [degree][σ]: dim × dim
    std::vector<PresentedModule<F>> modules;                 // H^i as a subquotient of K^i
};

template <class F>
CohomologyData<F> cohomology(const Complex<F>& K)
{
    auto C = coordinatize(K);
    CohomologyData<F> out;
    out.lo = K.lo;
    Index d = K.R->dim();
    for (int i = K.lo; i <= K.hi(); ++i) {
        const auto& T = C.at(i);
        auto Zc = kernel<F>(C.k.diff(i));
        auto Bc = to_columns<F>(C.k.diff(i - 1));
        Subquotient<F> H(C.k.dim(i), Zc, Bc);
        out.dims.push_back(H.dim());
        std::vector<SparseVec<F>> reps;
        for (Index k = 0; k < H.dim(); ++k)
            reps.push_back(T.lift(H.rep(k)));
        std::vector<Matrix<F>> act_m;
        for (Index s = 0; s < d; ++s) {
            Matrix<F> m = Matrix<F>::Zero(H.dim(), H.dim());
            for (Index k = 0; k < H.dim(); ++k) {
                auto tc = T.coords(act(*K.R, s, reps[k]));
                if (!tc)
                    throw std::domain_error("cohomology: term is not R-stable");
                auto hc = H.coords(*tc);
                if (!hc)
                    throw std::domain_error("cohomology: R-action does not preserve cocycles");
                for (const auto& [r, c] : *hc)
                    m(r, k) = c;
            }
            act_m.push_back(std::move(m));
        }
        out.action.push_back(std::move(act_m));
        PresentedModule<F> M{K.term(i).rank, K.term(i).dim, std::vector<SparseVec<F>>{}, K.term(i).B};
        for (const auto& z : Zc)
            M.Z->push_back(T.lift(z));
        for (const auto& b : K.term(i).B)
            M.Z->push_back(b);
        for (const auto& b : Bc)
            M.B.push_back(T.lift(b));
        out.modules.push_back(std::move(M));
        out.reps.push_back(std::move(reps));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Validation

struct CheckResult {
    bool ok = true;
    std::string message;

    static CheckResult fail(std::string m) { return {false, std::move(m)}; }
};

template <class F>
CheckResult validate_module(const LocalAlgebra<F>& R, const PresentedModule<F>& M, bool r_stability)
{
    if (M.dim != M.rank * R.dim())
        return CheckResult::fail("ambient dimension is not rank · dim R");
    auto in_range = [&](const SparseVec<F>& v) {
        for (const auto& e : v)
            if (e.first < 0 || e.first >= M.dim)
                return false;
        return true;
    };
    for (const auto& b : M.B)
        if (!in_range(b))
            return CheckResult::fail("B vector out of range");
    if (M.Z) {
        for (const auto& z : *M.Z)
            if (!in_range(z))
                return CheckResult::fail("Z vector out of range");
        Echelon<F> ez(M.dim);
        for (const auto& z : *M.Z)
            ez.insert(z);
        for (const auto& b : M.B)
            if (!ez.contains(b))
                return CheckResult::fail("B is not contained in Z");
        if (r_stability)
            for (Index s = 0; s < R.dim(); ++s)
                for (const auto& z : *M.Z)
                    if (!ez.contains(act(R, s, z)))
                        return CheckResult::fail("Z is not R-stable");
    }
    if (r_stability && !M.B.empty()) {
        Echelon<F> eb(M.dim);
        for (const auto& b : M.B)
            eb.insert(b);
        for (Index s = 0; s < R.dim(); ++s)
            for (const auto& b : M.B)
                if (!eb.contains(act(R, s, b)))
                    return CheckResult::fail("B is not R-stable");
    }
    return {};
}

// Shapes, R-stability, R-linearity of d, d(B) ⊆ B, d(Z) ⊆ Z, d∘d ≡ 0 mod B.
template <class F>
CheckResult validate_complex(const Complex<F>& K, bool r_checks = true)
{
    if (K.terms.empty())
        return CheckResult::fail("complex has no terms");
    if (K.d.size() + 1 != K.terms.size())
        return CheckResult::fail("wrong number of differentials");
    for (int i = K.lo; i <= K.hi(); ++i) {
        auto r = validate_module(*K.R, K.term(i), r_checks);
        if (!r.ok)
            return CheckResult::fail("degree " + std::to_string(i) + ": " + r.message);
    }
    for (int i = K.lo; i < K.hi(); ++i) {
        const SpMat<F>& dm = K.d[std::size_t(i - K.lo)];
        if (dm.rows() != K.ambient(i + 1) || dm.cols() != K.ambient(i))
            return CheckResult::fail("differential " + std::to_string(i) + " has the wrong shape");
        if (r_checks)
            for (Index s = 0; s < K.R->dim(); ++s) {
                SpMat<F> lhs = product<F>(dm, action_matrix(*K.R, s, K.term(i).rank));
                SpMat<F> rhs = product<F>(action_matrix(*K.R, s, K.term(i + 1).rank), dm);
                if (!equal<F>(lhs, rhs))
                    return CheckResult::fail("differential " + std::to_string(i) + " is not R-linear");
            }
    }
    Coordinatized<F> C;
    try {
        C = coordinatize(K);
    } catch (const std::domain_error& e) {
        return CheckResult::fail(e.what());
    }
    for (int i = K.lo; i < K.hi(); ++i) {
        const SpMat<F>& dm = K.d[std::size_t(i - K.lo)];
        for (const auto& b : K.term(i).B)
            if (!C.at(i + 1).in_B(apply<F>(dm, b)))
                return CheckResult::fail("differential " + std::to_string(i) + " does not map B into B");
    }
    for (int i = K.lo; i + 1 < K.hi(); ++i)
        if (!is_zero_matrix<F>(product<F>(C.k.diff(i + 1), C.k.diff(i))))
            return CheckResult::fail("d∘d ≠ 0 in degree " + std::to_string(i));
    return {};
}

// ---------------------------------------------------------------------------
// Truncations

// Z^i of K as an ambient subspace: {v ∈ Z : dv ∈ B}, together with B.
template <class F>
std::vector<SparseVec<F>> cocycles_ambient(const Complex<F>& K, const Coordinatized<F>& C, int i)
{
    std::vector<SparseVec<F>> Z;
    for (const auto& z : kernel<F>(C.k.diff(i)))
        Z.push_back(C.at(i).lift(z));
    for (const auto& b : K.term(i).B)
        Z.push_back(b);
    return Z;
}

template <class F>
Complex<F> tau_leq(const Complex<F>& K, int b)
{
    if (b < K.lo)
        throw std::invalid_argument("tau_leq: truncation below the complex");
    if (b >= K.hi())
        return K;
    auto C = coordinatize(K);
    Complex<F> out;
    out.R = K.R;
    out.lo = K.lo;
    for (int i = K.lo; i <= b; ++i)
        out.terms.push_back(K.term(i));
    for (int i = K.lo; i < b; ++i)
        out.d.push_back(K.d[std::size_t(i - K.lo)]);
    out.terms.back().Z = cocycles_ambient(K, C, b);
    return out;
}

// Quotient of K by τ≤a−1 K: degree a becomes K^a / dK^{a−1}.
template <class F>
Complex<F> tau_geq(const Complex<F>& K, int a)
{
    if (a > K.hi())
        throw std::invalid_argument("tau_geq: truncation above the complex");
    if (a <= K.lo)
        return K;
    Complex<F> out;
    out.R = K.R;
    out.lo = a;
    for (int i = a; i <= K.hi(); ++i)
        out.terms.push_back(K.term(i));
    for (int i = a; i < K.hi(); ++i)
        out.d.push_back(K.d[std::size_t(i - K.lo)]);
    const SpMat<F>& dm = K.d[std::size_t(a - 1 - K.lo)];
    auto src = subquotient_of(K.term(a - 1));
    auto& B = out.terms.front().B;
    for (Index j = 0; j < src.dim(); ++j) {
        auto v = apply<F>(dm, src.rep(j));
        if (!v.empty())
            B.push_back(std::move(v));
    }
    return out;
}

template <class F>
Complex<F> tau_range(const Complex<F>& K, int a, int b)
{
    if (a > b)
        throw std::invalid_argument("tau_range: a > b");
    return tau_geq(tau_leq(K, b), a);
}

// ---------------------------------------------------------------------------
// Sums, shifts, tensor products

template <class F>
Complex<F> shift(const Complex<F>& K, int n)
{
    Complex<F> out = K;
    out.lo = K.lo - n;
    if (n % 2 != 0)
        for (auto& m : out.d)
            m = -m;
    return out;
}

namespace detail {

template <class F>
SparseVec<F> offset(const SparseVec<F>& v, Index by)
{
    SparseVec<F> out = v;
    for (auto& e : out)
        e.first += by;
    return out;
}

template <class F>
PresentedModule<F> sum_module(const PresentedModule<F>& a, const PresentedModule<F>& b)
{
    PresentedModule<F> out{a.rank + b.rank, a.dim + b.dim, std::nullopt, {}};
    if (a.Z || b.Z) {
        out.Z.emplace();
        auto add = [&](const PresentedModule<F>& m, Index off) {
            if (m.Z)
                for (const auto& z : *m.Z)
                    out.Z->push_back(offset(z, off));
            else
                for (Index k = 0; k < m.dim; ++k)
                    out.Z->push_back(unit_vector<F>(k + off));
        };
        add(a, 0);
        add(b, a.dim);
    }
    for (const auto& x : a.B)
        out.B.push_back(x);
    for (const auto& x : b.B)
        out.B.push_back(offset(x, a.dim));
    return out;
}

// Block matrix [[a, b], [c, e]] with the given block sizes.
template <class F>
SpMat<F> blocks(Index r0, Index r1, Index c0, Index c1, const SpMat<F>* a, const SpMat<F>* b,
                const SpMat<F>* c, const SpMat<F>* e)
{
    std::vector<Eigen::Triplet<F, Index>> t;
    auto put = [&](const SpMat<F>* m, Index ro, Index co) {
        if (!m)
            return;
        for (Index j = 0; j < m->outerSize(); ++j)
            for (typename SpMat<F>::InnerIterator it(*m, j); it; ++it)
                t.emplace_back(it.row() + ro, j + co, it.value());
    };
    put(a, 0, 0);
    put(b, 0, c0);
    put(c, r0, 0);
    put(e, r0, c0);
    SpMat<F> m(r0 + r1, c0 + c1);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

}  // namespace detail

template <class F>
Complex<F> direct_sum(const Complex<F>& K, const Complex<F>& L)
{
    if (K.R != L.R && !(K.R->base() == L.R->base() && K.R->dim() == L.R->dim()))
        throw std::invalid_argument("direct_sum: base mismatch");
    Complex<F> out;
    out.R = K.R;
    out.lo = std::min(K.lo, L.lo);
    int hi = std::max(K.hi(), L.hi());
    Index d = K.R->dim();
    auto term_or_zero = [&](const Complex<F>& X, int i) {
        return X.has(i) ? X.term(i) : PresentedModule<F>::free(0, d);
    };
    for (int i = out.lo; i <= hi; ++i)
        out.terms.push_back(detail::sum_module(term_or_zero(K, i), term_or_zero(L, i)));
    for (int i = out.lo; i < hi; ++i) {
        SpMat<F> a = K.diff(i), e = L.diff(i);
        out.d.push_back(detail::blocks<F>(K.ambient(i + 1), L.ambient(i + 1), K.ambient(i),
                                          L.ambient(i), &a, nullptr, nullptr, &e));
    }
    return out;
}

// Tensor product over R of complexes of free modules (or arbitrary
// subquotients when R is the base field). Degree n is ⊕_{i+j=n} K^i ⊗ L^j
// with i increasing; within a block the index is (a·rank L^j + b)·d + ρ.
template <class F>
Complex<F> tensor(const Complex<F>& K, const Complex<F>& L)
{
    const auto& R = *K.R;
    Index d = R.dim();
    if (!(K.R->base() == L.R->base() && K.R->dim() == L.R->dim()))
        throw std::invalid_argument("tensor: base mismatch");
    bool field = d == 1;
    for (const auto* X : {&K, &L})
        for (const auto& t : X->terms)
            if (!field && !t.is_free())
                throw std::invalid_argument("tensor: subquotient terms need a field base");

    // R-matrix of a free differential: coefficient of e_c in d(e_a).
    auto r_columns = [&](const Complex<F>& X, int i) {
        std::vector<std::vector<std::pair<Index, SparseVec<F>>>> cols(X.term(i).rank);
        SpMat<F> dm = X.diff(i);
        for (Index a = 0; a < X.term(i).rank; ++a) {
            SparseVec<F> u;
            for (const auto& [l, c] : R.unit_sparse())
                u.emplace_back(a * d + l, c);
            std::vector<SparseVec<F>> by_target;
            std::vector<Index> targets;
            for (const auto& [idx, c] : apply<F>(dm, u)) {
                Index t = idx / d;
                if (targets.empty() || targets.back() != t) {
                    targets.push_back(t);
                    by_target.emplace_back();
                }
                by_target.back().emplace_back(idx % d, c);
            }
            for (std::size_t k = 0; k < targets.size(); ++k)
                cols[a].emplace_back(targets[k], by_target[k]);
        }
        return cols;
    };

    Complex<F> out;
    out.R = K.R;
    out.lo = K.lo + L.lo;
    int hi = K.hi() + L.hi();
    // Offsets of the (i, j) blocks inside degree n.
    std::vector<std::vector<std::pair<int, Index>>> offs;
    for (int n = out.lo; n <= hi; ++n) {
        std::vector<std::pair<int, Index>> o;
        Index rk = 0;
        PresentedModule<F> M{0, 0, std::nullopt, {}};
        bool any_sub = false;
        for (int i = K.lo; i <= K.hi(); ++i) {
            int j = n - i;
            if (!L.has(j))
                continue;
            o.emplace_back(i, rk);
            rk += K.term(i).rank * L.term(j).rank;
            any_sub = any_sub || !K.term(i).is_free() || !L.term(j).is_free();
        }
        M.rank = rk;
        M.dim = rk * d;
        if (any_sub) {
            // Field base: (Z⊗Z') / (B⊗Z' + Z⊗B').
            M.Z.emplace();
            for (const auto& [i, off] : o) {
                int j = n - i;
                auto zs = [](const PresentedModule<F>& P) {
                    std::vector<SparseVec<F>> z;
                    if (P.Z)
                        z = *P.Z;
                    else
                        for (Index k = 0; k < P.dim; ++k)
                            z.push_back(unit_vector<F>(k));
                    return z;
                };
                auto zk = zs(K.term(i)), zl = zs(L.term(j));
                Index rl = L.term(j).rank;
                auto prod = [&](const SparseVec<F>& x, const SparseVec<F>& y) {
                    SparseVec<F> t;
                    for (const auto& [a, c] : x)
                        for (const auto& [b, e] : y)
                            t.emplace_back(off + a * rl + b, c * e);
                    return canonicalize(std::move(t));
                };
                for (const auto& x : zk)
                    for (const auto& y : zl)
                        M.Z->push_back(prod(x, y));
                for (const auto& x : K.term(i).B)
                    for (const auto& y : zl)
                        M.B.push_back(prod(x, y));
                for (const auto& x : zk)
                    for (const auto& y : L.term(j).B)
                        M.B.push_back(prod(x, y));
            }
        }
        out.terms.push_back(std::move(M));
        offs.push_back(std::move(o));
    }
    auto block_offset = [&](int n, int i) -> Index {
        for (const auto& [ii, off] : offs[std::size_t(n - out.lo)])
            if (ii == i)
                return off;
        return -1;
    };
    for (int n = out.lo; n < hi; ++n) {
        std::vector<SparseVec<F>> cols(std::size_t(out.terms[std::size_t(n - out.lo)].dim));
        for (const auto& [i, off] : offs[std::size_t(n - out.lo)]) {
            int j = n - i;
            Index rk = K.term(i).rank, rl = L.term(j).rank;
            auto dk = r_columns(K, i);
            auto dl = r_columns(L, j);
            F sign = (i % 2 == 0) ? F(1) : F(-1);
            Index off_k = block_offset(n + 1, i + 1);
            Index off_l = block_offset(n + 1, i);
            Index rl_next = L.has(j + 1) ? L.term(j + 1).rank : 0;
            for (Index a = 0; a < rk; ++a)
                for (Index b = 0; b < rl; ++b)
                    for (Index rho = 0; rho < d; ++rho) {
                        SparseVec<F> terms;
                        if (off_k >= 0)
                            for (const auto& [c, coef] : dk[a]) {
                                SparseVec<F> r = R.multiply(coef, unit_vector<F>(rho));
                                for (const auto& [l, x] : r)
                                    terms.emplace_back((off_k + c * rl + b) * d + l, x);
                            }
                        if (off_l >= 0)
                            for (const auto& [c, coef] : dl[b]) {
                                SparseVec<F> r = R.multiply(coef, unit_vector<F>(rho));
                                for (const auto& [l, x] : r)
                                    terms.emplace_back((off_l + a * rl_next + c) * d + l, sign * x);
                            }
                        cols[std::size_t((off + a * rl + b) * d + rho)] = canonicalize(std::move(terms));
                    }
        }
        out.d.push_back(from_columns<F>(out.terms[std::size_t(n + 1 - out.lo)].dim, cols));
    }
    return out;
}

// Complex with zero differential and term H^i(K) in degree i, presented as a
// subquotient of K^i.
template <class F>
Complex<F> sum_of_cohomology(const Complex<F>& K)
{
    auto H = cohomology(K);
    Complex<F> out;
    out.R = K.R;
    out.lo = K.lo;
    out.terms = H.modules;
    for (int i = K.lo; i < K.hi(); ++i)
        out.d.push_back(SpMat<F>(K.ambient(i + 1), K.ambient(i)));
    return out;
}

// ---------------------------------------------------------------------------
// Chain maps

template <class F>
struct ChainMap {
    ComplexPtr<F> source, target;
    int lo = 0;               // degree of f[0]
    std::vector<SpMat<F>> f;  // ambient S^i → ambient T^i

    SpMat<F> at(int i) const
    {
        int k = i - lo;
        if (k >= 0 && k < int(f.size()))
            return f[std::size_t(k)];
        return SpMat<F>(target->ambient(i), source->ambient(i));
    }
};

template <class F>
struct KChainMap {
    const KComplex<F>* source = nullptr;
    const KComplex<F>* target = nullptr;
    std::vector<SpMat<F>> f;  // indexed by source degree − source.lo

    SpMat<F> at(int i) const
    {
        int k = i - source->lo;
        if (k >= 0 && k < int(f.size()))
            return f[std::size_t(k)];
        return SpMat<F>(target->dim(i), source->dim(i));
    }
};

struct ChainMapCheck {
    bool ok = true;
    int degree = 0;
    std::string message;
};

// Rewrites f in coordinates; reports the first degree where f fails to be a
// well-defined chain map.
template <class F>
ChainMapCheck coordinate_map(const ChainMap<F>& f, const Coordinatized<F>& S, const Coordinatized<F>& T,
                             std::vector<SpMat<F>>& out)
{
    out.clear();
    for (int i = S.k.lo; i <= S.k.hi(); ++i) {
        const auto& src = S.at(i);
        SpMat<F> fi = f.at(i);
        if (fi.rows() != f.target->ambient(i) || fi.cols() != f.source->ambient(i))
            return {false, i, "component has the wrong shape"};
        if (!T.k.has(i)) {
            for (Index j = 0; j < src.dim(); ++j)
                if (!apply<F>(fi, src.rep(j)).empty())
                    return {false, i, "nonzero component into a zero term"};
            out.push_back(SpMat<F>(0, src.dim()));
            continue;
        }
        const auto& tgt = T.at(i);
        std::vector<SparseVec<F>> cols(src.dim());
        for (Index j = 0; j < src.dim(); ++j) {
            auto c = tgt.coords(apply<F>(fi, src.rep(j)));
            if (!c)
                return {false, i, "image of a cycle representative leaves Z"};
            cols[j] = std::move(*c);
        }
        for (const auto& b : f.source->term(i).B)
            if (!tgt.in_B(apply<F>(fi, b)))
                return {false, i, "not well defined: B is not mapped into B"};
        out.push_back(from_columns<F>(tgt.dim(), cols));
    }
    KChainMap<F> k{&S.k, &T.k, out};
    for (int i = S.k.lo - 1; i <= S.k.hi(); ++i) {
        SpMat<F> lhs = product<F>(T.k.diff(i), k.at(i));
        SpMat<F> rhs = product<F>(k.at(i + 1), S.k.diff(i));
        if (!equal<F>(lhs, rhs))
            return {false, i, "does not commute with the differentials"};
    }
    return {};
}

template <class F>
ChainMapCheck validate_chain_map(const ChainMap<F>& f)
{
    try {
        auto S = coordinatize(*f.source);
        auto T = coordinatize(*f.target);
        std::vector<SpMat<F>> c;
        return coordinate_map(f, S, T, c);
    } catch (const std::domain_error& e) {
        return {false, 0, e.what()};
    }
}

template <class F>
ChainMap<F> compose(const ChainMap<F>& g, const ChainMap<F>& f)
{
    ChainMap<F> out;
    out.source = f.source;
    out.target = g.target;
    out.lo = f.source->lo;
    for (int i = f.source->lo; i <= f.source->hi(); ++i)
        out.f.push_back(product<F>(g.at(i), f.at(i)));
    return out;
}

template <class F>
ChainMap<F> identity_map(ComplexPtr<F> K)
{
    ChainMap<F> out{K, K, K->lo, {}};
    for (int i = K->lo; i <= K->hi(); ++i)
        out.f.push_back(sparse_identity<F>(K->ambient(i)));
    return out;
}

// ---------------------------------------------------------------------------
// Quasi-isomorphisms

struct QuasiIsoReport {
    bool verdict = false;
    bool cone_acyclic = false;
    std::optional<bool> induced_iso;  // nullopt when skipped for size
    std::vector<int> degrees;
    std::vector<Index> h_source, h_target, induced_rank;
    std::vector<bool> cone_exact;
    std::string failure;  // set when the map itself is invalid
};

// Cone^i = S^{i+1} ⊕ T^i with d(s, t) = (−ds, f s + dt).
template <class F>
KComplex<F> cone(const KChainMap<F>& f)
{
    const auto& S = *f.source;
    const auto& T = *f.target;
    KComplex<F> C;
    C.lo = std::min(S.lo - 1, T.lo);
    int hi = std::max(S.hi() - 1, T.hi());
    for (int i = C.lo; i <= hi; ++i)
        C.dims.push_back(S.dim(i + 1) + T.dim(i));
    for (int i = C.lo; i < hi; ++i) {
        SpMat<F> ds = -S.diff(i + 1);
        SpMat<F> fs = f.at(i + 1);
        SpMat<F> dt = T.diff(i);
        C.d.push_back(detail::blocks<F>(S.dim(i + 2), T.dim(i + 1), S.dim(i + 1), T.dim(i), &ds, nullptr,
                                        &fs, &dt));
    }
    return C;
}

template <class F>
QuasiIsoReport is_quasi_iso(const KChainMap<F>& f)
{
    const auto& S = *f.source;
    const auto& T = *f.target;
    QuasiIsoReport rep;
    int lo = std::min(S.lo, T.lo), hi = std::max(S.hi(), T.hi());

    auto C = cone(f);
    std::vector<Index> crank;
    for (int i = C.lo - 1; i <= C.hi(); ++i)
        crank.push_back(i < C.lo ? 0 : rank<F>(C.diff(i)));
    rep.cone_acyclic = true;
    for (int i = lo; i <= hi; ++i) {
        rep.degrees.push_back(i);
        // cone degree i−1 carries H^i(S) → H^i(T) information.
        int c = i - 1;
        bool exact = true;
        if (C.has(c)) {
            Index r_out = crank[std::size_t(c - C.lo + 1)];
            Index r_in = crank[std::size_t(c - C.lo)];
            exact = C.dim(c) == r_out + r_in;
        }
        rep.cone_exact.push_back(exact);
        rep.cone_acyclic = rep.cone_acyclic && exact;
    }
    for (int c = C.lo; c <= C.hi(); ++c) {
        Index r_out = crank[std::size_t(c - C.lo + 1)];
        Index r_in = crank[std::size_t(c - C.lo)];
        if (C.dim(c) != r_out + r_in)
            rep.cone_acyclic = false;
    }

    if (S.total_dim() + T.total_dim() > induced_route_limit()) {
        auto hs = cohomology_dims(S), ht = cohomology_dims(T);
        for (int i = lo; i <= hi; ++i) {
            rep.h_source.push_back(S.has(i) ? hs[std::size_t(i - S.lo)] : 0);
            rep.h_target.push_back(T.has(i) ? ht[std::size_t(i - T.lo)] : 0);
            rep.induced_rank.push_back(-1);
        }
        rep.verdict = rep.cone_acyclic;
        return rep;
    }
    bool iso = true;
    for (int i = lo; i <= hi; ++i) {
        auto HS = cohomology_at(S, i);
        auto HT = cohomology_at(T, i);
        rep.h_source.push_back(HS.dim());
        rep.h_target.push_back(HT.dim());
        Matrix<F> m = Matrix<F>::Zero(HT.dim(), HS.dim());
        SpMat<F> fi = f.at(i);
        for (Index k = 0; k < HS.dim(); ++k) {
            auto c = HT.coords(apply<F>(fi, HS.rep(k)));
            if (!c)
                throw std::logic_error("is_quasi_iso: image of a cocycle is not a cocycle");
            for (const auto& [r, x] : *c)
                m(r, k) = x;
        }
        Index rk = rank<F>(m);
        rep.induced_rank.push_back(rk);
        if (!(HS.dim() == HT.dim() && rk == HS.dim()))
            iso = false;
    }
    rep.induced_iso = iso;
    rep.verdict = iso && rep.cone_acyclic;
    if (iso != rep.cone_acyclic)
        rep.failure = "cone acyclicity and induced maps disagree";
    return rep;
}

template <class F>
QuasiIsoReport is_quasi_iso(const ChainMap<F>& f)
{
    QuasiIsoReport rep;
    Coordinatized<F> S, T;
    try {
        S = coordinatize(*f.source);
        T = coordinatize(*f.target);
    } catch (const std::domain_error& e) {
        rep.failure = e.what();
        return rep;
    }
    std::vector<SpMat<F>> c;
    auto chk = coordinate_map(f, S, T, c);
    if (!chk.ok) {
        rep.failure = "degree " + std::to_string(chk.degree) + ": " + chk.message;
        return rep;
    }
    return is_quasi_iso(KChainMap<F>{&S.k, &T.k, c});
}

// ---------------------------------------------------------------------------
// Freeness over a local algebra

// Basis of the maximal ideal: b_i − λ_i for the residues λ_i.
template <class F>
std::vector<Vector<F>> maximal_ideal_basis(const LocalAlgebra<F>& R)
{
    std::vector<Vector<F>> gens;
    Index d = R.dim();
    Matrix<F> m(d, d);
    for (Index i = 0; i < d; ++i) {
        auto l = detail::residue_of(R, R.basis(i));
        if (!l)
            throw std::domain_error("maximal_ideal_basis: algebra is not split local");
        m.col(i) = R.basis(i) - R.scalar(*l);
    }
    Matrix<F> img = image_basis<F>(m);
    for (Index c = 0; c < img.cols(); ++c)
        gens.push_back(img.col(c));
    return gens;
}

template <class F>
struct FreenessReport {
    bool free = false;
    Index dim = 0;        // dim_k M
    Index generators = 0; // dim_k M / mM
    std::vector<SparseVec<F>> basis;  // lifted minimal generators; an R-basis when free
    std::string reason;
};

// M is free iff dim M = g · dim R with g = dim M/mM, and the lifted
// generators map R^g injectively. Candidates (ambient vectors in Z) are tried
// first when choosing generators.
template <class F>
FreenessReport<F> free_basis(const LocalAlgebra<F>& R, const PresentedModule<F>& M,
                             const std::vector<SparseVec<F>>& candidates = {})
{
    FreenessReport<F> rep;
    auto S = subquotient_of(M);
    rep.dim = S.dim();
    auto mgens = maximal_ideal_basis(R);
    Echelon<F> mm(S.dim());
    for (Index k = 0; k < S.dim(); ++k)
        for (const auto& a : mgens) {
            auto c = S.coords(act(R, LocalAlgebra<F>::sparse_of(a), S.rep(k)));
            if (!c)
                throw std::domain_error("free_basis: module is not R-stable");
            mm.insert(*c);
        }
    rep.generators = S.dim() - mm.rank();
    std::vector<SparseVec<F>> chosen;
    auto try_add = [&](const SparseVec<F>& amb) {
        if (Index(chosen.size()) == rep.generators)
            return;
        auto c = S.coords(amb);
        if (!c)
            throw std::domain_error("free_basis: candidate is not in Z");
        if (mm.insert(*c) >= 0)
            chosen.push_back(amb);
    };
    for (const auto& c : candidates)
        try_add(c);
    for (Index k = 0; k < S.dim(); ++k)
        try_add(S.rep(k));
    rep.basis = chosen;
    if (rep.dim != rep.generators * R.dim()) {
        rep.reason = "dim_k M = " + std::to_string(rep.dim) + " but (dim M/mM)·dim R = " +
                     std::to_string(rep.generators) + "·" + std::to_string(R.dim());
        return rep;
    }
    Echelon<F> span(S.dim());
    for (const auto& g : chosen)
        for (Index s = 0; s < R.dim(); ++s)
            span.insert(*S.coords(act(R, s, g)));
    if (span.rank() != rep.generators * R.dim()) {
        rep.reason = "lifted generators do not map R^g injectively";
        return rep;
    }
    rep.free = true;
    return rep;
}

}  // namespace akc
