#pragma once

// The q-th Koszul complex of a map u: P → Q of free R-modules,
//   Kos^q(u)^i = Λ^i(Q) ⊗ Γ^{q−i}(P),
//   d(y ⊗ x^[e]) = Σ_{e_l ≥ 1} (y ∧ u(x_l)) ⊗ x^[e − e_l],
// its functoriality, the splitting along direct sums and the maps α^i.
//
// Degree i is indexed (I·|Γ^{q−i}| + e)·dim R + ρ for I ∈ Λ^i, e ∈ Γ^{q−i}.

#include <memory>
#include <string>
#include <vector>

#include "akc/complex.hpp"
#include "akc/multilinear.hpp"

namespace akc {

template <class F>
struct TwoTermComplex {
    AlgebraPtr<F> R;
    Index rankP = 0;
    Index rankQ = 0;
    RLinearMap<F> u;  // rankQ × rankP
};

template <class F>
struct KoszulComplex {
    int q = 0;
    int from = 0;  // lowest materialized degree
    Index rankP = 0, rankQ = 0;
    std::vector<ExteriorBasis> lambda;  // per degree from..q
    std::vector<MonomialBasis> gamma;
    Complex<F> complex;

    const ExteriorBasis& lam(int i) const { return lambda[std::size_t(i - from)]; }
    const MonomialBasis& gam(int i) const { return gamma[std::size_t(i - from)]; }

    Index index(int i, Index I, Index e, Index rho) const
    {
        return (I * gam(i).size() + e) * complex.R->dim() + rho;
    }

    std::string label(int i, Index k) const
    {
        Index d = complex.R->dim();
        Index rho = k % d;
        Index rest = k / d;
        Index e = rest % gam(i).size(), I = rest / gam(i).size();
        std::string s = lam(i).label(I) + "⊗" + gam(i).divided_label(e);
        if (d > 1)
            s += "·" + complex.R->labels()[rho];
        return s;
    }
};

// Flattened dimension of Kos^q in degrees from..q.
Count kos_dimension(int q, Index rankP, Index rankQ, Index algebra_dim, int from = 0);

template <class F>
KoszulComplex<F> kos(int q, const TwoTermComplex<F>& T, int from = 0)
{
    if (q < 0)
        throw std::invalid_argument("kos: q must be nonnegative");
    from = std::max(0, std::min(from, q));
    const auto& R = *T.R;
    Index d = R.dim();
    Index s = T.rankP, t = T.rankQ;
    KoszulComplex<F> K;
    K.q = q;
    K.from = from;
    K.rankP = s;
    K.rankQ = t;
    K.complex.R = T.R;
    K.complex.lo = from;
    for (int i = from; i <= q; ++i) {
        K.lambda.emplace_back(int(t), i);
        K.gamma.emplace_back(int(s), q - i);
        K.complex.terms.push_back(PresentedModule<F>::free(K.lambda.back().size() * K.gamma.back().size(), d));
    }
    // u(x_l)·b_ρ as (c, coefficient vector) lists.
    using Images = std::vector<std::pair<int, SparseVec<F>>>;
    std::vector<std::vector<Images>> img(static_cast<std::size_t>(s), std::vector<Images>(static_cast<std::size_t>(d)));
    for (Index l = 0; l < s; ++l)
        for (Index rho = 0; rho < d; ++rho)
            for (Index c = 0; c < t; ++c) {
                auto v = LocalAlgebra<F>::sparse_of(Vector<F>(R.basis_left(rho) * T.u.at(c, l)));
                if (!v.empty())
                    img[l][rho].emplace_back(int(c), std::move(v));
            }
    for (int i = from; i < q; ++i) {
        const auto& L0 = K.lam(i);
        const auto& G0 = K.gam(i);
        const auto& L1 = K.lam(i + 1);
        const auto& G1 = K.gam(i + 1);
        Index rows = K.complex.terms[std::size_t(i + 1 - from)].dim;
        Index cols = K.complex.terms[std::size_t(i - from)].dim;
        ColumnBuilder<F> B(rows, cols);
        SparseVec<F> col;
        std::vector<int> J;
        for (Index I = 0; I < L0.size(); ++I)
            for (Index e = 0; e < G0.size(); ++e) {
                const auto& Iv = L0.at(I);
                const auto& ev = G0.at(e);
                for (Index rho = 0; rho < d; ++rho) {
                    col.clear();
                    for (std::size_t k = 0; k < ev.size(); ++k) {
                        if (k > 0 && ev[k] == ev[k - 1])
                            continue;
                        int l = ev[k];
                        Index e1 = G1.index(remove_one(ev, l));
                        for (const auto& [c, coef] : img[l][rho]) {
                            int sg = merge_sign(Iv, std::vector<int>{c});
                            if (sg == 0)
                                continue;
                            J = Iv;
                            J.insert(std::upper_bound(J.begin(), J.end(), c), c);
                            Index base = (L1.index(J) * G1.size() + e1) * d;
                            for (const auto& [sigma, x] : coef)
                                col.emplace_back(base + sigma, sg > 0 ? x : -x);
                        }
                    }
                    B.push(canonicalize(std::move(col)));
                    col = {};
                }
            }
        K.complex.d.push_back(B.finish());
    }
    return K;
}

// The tilde subcomplex, materialized in the degrees i where (q − i)! is a
// unit. There Sym^{q−i} ≅ Γ^{q−i} and it agrees with Kos^q; those degrees form
// an upper interval, so the result is the stupid truncation from that degree.
template <class F>
KoszulComplex<F> tilde_kos(int q, const TwoTermComplex<F>& T)
{
    int from = q;
    while (from > 0 && factorial_invertible(*T.R, q - from + 1))
        --from;
    return kos(q, T, from);
}

// ---------------------------------------------------------------------------

template <class F>
RLinearMap<F> kronecker(const LocalAlgebra<F>& R, const RLinearMap<F>& a, const RLinearMap<F>& b)
{
    auto out = RLinearMap<F>::zero(R, a.target_rank * b.target_rank, a.source_rank * b.source_rank);
    for (Index i = 0; i < a.target_rank; ++i)
        for (Index j = 0; j < a.source_rank; ++j) {
            if (is_zero_matrix<F>(Matrix<F>(a.at(i, j))))
                continue;
            for (Index k = 0; k < b.target_rank; ++k)
                for (Index l = 0; l < b.source_rank; ++l)
                    out.at(i * b.target_rank + k, j * b.source_rank + l) = R.multiply(a.at(i, j), b.at(k, l));
        }
    return out;
}

template <class F>
RLinearMap<F> block_diagonal(const LocalAlgebra<F>& R, const RLinearMap<F>& a, const RLinearMap<F>& b)
{
    auto out = RLinearMap<F>::zero(R, a.target_rank + b.target_rank, a.source_rank + b.source_rank);
    for (Index i = 0; i < a.target_rank; ++i)
        for (Index j = 0; j < a.source_rank; ++j)
            out.at(i, j) = a.at(i, j);
    for (Index i = 0; i < b.target_rank; ++i)
        for (Index j = 0; j < b.source_rank; ++j)
            out.at(a.target_rank + i, a.source_rank + j) = b.at(i, j);
    return out;
}

template <class F>
TwoTermComplex<F> direct_sum(const TwoTermComplex<F>& a, const TwoTermComplex<F>& b)
{
    return {a.R, a.rankP + b.rankP, a.rankQ + b.rankQ, block_diagonal(*a.R, a.u, b.u)};
}

// A morphism of two-term complexes: fQ ∘ u = u′ ∘ fP.
template <class F>
struct TwoTermMorphism {
    TwoTermComplex<F> source, target;
    RLinearMap<F> fP, fQ;
};

template <class F>
bool commutes(const TwoTermMorphism<F>& m)
{
    const auto& R = *m.source.R;
    return compose(R, m.fQ, m.source.u) == compose(R, m.target.u, m.fP);
}

// Degree i component Λ^i(fQ) ⊗ Γ^{q−i}(fP).
template <class F>
ChainMap<F> kos_map(int q, const TwoTermMorphism<F>& m)
{
    if (!commutes(m))
        throw std::invalid_argument("kos_map: the square does not commute");
    const auto& R = *m.source.R;
    auto S = std::make_shared<Complex<F>>(kos(q, m.source).complex);
    auto T = std::make_shared<Complex<F>>(kos(q, m.target).complex);
    ChainMap<F> f{S, T, 0, {}};
    for (int i = 0; i <= q; ++i)
        f.f.push_back(flatten_sparse(R, kronecker(R, exterior_map(R, m.fQ, i), divided_power_map(R, m.fP, q - i))));
    return f;
}

// ---------------------------------------------------------------------------
// Kos^q(u′ ⊕ u″) ≅ ⊕_{a+b=q} Kos^a(u′) ⊗ Kos^b(u″), sending
// (y′∧y″) ⊗ x′^[e′]x″^[e″] to (−1)^{i′i″} (y′ ⊗ x′^[e′]) ⊗ (y″ ⊗ x″^[e″]).

template <class F>
struct TensorSplit {
    ComplexPtr<F> source, target;
    ChainMap<F> phi;
    ChainMapCheck chain;
    bool bijective = false;
};

template <class F>
TensorSplit<F> kos_tensor_split(int q, const TwoTermComplex<F>& u1, const TwoTermComplex<F>& u2)
{
    const auto& R = *u1.R;
    Index d = R.dim();
    auto whole = kos(q, direct_sum(u1, u2));
    std::vector<KoszulComplex<F>> k1, k2;
    for (int a = 0; a <= q; ++a) {
        k1.push_back(kos(a, u1));
        k2.push_back(kos(q - a, u2));
    }
    Complex<F> target;
    std::vector<Complex<F>> parts;
    for (int a = 0; a <= q; ++a) {
        parts.push_back(tensor(k1[a].complex, k2[a].complex));
        target = a == 0 ? parts.back() : direct_sum(target, parts.back());
    }
    // Offset of part a inside target degree n.
    auto part_offset = [&](int a, int n) {
        Index off = 0;
        for (int b = 0; b < a; ++b)
            off += parts[b].ambient(n);
        return off;
    };
    // Offset of the (i′, i″) block inside tensor part a, degree n = i′ + i″.
    auto block_offset = [&](int a, int i1, int n) {
        Index off = 0;
        for (int j = 0; j < i1; ++j)
            if (k1[a].complex.has(j) && k2[a].complex.has(n - j))
                off += k1[a].complex.term(j).rank * k2[a].complex.term(n - j).rank;
        return off;
    };
    Index t1 = u1.rankQ, s1 = u1.rankP;
    ChainMap<F> phi;
    phi.source = std::make_shared<Complex<F>>(whole.complex);
    phi.target = std::make_shared<Complex<F>>(target);
    phi.lo = 0;
    for (int n = 0; n <= q; ++n) {
        const auto& L = whole.lam(n);
        const auto& G = whole.gam(n);
        std::vector<SparseVec<F>> cols(std::size_t(whole.complex.term(n).dim));
        for (Index I = 0; I < L.size(); ++I)
            for (Index e = 0; e < G.size(); ++e) {
                std::vector<int> J1, J2, e1, e2;
                for (int c : L.at(I))
                    (c < t1 ? J1 : J2).push_back(c < t1 ? c : int(c - t1));
                for (int l : G.at(e))
                    (l < s1 ? e1 : e2).push_back(l < s1 ? l : int(l - s1));
                int i1 = int(J1.size()), i2 = int(J2.size());
                int a = i1 + int(e1.size());
                const auto& A = k1[a];
                const auto& B = k2[a];
                Index x = A.lam(i1).index(J1) * A.gam(i1).size() + A.gam(i1).index(e1);
                Index y = B.lam(i2).index(J2) * B.gam(i2).size() + B.gam(i2).index(e2);
                Index rank_b = B.complex.term(i2).rank;
                Index pos = part_offset(a, n) / d + block_offset(a, i1, n) + x * rank_b + y;
                F sign = (i1 * i2) % 2 == 0 ? F(1) : F(-1);
                for (Index rho = 0; rho < d; ++rho)
                    cols[std::size_t(whole.index(n, I, e, rho))] = {{pos * d + rho, sign}};
            }
        phi.f.push_back(from_columns<F>(target.ambient(n), cols));
    }
    TensorSplit<F> out;
    out.source = phi.source;
    out.target = phi.target;
    out.chain = validate_chain_map(phi);
    out.bijective = true;
    for (int n = 0; n <= q; ++n) {
        const auto& m = phi.f[std::size_t(n)];
        if (m.rows() != m.cols() || rank<F>(m) != m.cols())
            out.bijective = false;
    }
    out.phi = std::move(phi);
    return out;
}

// ---------------------------------------------------------------------------
// α^i: Λ^i(coker u) ⊗ Γ^{q−i}(ker u) → H^i(Kos^q(u))

struct AlphaDegree {
    int degree = 0;
    Index source_rank = 0;   // rank over R of Λ^i(coker) ⊗ Γ^{q−i}(ker)
    Index h_dim = 0;         // dim_k H^i
    Index image_rank = 0;    // dim_k of the image of α^i
    bool cocycles = false;   // top square: images are cocycles
    bool commutes = false;   // the diagram commutes on all basis elements
    bool iso = false;
};

struct AlphaReport {
    bool hypotheses = false;  // ker, im, coker free
    std::string reason;
    Index rank_ker = 0, rank_coker = 0;
    std::vector<AlphaDegree> degrees;

    bool all_iso() const
    {
        for (const auto& d : degrees)
            if (!d.iso || !d.commutes || !d.cocycles)
                return false;
        return !degrees.empty();
    }
};

template <class F>
AlphaReport alpha_maps(int q, const TwoTermComplex<F>& T)
{
    const auto& R = *T.R;
    Index d = R.dim();
    Index s = T.rankP, t = T.rankQ;
    SpMat<F> U = flatten_sparse(R, T.u);
    AlphaReport rep;

    PresentedModule<F> ker{s, s * d, kernel<F>(U), {}};
    PresentedModule<F> im{t, t * d, to_columns<F>(U), {}};
    PresentedModule<F> cok{t, t * d, std::nullopt, to_columns<F>(U)};
    auto fk = free_basis(R, ker);
    auto fi = free_basis(R, im);
    auto fc = free_basis(R, cok);
    rep.hypotheses = fk.free && fi.free && fc.free;
    if (!fk.free)
        rep.reason = "ker u is not free: " + fk.reason;
    else if (!fi.free)
        rep.reason = "im u is not free: " + fi.reason;
    else if (!fc.free)
        rep.reason = "coker u is not free: " + fc.reason;
    Index a = Index(fk.basis.size()), b = Index(fc.basis.size());
    rep.rank_ker = a;
    rep.rank_coker = b;

    auto as_map = [&](const std::vector<SparseVec<F>>& vs, Index target_rank) {
        auto m = RLinearMap<F>::zero(R, target_rank, Index(vs.size()));
        for (Index k = 0; k < Index(vs.size()); ++k)
            for (const auto& [idx, c] : vs[k])
                m.at(idx / d, k)(idx % d) = c;
        return m;
    };
    auto incl = as_map(fk.basis, s);  // ker → P
    auto lift = as_map(fc.basis, t);  // coker → Q, a section on generators

    // π: Q → coker in the chosen generators.
    auto cq = subquotient_of(cok);
    Echelon<F> gens(cq.dim(), true);
    std::vector<std::pair<Index, Index>> id_of;  // inserted id → (generator, σ)
    for (Index k = 0; k < b; ++k)
        for (Index sg = 0; sg < d; ++sg) {
            gens.insert(*cq.coords(act(R, sg, fc.basis[k])));
            id_of.emplace_back(k, sg);
        }
    auto pi = RLinearMap<F>::zero(R, b, t);
    for (Index c = 0; c < t; ++c) {
        SparseVec<F> ec;
        for (const auto& [l, x] : R.unit_sparse())
            ec.emplace_back(c * d + l, x);
        auto combo = gens.express(*cq.coords(ec));
        if (!combo)
            throw std::logic_error("alpha_maps: generators do not span the cokernel");
        for (const auto& [id, x] : *combo) {
            auto [k, sg] = id_of[std::size_t(id)];
            pi.at(k, c)(sg) += x;
        }
    }

    auto K = kos(q, T);
    auto C = coordinatize(K.complex);
    for (int i = 0; i <= q; ++i) {
        AlphaDegree deg;
        deg.degree = i;
        auto H = cohomology_at(C.k, i);
        deg.h_dim = H.dim();
        SpMat<F> di = C.k.diff(i);
        auto gi = divided_power_map(R, incl, q - i);
        auto alpha = flatten_sparse(R, kronecker(R, exterior_map(R, lift, i), gi));
        deg.source_rank = alpha.cols() / d;
        // Upper arrow Λ^i(Q) ⊗ Γ^{q−i}(ker) → Kos^i and the lower route.
        auto upper = flatten_sparse(R, kronecker(R, RLinearMap<F>::identity(R, ExteriorBasis(int(t), i).size()), gi));
        auto lower = product<F>(alpha, flatten_sparse(R, kronecker(R, exterior_map(R, pi, i),
                                                                    RLinearMap<F>::identity(R, gi.source_rank))));
        deg.cocycles = is_zero_matrix<F>(product<F>(di, upper)) && is_zero_matrix<F>(product<F>(di, alpha));
        deg.commutes = deg.cocycles;
        if (deg.cocycles)
            for (Index j = 0; j < upper.cols() && deg.commutes; ++j) {
                auto x = column(upper, j);
                axpy(x, F(-1), column(lower, j));
                deg.commutes = H.in_B(x);
            }
        if (deg.cocycles) {
            Echelon<F> img(H.dim());
            for (Index j = 0; j < alpha.cols(); ++j)
                img.insert(*H.coords(column(alpha, j)));
            deg.image_rank = img.rank();
            deg.iso = deg.image_rank == H.dim() && alpha.cols() == H.dim();
        }
        rep.degrees.push_back(deg);
    }
    return rep;
}

}  // namespace akc
