#pragma once

// Reconstruction of τ[q−m, q] K from τ≤1 K through the Koszul complex of
// ∂: K^0 → Z^1 K, and the decomposition witnesses it yields.

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "akc/cdga.hpp"
#include "akc/config.hpp"
#include "akc/koszul.hpp"
#include "akc/status.hpp"

namespace akc {

// A failed hypothesis; clause names which one.
struct Refusal : std::runtime_error {
    Refusal(std::string clause, const std::string& what) : std::runtime_error(what), clause(std::move(clause)) {}
    std::string clause;
};

// R-coordinates of vectors in a free module with a chosen R-basis.
template <class F>
class RBasisCoords {
public:
    RBasisCoords(AlgebraPtr<F> R, const PresentedModule<F>& M, std::vector<SparseVec<F>> basis)
        : R_(std::move(R)), S_(subquotient_of(M)), basis_(std::move(basis)), ech_(S_.dim(), true)
    {
        for (const auto& b : basis_)
            for (Index s = 0; s < R_->dim(); ++s) {
                auto c = S_.coords(act(*R_, s, b));
                if (!c)
                    throw std::invalid_argument("RBasisCoords: basis vector outside the module");
                ech_.insert(*c);
            }
    }

    Index rank() const { return Index(basis_.size()); }
    const std::vector<SparseVec<F>>& basis() const { return basis_; }

    // nullopt when v is not in the R-span of the basis.
    std::optional<std::vector<Vector<F>>> operator()(const SparseVec<F>& v) const
    {
        auto c = S_.coords(v);
        if (!c)
            return std::nullopt;
        auto e = ech_.express(*c);
        if (!e)
            return std::nullopt;
        Index d = R_->dim();
        std::vector<Vector<F>> out(basis_.size(), Vector<F>::Zero(d));
        for (const auto& [k, x] : *e)
            out[std::size_t(k / d)] += x * R_->basis(k % d);
        return out;
    }

    // The R-linear map R^s → this module given by images of generators.
    RLinearMap<F> matrix_of(const std::vector<SparseVec<F>>& images) const
    {
        auto m = RLinearMap<F>::zero(*R_, rank(), Index(images.size()));
        for (std::size_t j = 0; j < images.size(); ++j) {
            auto c = (*this)(images[j]);
            if (!c)
                throw std::invalid_argument("RBasisCoords: image outside the module");
            for (Index i = 0; i < rank(); ++i)
                m.at(i, Index(j)) = (*c)[std::size_t(i)];
        }
        return m;
    }

private:
    AlgebraPtr<F> R_;
    Subquotient<F> S_;
    std::vector<SparseVec<F>> basis_;
    Echelon<F> ech_;
};

template <class F>
struct BoundaryMap {
    TwoTermComplex<F> T;            // ∂ in the chosen bases
    std::vector<SparseVec<F>> P;    // R-basis of K^0 (ambient)
    std::vector<SparseVec<F>> Q;    // R-basis of Z^1 K (ambient)
    PresentedModule<F> K0, Z1;
};

// τ≤1 K = [K^0 → Z^1 K]. The Z^1 basis prefers the boundaries of the K^0
// basis, then representatives of H^1. Throws Refusal("C3") when K^0 or Z^1
// is not free.
template <class F>
BoundaryMap<F> boundary_map(const CDGA<F>& K)
{
    const auto& C = K.complex;
    const auto& R = *C.R;
    BoundaryMap<F> out;
    out.K0 = C.term(0);
    auto f0 = free_basis(R, out.K0);
    if (!f0.free)
        throw Refusal("C3", "K^0 is not free: " + f0.reason);
    out.P = f0.basis;
    if (C.has(1)) {
        auto Co = coordinatize(C);
        out.Z1 = PresentedModule<F>{C.term(1).rank, C.term(1).dim, cocycles_ambient(C, Co, 1), C.term(1).B};
        std::vector<SparseVec<F>> cands;
        for (const auto& p : out.P)
            cands.push_back(apply<F>(C.diff(0), p));
        auto H = cohomology(C);
        for (const auto& h : H.reps[1])
            cands.push_back(h);
        auto f1 = free_basis(R, out.Z1, cands);
        if (!f1.free)
            throw Refusal("C3", "Z^1 is not free: " + f1.reason);
        out.Q = f1.basis;
    } else {
        out.Z1 = PresentedModule<F>{0, 0, std::nullopt, {}};
    }
    RBasisCoords<F> zc(C.R, out.Z1, out.Q);
    std::vector<SparseVec<F>> dP;
    for (const auto& p : out.P)
        dP.push_back(C.has(1) ? apply<F>(C.diff(0), p) : SparseVec<F>{});
    out.T = TwoTermComplex<F>{C.R, Index(out.P.size()), Index(out.Q.size()), zc.matrix_of(dP)};
    return out;
}

// Degree i component of μ on Kos^q(u) for lo ≤ i ≤ hi:
//   y_{c1..ci} ⊗ x^{[e]} ⊗ b_ρ ↦ b_ρ · (x^e / e!) · z_{ci} ··· z_{c1},
// with x_l ↦ P[l] and y_c ↦ Q[c]. Needs (q − lo)! invertible.
template <class F>
std::vector<SpMat<F>> multiplication_components(const CDGA<F>& K, const KoszulComplex<F>& kc,
                                                const std::vector<SparseVec<F>>& P,
                                                const std::vector<SparseVec<F>>& Q, int lo, int hi)
{
    const auto& R = *K.complex.R;
    Index d = R.dim();
    int q = kc.q;
    int s = int(P.size()), h = int(Q.size());
    std::vector<std::vector<SparseVec<F>>> X(std::size_t(q - lo + 1));
    X[0] = {K.unit};
    for (int g = 1; g <= q - lo; ++g) {
        MonomialBasis mb(s, g), prev(s, g - 1);
        auto& cur = X[std::size_t(g)];
        cur.reserve(std::size_t(mb.size()));
        for (Index k = 0; k < mb.size(); ++k) {
            const auto& ev = mb.at(k);
            int l = ev.back();
            auto mult = std::count(ev.begin(), ev.end(), l);
            auto v = multiply(K, 0, P[std::size_t(l)], 0, X[std::size_t(g - 1)][std::size_t(prev.index(remove_one(ev, l)))]);
            F inv = F(1) / from_integer<F>(BigInt(mult));
            for (auto& [idx, x] : v)
                x *= inv;
            cur.push_back(std::move(v));
        }
    }
    std::vector<std::vector<SparseVec<F>>> Z(std::size_t(hi + 1));
    Z[0] = {K.unit};
    for (int i = 1; i <= hi; ++i) {
        ExteriorBasis eb(h, i), prev(h, i - 1);
        auto& cur = Z[std::size_t(i)];
        cur.reserve(std::size_t(eb.size()));
        for (Index k = 0; k < eb.size(); ++k) {
            auto I = eb.at(k);
            int c = I.back();
            I.pop_back();
            cur.push_back(multiply(K, 1, Q[std::size_t(c)], i - 1, Z[std::size_t(i - 1)][std::size_t(prev.index(I))]));
        }
        if (i >= 2 && i - 2 < lo)
            Z[std::size_t(i - 2)] = {};
    }
    std::vector<SpMat<F>> out;
    for (int i = lo; i <= hi; ++i) {
        const auto& L = kc.lam(i);
        const auto& G = kc.gam(i);
        ColumnBuilder<F> B(K.complex.ambient(i), L.size() * G.size() * d);
        const auto& Xg = X[std::size_t(q - i)];
        for (Index I = 0; I < L.size(); ++I)
            for (Index e = 0; e < G.size(); ++e) {
                auto v = multiply(K, 0, Xg[std::size_t(e)], i, Z[std::size_t(i)][std::size_t(I)]);
                for (Index rho = 0; rho < d; ++rho)
                    B.push(act(R, rho, v));
            }
        out.push_back(B.finish());
    }
    return out;
}

// ---------------------------------------------------------------------------
// The theorem

// Numeric hypotheses, checked in order: q ≥ m ≥ 0, m! a unit, q = m or m + 1
// a nonzerodivisor.
template <class F>
std::optional<Refusal> theorem_gate(const LocalAlgebra<F>& R, int q, int m)
{
    if (m < 0 || q < m)
        return Refusal("range", "need q ≥ m ≥ 0, got q = " + std::to_string(q) + ", m = " + std::to_string(m));
    if (!factorial_invertible(R, m))
        return Refusal("m!", std::to_string(m) + "! is not invertible in R");
    if (q != m && !is_nonzerodivisor(R, integer_element(R, m + 1)))
        return Refusal("m+1", "q ≠ m and m + 1 = " + std::to_string(m + 1) + " is a zero divisor in R");
    return std::nullopt;
}

struct BottomCheck {
    bool ran = false;
    bool ok = true;
    bool identity_ok = true;  // d(multiplication of (m+1)w) = (m+1)·μ(dw)
    Index columns = 0;
    std::string witness;
};

template <class F>
struct ReconstructionResult {
    Status status = Status::Failed;
    std::string clause;  // for refusals
    std::string reason;
    int q = 0, m = 0;
    ComplexPtr<F> source, target;  // τ≥q−m Kos^q(∂), τ[q−m, q] K
    ChainMap<F> mu;
    BottomCheck bottom;
    ChainMapCheck chain;
    QuasiIsoReport qi;
    Index rankP = 0, rankQ = 0;
    double elapsed = 0;
};

struct ReconstructOptions {
    bool check_axioms = true;  // run C1–C3 (and the cdga laws) before constructing
};

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <class F>
std::optional<Refusal> axiom_gate(const CDGA<F>& K)
{
    auto r = verify_akc(K);
    if (!r.cdga.ok)
        return Refusal("cdga", "not a cdga: " + r.cdga.law + " " + r.cdga.witness);
    if (!r.c1.ok)
        return Refusal("C1", r.c1.detail);
    if (!r.c2.ok)
        return Refusal("C2", r.c2.detail);
    if (!r.c3.ok)
        return Refusal("C3", r.c3.detail);
    return std::nullopt;
}

// Checks that μ^b sends d Kos^{b−1} into dK^{b−1}: solves d(u) = (m+1)·μ(dw)
// in K^{b−1} and audits the explicit lift.
template <class F>
BottomCheck bottom_check(const CDGA<F>& K, const KoszulComplex<F>& kc, const BoundaryMap<F>& bd,
                         const SpMat<F>& mu_b, int m)
{
    const auto& C = K.complex;
    const auto& R = *C.R;
    Index d = R.dim();
    int b = kc.q - m;
    BottomCheck out;
    out.ran = true;
    auto src = subquotient_of(C.term(b - 1));
    Echelon<F> dK(C.ambient(b), true);
    std::vector<SparseVec<F>> pre;
    for (Index k = 0; k < src.dim(); ++k) {
        pre.push_back(src.rep(k));
        dK.insert(apply<F>(C.diff(b - 1), pre.back()));
    }
    for (const auto& v : C.term(b).B)
        dK.insert(v);
    F m1 = from_integer<F>(BigInt(m + 1));
    SpMat<F> dz = kc.complex.diff(b - 1);
    // Explicit lift: multiplication of (m+1)·y_I ⊗ x^{[e]} = multinomial(e)/m! · x^e · y_I.
    const auto& L = kc.lam(b - 1);
    const auto& G = kc.gam(b - 1);
    F mfact_inv = F(1) / from_integer<F>(factorial(unsigned(m)));
    std::vector<SparseVec<F>> Xe;  // x^e in K^0, undivided
    for (Index e = 0; e < G.size(); ++e) {
        SparseVec<F> v = K.unit;
        for (int l : G.at(e))
            v = multiply(K, 0, bd.P[std::size_t(l)], 0, v);
        Xe.push_back(std::move(v));
    }
    ExteriorBasis eb(int(bd.Q.size()), b - 1);
    std::vector<SparseVec<F>> ZI;
    for (Index I = 0; I < eb.size(); ++I) {
        SparseVec<F> v = K.unit;
        int deg = 0;
        for (int c : eb.at(I))
            v = multiply(K, 1, bd.Q[std::size_t(c)], deg++, v);
        ZI.push_back(std::move(v));
    }
    for (Index I = 0; I < L.size(); ++I)
        for (Index e = 0; e < G.size(); ++e) {
            F coef = from_integer<F>(factorial(unsigned(m + 1))) / from_integer<F>(G.factorial_weight(e)) * mfact_inv;
            auto U0 = multiply(K, 0, Xe[std::size_t(e)], b - 1, ZI[std::size_t(I)]);
            for (Index rho = 0; rho < d; ++rho) {
                Index col = kc.index(b - 1, I, e, rho);
                ++out.columns;
                auto w = column<F>(dz, col);
                auto muz = apply<F>(mu_b, w);
                auto target = scaled(muz, m1);
                auto sol = dK.express(target);
                if (!sol) {
                    out.ok = false;
                    out.witness = "μ(d(" + kc.label(b - 1, col) + ")) is not a boundary";
                    return out;
                }
                auto U = act(R, rho, scaled(U0, coef));
                auto dU = apply<F>(C.diff(b - 1), U);
                axpy(dU, -F(1), target);
                if (!dU.empty() && !dK.contains(dU)) {
                    out.identity_ok = false;
                    if (out.witness.empty())
                        out.witness = "explicit lift fails for " + kc.label(b - 1, col);
                }
            }
        }
    return out;
}

}  // namespace detail

template <class F>
ReconstructionResult<F> theorem_map(const CDGA<F>& K, int q, int m, const ReconstructOptions& opt = {})
{
    auto t0 = std::chrono::steady_clock::now();
    ReconstructionResult<F> res;
    res.q = q;
    res.m = m;
    auto refuse = [&](const Refusal& r) {
        res.status = Status::Refused;
        res.clause = r.clause;
        res.reason = r.what();
        res.elapsed = detail::seconds_since(t0);
        return res;
    };
    const auto& R = *K.complex.R;
    if (auto r = theorem_gate(R, q, m))
        return refuse(*r);
    if (opt.check_axioms)
        if (auto r = detail::axiom_gate(K))
            return refuse(*r);
    BoundaryMap<F> bd;
    try {
        bd = boundary_map(K);
    } catch (const Refusal& r) {
        return refuse(r);
    }
    res.rankP = bd.T.rankP;
    res.rankQ = bd.T.rankQ;
    int b = q - m;
    int from = b > 0 ? b - 1 : 0;
    Count size = kos_dimension(q, bd.T.rankP, bd.T.rankQ, R.dim(), from);
    if (size > size_guard())
        throw std::length_error("theorem_map: Kos^" + std::to_string(q) + " has dimension " + std::to_string(size) +
                                " above the size guard " + std::to_string(size_guard()));
    auto kc = kos(q, bd.T, from);
    auto comps = multiplication_components(K, kc, bd.P, bd.Q, b, q);
    if (b > 0) {
        res.bottom = detail::bottom_check(K, kc, bd, comps.front(), m);
        if (!res.bottom.ok || !res.bottom.identity_ok) {
            res.status = Status::Failed;
            res.reason = "bottom degree: " + res.bottom.witness;
            res.elapsed = detail::seconds_since(t0);
            return res;
        }
    }
    const auto& C = K.complex;
    if (b > C.hi())
        throw std::invalid_argument("theorem_map: q − m is above the top degree of K");
    res.source = std::make_shared<Complex<F>>(tau_geq(kc.complex, b));
    res.target = std::make_shared<Complex<F>>(q >= C.hi() ? tau_geq(C, b) : tau_range(C, b, q));
    res.mu = ChainMap<F>{res.source, res.target, b, std::move(comps)};
    res.qi = is_quasi_iso(res.mu);
    res.status = res.qi.verdict ? Status::Verified : Status::Failed;
    res.reason = res.qi.verdict ? "cone acyclic" : (res.qi.failure.empty() ? "cone not acyclic" : res.qi.failure);
    res.elapsed = detail::seconds_since(t0);
    return res;
}

// ---------------------------------------------------------------------------
// Decomposition witnesses

template <class F>
struct DecompositionResult {
    Status status = Status::Failed;
    std::string clause;
    std::string reason;
    int a = 0, b = 0;
    ChainMap<F> witness;          // ⊕ H^i[−i] (as Λ^i R^h) → τ[a,b] K
    QuasiIsoReport splitting_check, qi;
    std::optional<bool> factors;  // witness = μ ∘ Kos^b(s); nullopt when skipped for size
    double elapsed = 0;
};

// Chooses an R-basis of H^1 and sends the unit to 1: a quasi-isomorphism
// (R, R^h; 0) → τ≤1 K whenever C1 holds and H^1 is free.
template <class F>
ChainMap<F> cohomology_splitting(const CDGA<F>& K)
{
    const auto& C = K.complex;
    const auto& R = *C.R;
    Index d = R.dim();
    std::vector<SparseVec<F>> h1;
    if (C.has(1)) {
        auto fb = free_basis(R, cohomology(C).modules[1]);
        if (!fb.free)
            throw Refusal("C2", "H^1 is not free: " + fb.reason);
        h1 = fb.basis;
    }
    Index h = Index(h1.size());
    auto src = std::make_shared<Complex<F>>(free_complex<F>(C.R, 0, {1, h}, {SpMat<F>(h * d, d)}));
    auto tgt = std::make_shared<Complex<F>>(tau_leq(C, 1));
    std::vector<SparseVec<F>> c0, c1;
    for (Index s = 0; s < d; ++s)
        c0.push_back(act(R, s, K.unit));
    for (const auto& z : h1)
        for (Index s = 0; s < d; ++s)
            c1.push_back(act(R, s, z));
    return ChainMap<F>{src, tgt, 0, {from_columns<F>(tgt->ambient(0), c0), from_columns<F>(tgt->ambient(1), c1)}};
}

// s: (R^{r0}, R^h; zero d) → τ≤1 K with free source terms.
template <class F>
DecompositionResult<F> decompose_range(const CDGA<F>& K, int a, int b, const ChainMap<F>& s,
                                       const ReconstructOptions& opt = {})
{
    auto t0 = std::chrono::steady_clock::now();
    DecompositionResult<F> res;
    res.a = a;
    res.b = b;
    auto refuse = [&](const Refusal& r) {
        res.status = Status::Refused;
        res.clause = r.clause;
        res.reason = r.what();
        res.elapsed = detail::seconds_since(t0);
        return res;
    };
    const auto& C = K.complex;
    const auto& R = *C.R;
    Index d = R.dim();
    if (a < 0 || b < a)
        return refuse(Refusal("range", "need 0 ≤ a ≤ b"));
    if (auto r = theorem_gate(R, b, b - a))
        return refuse(*r);
    const auto& D = *s.source;
    if (D.lo != 0 || D.terms.size() > 2 || D.term(0).Z || !D.term(0).B.empty() ||
        (D.has(1) && (D.term(1).Z || !D.term(1).B.empty())))
        return refuse(Refusal("splitting", "the splitting source must be free in degrees 0 and 1"));
    if (D.has(1) && D.d.size() == 1 && !is_zero_matrix<F>(to_dense<F>(D.d[0])))
        return refuse(Refusal("splitting", "the splitting source must have zero differential"));
    if (opt.check_axioms)
        if (auto r = detail::axiom_gate(K))
            return refuse(*r);
    res.splitting_check = is_quasi_iso(s);
    if (!res.splitting_check.verdict)
        return refuse(Refusal("splitting", "s is not a quasi-isomorphism onto τ≤1 K"));

    Index r0 = D.term(0).rank, h = D.has(1) ? D.term(1).rank : 0;
    std::vector<SparseVec<F>> P, Q;
    SpMat<F> s0 = s.at(0), s1 = s.at(1);
    for (Index j = 0; j < r0; ++j)
        P.push_back(column<F>(s0, j * d));
    for (Index j = 0; j < h; ++j)
        Q.push_back(column<F>(s1, j * d));
    // Representative columns assume b_0 is the unit of R.
    if (R.unit_sparse() != SparseVec<F>{{0, F(1)}})
        throw std::logic_error("decompose_range: R must have the unit as first basis vector");

    auto zero = TwoTermComplex<F>{C.R, r0, h, RLinearMap<F>::zero(R, h, r0)};
    if (kos_dimension(b, r0, h, d, a) > size_guard())
        throw std::length_error("decompose_range: witness source exceeds the size guard");
    if (a > C.hi())
        throw std::invalid_argument("decompose_range: a is above the top degree of K");
    auto W = kos(b, zero, a);
    auto src = std::make_shared<Complex<F>>(W.complex);
    auto tgt = std::make_shared<Complex<F>>(b >= C.hi() ? tau_geq(C, a) : tau_range(C, a, b));
    res.witness = ChainMap<F>{src, tgt, a, multiplication_components(K, W, P, Q, a, b)};
    res.qi = is_quasi_iso(res.witness);

    // witness = μ ∘ Kos^b(s) in degrees a..b.
    try {
        auto bd = boundary_map(K);
        int from = a > 0 ? a - 1 : 0;
        if (kos_dimension(b, bd.T.rankP, bd.T.rankQ, d, from) <= size_guard() / 4) {
            RBasisCoords<F> pc(C.R, bd.K0, bd.P), qc(C.R, bd.Z1, bd.Q);
            TwoTermMorphism<F> mor{zero, bd.T, pc.matrix_of(P), qc.matrix_of(Q)};
            auto ks = kos_map(b, mor);
            auto kc = kos(b, bd.T, a);
            auto mu = multiplication_components(K, kc, bd.P, bd.Q, a, b);
            bool eq = true;
            for (int i = a; i <= b; ++i)
                eq = eq && equal<F>(product<F>(mu[std::size_t(i - a)], ks.at(i)), res.witness.at(i));
            res.factors = eq;
        }
    } catch (const Refusal&) {
        res.factors = false;
    } catch (const std::invalid_argument&) {
        res.factors = false;
    }

    bool ok = res.qi.verdict && res.factors.value_or(true);
    res.status = ok ? Status::Verified : Status::Failed;
    res.reason = !res.qi.verdict ? (res.qi.failure.empty() ? "cone not acyclic" : res.qi.failure)
                 : ok            ? "witness is a quasi-isomorphism"
                                 : "witness does not factor through μ ∘ Kos(s)";
    res.elapsed = detail::seconds_since(t0);
    return res;
}

template <class F>
DecompositionResult<F> tau_leq_m_decompose(const CDGA<F>& K, int m, const ChainMap<F>& s,
                                           const ReconstructOptions& opt = {})
{
    return decompose_range(K, 0, m, s, opt);
}

}  // namespace akc
