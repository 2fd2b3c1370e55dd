#pragma once

// Commutative differential graded algebras over a local algebra R and the
// abstract Koszul complex conditions (C1)–(C3).

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "akc/complex.hpp"
#include "akc/multilinear.hpp"

namespace akc {

// Product of two ambient basis vectors of the flattened terms.
template <class F>
class Multiplication {
public:
    virtual ~Multiplication() = default;
    // a ∈ K^i, b ∈ K^j; writes the sorted product in K^{i+j} to out.
    virtual void product(int i, Index a, int j, Index b, SparseVec<F>& out) const = 0;
};

// Explicit table; absent pairs multiply to zero.
template <class F>
class TableMult : public Multiplication<F> {
public:
    using Key = std::tuple<int, Index, int, Index>;

    void set(int i, Index a, int j, Index b, SparseVec<F> v)
    {
        v = canonicalize(std::move(v));
        if (v.empty())
            table_.erase({i, a, j, b});
        else
            table_[{i, a, j, b}] = std::move(v);
    }

    void product(int i, Index a, int j, Index b, SparseVec<F>& out) const override
    {
        auto it = table_.find({i, a, j, b});
        if (it == table_.end())
            out.clear();
        else
            out = it->second;
    }

    const std::map<Key, SparseVec<F>>& entries() const { return table_; }

private:
    std::map<Key, SparseVec<F>> table_;
};

template <class F>
struct CDGA {
    Complex<F> complex;
    std::shared_ptr<const Multiplication<F>> mult;
    SparseVec<F> unit;  // in the ambient of K^0
    // Ambient basis elements (degree, index) that generate K with the unit
    // under left multiplication. Optional; enables the generator certificate.
    std::vector<std::pair<int, Index>> generators;
    std::vector<std::vector<std::string>> labels;  // optional, per degree

    std::string label(int i, Index a) const
    {
        if (i >= 0 && std::size_t(i) < labels.size() && a >= 0 && std::size_t(a) < labels[i].size())
            return labels[i][a];
        return "K^" + std::to_string(i) + "[" + std::to_string(a) + "]";
    }

    int top() const { return complex.hi(); }
};

struct StructuralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class F>
void basis_product(const CDGA<F>& K, int i, Index a, int j, Index b, SparseVec<F>& out)
{
    K.mult->product(i, a, j, b, out);
    if (out.empty())
        return;
    if (!K.complex.has(i + j))
        throw StructuralError("product of " + K.label(i, a) + " and " + K.label(j, b) +
                              " lands in a zero degree");
    if (out.front().first < 0 || out.back().first >= K.complex.ambient(i + j))
        throw StructuralError("product of " + K.label(i, a) + " and " + K.label(j, b) + " is out of range");
}

template <class F>
SparseVec<F> multiply(const CDGA<F>& K, int i, const SparseVec<F>& x, int j, const SparseVec<F>& y)
{
    SparseVec<F> buf, terms;
    for (const auto& [a, ca] : x)
        for (const auto& [b, cb] : y) {
            basis_product(K, i, a, j, b, buf);
            F c = ca * cb;
            for (const auto& [k, v] : buf)
                terms.emplace_back(k, c * v);
        }
    if (x.size() == 1 && y.size() == 1)
        return terms;
    return canonicalize(std::move(terms));
}

// Tabulates every basis product with i + j ≤ top.
template <class F>
std::shared_ptr<TableMult<F>> to_table(const CDGA<F>& K)
{
    auto t = std::make_shared<TableMult<F>>();
    SparseVec<F> buf;
    for (int i = 0; i <= K.top(); ++i)
        for (int j = 0; i + j <= K.top(); ++j)
            for (Index a = 0; a < K.complex.ambient(i); ++a)
                for (Index b = 0; b < K.complex.ambient(j); ++b) {
                    basis_product(K, i, a, j, b, buf);
                    if (!buf.empty())
                        t->set(i, a, j, b, buf);
                }
    return t;
}

inline int koszul_sign(int i, int j) { return (i * j) % 2 == 0 ? 1 : -1; }

// ---------------------------------------------------------------------------
// validate_cdga

struct CdgaReport {
    bool ok = true;
    bool structural = false;
    std::string law;
    std::string witness;
    std::string method;
    Count products = 0;
};

namespace detail {

template <class F>
bool all_terms_free(const Complex<F>& K)
{
    for (const auto& t : K.terms)
        if (!t.is_free())
            return false;
    return true;
}

template <class F>
struct LawFailure {
    std::string law, witness;
};

// Generator certificate on free terms. With L_x the left multiplication:
//  (a) unit laws on every basis element;
//  (b) the L_g supercommute and L_g² = 0 for odd g;
//  (c) words v_t = g_t · v_parent(t) span K;
//  (d) L_{v_t} = L_{g_t} L_{v_parent(t)} on every basis element;
//  (e) d L_g − (−1)^{|g|} L_g d = L_{dg};
//  (f) the R-action is multiplication by R·1.
// Then x ↦ L_x identifies K with the supercommutative algebra generated by
// the L_g, which gives associativity, graded commutativity, vanishing odd
// squares and the Leibniz rule for all elements.
template <class F>
std::optional<LawFailure<F>> generator_certificate(const CDGA<F>& K, Count& products)
{
    const auto& C = K.complex;
    const auto& R = *C.R;
    int top = C.hi();
    SparseVec<F> buf, buf2;
    auto L = [&](int i, const SparseVec<F>& x, int j, const SparseVec<F>& y) {
        ++products;
        return multiply(K, i, x, j, y);
    };
    auto e = [](Index a) { return unit_vector<F>(a); };
    auto name = [&](int i, const SparseVec<F>& v) {
        if (v.size() == 1 && v[0].second == F(1))
            return K.label(i, v[0].first);
        return std::string("a combination in degree ") + std::to_string(i);
    };

    // (a)
    for (int j = 0; j <= top; ++j)
        for (Index b = 0; b < C.ambient(j); ++b) {
            if (L(0, K.unit, j, e(b)) != e(b))
                return LawFailure<F>{"unit", "1·" + K.label(j, b) + " ≠ " + K.label(j, b)};
            if (L(j, e(b), 0, K.unit) != e(b))
                return LawFailure<F>{"unit", K.label(j, b) + "·1 ≠ " + K.label(j, b)};
        }
    // (f)
    for (Index s = 0; s < R.dim(); ++s) {
        auto r1 = act(R, s, K.unit);
        for (int j = 0; j <= top; ++j)
            for (Index b = 0; b < C.ambient(j); ++b)
                if (L(0, r1, j, e(b)) != act(R, s, e(b)))
                    return LawFailure<F>{"R-bilinearity", R.labels()[s] + "·" + K.label(j, b) +
                                                              " differs from (" + R.labels()[s] + "·1)·" +
                                                              K.label(j, b)};
    }
    // (b)
    const auto& G = K.generators;
    for (std::size_t x = 0; x < G.size(); ++x)
        for (std::size_t y = x; y < G.size(); ++y) {
            auto [gi, ga] = G[x];
            auto [hi_, ha] = G[y];
            bool self = x == y;
            if (self && gi % 2 == 0)
                continue;
            int sg = koszul_sign(gi, hi_);
            for (int j = 0; j + gi + hi_ <= top; ++j)
                for (Index b = 0; b < C.ambient(j); ++b) {
                    auto hb = L(hi_, e(ha), j, e(b));
                    auto ghb = L(gi, e(ga), hi_ + j, hb);
                    if (self) {
                        if (!ghb.empty())
                            return LawFailure<F>{"odd square", K.label(gi, ga) + "·(" + K.label(gi, ga) + "·" +
                                                                   K.label(j, b) + ") ≠ 0"};
                        continue;
                    }
                    auto gb = L(gi, e(ga), j, e(b));
                    auto hgb = L(hi_, e(ha), gi + j, gb);
                    if (ghb != scaled(hgb, F(sg)))
                        return LawFailure<F>{"graded commutativity",
                                             "left multiplications by " + K.label(gi, ga) + " and " +
                                                 K.label(hi_, ha) + " do not supercommute on " + K.label(j, b)};
                }
        }
    // (c)
    struct Word {
        int deg;
        SparseVec<F> v;
        std::size_t gen;
        std::size_t parent;
    };
    std::vector<Word> words{{0, K.unit, 0, 0}};
    std::vector<Echelon<F>> span;
    for (int i = 0; i <= top; ++i)
        span.emplace_back(C.ambient(i));
    span[0].insert(K.unit);
    Count need = 0, have = 1;
    for (int i = 0; i <= top; ++i)
        need += C.ambient(i);
    for (std::size_t t = 0; t < words.size() && have < need; ++t)
        for (std::size_t g = 0; g < G.size() && have < need; ++g) {
            int deg = words[t].deg + G[g].first;
            if (deg > top)
                continue;
            auto w = L(G[g].first, e(G[g].second), words[t].deg, words[t].v);
            if (!w.empty() && span[deg].insert(w) >= 0) {
                words.push_back({deg, std::move(w), g, t});
                ++have;
            }
        }
    if (have < need)
        return LawFailure<F>{"generation", "the generators and the unit span only " + std::to_string(have) +
                                               " of " + std::to_string(need) + " dimensions"};
    // (d)
    for (std::size_t t = 1; t < words.size(); ++t) {
        const auto& w = words[t];
        const auto& par = words[w.parent];
        auto [gi, ga] = G[w.gen];
        for (int j = 0; j + w.deg <= top; ++j)
            for (Index b = 0; b < C.ambient(j); ++b) {
                auto lhs = L(w.deg, w.v, j, e(b));
                auto rhs = L(gi, e(ga), par.deg + j, L(par.deg, par.v, j, e(b)));
                if (lhs != rhs)
                    return LawFailure<F>{"associativity", "(" + K.label(gi, ga) + "·" + name(par.deg, par.v) +
                                                              ")·" + K.label(j, b) + " ≠ " + K.label(gi, ga) +
                                                              "·(" + name(par.deg, par.v) + "·" +
                                                              K.label(j, b) + ")"};
            }
    }
    // (e)
    for (auto [gi, ga] : G) {
        auto dg = gi < top ? apply<F>(C.diff(gi), e(ga)) : SparseVec<F>{};
        for (int j = 0; j + gi <= top; ++j)
            for (Index b = 0; b < C.ambient(j); ++b) {
                auto gb = L(gi, e(ga), j, e(b));
                auto lhs = apply<F>(C.diff(gi + j), gb);
                auto rhs = L(gi + 1, dg, j, e(b));
                auto db = apply<F>(C.diff(j), e(b));
                axpy(rhs, F(gi % 2 == 0 ? 1 : -1), L(gi, e(ga), j + 1, db));
                if (lhs != rhs)
                    return LawFailure<F>{"Leibniz", "d(" + K.label(gi, ga) + "·" + K.label(j, b) + ")"};
            }
    }
    return std::nullopt;
}

// Exhaustive checks on subquotient representatives, modulo B.
template <class F>
std::optional<LawFailure<F>> exhaustive_laws(const CDGA<F>& K, Count& products)
{
    const auto& C = K.complex;
    const auto& R = *C.R;
    int top = C.hi();
    auto Co = coordinatize(C);
    auto L = [&](int i, const SparseVec<F>& x, int j, const SparseVec<F>& y) {
        ++products;
        return multiply(K, i, x, j, y);
    };
    // Class of v in degree i; nullopt if v ∉ Z.
    auto cls = [&](int i, const SparseVec<F>& v) -> std::optional<SparseVec<F>> {
        if (!C.has(i))
            return v.empty() ? std::optional<SparseVec<F>>(SparseVec<F>{}) : std::nullopt;
        return Co.at(i).coords(v);
    };
    auto same = [&](int i, const SparseVec<F>& a, const SparseVec<F>& b) {
        auto x = a;
        axpy(x, F(-1), b);
        auto c = cls(i, x);
        return c && c->empty();
    };
    auto rep = [&](int i, Index a) { return Co.at(i).rep(a); };
    auto nm = [&](int i, Index a) {
        auto r = rep(i, a);
        if (r.size() == 1 && r[0].second == F(1))
            return K.label(i, r[0].first);
        return "class " + std::to_string(a) + " of degree " + std::to_string(i);
    };
    auto dim = [&](int i) { return C.has(i) ? Co.at(i).dim() : Index(0); };

    if (!cls(0, K.unit))
        return LawFailure<F>{"unit", "the unit is not in Z^0"};
    for (int i = 0; i <= top; ++i)
        for (Index a = 0; a < dim(i); ++a) {
            auto x = rep(i, a);
            if (!same(i, L(0, K.unit, i, x), x) || !same(i, L(i, x, 0, K.unit), x))
                return LawFailure<F>{"unit", "1·" + nm(i, a)};
            for (Index s = 0; s < R.dim(); ++s)
                if (!same(i, L(0, act(R, s, K.unit), i, x), act(R, s, x)))
                    return LawFailure<F>{"R-bilinearity", R.labels()[s] + "·" + nm(i, a)};
        }
    for (int i = 0; i <= top; ++i)
        for (int j = 0; i + j <= top; ++j)
            for (Index a = 0; a < dim(i); ++a)
                for (Index b = 0; b < dim(j); ++b) {
                    auto x = rep(i, a), y = rep(j, b);
                    auto xy = L(i, x, j, y);
                    std::string w = nm(i, a) + ", " + nm(j, b);
                    if (!cls(i + j, xy))
                        return LawFailure<F>{"closure", "product leaves Z: " + w};
                    if (!same(i + j, xy, scaled(L(j, y, i, x), F(koszul_sign(i, j)))))
                        return LawFailure<F>{"graded commutativity", w};
                    if (i == j && a == b && i % 2 == 1 && !same(i + j, xy, {}))
                        return LawFailure<F>{"odd square", w};
                    for (Index s = 0; s < R.dim(); ++s)
                        if (!same(i + j, L(i, x, j, act(R, s, y)), act(R, s, xy)))
                            return LawFailure<F>{"R-bilinearity", w};
                    // Leibniz: d(xy) = dx·y + (−1)^i x·dy
                    auto lhs = apply<F>(C.diff(i + j), xy);
                    auto rhs = L(i + 1, apply<F>(C.diff(i), x), j, y);
                    axpy(rhs, F(i % 2 == 0 ? 1 : -1), L(i, x, j + 1, apply<F>(C.diff(j), y)));
                    if (!same(i + j + 1, lhs, rhs))
                        return LawFailure<F>{"Leibniz", w};
                    for (int l = 0; i + j + l <= top; ++l)
                        for (Index c = 0; c < dim(l); ++c) {
                            auto z = rep(l, c);
                            if (!same(i + j + l, L(i + j, xy, l, z), L(i, x, j + l, L(j, y, l, z))))
                                return LawFailure<F>{"associativity", w + ", " + nm(l, c)};
                        }
                }
    // Products with B must land in B.
    for (int i = 0; i <= top; ++i)
        for (const auto& bv : C.term(i).B)
            for (int j = 0; i + j <= top; ++j)
                for (Index a = 0; a < dim(j); ++a) {
                    auto c = cls(i + j, L(i, bv, j, rep(j, a)));
                    if (!c || !c->empty())
                        return LawFailure<F>{"well-definedness",
                                             "a relation of degree " + std::to_string(i) + " times " + nm(j, a)};
                }
    return std::nullopt;
}

}  // namespace detail

template <class F>
CdgaReport validate_cdga(const CDGA<F>& K)
{
    CdgaReport rep;
    auto fail_structural = [&](std::string m) {
        rep.ok = false;
        rep.structural = true;
        rep.law = "structure";
        rep.witness = std::move(m);
        return rep;
    };
    if (!K.mult)
        return fail_structural("no multiplication");
    if (K.complex.lo != 0)
        return fail_structural("a cdga must start in degree 0");
    auto cc = validate_complex(K.complex);
    if (!cc.ok)
        return fail_structural(cc.message);
    for (const auto& [i, a] : K.generators)
        if (!K.complex.has(i) || a < 0 || a >= K.complex.ambient(i))
            return fail_structural("generator out of range");
    for (const auto& e : K.unit)
        if (e.first < 0 || e.first >= K.complex.ambient(0))
            return fail_structural("unit out of range");
    std::optional<detail::LawFailure<F>> f;
    try {
        if (!K.generators.empty() && detail::all_terms_free(K.complex)) {
            rep.method = "generators";
            f = detail::generator_certificate(K, rep.products);
        } else {
            rep.method = "exhaustive";
            f = detail::exhaustive_laws(K, rep.products);
        }
    } catch (const StructuralError& e) {
        return fail_structural(e.what());
    }
    if (f) {
        rep.ok = false;
        rep.law = f->law;
        rep.witness = f->witness;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// (C1)–(C3)

struct Verdict {
    bool ok = false;
    std::string detail;
};

// R → H^0(K), r ↦ r·1.
template <class F>
Verdict check_C1(const CDGA<F>& K)
{
    const auto& R = *K.complex.R;
    auto Co = coordinatize(K.complex);
    auto H0 = cohomology_at(Co.k, 0);
    Echelon<F> img(H0.dim());
    for (Index s = 0; s < R.dim(); ++s) {
        auto t = Co.at(0).coords(act(R, s, K.unit));
        auto h = t ? H0.coords(*t) : std::nullopt;
        if (!h)
            return {false, "the unit is not a cocycle"};
        img.insert(*h);
    }
    if (H0.dim() != R.dim())
        return {false, "dim H^0 = " + std::to_string(H0.dim()) + " but dim R = " + std::to_string(R.dim())};
    if (img.rank() != R.dim())
        return {false, "R → H^0 is not injective"};
    return {true, "R ≅ H^0"};
}

template <class F>
struct C2Report {
    Verdict verdict;
    int failed_degree = -1;
    Index h1_rank = 0;
    std::vector<SparseVec<F>> h1_basis;  // ambient cocycles, an R-basis of H^1
    std::vector<Index> h_dims;
    std::vector<Matrix<F>> mu;  // mu[q]: (dim H^q) × (C(h,q)·dim R), in H^q coordinates
};

// Class of an ambient cocycle in the coordinates of H^i.
template <class F>
struct CohomologyCoords {
    Coordinatized<F> C;
    std::vector<Subquotient<F>> H;

    explicit CohomologyCoords(const Complex<F>& K) : C(coordinatize(K))
    {
        for (int i = K.lo; i <= K.hi(); ++i)
            H.push_back(cohomology_at(C.k, i));
    }
    const Subquotient<F>& at(int i) const { return H[std::size_t(i - C.k.lo)]; }
    std::optional<SparseVec<F>> operator()(int i, const SparseVec<F>& v) const
    {
        auto t = C.at(i).coords(v);
        if (!t)
            return std::nullopt;
        return at(i).coords(*t);
    }
};

template <class F>
C2Report<F> check_C2(const CDGA<F>& K)
{
    const auto& R = *K.complex.R;
    Index d = R.dim();
    int top = K.top();
    C2Report<F> out;
    auto H = cohomology(K.complex);
    out.h_dims = H.dims;
    if (top < 1) {
        out.verdict = {true, "no positive degrees"};
        return out;
    }
    auto fb = free_basis(R, H.modules[1]);
    if (!fb.free) {
        out.verdict = {false, "H^1 is not free: " + fb.reason};
        out.failed_degree = 1;
        return out;
    }
    out.h1_basis = fb.basis;
    Index h = Index(fb.basis.size());
    out.h1_rank = h;
    CohomologyCoords<F> cc(K.complex);
    for (Index a = 0; a < h; ++a) {
        if (top < 2)
            break;
        auto sq = cc(2, multiply(K, 1, fb.basis[a], 1, fb.basis[a]));
        if (!sq || !sq->empty()) {
            out.verdict = {false, "the square of H^1 generator " + std::to_string(a) + " is not zero in H^2"};
            out.failed_degree = 2;
            return out;
        }
    }
    for (int q = 0; q <= top; ++q) {
        const auto& Hq = cc.at(q);
        ExteriorBasis ext(int(h), q);
        Matrix<F> m = Matrix<F>::Zero(Hq.dim(), ext.size() * d);
        for (Index I = 0; I < ext.size(); ++I) {
            SparseVec<F> prod = K.unit;
            int deg = 0;
            for (int c : ext.at(I)) {
                prod = multiply(K, deg, prod, 1, fb.basis[c]);
                ++deg;
            }
            for (Index s = 0; s < d; ++s) {
                auto c = cc(q, act(R, s, prod));
                if (!c) {
                    out.verdict = {false, "a product of H^1 classes is not a cocycle in degree " + std::to_string(q)};
                    out.failed_degree = q;
                    return out;
                }
                for (const auto& [r, x] : *c)
                    m(r, I * d + s) = x;
            }
        }
        Index rk = rank<F>(m);
        out.mu.push_back(m);
        if (rk != m.cols() || rk != Hq.dim()) {
            out.verdict = {false, "μ^" + std::to_string(q) + ": Λ^" + std::to_string(q) + "H^1 has dimension " +
                                      std::to_string(m.cols()) + ", H^" + std::to_string(q) + " has dimension " +
                                      std::to_string(Hq.dim()) + ", rank " + std::to_string(rk)};
            out.failed_degree = q;
            return out;
        }
    }
    out.verdict = {true, "Λ^q H^1 ≅ H^q for q ≤ " + std::to_string(top)};
    return out;
}

template <class F>
struct C3Report {
    Verdict verdict;
    std::vector<std::pair<std::string, FreenessReport<F>>> modules;
};

template <class F>
C3Report<F> check_C3(const CDGA<F>& K)
{
    const auto& C = K.complex;
    const auto& R = *C.R;
    C3Report<F> out;
    auto Co = coordinatize(C);
    out.modules.emplace_back("K^0", free_basis(R, C.term(0)));
    if (C.has(1)) {
        PresentedModule<F> dK0{C.term(1).rank, C.term(1).dim, std::vector<SparseVec<F>>{}, C.term(1).B};
        for (Index k = 0; k < Co.at(0).dim(); ++k)
            dK0.Z->push_back(apply<F>(C.diff(0), Co.at(0).rep(k)));
        for (const auto& b : C.term(1).B)
            dK0.Z->push_back(b);
        out.modules.emplace_back("dK^0", free_basis(R, dK0));
        PresentedModule<F> Z1{C.term(1).rank, C.term(1).dim, cocycles_ambient(C, Co, 1), C.term(1).B};
        out.modules.emplace_back("Z^1", free_basis(R, Z1));
        out.modules.emplace_back("H^1", free_basis(R, cohomology(C).modules[1]));
    }
    out.verdict = {true, "K^0, dK^0, Z^1, H^1 are free"};
    for (const auto& [name, fr] : out.modules)
        if (!fr.free) {
            out.verdict = {false, name + " is not free: " + fr.reason};
            break;
        }
    return out;
}

template <class F>
struct AKCReport {
    CdgaReport cdga;
    Verdict c1, c2, c3;
    C2Report<F> c2_detail;

    bool ok() const { return cdga.ok && c1.ok && c2.ok && c3.ok; }
};

template <class F>
AKCReport<F> verify_akc(const CDGA<F>& K)
{
    AKCReport<F> r;
    r.cdga = validate_cdga(K);
    if (!r.cdga.ok) {
        r.c1 = r.c2 = r.c3 = {false, "not a cdga"};
        return r;
    }
    r.c1 = check_C1(K);
    r.c3 = check_C3(K).verdict;
    if (r.c1.ok) {
        r.c2_detail = check_C2(K);
        r.c2 = r.c2_detail.verdict;
    } else {
        r.c2 = {false, "C1 fails"};
    }
    return r;
}

}  // namespace akc
