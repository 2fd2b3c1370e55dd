#include "akc/derham.hpp"

#include <bit>

namespace akc {

namespace {

Count saturating_mul(Count a, Count b)
{
    if (a != 0 && b > std::numeric_limits<Count>::max() / a)
        return std::numeric_limits<Count>::max();
    return a * b;
}

std::vector<std::vector<int>> ordered_masks(int n, int i)
{
    ExteriorBasis eb(n, i);
    std::vector<std::vector<int>> out;
    for (Index k = 0; k < eb.size(); ++k)
        out.push_back(eb.at(k));
    return out;
}

}  // namespace

Count DeRhamSpec::algebra_dim() const { return binomial(n + N - 1, n); }

Count DeRhamSpec::total_dim() const
{
    Count t = algebra_dim();
    for (int k = 0; k < n; ++k)
        t = saturating_mul(t, Count(2) * p);
    return t;
}

std::string DeRhamSpec::name() const
{
    return "p=" + std::to_string(p) + " n=" + std::to_string(n) + " N=" + std::to_string(N) +
           (flavor == Flavor::Torus ? " torus" : "");
}

void check_spec(const DeRhamSpec& s)
{
    if (!is_prime(s.p))
        throw std::invalid_argument("derham: p = " + std::to_string(s.p) + " is not prime");
    if (s.n < 1 || s.n > 16)
        throw std::invalid_argument("derham: n must be between 1 and 16");
    if (s.N < 1)
        throw std::invalid_argument("derham: the jet order N must be at least 1");
    if (s.flavor == Flavor::Torus && s.N != 1)
        throw std::invalid_argument("derham: torus models are only available for N = 1");
    if (s.total_dim() > size_guard())
        throw std::length_error("derham: (2p)^n · dim R = " + std::to_string(s.total_dim()) +
                                " exceeds the size guard " + std::to_string(size_guard()));
}

DeRhamMult::DeRhamMult(const DeRhamSpec& s, const LocalAlgebra<Fp>& R) : spec_(s), d_(R.dim())
{
    int n = s.n;
    pn_ = 1;
    for (int k = 0; k < n; ++k)
        pn_ *= Index(s.p);
    s_index_.assign(std::size_t(1) << n, -1);
    for (int i = 0; i <= n; ++i) {
        std::vector<unsigned> ms;
        for (const auto& S : ordered_masks(n, i)) {
            unsigned m = 0;
            for (int j : S)
                m |= 1u << j;
            s_index_[m] = Index(ms.size());
            ms.push_back(m);
        }
        masks_.push_back(std::move(ms));
    }
    weight_.assign(std::size_t(n), 1);
    for (int j = n - 2; j >= 0; --j)
        weight_[j] = weight_[j + 1] * Index(s.p);
    for (Index a = 0; a < pn_; ++a) {
        std::vector<int> dg(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j)
            dg[j] = int((a / weight_[j]) % Index(s.p));
        digits_.push_back(std::move(dg));
    }
    auto monos = truncated_monomials(n, s.N);
    carry_.assign(std::size_t(1) << n, -1);
    for (unsigned c = 0; c < (1u << n); ++c) {
        if (s.flavor == Flavor::Torus) {
            carry_[c] = 0;
            continue;
        }
        std::vector<int> e(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j)
            e[j] = (c >> j) & 1;
        auto it = std::find(monos.begin(), monos.end(), e);
        if (it != monos.end())
            carry_[c] = Index(it - monos.begin());
    }
    rmul_.assign(std::size_t(d_ * d_), -1);
    for (Index r = 0; r < d_; ++r)
        for (Index t = 0; t < d_; ++t) {
            const auto& pr = R.basis_product(r, t);
            if (pr.empty())
                continue;
            if (pr.size() != 1 || pr[0].second != Fp(1))
                throw std::logic_error("DeRhamMult: R must have a monomial basis");
            rmul_[std::size_t(r * d_ + t)] = pr[0].first;
        }
}

Index DeRhamMult::index(int, unsigned mask, Index a, Index rho) const
{
    return (s_index_[mask] * pn_ + a) * d_ + rho;
}

Index DeRhamMult::monomial_index(const std::vector<int>& dg) const
{
    Index a = 0;
    for (std::size_t j = 0; j < dg.size(); ++j)
        a += Index(dg[j]) * weight_[j];
    return a;
}

void DeRhamMult::product(int i, Index a, int j, Index b, SparseVec<Fp>& out) const
{
    out.clear();
    if (i + j > spec_.n)
        return;
    Index ra = a % d_, rb = b % d_;
    Index qa = a / d_, qb = b / d_;
    Index ma = qa % pn_, mb = qb % pn_;
    unsigned S = masks_[i][std::size_t(qa / pn_)], T = masks_[j][std::size_t(qb / pn_)];
    if (S & T)
        return;
    int inversions = 0;
    for (unsigned t = T; t; t &= t - 1) {
        int bit = std::countr_zero(t);
        inversions += std::popcount(S >> (bit + 1));
    }
    const auto& da = digits_[std::size_t(ma)];
    const auto& db = digits_[std::size_t(mb)];
    Index m = 0;
    unsigned carry = 0;
    int p = int(spec_.p);
    for (int k = 0; k < spec_.n; ++k) {
        int e = da[k] + db[k];
        if (e >= p) {
            e -= p;
            carry |= 1u << k;
        }
        m += Index(e) * weight_[k];
    }
    Index r = rmul_[std::size_t(ra * d_ + rb)];
    if (r < 0)
        return;
    Index c = carry_[carry];
    if (c < 0)
        return;
    r = rmul_[std::size_t(r * d_ + c)];
    if (r < 0)
        return;
    out.emplace_back(index(i + j, S | T, m, r), inversions % 2 == 0 ? Fp(1) : Fp(-1));
}

SparseVec<Fp> DeRhamModel::form(const std::vector<int>& a, const std::vector<int>& S) const
{
    unsigned m = 0;
    for (int j : S)
        m |= 1u << j;
    return {{mult->index(int(S.size()), m, mult->monomial_index(a), 0), Fp(1)}};
}

DeRhamModel derham(const DeRhamSpec& spec)
{
    check_spec(spec);
    if (Fp::modulus() != spec.p)
        throw std::logic_error("derham: the Fp modulus in force is not p");
    int n = spec.n;
    auto R = truncated_polynomial_algebra<Fp>(n, spec.N);
    Index d = R->dim();
    auto mult = std::make_shared<DeRhamMult>(spec, *R);
    Index pn = mult->monomials();

    DeRhamModel M;
    M.spec = spec;
    M.mult = mult;
    auto& C = M.cdga.complex;
    C.R = R;
    C.lo = 0;
    for (int i = 0; i <= n; ++i)
        C.terms.push_back(PresentedModule<Fp>::free(Index(binomial(n, i)) * pn, d));
    for (int i = 0; i < n; ++i) {
        ExteriorBasis eb(n, i);
        ColumnBuilder<Fp> B(C.terms[i + 1].dim, C.terms[i].dim);
        SparseVec<Fp> col;
        for (Index s = 0; s < eb.size(); ++s) {
            unsigned S = mult->mask(i, s);
            for (Index a = 0; a < pn; ++a) {
                const auto& dg = mult->digits(a);
                for (Index rho = 0; rho < d; ++rho) {
                    col.clear();
                    for (int j = 0; j < n; ++j) {
                        if (dg[j] == 0 || (S >> j) & 1u)
                            continue;
                        auto e = dg;
                        --e[j];
                        int below = std::popcount(S & ((1u << j) - 1));
                        Fp c = Fp(dg[j]);
                        col.emplace_back(mult->index(i + 1, S | (1u << j), mult->monomial_index(e), rho),
                                         below % 2 == 0 ? c : -c);
                    }
                    B.push(canonicalize(col));
                }
            }
        }
        C.d.push_back(B.finish());
    }
    M.cdga.mult = mult;
    M.cdga.unit = {{mult->index(0, 0, 0, 0), Fp(1)}};
    auto monos = truncated_monomials(n, spec.N);
    for (int j = 0; j < n; ++j) {
        std::vector<int> e(static_cast<std::size_t>(n), 0);
        e[j] = 1;
        M.cdga.generators.emplace_back(0, mult->index(0, 0, mult->monomial_index(e), 0));
        M.cdga.generators.emplace_back(1, mult->index(1, 1u << j, 0, 0));
        auto it = std::find(monos.begin(), monos.end(), e);
        if (it != monos.end())
            M.cdga.generators.emplace_back(0, mult->index(0, 0, 0, Index(it - monos.begin())));
    }
    // Labels like x1^2*x2*dx1^dx2*y1.
    M.cdga.labels.resize(std::size_t(n) + 1);
    for (int i = 0; i <= n; ++i) {
        ExteriorBasis eb(n, i);
        auto& out = M.cdga.labels[i];
        out.reserve(std::size_t(C.terms[i].dim));
        for (Index s = 0; s < eb.size(); ++s)
            for (Index a = 0; a < pn; ++a)
                for (Index rho = 0; rho < d; ++rho) {
                    std::string l;
                    auto x = monomial_label(mult->digits(a), "x");
                    if (x != "1")
                        l = x;
                    for (std::size_t k = 0; k < eb.at(s).size(); ++k) {
                        l += k == 0 ? (l.empty() ? "" : "*") : "^";
                        l += "dx" + std::to_string(eb.at(s)[k] + 1);
                    }
                    if (rho != 0)
                        l += (l.empty() ? "" : "*") + R->labels()[rho];
                    out.push_back(l.empty() ? "1" : l);
                }
    }
    return M;
}

CartierReport cartier_basis(const DeRhamModel& M)
{
    const auto& K = M.cdga;
    const auto& R = M.R();
    int n = M.spec.n;
    CartierReport rep;
    for (int j = 0; j < n; ++j) {
        std::vector<int> a(static_cast<std::size_t>(n), 0);
        a[j] = int(M.spec.p) - 1;
        rep.omega.push_back(M.form(a, {j}));
    }
    CohomologyCoords<Fp> cc(K.complex);
    rep.ok = true;
    for (int q = 0; q <= n; ++q) {
        ExteriorBasis eb(n, q);
        Echelon<Fp> span(cc.at(q).dim());
        for (Index I = 0; I < eb.size(); ++I) {
            SparseVec<Fp> prod = K.unit;
            int deg = 0;
            for (int j : eb.at(I))
                prod = multiply(K, deg++, prod, 1, rep.omega[j]);
            for (Index s = 0; s < R.dim(); ++s) {
                auto c = cc(q, act(R, s, prod));
                if (!c)
                    throw std::logic_error("cartier_basis: a product of ω's is not closed");
                span.insert(*c);
            }
        }
        rep.rank.push_back(span.rank());
        rep.expected.push_back(Index(binomial(n, q)) * R.dim());
        rep.h_dims.push_back(cc.at(q).dim());
        rep.ok = rep.ok && span.rank() == rep.expected.back() && rep.h_dims.back() == rep.expected.back();
    }
    return rep;
}

Splitting canonical_splitting(const DeRhamModel& M)
{
    const auto& K = M.cdga;
    const auto& R = M.R();
    Index d = R.dim();
    int n = M.spec.n;
    auto omega = cartier_basis(M).omega;
    Splitting out;
    out.source = std::make_shared<Complex<Fp>>(
        free_complex<Fp>(K.complex.R, 0, {1, Index(n)}, {SpMat<Fp>(Index(n) * d, d)}));
    auto target = std::make_shared<Complex<Fp>>(tau_leq(K.complex, 1));
    std::vector<SparseVec<Fp>> c0, c1;
    for (Index s = 0; s < d; ++s)
        c0.push_back(act(R, s, K.unit));
    for (int j = 0; j < n; ++j)
        for (Index s = 0; s < d; ++s)
            c1.push_back(act(R, s, omega[j]));
    out.s = ChainMap<Fp>{out.source, target, 0,
                         {from_columns<Fp>(target->ambient(0), c0), from_columns<Fp>(target->ambient(1), c1)}};
    out.check = is_quasi_iso(out.s);
    return out;
}

}  // namespace akc
