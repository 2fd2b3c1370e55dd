#include "akc/multilinear.hpp"

#include <stdexcept>

namespace akc {

Count binomial(Count n, Count k)
{
    if (k < 0 || n < 0 || k > n)
        return 0;
    k = std::min(k, n - k);
    Count r = 1;
    for (Count i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

namespace {

// Lexicographic enumeration of strictly increasing tuples of length k drawn
// from {0, .., n − 1}.
void combinations(int n, int k, std::vector<std::vector<int>>& out)
{
    std::vector<int> c(static_cast<std::size_t>(k));
    auto rec = [&](auto&& self, int pos, int start) -> void {
        if (pos == k) {
            out.push_back(c);
            return;
        }
        for (int v = start; v <= n - (k - pos); ++v) {
            c[pos] = v;
            self(self, pos + 1, v + 1);
        }
    };
    rec(rec, 0, 0);
}

// Σ_i C(N − 1 − c_i, k − i): the lexicographic rank counted from the end.
Count colex_tail(Count N, const std::vector<int>& c)
{
    Count s = 0;
    Count k = Count(c.size());
    for (Count i = 0; i < k; ++i)
        s += binomial(N - 1 - c[std::size_t(i)], k - i);
    return s;
}

}  // namespace

ExteriorBasis::ExteriorBasis(int n, int i) : n_(n), i_(i)
{
    if (n < 0 || i < 0)
        throw std::invalid_argument("ExteriorBasis: negative argument");
    if (i <= n)
        combinations(n, i, elems_);
}

Index ExteriorBasis::index(const std::vector<int>& sorted) const
{
    return Index(binomial(n_, i_) - 1 - colex_tail(n_, sorted));
}

std::string ExteriorBasis::label(Index k) const
{
    const auto& t = at(k);
    if (t.empty())
        return "1";
    std::string s;
    for (std::size_t a = 0; a < t.size(); ++a) {
        if (a)
            s += "^";
        s += "e" + std::to_string(t[a] + 1);
    }
    return s;
}

// Γ^j basis: exponent vectors ascending lexicographically, i.e. sorted
// multisets descending lexicographically. A multiset t corresponds to the
// strictly increasing tuple c_k = t_k + k in {0, .., n + j − 2}.
MonomialBasis::MonomialBasis(int n, int j) : n_(n), j_(j)
{
    if (n < 0 || j < 0)
        throw std::invalid_argument("MonomialBasis: negative argument");
    if (n == 0 && j > 0)
        return;
    std::vector<std::vector<int>> combos;
    combinations(n + j - 1, j, combos);
    elems_.reserve(combos.size());
    for (auto it = combos.rbegin(); it != combos.rend(); ++it) {
        std::vector<int> t = *it;
        for (int k = 0; k < j; ++k)
            t[k] -= k;
        elems_.push_back(std::move(t));
    }
}

Index MonomialBasis::index(const std::vector<int>& sorted) const
{
    std::vector<int> c = sorted;
    for (std::size_t k = 0; k < c.size(); ++k)
        c[k] += int(k);
    return Index(colex_tail(n_ + j_ - 1, c));
}

std::vector<int> MonomialBasis::exponents(Index k) const
{
    std::vector<int> e(std::size_t(n_), 0);
    for (int v : at(k))
        ++e[v];
    return e;
}

BigInt MonomialBasis::factorial_weight(Index k) const
{
    BigInt w = 1;
    for (int e : exponents(k))
        w *= factorial(unsigned(e));
    return w;
}

namespace {

std::string monomial_text(const std::vector<int>& t, bool divided)
{
    if (t.empty())
        return "1";
    std::string s;
    for (std::size_t a = 0; a < t.size();) {
        std::size_t b = a;
        while (b < t.size() && t[b] == t[a])
            ++b;
        if (!s.empty())
            s += ".";
        s += "x" + std::to_string(t[a] + 1);
        std::size_t e = b - a;
        if (divided && e > 1)
            s += "^[" + std::to_string(e) + "]";
        else if (!divided && e > 1)
            s += "^" + std::to_string(e);
        a = b;
    }
    return s;
}

}  // namespace

std::string MonomialBasis::divided_label(Index k) const { return monomial_text(at(k), true); }

std::string MonomialBasis::sym_label(Index k) const { return monomial_text(at(k), false); }

int merge_sign(const std::vector<int>& a, const std::vector<int>& b)
{
    int inv = 0;
    std::size_t j = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        while (j < b.size() && b[j] < a[i])
            ++j;
        if (j < b.size() && b[j] == a[i])
            return 0;
        inv += int(j);
    }
    return inv % 2 == 0 ? 1 : -1;
}

std::vector<int> remove_one(const std::vector<int>& m, int v)
{
    std::vector<int> out = m;
    auto it = std::find(out.begin(), out.end(), v);
    if (it == out.end())
        throw std::invalid_argument("remove_one: value not present");
    out.erase(it);
    return out;
}

}  // namespace akc
