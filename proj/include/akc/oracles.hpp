#pragma once

// Reference computations that share no code path with the engines they check:
// dense ranks only, no echelon bookkeeping, no page recursion.

#include <map>
#include <vector>

#include "akc/specseq.hpp"

namespace akc::oracle {

// dim gr^p H^n for the induced filtration, keyed by (p, n − p).
template <class F>
std::map<std::pair<int, int>, Index> graded_cohomology(const FilteredComplex<F>& f)
{
    std::map<std::pair<int, int>, Index> out;
    auto [plo, phi] = f.level_range();
    for (int n = f.k.lo; n <= f.k.hi(); ++n) {
        Index dim = f.k.dim(n);
        Matrix<F> d = to_dense<F>(f.k.diff(n));
        Matrix<F> B = to_dense<F>(f.k.diff(n - 1));
        Index rb = rank<F>(B);
        auto filtered_h = [&](int p) {
            // cocycles in F^p: kernel of d composed with the coordinate inclusion
            Matrix<F> inc = Matrix<F>::Zero(dim, dim);
            for (Index i = 0; i < dim; ++i)
                if (f.level_of(n, i) >= p)
                    inc(i, i) = F(1);
            Matrix<F> z = inc * kernel_basis<F>(Matrix<F>(d * inc));
            Matrix<F> both(dim, z.cols() + B.cols());
            both << z, B;
            return rank<F>(both) - rb;
        };
        for (int p = plo; p <= phi; ++p) {
            Index g = filtered_h(p) - filtered_h(p + 1);
            if (g)
                out[{p, n - p}] = g;
        }
    }
    return out;
}

template <class F>
std::map<std::pair<int, int>, Index> page_dims(const SSPage<F>& e)
{
    std::map<std::pair<int, int>, Index> out;
    for (const auto& [pq, c] : e.cells)
        if (c.dim)
            out[pq] = c.dim;
    return out;
}

// Every (i, j, r) with r ≥ max(2, p) and both ends of d_r in the support,
// scanning a window that covers the table.
inline std::vector<DifferentialCandidate> degeneration_candidates(const HodgeTable& h, std::uint32_t p)
{
    std::vector<DifferentialCandidate> out;
    if (h.empty())
        return out;
    int lo = 0, hi = 0;
    for (const auto& [ij, v] : h) {
        lo = std::min({lo, ij.first, ij.second});
        hi = std::max({hi, ij.first, ij.second});
    }
    auto nz = [&](int i, int j) {
        auto it = h.find({i, j});
        return it != h.end() && it->second != 0;
    };
    for (int i = lo; i <= hi; ++i)
        for (int j = lo; j <= hi; ++j)
            for (int r = 2; r <= hi - lo + 1; ++r)
                if (r >= int(p) && nz(i, j) && nz(i + r, j - r + 1))
                    out.push_back({i, j, r});
    return out;
}

}  // namespace akc::oracle
