#include "akc/specseq.hpp"

#include <algorithm>

namespace akc {

DegenerationVerdict degeneration_gate(const HodgeTable& h, std::uint32_t p)
{
    DegenerationVerdict out;
    int rmin = std::max(2, int(p));
    std::vector<std::pair<int, int>> support;
    for (const auto& [ij, v] : h)
        if (v != 0)
            support.push_back(ij);
    // d_r joins (i, j) to (i', j') iff i' − i = r and i' + j' = i + j + 1.
    for (auto [i, j] : support)
        for (auto [i2, j2] : support) {
            int r = i2 - i;
            if (r >= rmin && i2 + j2 == i + j + 1)
                out.witness.push_back({i, j, r});
        }
    std::sort(out.witness.begin(), out.witness.end());
    out.degenerates = out.witness.empty();
    return out;
}

}  // namespace akc
