#include "akc/algebra.hpp"

namespace akc {

std::vector<std::vector<int>> truncated_monomials(int vars, int order)
{
    std::vector<std::vector<int>> out;
    std::vector<int> e(vars, 0);
    for (int deg = 0; deg < order; ++deg) {
        // All exponent vectors of total degree deg, y1-heavy first.
        std::vector<std::vector<int>> level;
        auto rec = [&](auto&& self, int v, int left) -> void {
            if (v == vars - 1 || vars == 0) {
                if (vars > 0)
                    e[v] = left;
                if (vars > 0 || left == 0)
                    level.push_back(e);
                return;
            }
            for (int a = left; a >= 0; --a) {
                e[v] = a;
                self(self, v + 1, left - a);
            }
        };
        rec(rec, 0, deg);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

std::string monomial_label(const std::vector<int>& exps, const std::string& var)
{
    std::string s;
    for (std::size_t v = 0; v < exps.size(); ++v) {
        if (exps[v] == 0)
            continue;
        if (!s.empty())
            s += "*";
        s += var + std::to_string(v + 1);
        if (exps[v] > 1)
            s += "^" + std::to_string(exps[v]);
    }
    return s.empty() ? "1" : s;
}

}  // namespace akc
