#include "akc/koszul.hpp"

namespace akc {

Count kos_dimension(int q, Index rankP, Index rankQ, Index algebra_dim, int from)
{
    Count total = 0;
    for (int i = std::max(0, from); i <= q; ++i) {
        int j = q - i;
        Count g = rankP == 0 ? (j == 0 ? 1 : 0) : binomial(rankP - 1 + j, j);
        total += binomial(rankQ, i) * g;
    }
    return total * algebra_dim;
}

}  // namespace akc
