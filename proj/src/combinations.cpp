#include "psskit/combinations.hpp"

#include <limits>

namespace psskit {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k)
{
    if (k > n)
        return 0;
    k = std::min(k, n - k);
    std::uint64_t result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        const std::uint64_t num = n - k + i;
        // result * num / i stays integral at every step
        if (result > std::numeric_limits<std::uint64_t>::max() / num)
            return std::numeric_limits<std::uint64_t>::max();
        result = result * num / i;
    }
    return result;
}

std::vector<IndexList> all_combinations(std::size_t n, std::size_t k)
{
    std::vector<IndexList> out;
    for_each_combination(n, k, [&](const IndexList& c) {
        out.push_back(c);
        return true;
    });
    return out;
}

IndexList complement(std::size_t n, const IndexList& chosen)
{
    IndexList out;
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (c < chosen.size() && chosen[c] == i)
            ++c;
        else
            out.push_back(i);
    }
    return out;
}

}  // namespace psskit
