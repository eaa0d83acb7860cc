#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

#include "psskit/types.hpp"

namespace psskit {

/// Limits shared by the subset enumerations.
struct EnumerationOptions {
    std::uint64_t max_subsets = 0;  // 0 = unlimited
    unsigned jobs = 1;
};

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Visits every k-subset of {0, ..., n-1} in lexicographic order. The visitor
/// returns false to stop early.
template <class Visitor>
void for_each_combination(std::size_t n, std::size_t k, Visitor&& visit)
{
    if (k > n)
        return;
    IndexList idx(k);
    for (std::size_t i = 0; i < k; ++i)
        idx[i] = i;
    while (true) {
        if (!visit(static_cast<const IndexList&>(idx)))
            return;
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1)
            --i;
        if (i == 0)
            return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j)
            idx[j] = idx[j - 1] + 1;
    }
}

std::vector<IndexList> all_combinations(std::size_t n, std::size_t k);

/// Indices of {0, ..., n-1} not in the sorted list `chosen`.
IndexList complement(std::size_t n, const IndexList& chosen);

/// Evaluates fn(i) for i in [0, count) on up to `jobs` threads and returns the
/// results in index order, so the output never depends on scheduling.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, unsigned jobs, Fn&& fn)
{
    std::vector<T> out(count);
    if (jobs <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i)
            out[i] = fn(i);
        return out;
    }
    const std::size_t workers = std::min<std::size_t>(jobs, count);
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < count; i += workers)
                        out[i] = fn(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return out;
}

}  // namespace psskit
