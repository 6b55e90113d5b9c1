#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace qdsfm {

using Rng = std::mt19937_64;

__extension__ using uint128 = unsigned __int128;

/// Uniform draw from [0, n) by the multiply-shift map of one 64-bit output.
/// Portable across standard libraries, unlike std::uniform_int_distribution.
inline std::size_t uniform_index(Rng& rng, std::size_t n)
{
    const uint128 prod = static_cast<uint128>(rng()) * static_cast<uint128>(n);
    return static_cast<std::size_t>(prod >> 64);
}

/// k distinct values from `pool` by a partial Fisher-Yates shuffle.
inline std::vector<std::size_t> sample_without_replacement(Rng& rng, std::vector<std::size_t> pool, std::size_t k)
{
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + uniform_index(rng, pool.size() - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

inline std::vector<std::size_t> index_range(std::size_t begin, std::size_t end)
{
    std::vector<std::size_t> v(end - begin);
    std::iota(v.begin(), v.end(), begin);
    return v;
}

}  // namespace qdsfm
