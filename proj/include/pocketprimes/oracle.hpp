#pragma once

// Reference sieve used only to validate the segmented engine. It shares no code
// with sieve.hpp: one flat flag per integer, no segmentation, no odd packing.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "error.hpp"

namespace pocketprimes::verify {

inline constexpr std::uint64_t oracle_guard = 1'000'000'000;

inline std::vector<std::uint64_t> oracle_sieve(std::uint64_t limit)
{
    if (limit > oracle_guard) {
        throw error(errc::limit_too_large,
                    "oracle limit " + std::to_string(limit) + " exceeds " + std::to_string(oracle_guard));
    }
    std::vector<std::uint64_t> primes;
    if (limit < 2) return primes;

    std::vector<bool> composite(limit + 1, false);
    for (std::uint64_t i = 2; i * i <= limit; ++i) {
        if (composite[i]) continue;
        for (std::uint64_t m = i * i; m <= limit; m += i) composite[m] = true;
    }
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (!composite[i]) primes.push_back(i);
    }
    return primes;
}

/// Oracle primes together with the bound they are complete up to.
struct PrimeTable {
    std::uint64_t limit = 0;
    std::vector<std::uint64_t> primes;

    static PrimeTable up_to(std::uint64_t limit) { return {limit, oracle_sieve(limit)}; }

    bool covers(std::uint64_t x) const noexcept { return x <= limit; }

    void require(std::uint64_t x) const
    {
        if (!covers(x)) {
            throw error(errc::oracle_too_short,
                        "oracle complete to " + std::to_string(limit) + ", need " + std::to_string(x));
        }
    }

    /// pi(x): number of primes <= x.
    std::uint64_t pi(std::uint64_t x) const
    {
        require(x);
        return static_cast<std::uint64_t>(std::upper_bound(primes.begin(), primes.end(), x) - primes.begin());
    }

    bool is_prime(std::uint64_t x) const
    {
        require(x);
        return std::binary_search(primes.begin(), primes.end(), x);
    }

    /// Primes in the closed range [lo, hi].
    std::vector<std::uint64_t> in_range(std::uint64_t lo, std::uint64_t hi) const
    {
        require(hi);
        auto first = std::lower_bound(primes.begin(), primes.end(), lo);
        auto last = std::upper_bound(first, primes.end(), hi);
        return {first, last};
    }
};

} // namespace pocketprimes::verify
