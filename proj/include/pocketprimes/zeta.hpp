#pragma once

// Euler-product survivors: multiplying zeta(z) by (1 - p^-z) for the first k primes leaves
// 1 + sum of n^-z over the n with no prime factor <= p_k. The first such n are p_{k+1}, p_{k+2}, ...
// up to p_k(p_k+4)+3, after which p_{k+1}^2 is the first composite.

#include <cmath>
#include <vector>

#include "core.hpp"
#include "oracle.hpp"

namespace pocketprimes::zeta {

/// The first k primes by trial division (kept apart from the sieve engine on purpose).
inline std::vector<u64> first_primes(u64 k)
{
    std::vector<u64> out;
    for (u64 n = 2; out.size() < k; ++n) {
        bool prime = true;
        for (u64 p : out) {
            if (p * p > n) break;
            if (n % p == 0) {
                prime = false;
                break;
            }
        }
        if (prime) out.push_back(n);
    }
    return out;
}

struct SurvivorSeries {
    u64 k = 0;
    u64 limit = 0;
    std::vector<u64> survivors;  // ascending, 1 excluded
};

inline bool coprime_to(u64 n, const std::vector<u64>& factors)
{
    for (u64 p : factors) {
        if (n % p == 0) return false;
    }
    return true;
}

/// Integers in [2, limit] sharing no factor with p_1 * ... * p_k. k = 0 keeps everything.
inline SurvivorSeries coprime_survivors(u64 k, u64 limit)
{
    SurvivorSeries out{k, limit, {}};
    const auto factors = first_primes(k);
    for (u64 n = 2; n <= limit; ++n) {
        if (coprime_to(n, factors)) out.survivors.push_back(n);
    }
    return out;
}

/// p_k(p_k+4)+3 for the k-th prime.
inline u64 survivor_window_top(u64 k)
{
    if (k == 0) throw error(errc::invalid_argument, "k is 1-based");
    const u128 pk = first_primes(k).back();
    const u128 top = pk * (pk + 4) + 3;
    if (top > u128{u64_max}) throw error(errc::arithmetic_overflow, "p_k(p_k+4)+3 exceeds 64 bits");
    return static_cast<u64>(top);
}

/// True iff the survivors up to p_k(p_k+4)+3 are exactly the primes in (p_k, p_k(p_k+4)+3].
inline bool leading_survivors_are_next_pocket(u64 k, const verify::PrimeTable& oracle)
{
    const u64 top = survivor_window_top(k);
    oracle.require(top);
    const u64 pk = first_primes(k).back();
    return coprime_survivors(k, top).survivors == oracle.in_range(pk + 1, top);
}

inline bool leading_survivors_are_next_pocket(u64 k)
{
    return leading_survivors_are_next_pocket(k, verify::PrimeTable::up_to(survivor_window_top(k)));
}

/// Smallest composite with no prime factor <= p_k; scans upward from p_{k+1}.
inline u64 first_composite_survivor(u64 k)
{
    const auto factors = first_primes(k + 1);
    const std::vector<u64> removed(factors.begin(), factors.end() - 1);
    for (u64 n = factors.back() + 1;; ++n) {
        if (!coprime_to(n, removed)) continue;
        for (u64 d = factors.back(); d * d <= n; ++d) {
            if (n % d == 0) return n;
        }
    }
}

struct EulerResidual {
    double product_side = 0.0;   // prod_{i<=k} (1 - p_i^-z) * sum_{n<=N} n^-z
    double survivor_side = 0.0;  // 1 + sum over survivors <= N of n^-z
    double gap = 0.0;
    double tail_bound = 0.0;     // 2 * N^(1-z) / (z-1)

    bool within_bound() const noexcept { return gap <= tail_bound; }
};

inline constexpr double min_z = 1.5;
inline constexpr u64 min_truncation = 1000;

inline EulerResidual euler_residual(double z, u64 k, u64 truncation)
{
    if (!(z > 1.0)) throw error(errc::domain_error, "zeta series diverges for z <= 1");
    if (z < min_z) throw error(errc::domain_error, "z below the 1.5 convergence margin");
    if (truncation < min_truncation) throw error(errc::invalid_argument, "truncation must be >= 1000");

    const auto factors = first_primes(k);
    double factor = 1.0;
    for (u64 p : factors) factor *= 1.0 - std::pow(static_cast<double>(p), -z);

    // smallest terms first
    double zeta_sum = 0.0;
    double survivor_sum = 0.0;
    for (u64 n = truncation; n >= 1; --n) {
        const double term = std::pow(static_cast<double>(n), -z);
        zeta_sum += term;
        if (n > 1 && coprime_to(n, factors)) survivor_sum += term;
    }

    EulerResidual out;
    out.product_side = factor * zeta_sum;
    out.survivor_side = 1.0 + survivor_sum;
    out.gap = std::fabs(out.product_side - out.survivor_side);
    out.tail_bound = 2.0 * std::pow(static_cast<double>(truncation), 1.0 - z) / (z - 1.0);
    return out;
}

} // namespace pocketprimes::zeta
