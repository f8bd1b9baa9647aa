#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "oracle.hpp"

namespace pocketprimes {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline constexpr u64 u64_max = ~u64{0};

/// Closed integer range [lo, hi] with 2 <= lo <= hi.
struct Interval {
    u64 lo = 2;
    u64 hi = 2;

    static Interval make(u64 lo, u64 hi)
    {
        if (lo < 2 || lo > hi) {
            throw error(errc::invalid_argument,
                        "invalid interval [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        }
        return {lo, hi};
    }

    u64 length() const noexcept { return hi - lo + 1; }
    bool contains(u64 x) const noexcept { return lo <= x && x <= hi; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// The three interval rules: [MIpP+1, 2*MpP], [MIpP+1, MpP^2], [MIpP+1, MpP^2+4*MpP+3].
enum class MethodKind : int { bertrand = 1, square = 2, square_plus = 3 };

inline MethodKind method_from_number(int n)
{
    switch (n) {
    case 1: return MethodKind::bertrand;
    case 2: return MethodKind::square;
    case 3: return MethodKind::square_plus;
    default: throw error(errc::invalid_argument, "method must be 1, 2 or 3, got " + std::to_string(n));
    }
}

constexpr int method_number(MethodKind m) noexcept { return static_cast<int>(m); }

constexpr std::string_view method_name(MethodKind m) noexcept
{
    switch (m) {
    case MethodKind::bertrand: return "bertrand";
    case MethodKind::square: return "square";
    case MethodKind::square_plus: return "square-plus";
    }
    return "?";
}

/// The primes found in one generated interval.
struct Pocket {
    u64 index = 1;
    Interval interval;
    std::vector<u64> primes;
    u64 first_ordinal = 1;   // position of primes.front() in 2, 3, 5, ...
    bool truncated = false;  // a prime limit cut the interval short

    u64 order() const noexcept { return primes.size(); }
    u64 max_prime() const { return primes.back(); }
    u64 last_ordinal() const noexcept { return first_ordinal + primes.size() - 1; }
};

/// Everything generated so far plus the frontier (MIpP, MpP) the next interval grows from.
class GeneratorState {
public:
    GeneratorState(MethodKind method, std::vector<u64> base_primes, u64 frontier_interval_hi)
        : method_(method), base_(std::move(base_primes)), frontier_hi_(frontier_interval_hi)
    {
        if (base_.empty()) throw error(errc::invalid_argument, "generator state needs at least one prime");
        if (base_.back() > frontier_hi_) {
            throw error(errc::invalid_argument, "frontier interval ends before the largest prime");
        }
    }

    MethodKind method() const noexcept { return method_; }
    std::span<const u64> base_primes() const noexcept { return base_; }
    u64 cumulative() const noexcept { return base_.size(); }
    u64 frontier_interval_hi() const noexcept { return frontier_hi_; }
    u64 frontier_max_prime() const noexcept { return base_.back(); }

    /// Appends a freshly sieved pocket and moves the frontier to its interval.
    void advance(const Pocket& pocket)
    {
        if (pocket.interval.lo != frontier_hi_ + 1) {
            throw error(errc::invalid_argument, "pocket does not start right after the frontier");
        }
        base_.insert(base_.end(), pocket.primes.begin(), pocket.primes.end());
        frontier_hi_ = pocket.interval.hi;
    }

private:
    MethodKind method_;
    std::vector<u64> base_;
    u64 frontier_hi_;
};

/// Next interval for the given method from frontier (mipp, mpp). Throws ArithmeticOverflow
/// when the upper bound does not fit in 64 bits.
inline Interval next_interval(MethodKind method, u64 mipp, u64 mpp)
{
    if (mpp < 2 || mipp < mpp) {
        throw error(errc::invalid_argument,
                    "frontier needs mpp >= 2 and mipp >= mpp (mipp=" + std::to_string(mipp) +
                        ", mpp=" + std::to_string(mpp) + ")");
    }
    if (mipp == u64_max) throw error(errc::arithmetic_overflow, "interval start exceeds 64 bits");

    const u128 p = mpp;
    u128 hi = 0;
    switch (method) {
    case MethodKind::bertrand: hi = 2 * p; break;
    case MethodKind::square: hi = p * p; break;
    case MethodKind::square_plus: hi = p * p + 4 * p + 3; break;
    }
    if (hi > u128{u64_max}) {
        throw error(errc::arithmetic_overflow,
                    "upper bound for MpP=" + std::to_string(mpp) + " exceeds 64 bits");
    }
    return Interval::make(mipp + 1, static_cast<u64>(hi));
}

/// Seed pockets of each method: {2} for Bertrand, {2} then {3} for Square, {2,3} for SquarePlus.
inline std::vector<Pocket> seed_pockets(MethodKind method)
{
    switch (method) {
    case MethodKind::bertrand: return {Pocket{1, {2, 2}, {2}, 1, false}};
    case MethodKind::square: return {Pocket{1, {2, 2}, {2}, 1, false}, Pocket{2, {3, 3}, {3}, 2, false}};
    case MethodKind::square_plus: return {Pocket{1, {2, 3}, {2, 3}, 1, false}};
    }
    return {};
}

inline GeneratorState seed_state(MethodKind method)
{
    if (method == MethodKind::bertrand) return {method, {2}, 2};
    return {method, {2, 3}, 3};
}

/// Restart from a list of already known primes; the list must be exactly the primes up to its
/// maximum, at least three of them. Continuation uses the SquarePlus rule.
inline GeneratorState seed_state_custom(std::span<const u64> primes)
{
    if (primes.size() < 3) {
        throw error(errc::invalid_argument, "custom seed needs at least 3 primes, got " + std::to_string(primes.size()));
    }
    for (std::size_t i = 1; i < primes.size(); ++i) {
        if (primes[i] <= primes[i - 1]) {
            throw error(errc::invalid_argument, "custom seed is not strictly increasing at " + std::to_string(primes[i]));
        }
    }
    const auto oracle = verify::PrimeTable::up_to(primes.back());
    for (u64 p : primes) {
        if (!oracle.is_prime(p)) throw error(errc::not_prime, std::to_string(p) + " is not prime");
    }
    if (oracle.primes.size() != primes.size()) {
        for (std::size_t i = 0; i < oracle.primes.size(); ++i) {
            if (i >= primes.size() || primes[i] != oracle.primes[i]) {
                throw error(errc::incomplete_seed, "seed is missing prime " + std::to_string(oracle.primes[i]));
            }
        }
    }
    return {MethodKind::square_plus, {primes.begin(), primes.end()}, primes.back()};
}

/// The single seed pocket matching seed_state_custom.
inline Pocket custom_seed_pocket(std::span<const u64> primes)
{
    return Pocket{1, Interval::make(primes.front(), primes.back()), {primes.begin(), primes.end()}, 1, false};
}

} // namespace pocketprimes
