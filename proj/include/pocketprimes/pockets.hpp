#pragma once

#include <optional>
#include <span>
#include <vector>

#include "core.hpp"
#include "sieve.hpp"

namespace pocketprimes {

/// Sequential generator of successive pockets for one method. Each pocket is sieved with every
/// prime produced before it, so the stream is strictly single-owner.
class PocketStream {
public:
    explicit PocketStream(MethodKind method, std::optional<u64> limit = {}, sieve::SieveOptions options = {})
        : PocketStream(seed_state(method), pocketprimes::seed_pockets(method), limit, options)
    {
    }

    /// Continue with the SquarePlus rule from a list of already known primes.
    static PocketStream from_known_primes(std::span<const u64> primes, std::optional<u64> limit = {},
                                          sieve::SieveOptions options = {})
    {
        return PocketStream(seed_state_custom(primes), {custom_seed_pocket(primes)}, limit, options);
    }

    /// Pick up a previously persisted run; `next_index` is the index the next pocket receives.
    static PocketStream resume(GeneratorState state, u64 next_index, std::optional<u64> limit = {},
                               sieve::SieveOptions options = {})
    {
        PocketStream stream(std::move(state), {}, limit, options);
        stream.next_index_ = next_index;
        return stream;
    }

    /// Seed pockets (already part of state()), cut at the limit when one is set.
    const std::vector<Pocket>& seed_pockets() const noexcept { return seeds_; }

    const GeneratorState& state() const noexcept { return state_; }
    MethodKind method() const noexcept { return state_.method(); }
    std::optional<u64> limit() const noexcept { return limit_; }
    u64 next_index() const noexcept { return next_index_; }
    const sieve::SieveOptions& options() const noexcept { return options_; }
    void set_options(const sieve::SieveOptions& options) { options_ = options; }

    bool exhausted() const noexcept
    {
        return exhausted_ || (limit_ && state_.frontier_interval_hi() >= *limit_);
    }

    /// The interval the next call to next_pocket() would sieve, after truncation; nullopt when
    /// exhausted. Throws ArithmeticOverflow past the 64-bit frontier.
    std::optional<Interval> peek_interval() const
    {
        if (exhausted()) return std::nullopt;
        auto interval = next_interval(state_.method(), state_.frontier_interval_hi(), state_.frontier_max_prime());
        if (limit_ && interval.hi > *limit_) interval.hi = *limit_;
        return interval;
    }

    /// Sieves and returns the next pocket, or nullopt once the limit has been reached.
    std::optional<Pocket> next_pocket()
    {
        if (exhausted()) {
            exhausted_ = true;
            return std::nullopt;
        }
        Interval interval;
        try {
            interval = next_interval(state_.method(), state_.frontier_interval_hi(), state_.frontier_max_prime());
        } catch (const error&) {
            exhausted_ = true;
            throw;
        }
        bool truncated = false;
        if (limit_ && interval.hi > *limit_) {
            interval.hi = *limit_;
            truncated = true;
        }
        Pocket pocket{next_index_, interval, sieve::sieve_interval(interval, state_.base_primes(), options_),
                      state_.cumulative() + 1, truncated};
        state_.advance(pocket);
        ++next_index_;
        if (truncated) exhausted_ = true;
        return pocket;
    }

private:
    PocketStream(GeneratorState state, std::vector<Pocket> seeds, std::optional<u64> limit,
                 sieve::SieveOptions options)
        : state_(std::move(state)), seeds_(std::move(seeds)), limit_(limit), options_(options)
    {
        if (limit_ && *limit_ < 2) throw error(errc::invalid_argument, "prime limit must be >= 2");
        next_index_ = seeds_.empty() ? 1 : seeds_.back().index + 1;
        if (limit_ && *limit_ < state_.frontier_interval_hi()) cut_seed_at_limit();
    }

    void cut_seed_at_limit()
    {
        const u64 cap = *limit_;
        std::vector<Pocket> kept;
        for (auto& pocket : seeds_) {
            if (pocket.interval.lo > cap) break;
            if (pocket.interval.hi > cap) {
                pocket.interval.hi = cap;
                std::erase_if(pocket.primes, [cap](u64 p) { return p > cap; });
                pocket.truncated = true;
            }
            kept.push_back(std::move(pocket));
        }
        seeds_ = std::move(kept);
        std::vector<u64> base;
        for (u64 p : state_.base_primes()) {
            if (p <= cap) base.push_back(p);
        }
        state_ = GeneratorState(state_.method(), std::move(base), cap);
        exhausted_ = true;
    }

    GeneratorState state_;
    std::vector<Pocket> seeds_;
    std::optional<u64> limit_;
    sieve::SieveOptions options_;
    u64 next_index_ = 1;
    bool exhausted_ = false;
};

/// When to stop generating: after a number of pockets (seed pockets included), at a prime
/// limit, or whichever comes first when both are set.
struct StopCondition {
    std::optional<u64> pocket_count;
    std::optional<u64> prime_limit;

    static StopCondition pockets(u64 n) { return {n, std::nullopt}; }
    static StopCondition limit(u64 l) { return {std::nullopt, l}; }
};

/// Drains `stream` (seed pockets first) until `max_pockets` pockets have been returned.
inline std::vector<Pocket> take_pockets(PocketStream& stream, std::optional<u64> max_pockets)
{
    std::vector<Pocket> out;
    for (const auto& seed : stream.seed_pockets()) {
        if (max_pockets && out.size() >= *max_pockets) return out;
        out.push_back(seed);
    }
    while (!max_pockets || out.size() < *max_pockets) {
        auto pocket = stream.next_pocket();
        if (!pocket) break;
        out.push_back(std::move(*pocket));
    }
    return out;
}

inline std::vector<Pocket> generate(MethodKind method, StopCondition stop, sieve::SieveOptions options = {})
{
    if (!stop.pocket_count && !stop.prime_limit) {
        throw error(errc::invalid_argument, "generate needs a pocket count or a prime limit");
    }
    if (stop.pocket_count && *stop.pocket_count == 0) throw error(errc::invalid_argument, "pocket count must be >= 1");
    PocketStream stream(method, stop.prime_limit, options);
    return take_pockets(stream, stop.pocket_count);
}

/// Orders (prime counts) of the first n pockets.
inline std::vector<u64> order_sequence(MethodKind method, u64 n, sieve::SieveOptions options = {})
{
    std::vector<u64> orders;
    for (const auto& pocket : generate(method, StopCondition::pockets(n), options)) orders.push_back(pocket.order());
    return orders;
}

/// All primes of the given pockets, in order.
inline std::vector<u64> concat_primes(std::span<const Pocket> pockets)
{
    std::vector<u64> out;
    for (const auto& pocket : pockets) out.insert(out.end(), pocket.primes.begin(), pocket.primes.end());
    return out;
}

} // namespace pocketprimes
