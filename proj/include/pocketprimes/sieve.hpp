#pragma once

// Segmented extraction of the primes in an interval from a complete list of smaller primes.
//
// For a base prime p and interval [lo, hi] the multiples of p inside the interval are
// p*(q+1), ..., p*q_hi with q = floor((lo-1)/p) and q_hi = floor(hi/p). Marking every such
// multiple for every base prime up to sqrt(hi) leaves exactly the primes.

#include <algorithm>
#include <bit>
#include <set>
#include <span>
#include <thread>
#include <vector>

#include "core.hpp"

namespace pocketprimes::sieve {

struct QuotientBounds {
    u64 q = 0;     // floor((lo-1)/p): last multiple index strictly below the interval
    u64 q_hi = 0;  // floor(hi/p): last multiple index inside the interval

    bool empty() const noexcept { return q_hi <= q; }
};

inline QuotientBounds quotient_bounds(u64 p, Interval interval) noexcept
{
    return {(interval.lo - 1) / p, interval.hi / p};
}

/// Every multiple of p in the interval, ascending.
inline std::vector<u64> multiples_in(u64 p, Interval interval)
{
    if (p < 2) throw error(errc::invalid_argument, "multiples_in needs p >= 2");
    const auto b = quotient_bounds(p, interval);
    std::vector<u64> out;
    if (b.empty()) return out;
    out.reserve(b.q_hi - b.q);
    for (u64 k = b.q + 1; k <= b.q_hi; ++k) out.push_back(p * k);
    return out;
}

enum class Layout {
    packed_odd,  // one bit per odd integer; even integers other than 2 are implicitly composite
    full,        // one bit per integer
};

struct SieveOptions {
    u64 segment_capacity = u64{1} << 20;  // integers per segment
    Layout layout = Layout::packed_odd;
    bool full_base = false;   // mark with every base prime, not just those with p^2 <= segment end
    bool check_base = true;   // enforce the MpP^2 + 4*MpP + 3 coverage bound
    unsigned threads = 1;
};

/// Bit flags for [first, last]; a set bit means "not yet known to be composite".
class Segment {
public:
    Segment(u64 first, u64 last, Layout layout) : first_(first), last_(last), layout_(layout)
    {
        if (first < 2 || first > last) throw error(errc::invalid_argument, "invalid segment bounds");
        if (layout_ == Layout::packed_odd) {
            odd_first_ = first_ | 1;
            slots_ = odd_first_ > last_ ? 0 : (last_ - odd_first_) / 2 + 1;
        } else {
            slots_ = last_ - first_ + 1;
        }
        bits_.assign((slots_ + 63) / 64, ~std::uint64_t{0});
        if (const auto tail = slots_ % 64; tail != 0) bits_.back() = (std::uint64_t{1} << tail) - 1;
    }

    u64 first() const noexcept { return first_; }
    u64 last() const noexcept { return last_; }
    Layout layout() const noexcept { return layout_; }

    bool possibly_prime(u64 value) const
    {
        if (value < first_ || value > last_) return false;
        if (layout_ == Layout::packed_odd && value % 2 == 0) return value == 2;
        const u64 slot = slot_of(value);
        return (bits_[slot / 64] >> (slot % 64)) & 1U;
    }

    /// Clears value, value+step, ... up to last(). In the packed layout value and step must be odd
    /// and even respectively.
    void clear_progression(u64 value, u64 step)
    {
        if (value < first_ || value > last_) return;
        if (layout_ == Layout::packed_odd) {
            u64 slot = (value - odd_first_) / 2;
            const u64 slot_step = step / 2;
            for (; slot < slots_; slot += slot_step) bits_[slot / 64] &= ~(std::uint64_t{1} << (slot % 64));
        } else {
            for (u64 slot = value - first_; slot < slots_; slot += step) {
                bits_[slot / 64] &= ~(std::uint64_t{1} << (slot % 64));
            }
        }
    }

    /// Appends the surviving values in ascending order.
    void collect(std::vector<u64>& out) const
    {
        if (layout_ == Layout::packed_odd && first_ <= 2 && 2 <= last_) out.push_back(2);
        for (std::size_t w = 0; w < bits_.size(); ++w) {
            for (std::uint64_t word = bits_[w]; word != 0; word &= word - 1) {
                const u64 slot = w * 64 + static_cast<u64>(std::countr_zero(word));
                out.push_back(value_of(slot));
            }
        }
    }

    std::vector<u64> survivors() const
    {
        std::vector<u64> out;
        collect(out);
        return out;
    }

private:
    u64 slot_of(u64 value) const noexcept
    {
        return layout_ == Layout::packed_odd ? (value - odd_first_) / 2 : value - first_;
    }
    u64 value_of(u64 slot) const noexcept
    {
        return layout_ == Layout::packed_odd ? odd_first_ + 2 * slot : first_ + slot;
    }

    u64 first_;
    u64 last_;
    Layout layout_;
    u64 odd_first_ = 0;
    u64 slots_ = 0;
    std::vector<std::uint64_t> bits_;
};

/// Throws InsufficientBase unless max(base)^2 + 4*max(base) + 3 reaches `end`.
inline void require_base_covers(std::span<const u64> base, u64 end)
{
    if (base.empty()) {
        if (end >= 4) throw error(errc::insufficient_base, "empty base cannot sieve up to " + std::to_string(end));
        return;
    }
    const u128 m = base.back();
    if (m * m + 4 * m + 3 < end) {
        throw error(errc::insufficient_base, "base primes up to " + std::to_string(base.back()) +
                                                 " cannot certify integers up to " + std::to_string(end));
    }
}

namespace detail {

inline void mark_unchecked(Segment& segment, std::span<const u64> base, bool full_base)
{
    const Interval range{segment.first(), segment.last()};
    const bool packed = segment.layout() == Layout::packed_odd;
    for (u64 p : base) {
        const u128 square = u128{p} * p;
        if (!full_base && square > range.hi) break;
        if (packed && p == 2) continue;
        const auto b = quotient_bounds(p, range);
        if (b.empty()) continue;
        // multiples below p^2 carry a smaller prime factor that marks them
        u128 start = std::max<u128>(u128{p} * (b.q + 1), square);
        if (start > range.hi) continue;
        u64 step = p;
        if (packed) {
            if (start % 2 == 0) start += p;
            if (start > range.hi) continue;
            step = 2 * p;
        }
        segment.clear_progression(static_cast<u64>(start), step);
    }
}

} // namespace detail

/// Marks every multiple of the base primes in the segment. Survivors are then exactly the primes
/// in the segment, provided the base holds every prime up to sqrt(segment.last()).
inline Segment& mark_composites(Segment& segment, std::span<const u64> base, bool full_base = false)
{
    require_base_covers(base, segment.last());
    detail::mark_unchecked(segment, base, full_base);
    return segment;
}

/// Primes of `interval`, sieved segment by segment. Output does not depend on the segment
/// capacity, the layout or the thread count.
inline std::vector<u64> sieve_interval(Interval interval, std::span<const u64> base, const SieveOptions& options = {})
{
    if (options.segment_capacity == 0) throw error(errc::invalid_argument, "segment capacity must be >= 1");
    if (options.check_base) require_base_covers(base, interval.hi);

    const u64 cap = options.segment_capacity;
    const u64 span_minus_one = interval.hi - interval.lo;
    const u64 segments = span_minus_one / cap + 1;

    auto run = [&](u64 first_seg, u64 last_seg, std::vector<u64>& out) {
        for (u64 s = first_seg; s < last_seg; ++s) {
            const u64 seg_lo = interval.lo + s * cap;
            const u64 seg_hi = (interval.hi - seg_lo < cap) ? interval.hi : seg_lo + cap - 1;
            Segment segment(seg_lo, seg_hi, options.layout);
            detail::mark_unchecked(segment, base, options.full_base);
            segment.collect(out);
        }
    };

    const u64 workers = std::clamp<u64>(options.threads, 1, segments);
    if (workers == 1) {
        std::vector<u64> out;
        run(0, segments, out);
        return out;
    }

    std::vector<std::vector<u64>> parts(workers);
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        const u64 per = segments / workers;
        const u64 extra = segments % workers;
        u64 begin = 0;
        for (u64 w = 0; w < workers; ++w) {
            const u64 end = begin + per + (w < extra ? 1 : 0);
            pool.emplace_back([&, w, begin, end] { run(begin, end, parts[w]); });
            begin = end;
        }
    }
    std::size_t total = 0;
    for (const auto& part : parts) total += part.size();
    std::vector<u64> out;
    out.reserve(total);
    for (const auto& part : parts) out.insert(out.end(), part.begin(), part.end());
    return out;
}

/// Slow reference path: form the union of every base prime's multiple set explicitly and take
/// the set difference. Only meant for small intervals in differential tests.
inline std::vector<u64> sieve_interval_by_union(Interval interval, std::span<const u64> base)
{
    require_base_covers(base, interval.hi);
    std::set<u64> composites;
    for (u64 p : base) {
        for (u64 m : multiples_in(p, interval)) {
            if (m != p) composites.insert(m);
        }
    }
    std::vector<u64> out;
    for (u64 n = interval.lo;; ++n) {
        if (!composites.contains(n)) out.push_back(n);
        if (n == interval.hi) break;
    }
    return out;
}

} // namespace pocketprimes::sieve
