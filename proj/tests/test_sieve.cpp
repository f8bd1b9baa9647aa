#include <gtest/gtest.h>

#include <cmath>

#include "pocketprimes/oracle.hpp"
#include "pocketprimes/sieve.hpp"
#include "test_support.hpp"

using namespace pocketprimes;
using namespace pocketprimes::sieve;
using test_support::uniform;

namespace {

std::vector<u64> brute_multiples(u64 p, Interval iv)
{
    std::vector<u64> out;
    for (u64 n = iv.lo; n <= iv.hi; ++n) {
        if (n % p == 0) out.push_back(n);
    }
    return out;
}

std::vector<u64> base_up_to(u64 n) { return verify::oracle_sieve(n); }

} // namespace

TEST(MultiplesIn, Examples)
{
    EXPECT_EQ(multiples_in(2, {8, 14}), (std::vector<u64>{8, 10, 12, 14}));
    EXPECT_EQ(multiples_in(5, {24, 48}), (std::vector<u64>{25, 30, 35, 40, 45}));
    const auto sevens = multiples_in(7, {50, 2209});
    EXPECT_EQ(sevens, brute_multiples(7, {50, 2209}));
    EXPECT_EQ(sevens.front(), 56U);
    EXPECT_EQ(sevens.back(), 2205U);
    EXPECT_TRUE(multiples_in(11, {12, 21}).empty());
}

TEST(MultiplesIn, MatchesBruteForceAndFirstMultipleFormula)
{
    for (int trial = 0; trial < 400; ++trial) {
        const u64 p = uniform(2, 50);
        const u64 lo = uniform(2, 100'000);
        const Interval iv{lo, lo + uniform(0, 9'999)};
        const auto got = multiples_in(p, iv);
        ASSERT_EQ(got, brute_multiples(p, iv)) << p << " [" << iv.lo << "," << iv.hi << "]";
        if (!got.empty()) {
            EXPECT_EQ(got.front(), p * ((iv.lo - 1) / p + 1));
        }
    }
}

TEST(QuotientBounds, BracketTheInterval)
{
    for (int trial = 0; trial < 1000; ++trial) {
        const u64 p = uniform(2, 1000);
        const u64 lo = uniform(2, 1'000'000);
        const Interval iv{lo, lo + uniform(0, 100'000)};
        const auto b = quotient_bounds(p, iv);
        EXPECT_LE(b.q * p, iv.lo - 1);
        EXPECT_GT((b.q + 1) * p, iv.lo - 1);
        EXPECT_LE(b.q_hi * p, iv.hi);
        EXPECT_GT((b.q_hi + 1) * p, iv.hi);
    }
}

TEST(MarkComposites, Examples)
{
    for (auto layout : {Layout::packed_odd, Layout::full}) {
        Segment a(4, 24, layout);
        mark_composites(a, std::vector<u64>{2, 3});
        EXPECT_EQ(a.survivors(), (std::vector<u64>{5, 7, 11, 13, 17, 19, 23}));

        Segment b(26, 623, layout);
        mark_composites(b, base_up_to(23));
        const auto s = b.survivors();
        EXPECT_EQ(s.size(), 105U);
        EXPECT_EQ(s.back(), 619U);

        Segment c(3, 4, layout);
        mark_composites(c, std::vector<u64>{2});
        EXPECT_EQ(c.survivors(), (std::vector<u64>{3}));
    }
}

TEST(MarkComposites, InsufficientBase)
{
    Segment seg(4, 25, Layout::packed_odd);
    try {
        mark_composites(seg, std::vector<u64>{2, 3});
        FAIL() << "expected InsufficientBase";
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::insufficient_base);
    }
    Segment small(2, 3, Layout::full);
    EXPECT_NO_THROW(mark_composites(small, std::vector<u64>{}));
    EXPECT_EQ(small.survivors(), (std::vector<u64>{2, 3}));
}

TEST(Segment, PackedLayoutReportsTwo)
{
    Segment seg(2, 30, Layout::packed_odd);
    mark_composites(seg, std::vector<u64>{2, 3, 5});
    EXPECT_EQ(seg.survivors(), (std::vector<u64>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29}));
    EXPECT_TRUE(seg.possibly_prime(29));
    EXPECT_FALSE(seg.possibly_prime(25));
    EXPECT_FALSE(seg.possibly_prime(28));
    EXPECT_FALSE(seg.possibly_prime(31));
}

TEST(SieveInterval, Examples)
{
    const std::vector<u64> expected{5, 7, 11, 13, 17, 19, 23};
    const std::vector<u64> base{2, 3};
    EXPECT_EQ(sieve_interval({4, 24}, base, {.segment_capacity = 8}), expected);
    EXPECT_EQ(sieve_interval({4, 24}, base, {.segment_capacity = 3}), expected);

    const auto big = sieve_interval({626, 385639}, base_up_to(619), {});
    EXPECT_EQ(big.size(), 32622U);
    EXPECT_EQ(big.back(), 385639U);
}

TEST(SieveInterval, OracleEquivalenceOnRandomIntervals)
{
    const auto oracle = verify::PrimeTable::up_to(1'000'000);
    for (int trial = 0; trial < 60; ++trial) {
        const u64 hi = uniform(10, 1'000'000);
        const u64 lo = uniform(2, hi);
        const auto base = oracle.in_range(2, static_cast<u64>(std::sqrt(static_cast<double>(hi))) + 1);
        SieveOptions opt;
        opt.check_base = false;  // the base is complete to sqrt(hi), which is all that correctness needs
        opt.segment_capacity = uniform(1, 1 << 14);
        opt.layout = trial % 2 ? Layout::full : Layout::packed_odd;
        opt.threads = static_cast<unsigned>(uniform(1, 4));
        // base members inside the interval are themselves prime and survive
        ASSERT_EQ(sieve_interval({lo, hi}, base, opt), oracle.in_range(lo, hi)) << "[" << lo << "," << hi << "]";
    }
}

TEST(SieveInterval, SegmentationInvariance)
{
    const auto base = base_up_to(331);
    for (int trial = 0; trial < 10; ++trial) {
        const u64 hi = uniform(1000, 100'000);
        const u64 lo = uniform(332, hi);
        const auto reference = sieve_interval({lo, hi}, base, {.segment_capacity = u64{1} << 16});
        for (u64 cap : {u64{1}, u64{2}, u64{17}}) {
            for (auto layout : {Layout::packed_odd, Layout::full}) {
                SieveOptions opt{.segment_capacity = cap, .layout = layout};
                EXPECT_EQ(sieve_interval({lo, hi}, base, opt), reference) << cap;
            }
        }
    }
}

TEST(SieveInterval, FullBaseMatchesSqrtBase)
{
    const auto base = base_up_to(619);
    SieveOptions full{.full_base = true};
    EXPECT_EQ(sieve_interval({625, 200'000}, base, full), sieve_interval({625, 200'000}, base, {}));
}

TEST(SieveInterval, ThreadCountDoesNotChangeOutput)
{
    const auto base = base_up_to(619);
    const auto one = sieve_interval({625, 385640}, base, {.segment_capacity = 4096});
    for (unsigned t : {2U, 3U, 8U}) {
        EXPECT_EQ(sieve_interval({625, 385640}, base, {.segment_capacity = 4096, .threads = t}), one);
    }
}

TEST(SieveInterval, SetUnionReferenceAgrees)
{
    const auto base = base_up_to(47);
    EXPECT_EQ(sieve_interval_by_union({50, 2209}, base), sieve_interval({50, 2209}, base, {}));
    const auto base2 = base_up_to(317);
    EXPECT_EQ(sieve_interval_by_union({20'000, 100'000}, base2), sieve_interval({20'000, 100'000}, base2, {}));
}

TEST(SieveInterval, RejectsZeroCapacity)
{
    EXPECT_THROW(sieve_interval({4, 24}, std::vector<u64>{2, 3}, {.segment_capacity = 0}), error);
}
