#include <gtest/gtest.h>

#include <numeric>

#include "pocketprimes/pockets.hpp"
#include "pocketprimes/verify.hpp"
#include "test_support.hpp"

using namespace pocketprimes;

TEST(PocketStream, SquarePlusSecondPocket)
{
    PocketStream stream(MethodKind::square_plus);
    const auto p = stream.next_pocket();
    ASSERT_TRUE(p);
    EXPECT_EQ(p->index, 2U);
    EXPECT_EQ(p->interval, (Interval{4, 24}));
    EXPECT_EQ(p->primes, (std::vector<u64>{5, 7, 11, 13, 17, 19, 23}));
    EXPECT_EQ(p->order(), 7U);
    EXPECT_EQ(p->first_ordinal, 3U);
}

TEST(PocketStream, BertrandSixthPocket)
{
    const auto pockets = generate(MethodKind::bertrand, StopCondition::pockets(6));
    ASSERT_EQ(pockets.size(), 6U);
    const auto& p = pockets.back();
    EXPECT_EQ(p.index, 6U);
    EXPECT_EQ(p.interval, (Interval{15, 26}));
    EXPECT_EQ(p.primes, (std::vector<u64>{17, 19, 23}));
}

TEST(PocketStream, SquareFifthPocket)
{
    const auto pockets = generate(MethodKind::square, StopCondition::pockets(5));
    EXPECT_EQ(pockets[4].order(), 314U);
    EXPECT_EQ(pockets[4].max_prime(), 2207U);
    EXPECT_EQ(pockets[4].last_ordinal(), 329U);
}

TEST(PocketStream, LimitTruncatesFinalPocket)
{
    PocketStream stream(MethodKind::square_plus, 100);
    ASSERT_TRUE(stream.next_pocket());
    const auto p = stream.next_pocket();
    ASSERT_TRUE(p);
    EXPECT_EQ(p->index, 3U);
    EXPECT_EQ(p->interval, (Interval{25, 100}));
    EXPECT_TRUE(p->truncated);
    EXPECT_EQ(p->primes, test_support::primes_between(25, 100));
    EXPECT_TRUE(stream.exhausted());
    EXPECT_FALSE(stream.next_pocket());
    EXPECT_FALSE(stream.next_pocket());
}

TEST(PocketStream, LimitInsideSeed)
{
    const auto sp = generate(MethodKind::square_plus, StopCondition::limit(2));
    ASSERT_EQ(sp.size(), 1U);
    EXPECT_EQ(sp[0].primes, (std::vector<u64>{2}));
    EXPECT_TRUE(sp[0].truncated);

    const auto sq = generate(MethodKind::square, StopCondition::limit(2));
    ASSERT_EQ(sq.size(), 1U);
    EXPECT_FALSE(sq[0].truncated);
}

TEST(PocketStream, LimitOnBoundaryIsNotTruncated)
{
    const auto pockets = generate(MethodKind::square_plus, StopCondition::limit(624));
    ASSERT_EQ(pockets.size(), 3U);
    EXPECT_FALSE(pockets.back().truncated);
    EXPECT_EQ(pockets.back().max_prime(), 619U);
}

TEST(PocketStream, EmptyTruncatedPocketAllowed)
{
    // method 1 pocket 6 is [15, 26]; cutting at 16 leaves no prime
    const auto pockets = generate(MethodKind::bertrand, StopCondition::limit(16));
    ASSERT_EQ(pockets.size(), 6U);
    EXPECT_TRUE(pockets.back().truncated);
    EXPECT_EQ(pockets.back().order(), 0U);
    EXPECT_FALSE(verify::check_partition(pockets));
}

TEST(PocketStream, OverflowExhaustsStream)
{
    const u64 big = 4294967311ULL;  // smallest prime above 2^32
    const std::vector<u64> base{2, 3, 5, big};
    auto bertrand = PocketStream::resume(GeneratorState(MethodKind::bertrand, base, big), 9);
    EXPECT_EQ(bertrand.peek_interval()->hi, 2 * big);
    auto stream = PocketStream::resume(GeneratorState(MethodKind::square_plus, base, big), 9);
    try {
        stream.next_pocket();
        FAIL() << "expected ArithmeticOverflow";
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::arithmetic_overflow);
    }
    EXPECT_TRUE(stream.exhausted());
    EXPECT_FALSE(stream.next_pocket());
}

TEST(Generate, OrderSequences)
{
    EXPECT_EQ(order_sequence(MethodKind::bertrand, 10), (std::vector<u64>{1, 1, 1, 1, 2, 3, 5, 9, 15, 28}));
    EXPECT_EQ(order_sequence(MethodKind::square_plus, 4), (std::vector<u64>{2, 7, 105, 32622}));
    EXPECT_EQ(order_sequence(MethodKind::square, 6), (std::vector<u64>{1, 1, 2, 11, 314, 339730}));
}

TEST(Generate, LastPrimesAndOrdinals)
{
    const auto b = generate(MethodKind::bertrand, StopCondition::pockets(10));
    EXPECT_EQ(b.back().max_prime(), 317U);
    EXPECT_EQ(b.back().last_ordinal(), 66U);

    const auto sp = generate(MethodKind::square_plus, StopCondition::pockets(4));
    EXPECT_EQ(sp[2].max_prime(), 619U);
    EXPECT_EQ(sp[2].last_ordinal(), 114U);
    EXPECT_EQ(sp.back().max_prime(), 385639U);
    EXPECT_EQ(sp.back().last_ordinal(), 32736U);
}

TEST(Generate, PartitionAndOracleForEveryMethod)
{
    const auto oracle = verify::PrimeTable::up_to(200'000);
    for (auto m : {MethodKind::bertrand, MethodKind::square, MethodKind::square_plus}) {
        for (u64 limit : {2ULL, 3ULL, 10ULL, 97ULL, 1000ULL, 65'536ULL, 200'000ULL}) {
            const auto pockets = generate(m, StopCondition::limit(limit));
            EXPECT_FALSE(verify::check_partition(pockets)) << method_name(m) << " " << limit;
            EXPECT_EQ(concat_primes(pockets), oracle.in_range(2, limit)) << method_name(m) << " " << limit;
            EXPECT_EQ(pockets.back().interval.hi, limit);
        }
    }
}

TEST(Generate, CrossMethodAgreement)
{
    for (int trial = 0; trial < 20; ++trial) {
        const u64 limit = test_support::uniform(2, 2'000'000);
        const auto a = concat_primes(generate(MethodKind::bertrand, StopCondition::limit(limit)));
        const auto b = concat_primes(generate(MethodKind::square, StopCondition::limit(limit)));
        const auto c = concat_primes(generate(MethodKind::square_plus, StopCondition::limit(limit)));
        EXPECT_EQ(a, b) << limit;
        EXPECT_EQ(b, c) << limit;
    }
}

TEST(Generate, NonEmptyPockets)
{
    for (auto m : {MethodKind::bertrand, MethodKind::square, MethodKind::square_plus}) {
        for (const auto& p : generate(m, StopCondition::limit(3'000'000))) {
            if (!p.truncated) {
                EXPECT_GE(p.order(), 1U) << method_name(m) << " pocket " << p.index;
            }
        }
    }
}

TEST(Generate, MonotoneFrontierAndEvenSquarePlusBounds)
{
    const auto pockets = generate(MethodKind::square_plus, StopCondition::pockets(4));
    for (std::size_t i = 1; i < pockets.size(); ++i) {
        EXPECT_GT(pockets[i].max_prime(), pockets[i - 1].max_prime());
        EXPECT_EQ(pockets[i].interval.hi % 2, 0U);
    }
}

TEST(Generate, CustomSeedContinuation)
{
    const std::vector<u64> seed{2, 3, 5, 7};
    auto stream = PocketStream::from_known_primes(seed, 10'000);
    const auto pockets = take_pockets(stream, std::nullopt);
    EXPECT_EQ(pockets[0].interval, (Interval{2, 7}));
    EXPECT_EQ(pockets[1].interval, (Interval{8, 7 * 7 + 4 * 7 + 3}));
    EXPECT_EQ(concat_primes(pockets), verify::oracle_sieve(10'000));
    EXPECT_FALSE(verify::check_partition(pockets));
}

TEST(Generate, ReferenceUnionPathAgrees)
{
    // each pocket re-derived with the explicit set-union construction
    for (auto m : {MethodKind::bertrand, MethodKind::square, MethodKind::square_plus}) {
        const auto pockets = generate(m, StopCondition::limit(100'000));
        std::vector<u64> base;
        for (const auto& p : pockets) {
            if (!base.empty()) {
                EXPECT_EQ(sieve::sieve_interval_by_union(p.interval, base), p.primes);
            }
            base.insert(base.end(), p.primes.begin(), p.primes.end());
        }
    }
}

TEST(Generate, RequiresAStop)
{
    EXPECT_THROW(generate(MethodKind::square_plus, {}), error);
    EXPECT_THROW(generate(MethodKind::square_plus, StopCondition::pockets(0)), error);
}
