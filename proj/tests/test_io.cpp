#include <gtest/gtest.h>

#include "pocketprimes/checkpoint.hpp"
#include "pocketprimes/io.hpp"
#include "pocketprimes/pockets.hpp"
#include "test_support.hpp"

using namespace pocketprimes;
using namespace pocketprimes::io;

TEST(Formats, BinaryLayoutIsBitExact)
{
    const std::vector<u64> primes{2, 3, 0x0102030405060708ULL};
    const auto bytes = to_binary(primes);
    ASSERT_EQ(bytes.size(), 12U + 24U);
    EXPECT_EQ(bytes.substr(0, 4), "PPK1");
    EXPECT_EQ(bytes[4], '\x03');
    for (int i = 5; i < 12; ++i) EXPECT_EQ(bytes[i], '\0');
    EXPECT_EQ(bytes[12], '\x02');
    EXPECT_EQ(bytes[20], '\x03');
    EXPECT_EQ(bytes[28], '\x08');
    EXPECT_EQ(bytes[35], '\x01');
}

TEST(Formats, TextLayoutIsBitExact)
{
    EXPECT_EQ(to_text(std::vector<u64>{2, 3, 619}), "2\n3\n619\n");
    EXPECT_EQ(to_text(std::vector<u64>{}), "");
}

TEST(Formats, BinaryAndTextAgreeOnGeneratedRuns)
{
    for (int trial = 0; trial < 8; ++trial) {
        const u64 limit = test_support::uniform(2, 10'000'000);
        const auto primes = concat_primes(generate(MethodKind::square_plus, StopCondition::limit(limit)));
        const auto from_bin = parse_binary(to_binary(primes));
        const auto from_text = parse_text(to_text(primes));
        EXPECT_EQ(from_bin, from_text);
        EXPECT_EQ(from_bin, primes);
    }
}

TEST(Formats, RejectsMalformedInput)
{
    EXPECT_THROW(parse_binary("PPK2\0\0\0\0\0\0\0\0"), error);
    EXPECT_THROW(parse_binary(std::string("PPK1\x05\0\0\0\0\0\0\0", 12)), error);
    EXPECT_THROW(parse_text("2\n3x\n"), error);
    EXPECT_THROW(parse_format("json"), error);
    EXPECT_EQ(parse_text("2\r\n3\n\n5"), (std::vector<u64>{2, 3, 5}));
}

TEST(Report, RowsMatchPockets)
{
    const auto pockets = generate(MethodKind::bertrand, StopCondition::pockets(5));
    const auto row = report_row(pockets[4]);
    EXPECT_EQ(to_csv(row), "5,11,14,2,13,5,1,false\n");
    EXPECT_EQ(csv_header, "j,lo,hi,order,max_prime,first_ordinal,twin_pairs,truncated\n");
}

TEST(Checksum, FormatIndependent)
{
    const std::vector<u64> a{2, 3, 5, 7};
    PrimeChecksum split;
    split.update(std::span(a).first(2));
    split.update(std::span(a).subspan(2));
    EXPECT_EQ(split.value(), checksum(a));
    EXPECT_NE(checksum(a), checksum(std::vector<u64>{2, 3, 5, 11}));
}

TEST(Checkpoint, ManifestRoundTripAndTamperDetection)
{
    checkpoint::Checkpoint c;
    c.method = MethodKind::square;
    c.mipp = 2209;
    c.mpp = 2207;
    c.cumulative = 329;
    c.next_index = 6;
    c.pockets_emitted = 5;
    c.out_path = "/tmp/x.bin";
    c.format = Format::bin;
    c.out_bytes = 12 + 8 * 329;
    c.prime_path = c.out_path;
    c.prime_format = Format::bin;
    c.prime_bytes = c.out_bytes;
    c.prime_crc32 = 0xdeadbeef;

    const auto text = checkpoint::serialize(c);
    const auto back = checkpoint::parse(text);
    EXPECT_EQ(checkpoint::serialize(back), text);
    EXPECT_EQ(back.mpp, 2207U);
    EXPECT_EQ(back.prime_crc32, 0xdeadbeefU);

    auto tampered = text;
    tampered.replace(tampered.find("mpp=2207"), 8, "mpp=2203");
    try {
        checkpoint::parse(tampered);
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::corrupt_checkpoint);
    }
}

TEST(PocketWriter, ReopenTruncatesToRecordedPrefix)
{
    const auto dir = test_support::scratch_dir("writer");
    const auto path = dir / "out.bin";
    const auto pockets = generate(MethodKind::square_plus, StopCondition::pockets(3));

    auto w = PocketWriter::create(path, Format::bin);
    w.append(pockets[0]);
    w.append(pockets[1]);
    w.sync();
    const auto bytes = w.bytes();
    const auto crc = w.crc();
    w.append(pockets[2]);  // later lost in a crash
    w.sync();

    const auto prefix = concat_primes(std::span(pockets).first(2));
    auto r = PocketWriter::reopen(path, Format::bin, bytes, prefix.size(), crc, prefix);
    r.append(pockets[2]);
    r.sync();
    EXPECT_EQ(read_file(path), to_binary(concat_primes(pockets)));

    EXPECT_THROW(PocketWriter::reopen(path, Format::bin, bytes, prefix.size(), crc ^ 1, prefix), error);
    std::filesystem::remove_all(dir);
}
