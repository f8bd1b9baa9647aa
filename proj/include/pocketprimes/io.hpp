#pragma once

// Output formats.
//   text        one decimal prime per line, LF terminated, no header
//   bin         "PPK1", u64 little-endian count, then u64 little-endian primes ascending
//   csv-report  header j,lo,hi,order,max_prime,first_ordinal,twin_pairs,truncated + one row per pocket

#include <zlib.h>

#include <array>
#include <charconv>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "core.hpp"
#include "verify.hpp"

namespace pocketprimes::io {

enum class Format { text, bin, csv_report };

inline constexpr std::string_view format_name(Format f) noexcept
{
    switch (f) {
    case Format::text: return "text";
    case Format::bin: return "bin";
    case Format::csv_report: return "csv-report";
    }
    return "?";
}

inline Format parse_format(std::string_view name)
{
    if (name == "text") return Format::text;
    if (name == "bin") return Format::bin;
    if (name == "csv-report") return Format::csv_report;
    throw error(errc::invalid_argument, "unknown format '" + std::string(name) + "'");
}

inline constexpr std::array<char, 4> bin_magic{'P', 'P', 'K', '1'};
inline constexpr std::size_t bin_header_bytes = 12;

inline void put_le64(char* out, u64 v) noexcept
{
    for (int i = 0; i < 8; ++i) out[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
}

inline u64 get_le64(const char* in) noexcept
{
    u64 v = 0;
    for (int i = 0; i < 8; ++i) v |= u64{static_cast<unsigned char>(in[i])} << (8 * i);
    return v;
}

/// Running CRC-32 over the primes' little-endian 8-byte encoding, independent of file format.
class PrimeChecksum {
public:
    void update(std::span<const u64> primes)
    {
        char buf[8];
        for (u64 p : primes) {
            put_le64(buf, p);
            crc_ = ::crc32(crc_, reinterpret_cast<const Bytef*>(buf), 8);
        }
    }
    std::uint32_t value() const noexcept { return static_cast<std::uint32_t>(crc_); }

private:
    uLong crc_ = ::crc32(0L, Z_NULL, 0);
};

inline std::uint32_t checksum(std::span<const u64> primes)
{
    PrimeChecksum c;
    c.update(primes);
    return c.value();
}

inline std::string to_text(std::span<const u64> primes)
{
    std::string out;
    char buf[24];
    for (u64 p : primes) {
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, p);
        out.append(buf, end);
        out.push_back('\n');
    }
    return out;
}

inline std::string to_binary(std::span<const u64> primes)
{
    std::string out(bin_header_bytes + 8 * primes.size(), '\0');
    std::memcpy(out.data(), bin_magic.data(), 4);
    put_le64(out.data() + 4, primes.size());
    for (std::size_t i = 0; i < primes.size(); ++i) put_le64(out.data() + bin_header_bytes + 8 * i, primes[i]);
    return out;
}

inline std::vector<u64> parse_text(std::string_view data)
{
    std::vector<u64> out;
    std::size_t line_no = 0;
    while (!data.empty()) {
        ++line_no;
        const auto nl = data.find('\n');
        auto line = data.substr(0, nl);
        data = nl == std::string_view::npos ? std::string_view{} : data.substr(nl + 1);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        u64 value = 0;
        auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), value);
        if (ec != std::errc{} || ptr != line.data() + line.size()) {
            throw error(errc::invalid_argument, "line " + std::to_string(line_no) + " is not an unsigned integer");
        }
        out.push_back(value);
    }
    return out;
}

/// Decodes a binary prime file; `expected_count` overrides the header count (used when the
/// header of a partially written file is stale).
inline std::vector<u64> parse_binary(std::string_view data, std::optional<u64> expected_count = {})
{
    if (data.size() < bin_header_bytes || std::memcmp(data.data(), bin_magic.data(), 4) != 0) {
        throw error(errc::invalid_argument, "missing PPK1 header");
    }
    const u64 count = expected_count ? *expected_count : get_le64(data.data() + 4);
    if ((data.size() - bin_header_bytes) / 8 < count) throw error(errc::invalid_argument, "binary prime file is short");
    std::vector<u64> out(count);
    for (u64 i = 0; i < count; ++i) out[i] = get_le64(data.data() + bin_header_bytes + 8 * i);
    return out;
}

inline std::string read_file(const std::filesystem::path& path, std::optional<u64> max_bytes = {})
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error(errc::io_error, "cannot open " + path.string());
    std::string data;
    if (max_bytes) {
        data.resize(*max_bytes);
        in.read(data.data(), static_cast<std::streamsize>(*max_bytes));
        if (static_cast<u64>(in.gcount()) != *max_bytes) throw error(errc::io_error, path.string() + " is shorter than recorded");
    } else {
        data.assign(std::istreambuf_iterator<char>(in), {});
    }
    return data;
}

inline std::vector<u64> read_primes(const std::filesystem::path& path, Format format)
{
    const auto data = read_file(path);
    if (format == Format::bin) return parse_binary(data);
    if (format == Format::text) return parse_text(data);
    throw error(errc::invalid_argument, "csv-report files do not hold a prime list");
}

struct PocketReportRow {
    u64 j = 0;
    u64 lo = 0;
    u64 hi = 0;
    u64 order = 0;
    u64 max_prime = 0;   // 0 for an empty truncated pocket
    u64 first_ordinal = 0;
    u64 twin_pairs = 0;
    bool truncated = false;
};

inline constexpr std::string_view csv_header = "j,lo,hi,order,max_prime,first_ordinal,twin_pairs,truncated\n";

inline PocketReportRow report_row(const Pocket& pocket)
{
    return {pocket.index,
            pocket.interval.lo,
            pocket.interval.hi,
            pocket.order(),
            pocket.primes.empty() ? 0 : pocket.max_prime(),
            pocket.first_ordinal,
            verify::twin_census(pocket).count(),
            pocket.truncated};
}

inline std::string to_csv(const PocketReportRow& r)
{
    return std::to_string(r.j) + ',' + std::to_string(r.lo) + ',' + std::to_string(r.hi) + ',' +
           std::to_string(r.order) + ',' + std::to_string(r.max_prime) + ',' + std::to_string(r.first_ordinal) + ',' +
           std::to_string(r.twin_pairs) + ',' + (r.truncated ? "true" : "false") + '\n';
}

/// Appends pockets to a file in one of the output formats. Tracks the byte length, the number of
/// primes and their checksum so a checkpoint can cut the file back to a consistent prefix.
class PocketWriter {
public:
    /// Starts a new file (truncating any existing one).
    static PocketWriter create(const std::filesystem::path& path, Format format)
    {
        PocketWriter w(path, format);
        {
            std::ofstream touch(path, std::ios::binary | std::ios::trunc);
            if (!touch) throw error(errc::io_error, "cannot create " + path.string());
        }
        w.open();
        if (format == Format::bin) w.write(to_binary({}));
        if (format == Format::csv_report) w.write(csv_header);
        return w;
    }

    /// Reopens an existing file, discarding anything past `bytes`.
    static PocketWriter reopen(const std::filesystem::path& path, Format format, u64 bytes, u64 prime_count,
                               std::uint32_t crc, std::span<const u64> primes)
    {
        std::error_code ec;
        const auto size = std::filesystem::file_size(path, ec);
        if (ec || size < bytes) throw error(errc::corrupt_checkpoint, path.string() + " is shorter than the checkpoint");
        std::filesystem::resize_file(path, bytes, ec);
        if (ec) throw error(errc::io_error, "cannot truncate " + path.string());
        PocketWriter w(path, format);
        w.open();
        w.stream_.seekp(0, std::ios::end);
        w.bytes_ = bytes;
        w.count_ = prime_count;
        w.checksum_.update(primes);
        if (format != Format::csv_report && w.checksum_.value() != crc) {
            throw error(errc::corrupt_checkpoint, "checksum mismatch for " + path.string());
        }
        return w;
    }

    void append(const Pocket& pocket)
    {
        if (format_ == Format::csv_report) {
            write(to_csv(report_row(pocket)));
        } else {
            append_primes(pocket.primes);
        }
    }

    void append_primes(std::span<const u64> primes)
    {
        if (format_ == Format::text) {
            write(to_text(primes));
        } else {
            std::string buf(8 * primes.size(), '\0');
            for (std::size_t i = 0; i < primes.size(); ++i) put_le64(buf.data() + 8 * i, primes[i]);
            write(buf);
        }
        count_ += primes.size();
        checksum_.update(primes);
    }

    /// Flushes and, for the binary format, rewrites the header count.
    void sync()
    {
        if (format_ == Format::bin) {
            char buf[8];
            put_le64(buf, count_);
            stream_.seekp(4);
            stream_.write(buf, 8);
            stream_.seekp(0, std::ios::end);
        }
        stream_.flush();
        if (!stream_) throw error(errc::io_error, "write failed for " + path_.string());
    }

    const std::filesystem::path& path() const noexcept { return path_; }
    Format format() const noexcept { return format_; }
    u64 bytes() const noexcept { return bytes_; }
    u64 prime_count() const noexcept { return count_; }
    std::uint32_t crc() const noexcept { return checksum_.value(); }

private:
    PocketWriter(std::filesystem::path path, Format format) : path_(std::move(path)), format_(format) {}

    void open()
    {
        stream_.open(path_, std::ios::in | std::ios::out | std::ios::binary);
        if (!stream_) throw error(errc::io_error, "cannot open " + path_.string());
    }

    void write(std::string_view data)
    {
        stream_.write(data.data(), static_cast<std::streamsize>(data.size()));
        if (!stream_) throw error(errc::io_error, "write failed for " + path_.string());
        bytes_ += data.size();
    }

    std::filesystem::path path_;
    Format format_;
    std::fstream stream_;
    u64 bytes_ = 0;
    u64 count_ = 0;
    PrimeChecksum checksum_;
};

} // namespace pocketprimes::io
