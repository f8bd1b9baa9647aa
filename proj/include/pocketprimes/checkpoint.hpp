#pragma once

// Resumable run manifest: flat key=value lines, the last one a CRC-32 of everything above it.

#include <zlib.h>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "core.hpp"
#include "io.hpp"

namespace pocketprimes::checkpoint {

struct Checkpoint {
    MethodKind method = MethodKind::square_plus;
    bool custom_seed = false;
    u64 mipp = 0;
    u64 mpp = 0;
    u64 cumulative = 0;
    u64 next_index = 1;
    u64 pockets_emitted = 0;
    bool truncated = false;

    std::filesystem::path out_path;
    io::Format format = io::Format::text;
    u64 out_bytes = 0;

    std::filesystem::path prime_path;  // same as out_path unless the output is a csv report
    io::Format prime_format = io::Format::text;
    u64 prime_bytes = 0;
    std::uint32_t prime_crc32 = 0;
};

inline constexpr std::string_view manifest_version = "1";

inline std::string hex32(std::uint32_t v)
{
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08x", v);
    return buf;
}

inline std::string serialize(const Checkpoint& c)
{
    std::ostringstream s;
    s << "version=" << manifest_version << '\n'
      << "method=" << method_number(c.method) << '\n'
      << "seed=" << (c.custom_seed ? "custom" : "standard") << '\n'
      << "mipp=" << c.mipp << '\n'
      << "mpp=" << c.mpp << '\n'
      << "cumulative=" << c.cumulative << '\n'
      << "next_index=" << c.next_index << '\n'
      << "pockets_emitted=" << c.pockets_emitted << '\n'
      << "truncated=" << (c.truncated ? 1 : 0) << '\n'
      << "out=" << c.out_path.string() << '\n'
      << "format=" << io::format_name(c.format) << '\n'
      << "out_bytes=" << c.out_bytes << '\n'
      << "prime_file=" << c.prime_path.string() << '\n'
      << "prime_format=" << io::format_name(c.prime_format) << '\n'
      << "prime_bytes=" << c.prime_bytes << '\n'
      << "prime_crc32=" << hex32(c.prime_crc32) << '\n';
    auto body = s.str();
    const auto crc = ::crc32(::crc32(0L, Z_NULL, 0), reinterpret_cast<const Bytef*>(body.data()),
                             static_cast<uInt>(body.size()));
    return body + "manifest_crc32=" + hex32(static_cast<std::uint32_t>(crc)) + '\n';
}

namespace detail {

inline u64 to_u64(const std::string& key, const std::string& v)
{
    u64 out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) throw error(errc::corrupt_checkpoint, "bad value for " + key);
    return out;
}

inline std::uint32_t to_hex32(const std::string& key, const std::string& v)
{
    std::uint32_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out, 16);
    if (ec != std::errc{} || ptr != v.data() + v.size()) throw error(errc::corrupt_checkpoint, "bad value for " + key);
    return out;
}

} // namespace detail

inline Checkpoint parse(const std::string& text)
{
    const auto marker = text.rfind("manifest_crc32=");
    if (marker == std::string::npos) throw error(errc::corrupt_checkpoint, "manifest checksum missing");
    const auto body = text.substr(0, marker);
    auto stored = text.substr(marker + 15);
    while (!stored.empty() && (stored.back() == '\n' || stored.back() == '\r')) stored.pop_back();
    const auto crc = ::crc32(::crc32(0L, Z_NULL, 0), reinterpret_cast<const Bytef*>(body.data()),
                             static_cast<uInt>(body.size()));
    if (detail::to_hex32("manifest_crc32", stored) != static_cast<std::uint32_t>(crc)) {
        throw error(errc::corrupt_checkpoint, "manifest checksum mismatch");
    }

    std::map<std::string, std::string> kv;
    std::istringstream lines(body);
    for (std::string line; std::getline(lines, line);) {
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw error(errc::corrupt_checkpoint, "malformed line '" + line + "'");
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    auto get = [&](const std::string& key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end()) throw error(errc::corrupt_checkpoint, "missing key " + key);
        return it->second;
    };
    if (get("version") != manifest_version) throw error(errc::corrupt_checkpoint, "unsupported manifest version");

    Checkpoint c;
    c.method = method_from_number(static_cast<int>(detail::to_u64("method", get("method"))));
    c.custom_seed = get("seed") == "custom";
    c.mipp = detail::to_u64("mipp", get("mipp"));
    c.mpp = detail::to_u64("mpp", get("mpp"));
    c.cumulative = detail::to_u64("cumulative", get("cumulative"));
    c.next_index = detail::to_u64("next_index", get("next_index"));
    c.pockets_emitted = detail::to_u64("pockets_emitted", get("pockets_emitted"));
    c.truncated = get("truncated") == "1";
    c.out_path = get("out");
    c.format = io::parse_format(get("format"));
    c.out_bytes = detail::to_u64("out_bytes", get("out_bytes"));
    c.prime_path = get("prime_file");
    c.prime_format = io::parse_format(get("prime_format"));
    c.prime_bytes = detail::to_u64("prime_bytes", get("prime_bytes"));
    c.prime_crc32 = detail::to_hex32("prime_crc32", get("prime_crc32"));
    return c;
}

/// Writes the manifest next to its final location and renames it into place.
inline void save(const Checkpoint& c, const std::filesystem::path& path)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw error(errc::io_error, "cannot write " + tmp.string());
        out << serialize(c);
        out.flush();
        if (!out) throw error(errc::io_error, "cannot write " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw error(errc::io_error, "cannot replace " + path.string());
}

inline Checkpoint load(const std::filesystem::path& path) { return parse(io::read_file(path)); }

/// Reads back the prime prefix a checkpoint vouches for and checks count and checksum.
inline std::vector<u64> load_primes(const Checkpoint& c)
{
    const auto data = io::read_file(c.prime_path, c.prime_bytes);
    std::vector<u64> primes = c.prime_format == io::Format::bin ? io::parse_binary(data, c.cumulative)
                                                                : io::parse_text(data);
    if (primes.size() != c.cumulative) throw error(errc::corrupt_checkpoint, "prime count differs from checkpoint");
    if (io::checksum(primes) != c.prime_crc32) throw error(errc::corrupt_checkpoint, "prime file checksum mismatch");
    if (primes.empty() || primes.back() != c.mpp) throw error(errc::corrupt_checkpoint, "prime file does not end at MpP");
    return primes;
}

} // namespace pocketprimes::checkpoint
