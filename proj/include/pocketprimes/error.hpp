#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pocketprimes {

enum class errc {
    arithmetic_overflow,
    incomplete_seed,
    not_prime,
    insufficient_base,
    limit_too_large,
    oracle_too_short,
    domain_error,
    invalid_argument,
    io_error,
    corrupt_checkpoint,
};

constexpr std::string_view to_string(errc code) noexcept
{
    switch (code) {
    case errc::arithmetic_overflow: return "ArithmeticOverflow";
    case errc::incomplete_seed: return "IncompleteSeed";
    case errc::not_prime: return "NotPrime";
    case errc::insufficient_base: return "InsufficientBase";
    case errc::limit_too_large: return "LimitTooLarge";
    case errc::oracle_too_short: return "OracleTooShort";
    case errc::domain_error: return "DomainError";
    case errc::invalid_argument: return "InvalidArgument";
    case errc::io_error: return "IoError";
    case errc::corrupt_checkpoint: return "CorruptCheckpoint";
    }
    return "Unknown";
}

/// All library failures are reported through this exception; code() identifies the kind.
class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

} // namespace pocketprimes
