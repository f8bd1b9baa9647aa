#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "oracle.hpp"
#include "sieve.hpp"

namespace pocketprimes::verify {

struct CountIdentity {
    u64 lhs = 0;  // primes in (p_k, p_k(p_k+4)+3], counted by walking the list past p_k
    u64 rhs = 0;  // pi(p_k(p_k+4)+3) - k
    bool equal() const noexcept { return lhs == rhs; }
};

/// Count of primes in the window (p_k, p_k(p_k+4)+3] two ways.
inline CountIdentity count_identity(u64 k, const PrimeTable& oracle)
{
    if (k == 0) throw error(errc::invalid_argument, "k is 1-based");
    if (oracle.primes.size() < k) throw error(errc::oracle_too_short, "oracle has fewer than k primes");
    const u64 pk = oracle.primes[k - 1];
    const u128 top128 = u128{pk} * (pk + 4) + 3;
    if (top128 > oracle.limit) {
        throw error(errc::oracle_too_short, "oracle does not reach p_k(p_k+4)+3 for k=" + std::to_string(k));
    }
    const u64 top = static_cast<u64>(top128);
    CountIdentity out;
    for (auto i = static_cast<std::size_t>(k); i < oracle.primes.size() && oracle.primes[i] <= top; ++i) ++out.lhs;
    out.rhs = oracle.pi(top) - k;
    return out;
}

struct TwinCensus {
    u64 pocket_index = 0;
    std::vector<std::pair<u64, u64>> pairs;             // both members inside the pocket
    std::optional<std::pair<u64, u64>> boundary_pair;   // max prime and the next pocket's first prime

    u64 count() const noexcept { return pairs.size(); }
};

/// Twin pairs inside the pocket. A pair straddling into the next pocket is reported separately.
inline TwinCensus twin_census(const Pocket& pocket, std::optional<u64> next_pocket_first = {})
{
    TwinCensus census;
    census.pocket_index = pocket.index;
    const auto& ps = pocket.primes;
    for (std::size_t i = 1; i < ps.size(); ++i) {
        if (ps[i] - ps[i - 1] == 2) census.pairs.emplace_back(ps[i - 1], ps[i]);
    }
    if (!ps.empty() && next_pocket_first && *next_pocket_first == ps.back() + 2) {
        census.boundary_pair = std::pair{ps.back(), *next_pocket_first};
    }
    return census;
}

struct TightnessResult {
    u64 max_prime = 0;                 // MpP of the frontier
    Interval widened;                  // [MIpP+1, MpP^2 + 4*MpP + extra]
    std::optional<u64> fails_at;       // first composite that survives the base primes

    bool works() const noexcept { return !fails_at.has_value(); }
};

/// Sieves the interval widened to MpP^2 + 4*MpP + extra with the frontier's primes and checks
/// every survivor against the oracle. With extra = 4 the top is (MpP+2)^2, which survives
/// whenever MpP+2 is prime.
inline TightnessResult tightness_demo(const GeneratorState& state, u64 extra)
{
    if (extra != 3 && extra != 4) throw error(errc::invalid_argument, "extra must be 3 or 4");
    const u64 mpp = state.frontier_max_prime();
    const u128 top128 = u128{mpp} * mpp + 4 * u128{mpp} + extra;
    if (top128 > oracle_guard) {
        throw error(errc::oracle_too_short, "widened interval exceeds the oracle guard for MpP=" + std::to_string(mpp));
    }
    TightnessResult out;
    out.max_prime = mpp;
    out.widened = Interval::make(state.frontier_interval_hi() + 1, static_cast<u64>(top128));

    sieve::SieveOptions options;
    options.check_base = false;
    const auto survivors = sieve::sieve_interval(out.widened, state.base_primes(), options);
    const auto oracle = PrimeTable::up_to(out.widened.hi);
    for (u64 s : survivors) {
        if (!oracle.is_prime(s)) {
            out.fails_at = s;
            break;
        }
    }
    return out;
}

/// Structural partition check: consecutive indices, tiling intervals, primes inside their
/// interval and strictly increasing across pockets, ordinals matching running counts.
/// Returns a description of the first violation.
inline std::optional<std::string> check_partition(std::span<const Pocket> pockets)
{
    u64 running = 0;
    std::optional<u64> last_prime;
    for (std::size_t i = 0; i < pockets.size(); ++i) {
        const auto& p = pockets[i];
        const auto where = "pocket " + std::to_string(p.index) + ": ";
        if (i > 0) {
            if (p.index != pockets[i - 1].index + 1) return where + "index not consecutive";
            if (p.interval.lo != pockets[i - 1].interval.hi + 1) return where + "interval does not tile";
            if (pockets[i - 1].truncated) return where + "follows a truncated pocket";
        }
        if (p.first_ordinal != running + 1) return where + "first ordinal " + std::to_string(p.first_ordinal) +
                                                    " != " + std::to_string(running + 1);
        for (u64 q : p.primes) {
            if (!p.interval.contains(q)) return where + "prime " + std::to_string(q) + " outside interval";
            if (last_prime && q <= *last_prime) return where + "prime " + std::to_string(q) + " out of order";
            last_prime = q;
        }
        if (!p.truncated && p.primes.empty()) return where + "empty pocket";
        running += p.order();
    }
    return std::nullopt;
}

} // namespace pocketprimes::verify
