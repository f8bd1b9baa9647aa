#pragma once

// Subcommand bodies behind tools/pocketprimes. Each returns the process exit status:
// 0 success, 1 verification mismatch, 2 usage / overflow / limit errors, 3 I/O failure.

#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "checkpoint.hpp"
#include "core.hpp"
#include "io.hpp"
#include "pockets.hpp"
#include "verify.hpp"
#include "zeta.hpp"

namespace pocketprimes::cli {

enum exit_status : int { exit_ok = 0, exit_mismatch = 1, exit_usage = 2, exit_io = 3 };

/// Intervals reaching past this need an explicit --huge-ack.
inline constexpr u64 huge_threshold = u64{1} << 32;

inline int exit_for(const error& e) { return e.code() == errc::io_error ? exit_io : exit_usage; }

inline std::string describe(const Pocket& p)
{
    std::string s = "pocket " + std::to_string(p.index) + " [" + std::to_string(p.interval.lo) + ", " +
                    std::to_string(p.interval.hi) + "] order " + std::to_string(p.order());
    if (!p.primes.empty()) {
        s += " p_" + std::to_string(p.first_ordinal) + "..p_" + std::to_string(p.last_ordinal()) + " max " +
             std::to_string(p.max_prime());
    }
    if (p.truncated) s += " (truncated)";
    return s;
}

/// Refuses to sieve an interval above huge_threshold unless acknowledged.
inline bool huge_blocked(const Interval& next, bool huge_ack, std::ostream& log)
{
    if (next.hi <= huge_threshold || huge_ack) return false;
    log << "next interval [" << next.lo << ", " << next.hi << "] exceeds 2^32; pass --huge-ack to sieve it\n";
    return true;
}

struct GenConfig {
    MethodKind method = MethodKind::square_plus;
    std::optional<u64> pockets;
    std::optional<u64> limit;
    std::string out = "-";
    io::Format format = io::Format::text;
    sieve::SieveOptions sieve;
    bool huge_ack = false;
    std::optional<std::filesystem::path> seed_file;
    std::optional<std::filesystem::path> checkpoint;
    std::optional<u64> pause_after;  // stop after this many new pockets, leaving the checkpoint
};

namespace detail {

class GenRun {
public:
    GenRun(const GenConfig& cfg, std::ostream& out, std::ostream& log) : cfg_(cfg), out_(out), log_(log) {}

    int run()
    {
        if (cfg_.checkpoint && std::filesystem::exists(*cfg_.checkpoint)) {
            if (const int status = resume(); status != exit_ok) return status;
        } else {
            start();
        }
        u64 fresh = 0;
        for (;;) {
            if (cfg_.pockets && emitted_ >= *cfg_.pockets) break;
            if (cfg_.pause_after && fresh >= *cfg_.pause_after) {
                log_ << "paused after " << fresh << " pockets; rerun with the same --checkpoint to continue\n";
                return finish();
            }
            const auto next = stream_->peek_interval();
            if (!next) break;
            if (huge_blocked(*next, cfg_.huge_ack, log_)) {
                finish();
                return exit_usage;
            }
            emit(*stream_->next_pocket());
            ++fresh;
        }
        return finish();
    }

private:
    void start()
    {
        if (cfg_.seed_file) {
            const auto seed = io::read_primes(*cfg_.seed_file, io::Format::text);
            stream_.emplace(PocketStream::from_known_primes(seed, cfg_.limit, cfg_.sieve));
            custom_seed_ = true;
        } else {
            stream_.emplace(cfg_.method, cfg_.limit, cfg_.sieve);
        }
        if (cfg_.out != "-") {
            writer_.emplace(io::PocketWriter::create(cfg_.out, cfg_.format));
            if (cfg_.checkpoint && cfg_.format == io::Format::csv_report) {
                prime_writer_.emplace(io::PocketWriter::create(sidecar_path(), io::Format::bin));
            }
        }
        const auto& seeds = stream_->seed_pockets();
        if (cfg_.pockets && *cfg_.pockets < seeds.size()) checkpointing_ = false;
        for (const auto& seed : seeds) {
            if (cfg_.pockets && emitted_ >= *cfg_.pockets) break;
            emit(seed);
        }
    }

    int resume()
    {
        const auto c = checkpoint::load(*cfg_.checkpoint);
        if (c.method != cfg_.method || c.format != cfg_.format || c.out_path != cfg_.out) {
            log_ << "checkpoint " << cfg_.checkpoint->string() << " was written for method " << method_number(c.method)
                 << ", format " << io::format_name(c.format) << ", output " << c.out_path.string() << '\n';
            return exit_usage;
        }
        if (cfg_.limit && (*cfg_.limit < c.mipp || (c.truncated && *cfg_.limit != c.mipp))) {
            log_ << "checkpoint frontier " << c.mipp << " is incompatible with --limit " << *cfg_.limit << '\n';
            return exit_usage;
        }
        if (c.truncated && !cfg_.limit) {
            log_ << "checkpointed run was cut at prime limit " << c.mipp << " and cannot be extended\n";
            return exit_usage;
        }
        auto primes = checkpoint::load_primes(c);
        const bool csv = c.format == io::Format::csv_report;
        writer_.emplace(io::PocketWriter::reopen(c.out_path, c.format, c.out_bytes, csv ? 0 : c.cumulative,
                                                 c.prime_crc32, csv ? std::span<const u64>{} : primes));
        if (csv) {
            prime_writer_.emplace(io::PocketWriter::reopen(c.prime_path, io::Format::bin, c.prime_bytes, c.cumulative,
                                                           c.prime_crc32, primes));
        }
        stream_.emplace(PocketStream::resume(GeneratorState(c.method, std::move(primes), c.mipp), c.next_index,
                                             cfg_.limit, cfg_.sieve));
        emitted_ = c.pockets_emitted;
        custom_seed_ = c.custom_seed;
        last_truncated_ = c.truncated;
        log_ << "resuming at pocket " << c.next_index << " after " << c.cumulative << " primes\n";
        return exit_ok;
    }

    void emit(const Pocket& pocket)
    {
        log_ << describe(pocket) << '\n';
        ++emitted_;
        last_truncated_ = pocket.truncated;
        if (!writer_) {
            buffered_.push_back(pocket);
            return;
        }
        writer_->append(pocket);
        writer_->sync();
        if (prime_writer_) {
            prime_writer_->append_primes(pocket.primes);
            prime_writer_->sync();
        }
        if (cfg_.checkpoint && checkpointing_) save_checkpoint();
    }

    void save_checkpoint()
    {
        const auto& state = stream_->state();
        const auto& primes_out = prime_writer_ ? *prime_writer_ : *writer_;
        checkpoint::Checkpoint c;
        c.method = state.method();
        c.custom_seed = custom_seed_;
        c.mipp = state.frontier_interval_hi();
        c.mpp = state.frontier_max_prime();
        c.cumulative = state.cumulative();
        c.next_index = stream_->next_index();
        c.pockets_emitted = emitted_;
        c.truncated = last_truncated_;
        c.out_path = cfg_.out;
        c.format = cfg_.format;
        c.out_bytes = writer_->bytes();
        c.prime_path = primes_out.path();
        c.prime_format = primes_out.format();
        c.prime_bytes = primes_out.bytes();
        c.prime_crc32 = primes_out.crc();
        checkpoint::save(c, *cfg_.checkpoint);
    }

    int finish()
    {
        if (writer_) {
            writer_->sync();
            return exit_ok;
        }
        switch (cfg_.format) {
        case io::Format::text: out_ << io::to_text(concat_primes(buffered_)); break;
        case io::Format::bin: out_ << io::to_binary(concat_primes(buffered_)); break;
        case io::Format::csv_report:
            out_ << io::csv_header;
            for (const auto& p : buffered_) out_ << io::to_csv(io::report_row(p));
            break;
        }
        out_.flush();
        return out_ ? exit_ok : exit_io;
    }

    std::filesystem::path sidecar_path() const
    {
        auto p = *cfg_.checkpoint;
        p += ".primes";
        return p;
    }

    const GenConfig& cfg_;
    std::ostream& out_;
    std::ostream& log_;
    std::optional<PocketStream> stream_;
    std::optional<io::PocketWriter> writer_;
    std::optional<io::PocketWriter> prime_writer_;
    std::vector<Pocket> buffered_;
    u64 emitted_ = 0;
    bool custom_seed_ = false;
    bool last_truncated_ = false;
    bool checkpointing_ = true;
};

} // namespace detail

/// Generates pockets and streams their primes (or a per-pocket report) to cfg.out ("-" = `out`).
inline int cmd_gen(const GenConfig& cfg, std::ostream& out, std::ostream& log)
{
    if (!cfg.pockets && !cfg.limit) {
        log << "gen: pass --pockets or --limit\n";
        return exit_usage;
    }
    if (cfg.pockets && *cfg.pockets == 0) {
        log << "gen: --pockets must be >= 1\n";
        return exit_usage;
    }
    if (cfg.seed_file && cfg.method != MethodKind::square_plus) {
        log << "gen: --seed-file continues with method 3 only\n";
        return exit_usage;
    }
    if (cfg.checkpoint && cfg.out == "-") {
        log << "gen: --checkpoint needs --out PATH\n";
        return exit_usage;
    }
    try {
        return detail::GenRun(cfg, out, log).run();
    } catch (const error& e) {
        log << "gen: " << e.what() << '\n';
        return exit_for(e);
    }
}

/// Runs the oracle comparison, partition and count-identity checks up to `limit`.
inline int cmd_verify(MethodKind method, u64 limit, std::ostream& out, std::ostream& log,
                      sieve::SieveOptions options = {})
{
    try {
        const auto oracle = verify::PrimeTable::up_to(limit);
        const auto pockets = generate(method, StopCondition::limit(limit), options);
        const auto primes = concat_primes(pockets);
        bool ok = true;

        if (primes == oracle.primes) {
            out << "PASS oracle_agreement method=" << method_number(method) << " limit=" << limit
                << " primes=" << primes.size() << '\n';
        } else {
            ok = false;
            std::size_t i = 0;
            while (i < primes.size() && i < oracle.primes.size() && primes[i] == oracle.primes[i]) ++i;
            out << "FAIL oracle_agreement index=" << i + 1 << " generated="
                << (i < primes.size() ? std::to_string(primes[i]) : "none")
                << " oracle=" << (i < oracle.primes.size() ? std::to_string(oracle.primes[i]) : "none") << '\n';
        }

        auto problem = verify::check_partition(pockets);
        if (!problem && (pockets.empty() || pockets.front().interval.lo != 2)) problem = "coverage does not start at 2";
        if (!problem && pockets.back().interval.hi != limit) problem = "coverage stops before the limit";
        if (problem) {
            ok = false;
            out << "FAIL partition " << *problem << '\n';
        } else {
            out << "PASS partition pockets=" << pockets.size() << '\n';
        }

        u64 checked = 0;
        bool identities_ok = true;
        for (u64 k = 1; k <= oracle.primes.size(); ++k) {
            const u128 pk = oracle.primes[k - 1];
            if (pk * (pk + 4) + 3 > limit) break;
            const auto id = verify::count_identity(k, oracle);
            if (!id.equal()) {
                ok = false;
                identities_ok = false;
                out << "FAIL count_identity k=" << k << " lhs=" << id.lhs << " rhs=" << id.rhs << '\n';
                break;
            }
            ++checked;
        }
        if (identities_ok) out << "PASS count_identity k=1.." << checked << '\n';
        return ok ? exit_ok : exit_mismatch;
    } catch (const error& e) {
        log << "verify: " << e.what() << '\n';
        return exit_for(e);
    }
}

/// Pockets 1..n, stopping early (nullopt) when an interval would need --huge-ack.
inline std::optional<std::vector<Pocket>> pockets_up_to(PocketStream& stream, u64 n, bool huge_ack, std::ostream& log)
{
    std::vector<Pocket> out;
    for (const auto& seed : stream.seed_pockets()) {
        if (out.size() >= n) return out;
        out.push_back(seed);
    }
    while (out.size() < n) {
        const auto next = stream.peek_interval();
        if (!next) break;
        if (huge_blocked(*next, huge_ack, log)) return std::nullopt;
        out.push_back(*stream.next_pocket());
    }
    return out;
}

inline bool is_prime_trial(u64 n)
{
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

/// Twin-pair census of the first n standard pockets.
inline int cmd_twins(u64 n, bool csv, bool huge_ack, std::ostream& out, std::ostream& log)
{
    try {
        PocketStream stream(MethodKind::square_plus);
        const auto pockets = pockets_up_to(stream, n, huge_ack, log);
        if (!pockets) return exit_usage;
        bool ok = true;
        if (csv) out << "j,lo,hi,order,twin_pairs,boundary_pair\n";
        for (std::size_t i = 0; i < pockets->size(); ++i) {
            const auto& p = (*pockets)[i];
            std::optional<u64> next_first;
            if (i + 1 < pockets->size()) {
                if (!(*pockets)[i + 1].primes.empty()) next_first = (*pockets)[i + 1].primes.front();
            } else if (is_prime_trial(p.max_prime() + 2)) {
                next_first = p.max_prime() + 2;
            }
            const auto census = verify::twin_census(p, next_first);
            const std::string boundary =
                census.boundary_pair ? "(" + std::to_string(census.boundary_pair->first) + "," +
                                           std::to_string(census.boundary_pair->second) + ")"
                                     : "-";
            if (csv) {
                out << p.index << ',' << p.interval.lo << ',' << p.interval.hi << ',' << p.order() << ','
                    << census.count() << ',' << boundary << '\n';
            } else {
                out << "pocket " << p.index << " [" << p.interval.lo << ", " << p.interval.hi << "] order "
                    << p.order() << " twin_pairs " << census.count() << " boundary " << boundary;
                if (!census.pairs.empty()) {
                    out << " first (" << census.pairs.front().first << "," << census.pairs.front().second << ")";
                }
                out << '\n';
            }
            if (p.index >= 2 && census.count() == 0) {
                ok = false;
                log << "pocket " << p.index << " holds no twin pair\n";
            }
        }
        return ok ? exit_ok : exit_mismatch;
    } catch (const error& e) {
        log << "twins: " << e.what() << '\n';
        return exit_for(e);
    }
}

/// Frontier states the tightness check runs on: the standard pockets 1..3 plus restarts from
/// all primes up to each requested value.
inline std::vector<GeneratorState> tightness_frontiers(const std::vector<u64>& custom_tops)
{
    std::vector<GeneratorState> states;
    PocketStream stream(MethodKind::square_plus);
    states.push_back(stream.state());
    for (int i = 0; i < 2; ++i) {
        stream.next_pocket();
        states.push_back(stream.state());
    }
    for (u64 top : custom_tops) {
        const auto primes = verify::oracle_sieve(top);
        if (primes.empty() || primes.back() != top) {
            throw error(errc::not_prime, "frontier " + std::to_string(top) + " is not prime");
        }
        states.push_back(seed_state_custom(primes));
    }
    return states;
}

inline int cmd_tightness(u64 extra, const std::vector<u64>& custom_tops, std::ostream& out, std::ostream& log)
{
    try {
        bool ok = true;
        for (const auto& state : tightness_frontiers(custom_tops)) {
            const auto r = verify::tightness_demo(state, extra);
            const u64 mpp = r.max_prime;
            out << "frontier MpP=" << mpp << " extra=" << extra << " interval=[" << r.widened.lo << ", "
                << r.widened.hi << "] ";
            if (r.works()) {
                out << "works (top = " << r.widened.hi << ")\n";
            } else {
                out << "fails_at " << *r.fails_at << '\n';
            }
            const u64 square = (mpp + 2) * (mpp + 2);
            const bool expect_failure = extra == 4 && is_prime_trial(mpp + 2);
            const bool consistent = expect_failure ? (r.fails_at == square && !is_prime_trial(*r.fails_at))
                                                   : r.works();
            if (!consistent) {
                ok = false;
                log << "unexpected outcome at MpP=" << mpp << '\n';
            }
        }
        return ok ? exit_ok : exit_mismatch;
    } catch (const error& e) {
        log << "tightness: " << e.what() << '\n';
        return exit_for(e);
    }
}

inline int cmd_zeta(double z, u64 k, u64 truncation, bool csv, std::ostream& out, std::ostream& log)
{
    try {
        const auto r = zeta::euler_residual(z, k, truncation);
        out << std::setprecision(15);
        if (csv) {
            out << "z,k,truncation,product_side,survivor_side,gap,tail_bound,within\n"
                << z << ',' << k << ',' << truncation << ',' << r.product_side << ',' << r.survivor_side << ','
                << r.gap << ',' << r.tail_bound << ',' << (r.within_bound() ? "true" : "false") << '\n';
        } else {
            out << "z=" << z << " k=" << k << " truncation=" << truncation << '\n'
                << "product_side  " << r.product_side << '\n'
                << "survivor_side " << r.survivor_side << '\n'
                << "gap           " << r.gap << '\n'
                << "tail_bound    " << r.tail_bound << '\n'
                << (r.within_bound() ? "PASS" : "FAIL") << " gap below tail bound\n";
        }
        return r.within_bound() ? exit_ok : exit_mismatch;
    } catch (const error& e) {
        log << "zeta: " << e.what() << '\n';
        return exit_for(e);
    }
}

/// Order sequence of the first n pockets, comma separated.
inline int cmd_orders(MethodKind method, u64 n, bool huge_ack, std::ostream& out, std::ostream& log,
                      sieve::SieveOptions options = {})
{
    try {
        PocketStream stream(method, std::nullopt, options);
        const auto pockets = pockets_up_to(stream, n, huge_ack, log);
        if (!pockets) return exit_usage;
        for (std::size_t i = 0; i < pockets->size(); ++i) out << (i ? "," : "") << (*pockets)[i].order();
        out << '\n';
        return exit_ok;
    } catch (const error& e) {
        log << "orders: " << e.what() << '\n';
        return exit_for(e);
    }
}

} // namespace pocketprimes::cli
