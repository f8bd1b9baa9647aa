#include <CLI11.hpp>

#include <iostream>
#include <thread>

#include "pocketprimes/pocketprimes.hpp"

namespace pp = pocketprimes;

namespace {

struct SieveFlags {
    pp::u64 segment_bytes = 0;
    unsigned threads = 0;
    std::string layout = "odd";
    bool full_base = false;

    void add(CLI::App* cmd)
    {
        cmd->add_option("--segment-bytes", segment_bytes, "Bytes of bit flags per segment (default: 2^20 integers)")
            ->envname("POCKETPRIMES_SEGMENT_BYTES")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--threads", threads, "Worker threads for segment sieving (default: all cores)");
        cmd->add_option("--layout", layout, "Segment layout")->check(CLI::IsMember({"odd", "full"}));
        cmd->add_flag("--full-base", full_base, "Mark with every base prime, not only those up to sqrt");
    }

    pp::sieve::SieveOptions options() const
    {
        pp::sieve::SieveOptions o;
        o.layout = layout == "full" ? pp::sieve::Layout::full : pp::sieve::Layout::packed_odd;
        if (segment_bytes != 0) o.segment_capacity = segment_bytes * (o.layout == pp::sieve::Layout::full ? 8 : 16);
        o.threads = threads != 0 ? threads : std::max(1U, std::thread::hardware_concurrency());
        o.full_base = full_base;
        return o;
    }
};

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Prime generation by successive pockets of primes"};
    app.require_subcommand(1);

    int status = 0;

    // gen
    pp::cli::GenConfig gen;
    int gen_method = 3;
    pp::u64 gen_pockets = 0;
    pp::u64 gen_limit = 0;
    std::string gen_format = "text";
    std::string seed_file;
    std::string checkpoint;
    pp::u64 pause_after = 0;
    SieveFlags gen_sieve;
    auto* gen_cmd = app.add_subcommand("gen", "Generate primes pocket by pocket");
    gen_cmd->add_option("--method", gen_method, "Interval rule")->check(CLI::Range(1, 3));
    auto* pockets_opt = gen_cmd->add_option("--pockets", gen_pockets, "Number of pockets, seed pockets included");
    auto* limit_opt = gen_cmd->add_option("--limit", gen_limit, "Largest integer to examine");
    gen_cmd->add_option("--out", gen.out, "Output path, - for stdout");
    gen_cmd->add_option("--format", gen_format, "Output format")->check(CLI::IsMember({"text", "bin", "csv-report"}));
    gen_cmd->add_flag("--huge-ack", gen.huge_ack, "Allow sieving intervals above 2^32");
    auto* seed_opt = gen_cmd->add_option("--seed-file", seed_file, "Known primes (text format) to restart from");
    auto* ckpt_opt = gen_cmd->add_option("--checkpoint", checkpoint, "Checkpoint manifest, resumed when present");
    auto* pause_opt = gen_cmd->add_option("--pause-after", pause_after, "Stop after this many new pockets");
    gen_sieve.add(gen_cmd);
    gen_cmd->callback([&] {
        gen.method = pp::method_from_number(gen_method);
        if (*pockets_opt) gen.pockets = gen_pockets;
        if (*limit_opt) gen.limit = gen_limit;
        gen.format = pp::io::parse_format(gen_format);
        if (*seed_opt) gen.seed_file = seed_file;
        if (*ckpt_opt) gen.checkpoint = checkpoint;
        if (*pause_opt) gen.pause_after = pause_after;
        gen.sieve = gen_sieve.options();
        status = pp::cli::cmd_gen(gen, std::cout, std::cerr);
    });

    // verify
    int verify_method = 3;
    pp::u64 verify_limit = 1'000'000;
    SieveFlags verify_sieve;
    auto* verify_cmd = app.add_subcommand("verify", "Check generated primes against the reference sieve");
    verify_cmd->add_option("--method", verify_method, "Interval rule")->check(CLI::Range(1, 3));
    verify_cmd->add_option("--limit", verify_limit, "Check all primes up to this value")->required();
    verify_sieve.add(verify_cmd);
    verify_cmd->callback([&] {
        status = pp::cli::cmd_verify(pp::method_from_number(verify_method), verify_limit, std::cout, std::cerr,
                                     verify_sieve.options());
    });

    // twins
    pp::u64 twin_pockets = 4;
    bool twin_csv = false;
    bool twin_huge = false;
    auto* twins_cmd = app.add_subcommand("twins", "Twin-prime census of the standard pockets");
    twins_cmd->add_option("--pockets", twin_pockets, "Number of standard pockets")->check(CLI::PositiveNumber);
    twins_cmd->add_flag("--csv", twin_csv, "CSV output");
    twins_cmd->add_flag("--huge-ack", twin_huge, "Allow sieving intervals above 2^32");
    twins_cmd->callback([&] { status = pp::cli::cmd_twins(twin_pockets, twin_csv, twin_huge, std::cout, std::cerr); });

    // tightness
    pp::u64 extra = 3;
    std::vector<pp::u64> frontiers;
    auto* tight_cmd = app.add_subcommand("tightness", "Sieve the widened interval MpP^2 + 4 MpP + extra");
    tight_cmd->add_option("--extra", extra, "Width offset")->check(CLI::IsMember({3, 4}));
    tight_cmd->add_option("--frontier", frontiers, "Also restart from all primes up to this prime");
    tight_cmd->callback([&] { status = pp::cli::cmd_tightness(extra, frontiers, std::cout, std::cerr); });

    // zeta
    double z = 2.0;
    pp::u64 zeta_k = 1;
    pp::u64 trunc = 1'000'000;
    bool zeta_csv = false;
    auto* zeta_cmd = app.add_subcommand("zeta", "Euler product against the coprime survivor series");
    zeta_cmd->add_option("--z", z, "Real exponent >= 1.5");
    zeta_cmd->add_option("--k", zeta_k, "Number of leading primes removed");
    zeta_cmd->add_option("--trunc", trunc, "Series terms summed");
    zeta_cmd->add_flag("--csv", zeta_csv, "CSV output");
    zeta_cmd->callback([&] { status = pp::cli::cmd_zeta(z, zeta_k, trunc, zeta_csv, std::cout, std::cerr); });

    // orders
    int order_method = 3;
    pp::u64 order_n = 4;
    bool order_huge = false;
    SieveFlags order_sieve;
    auto* orders_cmd = app.add_subcommand("orders", "Order sequence of the first pockets");
    orders_cmd->add_option("--method", order_method, "Interval rule")->check(CLI::Range(1, 3));
    orders_cmd->add_option("--pockets", order_n, "Number of pockets")->check(CLI::PositiveNumber);
    orders_cmd->add_flag("--huge-ack", order_huge, "Allow sieving intervals above 2^32");
    order_sieve.add(orders_cmd);
    orders_cmd->callback([&] {
        status = pp::cli::cmd_orders(pp::method_from_number(order_method), order_n, order_huge, std::cout, std::cerr,
                                     order_sieve.options());
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : pp::cli::exit_usage;
    } catch (const pp::error& e) {
        std::cerr << e.what() << '\n';
        return pp::cli::exit_for(e);
    }
    return status;
}
