#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <mclump/mclump.hpp>

namespace {

using nlohmann::json;

// Exit codes: 0 success, 1 completed but the check/certificate failed,
// 2 input validation, 3 resource cap, 4 impossible observation,
// 5 ambiguous observation.
constexpr int kExitCheckFailed = 1;
constexpr int kExitValidation = 2;
constexpr int kExitResource = 3;
constexpr int kExitImpossible = 4;
constexpr int kExitAmbiguous = 5;

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty())
        std::cout << text;
    else
        mclump::write_text(out_path, text);
}

mclump::Solver parse_solver(const std::string& name) {
    if (name == "exact") return mclump::Solver::exact;
    if (name == "greedy") return mclump::Solver::greedy;
    return mclump::Solver::automatic;
}

void hint_on_exact_cap(const mclump::ResourceError& e) {
    if (std::string(e.what()).find("exact") != std::string::npos)
        std::cerr << "hint: --solver greedy avoids the exact-solver cap\n";
}

void require_format(const std::string& format, std::initializer_list<const char*> allowed) {
    for (const char* a : allowed)
        if (format == a) return;
    throw mclump::ValidationError("unsupported --format " + format + " for this command");
}

int run_analyze(const std::string& chain_path, bool bits, const std::string& format,
                const std::string& out_path) {
    require_format(format, {"json"});
    mclump::ChainFile cf = mclump::load_chain(chain_path);
    emit(out_path, mclump::chain_summary_json(cf.P, bits).dump(2) + "\n");
    return 0;
}

int run_lump(const std::string& chain_path, double epsilon, const std::string& solver,
             bool bits, const std::string& format, const std::string& out_path) {
    require_format(format, {"json", "csv", "dot"});
    mclump::ChainFile cf = mclump::load_chain(chain_path);
    mclump::LossyLumping lumped = mclump::lossy_lump(cf.P, epsilon, parse_solver(solver));
    mclump::Graph characteristic = mclump::epsilon_characteristic_graph(cf.P, epsilon);
    mclump::LosslessCertificate cert = mclump::certify_lossless(cf.P, lumped.g);
    if (format == "csv") {
        emit(out_path, mclump::edge_list(characteristic));
    } else if (format == "dot") {
        emit(out_path, mclump::dot(characteristic, "characteristic"));
    } else {
        json cert_json{{"lossless", cert.lossless}};
        if (cert.lossless)
            cert_json["witness"] = nullptr;
        else
            cert_json["witness"] =
                json{{"u", cert.u}, {"v", cert.v}, {"accessor", cert.accessor}};
        json j{{"epsilon", epsilon},
               {"exact", lumped.exact},
               {"lumping", mclump::lumping_json(lumped.g)},
               {"partition", mclump::partition_json(lumped.partition)},
               {"loss", mclump::loss_report_json(lumped.report, bits)},
               {"graph", mclump::graph_json(characteristic)},
               {"certificate", cert_json}};
        emit(out_path, j.dump(2) + "\n");
    }
    return cert.lossless ? 0 : kExitCheckFailed;
}

int run_block(const std::string& chain_path, std::size_t max_k, const std::string& solver,
              bool bits, const std::string& format, const std::string& out_path) {
    require_format(format, {"json"});
    mclump::ChainFile cf = mclump::load_chain(chain_path);
    std::ostringstream lines;
    for (std::size_t k = 1; k <= max_k; ++k) {
        try {
            mclump::BlockAnalysis a = mclump::block_analysis(cf.P, k, parse_solver(solver));
            lines << mclump::block_record_json(a, bits).dump() << "\n";
        } catch (const mclump::ResourceError& e) {
            emit(out_path, lines.str());
            std::cerr << "error: " << e.what() << " (sweep stopped at K = " << k << ")\n";
            hint_on_exact_cap(e);
            return kExitResource;
        }
    }
    emit(out_path, lines.str());
    return 0;
}

int run_decode(const std::string& chain_path, const std::string& lumping_path,
               const std::string& obs_path, int x1, const std::string& format,
               const std::string& out_path) {
    require_format(format, {"json"});
    mclump::ChainFile cf = mclump::load_chain(chain_path);
    mclump::LumpingFunction g = mclump::load_lumping(lumping_path);
    std::vector<int> obs = mclump::load_observations(obs_path);
    if (g.domain_size() != cf.P.size())
        throw mclump::ValidationError("lumping domain does not match chain size");
    if (obs.empty()) throw mclump::ValidationError("observation sequence is empty");
    if (x1 < 0 || static_cast<std::size_t>(x1) >= cf.P.size())
        throw mclump::ValidationError("initial state " + std::to_string(x1) + " out of range");

    mclump::DecodeResult res;
    if (obs[0] != g(static_cast<std::size_t>(x1))) {
        // the first observation must be the lumped initial state
        res.status = mclump::DecodeStatus::impossible;
        res.failure_index = 0;
    } else {
        std::span<const int> tail(obs.data() + 1, obs.size() - 1);
        res = mclump::reconstruct(adjacency(cf.P), g, x1, tail);
        if (res.status != mclump::DecodeStatus::ok) res.failure_index += 1;
    }
    res.states.insert(res.states.begin(), x1);
    emit(out_path, mclump::decode_json(res).dump(2) + "\n");
    switch (res.status) {
        case mclump::DecodeStatus::ok: return 0;
        case mclump::DecodeStatus::impossible: return kExitImpossible;
        default: return kExitAmbiguous;
    }
}

int run_check(const std::string& joint_path, const std::string& channel_path, bool bits,
              const std::string& format, const std::string& out_path) {
    require_format(format, {"json"});
    mclump::JointDistribution Q = mclump::load_joint(joint_path);
    mclump::Matrix W = mclump::load_channel(channel_path);
    mclump::ZeroErrorCheck c = mclump::check_zero_error(Q, W);
    emit(out_path, mclump::zero_error_json(c, bits).dump(2) + "\n");
    return c.consistent ? 0 : kExitCheckFailed;
}

int run_sideinfo(const std::string& chain_path, const std::string& channel_path, std::size_t K,
                 const std::string& format, const std::string& out_path) {
    require_format(format, {"json", "csv", "dot"});
    mclump::ChainFile cf = mclump::load_chain(chain_path);
    mclump::Matrix W = mclump::load_channel(channel_path);
    mclump::Graph g = mclump::sideinfo_characteristic_graph_formula(cf.P, W, K);
    if (format == "csv") {
        emit(out_path, mclump::edge_list(g));
    } else if (format == "dot") {
        emit(out_path, mclump::dot(g, "sideinfo"));
    } else {
        json j{{"K", K}, {"n", g.size()}, {"edges", g.edges()}};
        emit(out_path, j.dump(2) + "\n");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"zero-error lumping analysis for finite Markov chains"};
    app.require_subcommand(1);

    std::string chain_path, channel_path, joint_path, lumping_path, obs_path;
    std::string out_path, format = "json", solver = "auto";
    double epsilon = 0.0;
    std::size_t block_k = 1;
    std::uint64_t seed = 0;
    bool bits = false;
    int x1 = 0;

    auto add_common = [&](CLI::App* cmd, bool with_solver) {
        cmd->add_option("--out", out_path, "write the report to this path instead of stdout");
        cmd->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"json", "csv", "dot"}));
        cmd->add_flag("--bits", bits, "report entropies in bits instead of nats");
        cmd->add_option("--seed", seed,
                        "random seed (accepted for interface stability; the provided "
                        "commands are deterministic)");
        if (with_solver)
            cmd->add_option("--solver", solver, "clique partition solver")
                ->check(CLI::IsMember({"exact", "greedy", "auto"}));
    };

    CLI::App* analyze = app.add_subcommand(
        "analyze", "structure, stationary distribution and entropy rates of a chain");
    analyze->add_option("chain", chain_path, "chain file (.json or .csv)")->required();
    add_common(analyze, false);

    CLI::App* lump = app.add_subcommand(
        "lump", "derive a minimum lossless (or thresholded lossy) lumping");
    lump->add_option("chain", chain_path, "chain file (.json or .csv)")->required();
    lump->add_option("--epsilon", epsilon,
                     "ignore transition probabilities at or below this threshold");
    add_common(lump, true);

    CLI::App* blockc = app.add_subcommand(
        "block", "block-length sweep of minimum alphabet sizes and rates");
    blockc->add_option("chain", chain_path, "chain file (.json or .csv)")->required();
    blockc->add_option("--K", block_k, "largest block length in the sweep")
        ->required()
        ->check(CLI::PositiveNumber);
    add_common(blockc, true);

    CLI::App* decode = app.add_subcommand(
        "decode", "reconstruct a state sequence from its lumped observations");
    decode->add_option("chain", chain_path, "chain file (.json or .csv)")->required();
    decode->add_option("lumping", lumping_path, "lumping file (.json)")->required();
    decode->add_option("observations", obs_path,
                       "observed lumped sequence y1..yn (JSON array or whitespace separated)")
        ->required();
    decode->add_option("x1", x1, "known initial state")->required();
    add_common(decode, false);

    CLI::App* check = app.add_subcommand(
        "check-prop1", "verify that side information separates exactly the confusable pairs");
    check->add_option("joint", joint_path, "joint distribution file (.json)")->required();
    check->add_option("channel", channel_path, "channel file (.json)")->required();
    add_common(check, false);

    CLI::App* sideinfo = app.add_subcommand(
        "sideinfo", "blocked characteristic graph of a source with channel side information");
    sideinfo->add_option("chain", chain_path, "chain file (.json or .csv)")->required();
    sideinfo->add_option("channel", channel_path, "channel file (.json)")->required();
    sideinfo->add_option("--K", block_k, "block length")->required()->check(CLI::PositiveNumber);
    add_common(sideinfo, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*analyze) return run_analyze(chain_path, bits, format, out_path);
        if (*lump) return run_lump(chain_path, epsilon, solver, bits, format, out_path);
        if (*blockc) return run_block(chain_path, block_k, solver, bits, format, out_path);
        if (*decode)
            return run_decode(chain_path, lumping_path, obs_path, x1, format, out_path);
        if (*check) return run_check(joint_path, channel_path, bits, format, out_path);
        if (*sideinfo)
            return run_sideinfo(chain_path, channel_path, block_k, format, out_path);
    } catch (const mclump::ResourceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        hint_on_exact_cap(e);
        return kExitResource;
    } catch (const mclump::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitValidation;
}
