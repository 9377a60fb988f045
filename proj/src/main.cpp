#include <chrono>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "vdtp/bench.hpp"
#include "vdtp/crc32.hpp"
#include "vdtp/endpoint.hpp"
#include "vdtp/log.hpp"
#include "vdtp/report.hpp"
#include "vdtp/scenario.hpp"
#include "vdtp/stats.hpp"
#include "vdtp/transfer.hpp"
#include "vdtp/version.hpp"

namespace {

volatile std::sig_atomic_t g_stop = 0;

extern "C" void on_signal(int) { g_stop = 1; }

bool write_file(const std::string& path, const void* data, std::size_t size) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) return false;
    f.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
    return f.flush().good();
}

int cmd_run_sim(const std::string& scenario_path, const std::string& out_path,
                const std::optional<uint64_t>& seed) {
    vdtp::ExperimentSpec spec;
    if (!scenario_path.empty()) {
        std::ifstream f(scenario_path, std::ios::binary);
        if (!f) {
            std::fprintf(stderr, "cannot read scenario %s\n", scenario_path.c_str());
            return 2;
        }
        std::stringstream ss;
        ss << f.rdbuf();
        try {
            spec = vdtp::parse_scenario(ss.str());
        } catch (const vdtp::ScenarioError& e) {
            std::fprintf(stderr, "%s\n", e.what());
            return 1;
        }
    }
    if (seed.has_value()) spec.master_seed = *seed;

    auto t0 = std::chrono::steady_clock::now();
    vdtp::ResultSet rs = vdtp::run_matrix(spec);
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    try {
        vdtp::persist(rs, out_path);
    } catch (const vdtp::ResultIoError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    }
    std::printf("%zu trials in %.2f s -> %s\n", rs.trials.size(), wall, out_path.c_str());
    return 0;
}

int cmd_serve(const std::string& bind, const std::string& root, const std::string& config_name) {
    auto config = vdtp::find_preset(config_name);
    if (!config.has_value()) {
        std::fprintf(stderr, "unknown config '%s'\n", config_name.c_str());
        return 1;
    }
    std::error_code ec;
    if (!std::filesystem::is_directory(root, ec) || ec) {
        std::fprintf(stderr, "root directory not readable: %s\n", root.c_str());
        return 2;
    }
    try {
        vdtp::UdpEndpoint endpoint(bind);
        std::signal(SIGINT, on_signal);
        std::signal(SIGTERM, on_signal);
        std::printf("serving %s on %s (%s)\n", root.c_str(), endpoint.local_address().c_str(),
                    config->name.c_str());
        std::fflush(stdout);
        vdtp::DirectoryStore store{root};
        vdtp::serve_loop(endpoint, store, *config, &g_stop);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    }
    return 0;
}

int cmd_fetch(const std::string& peer, const std::string& file_name,
              const std::string& config_name, std::string out_path) {
    auto config = vdtp::find_preset(config_name);
    if (!config.has_value()) {
        std::fprintf(stderr, "unknown config '%s'\n", config_name.c_str());
        return 1;
    }
    if (out_path.empty()) {
        out_path = std::filesystem::path(file_name).filename().string();
        if (out_path.empty()) out_path = "fetched.bin";
    }

    vdtp::FetchResult res;
    try {
        vdtp::UdpEndpoint endpoint("0.0.0.0:0");
        res = vdtp::fetch_file(endpoint, peer, file_name, *config);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    }

    switch (res.outcome) {
        case vdtp::TrialOutcome::complete:
            break;
        case vdtp::TrialOutcome::refused:
            std::fprintf(stderr, "transfer refused: no reply after %u attempts\n",
                         1 + config->max_attempts);
            return 3;
        default:
            if (res.fail_reason == vdtp::FailReason::file_not_found) {
                std::fprintf(stderr, "file not found: %s\n", file_name.c_str());
                return 4;
            }
            std::fprintf(stderr, "checksum mismatch on assembled file\n");
            return 5;
    }

    if (!write_file(out_path, res.bytes.data(), res.bytes.size())) {
        std::fprintf(stderr, "cannot write %s\n", out_path.c_str());
        return 2;
    }
    double elapsed = res.elapsed_s > 0 ? res.elapsed_s : 1e-9;
    std::printf("goodput_kbs=%.3f lost_packets=%llu\n",
                vdtp::goodput_kbs(res.bytes.size(), elapsed),
                static_cast<unsigned long long>(res.retransmissions));
    return 0;
}

int cmd_analyze(const std::string& results_path, const std::string& scope_name,
                std::string out_stem) {
    vdtp::RankScope scope = vdtp::RankScope::combined;
    if (scope_name == "low") {
        scope = vdtp::RankScope::low;
    } else if (scope_name == "high") {
        scope = vdtp::RankScope::high;
    }

    vdtp::ResultSet rs;
    try {
        rs = vdtp::load_results(results_path);
    } catch (const vdtp::ResultIoError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    }
    if (rs.trials.empty()) {
        std::fprintf(stderr, "no trials in %s\n", results_path.c_str());
        return 6;
    }

    if (out_stem.empty()) {
        std::filesystem::path p(results_path);
        p.replace_extension();
        out_stem = p.string();
    }

    vdtp::AggregateReport agg = vdtp::aggregate(rs);
    vdtp::LostDataReport lost = vdtp::lost_data_table(rs);
    vdtp::RankTable ranks;
    try {
        ranks = vdtp::rank_table(rs, scope);
    } catch (const vdtp::InsufficientDataError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 6;
    }

    struct {
        std::string path;
        std::string content;
    } outputs[] = {
        {out_stem + "_aggregate.csv", vdtp::aggregate_csv(agg)},
        {out_stem + "_lost_data.csv", vdtp::lost_data_csv(lost)},
        {out_stem + "_ranks.csv", vdtp::rank_csv(ranks)},
    };
    for (const auto& out : outputs) {
        if (!write_file(out.path, out.content.data(), out.content.size())) {
            std::fprintf(stderr, "cannot write %s\n", out.path.c_str());
            return 2;
        }
    }

    std::printf("%s\n%s\n%s (scope %s)\n%s\n%s", vdtp::aggregate_text(agg).c_str(),
                vdtp::lost_data_text(lost).c_str(), "rank table", scope_name.c_str(),
                vdtp::rank_text(ranks).c_str(), vdtp::rank_json_line(ranks).c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"VDTP file transfer: simulator, benchmark harness, and UDP tools"};
    app.require_subcommand(1);
    app.set_version_flag("--version", vdtp::kToolVersion);

    std::string scenario_path, out_path;
    std::optional<uint64_t> seed;
    auto* run_sim = app.add_subcommand("run-sim", "Run the simulated experiment matrix");
    run_sim->add_option("--scenario", scenario_path, "Scenario JSON (defaults apply if omitted)");
    run_sim->add_option("--out", out_path, "Results CSV path")->required();
    run_sim->add_option("--seed", seed, "Override the scenario's master seed");

    std::string bind_addr, root_dir, serve_config{"EXPERTS"};
    auto* serve = app.add_subcommand("serve", "Serve files over UDP (owner role)");
    serve->add_option("--bind", bind_addr, "ip:port to listen on")->required();
    serve->add_option("--root", root_dir, "Directory of served files")->required();
    serve->add_option("--config", serve_config, "Preset config name");

    std::string peer, fetch_name, fetch_config{"EXPERTS"}, fetch_out;
    auto* fetch = app.add_subcommand("fetch", "Fetch one file over UDP (petitioner role)");
    fetch->add_option("peer", peer, "Owner address ip:port")->required();
    fetch->add_option("file", fetch_name, "File name to request")->required();
    fetch->add_option("--config", fetch_config, "Preset config name");
    fetch->add_option("--out", fetch_out, "Output path (default: the file's base name)");

    std::string results_path, scope{"combined"}, analyze_out;
    auto* analyze = app.add_subcommand("analyze", "Summarize a results CSV");
    analyze->add_option("results", results_path, "Results CSV from run-sim")->required();
    analyze->add_option("--scope", scope, "Trials to rank")
        ->check(CLI::IsMember({"low", "high", "combined"}));
    analyze->add_option("--out", analyze_out, "Report file stem (default: results path)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;  // pin all usage errors to exit 1
    }

    if (run_sim->parsed()) return cmd_run_sim(scenario_path, out_path, seed);
    if (serve->parsed()) return cmd_serve(bind_addr, root_dir, serve_config);
    if (fetch->parsed()) return cmd_fetch(peer, fetch_name, fetch_config, fetch_out);
    if (analyze->parsed()) return cmd_analyze(results_path, scope, analyze_out);
    return 1;
}
