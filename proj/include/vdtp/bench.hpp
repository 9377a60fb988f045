#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vdtp/channel.hpp"
#include "vdtp/config.hpp"
#include "vdtp/sim.hpp"

namespace vdtp {

// ---- experiment matrix ------------------------------------------------------

struct ExperimentSpec {
    std::vector<ProtocolConfig> configs{preset_configs().begin(), preset_configs().end()};
    std::vector<uint64_t> file_sizes = {100'000, 500'000, 1'000'000, 5'000'000, 10'000'000};
    int repetitions = 15;
    std::vector<MobilityProfile> regimes = {low_speed_profile(), high_speed_profile()};
    ChannelParams channel;
    uint64_t master_seed = 1;
};

// repetitions >= 1, at least one config/size/regime, unique names, positive
// sizes; sub-structures validated too. Throws std::invalid_argument.
void validate(const ExperimentSpec& spec);

// Deterministic hash over every parameter of the spec, rendered as 16 hex
// digits. Persisted next to results so a result set can be matched back to
// the exact experiment that produced it.
std::string spec_fingerprint(const ExperimentSpec& spec);

struct TrialResult {
    std::string config;
    uint64_t file_size_bytes = 0;
    std::string regime;
    int rep = 0;  // 1-based repetition index
    TrialOutcome outcome = TrialOutcome::incomplete;
    double elapsed_s = 0;
    uint64_t lost_packets = 0;
    uint64_t lost_bytes = 0;
    double goodput_kbs = 0;  // meaningful only when outcome == complete

    bool operator==(const TrialResult&) const = default;
};

struct ResultSet {
    std::string fingerprint;   // empty when unknown (e.g. CSV loaded without metadata)
    uint64_t master_seed = 0;
    std::vector<TrialResult> trials;

    bool operator==(const ResultSet&) const = default;
};

// One simulated trial per matrix cell, nested config -> size -> repetition ->
// regime; the trial at flat cell index i runs on rng stream
// splitmix64(master_seed) ^ i. Deterministic: same spec, same ResultSet.
ResultSet run_matrix(const ExperimentSpec& spec);

// file_size / elapsed / 1000 (decimal kilobytes). Throws std::domain_error
// when elapsed <= 0.
double goodput_kbs(uint64_t file_size_bytes, double elapsed_s);

// ---- summary tables ---------------------------------------------------------

struct AggregateCell {
    uint64_t completed = 0;         // trials the means below are taken over
    double lost_packets_mean = 0;
    double goodput_mean_kbs = 0;
};

struct AggregateRow {
    std::string config;  // config name, "AVERAGE" (per size), or "GLOBAL"
    std::optional<uint64_t> file_size_bytes;  // empty on the GLOBAL row
    std::vector<AggregateCell> by_regime;     // parallel to AggregateReport::regimes
    uint64_t refused = 0;                     // refusals across the row's trials
};

// Per (file_size, config, regime): mean lost packets and mean goodput over
// completed trials, refusals counted separately. Each size block ends with
// an AVERAGE row (mean of the config means); a final GLOBAL row averages
// the AVERAGE rows.
struct AggregateReport {
    std::vector<std::string> regimes;  // column order, first appearance
    std::vector<AggregateRow> rows;
};

AggregateReport aggregate(const ResultSet& rs);  // throws std::invalid_argument if empty

struct LostDataRow {
    std::string config;
    std::vector<uint64_t> by_regime;  // parallel to LostDataReport::regimes
    uint64_t total = 0;
};

// Total lost bytes per config, split by regime, sorted ascending by total.
struct LostDataReport {
    std::vector<std::string> regimes;
    std::vector<LostDataRow> rows;
};

LostDataReport lost_data_table(const ResultSet& rs);

// ---- persistence ------------------------------------------------------------

// What went wrong reading a results file; mapped to distinct messages so
// callers can tell a corrupt file from a missing one.
enum class ResultIoKind : uint8_t { io, schema, corrupt_row, empty };

class ResultIoError : public std::runtime_error {
  public:
    ResultIoError(ResultIoKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ResultIoKind kind() const { return kind_; }

  private:
    ResultIoKind kind_;
};

// Writes the trials as CSV (header `config,file_size_bytes,regime,rep,
// outcome,elapsed_s,lost_packets,lost_bytes,goodput_kbs`) plus a sidecar
// `<path>.meta.json` carrying fingerprint and seed. Throws ResultIoError.
void persist(const ResultSet& rs, const std::string& csv_path);

// Reads a CSV written by persist(); restores fingerprint/seed from the
// sidecar when present. load_results(persist(rs)) == rs.
ResultSet load_results(const std::string& csv_path);

}  // namespace vdtp
