#include "vdtp/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "vdtp/crc32.hpp"
#include "vdtp/version.hpp"

namespace vdtp {

void validate(const ExperimentSpec& spec) {
    if (spec.repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
    if (spec.configs.empty()) throw std::invalid_argument("at least one config required");
    if (spec.file_sizes.empty()) throw std::invalid_argument("at least one file size required");
    if (spec.regimes.empty()) throw std::invalid_argument("at least one regime required");

    std::set<std::string> names;
    for (const auto& c : spec.configs) {
        validate(c);
        if (c.name.empty() || c.name.find_first_of(",\n") != std::string::npos) {
            throw std::invalid_argument("config name must be non-empty and comma-free: '" +
                                        c.name + "'");
        }
        if (!names.insert(c.name).second) {
            throw std::invalid_argument("duplicate config name: " + c.name);
        }
    }
    for (uint64_t s : spec.file_sizes) {
        if (s < 1) throw std::invalid_argument("file sizes must be positive");
    }
    names.clear();
    for (const auto& m : spec.regimes) {
        validate(m);
        if (m.name.empty() || m.name.find_first_of(",\n") != std::string::npos) {
            throw std::invalid_argument("regime name must be non-empty and comma-free: '" +
                                        m.name + "'");
        }
        if (!names.insert(m.name).second) {
            throw std::invalid_argument("duplicate regime name: " + m.name);
        }
    }
    validate(spec.channel);
}

std::string spec_fingerprint(const ExperimentSpec& spec) {
    std::string canon;
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g;", v);
        canon += buf;
    };
    auto uns = [&](uint64_t v) {
        canon += std::to_string(v);
        canon += ';';
    };
    for (const auto& c : spec.configs) {
        canon += c.name;
        canon += ';';
        uns(c.chunk_size);
        num(c.retransmission_time);
        uns(c.max_attempts);
    }
    for (uint64_t s : spec.file_sizes) uns(s);
    uns(static_cast<uint64_t>(spec.repetitions));
    for (const auto& m : spec.regimes) {
        canon += m.name;
        canon += ';';
        num(m.speed_min);
        num(m.speed_max);
        num(m.mean_distance);
        num(m.distance_min);
        num(m.distance_max);
        num(m.reversion_rate);
        num(m.noise_coefficient);
    }
    num(spec.channel.capacity);
    num(spec.channel.radio_range);
    num(spec.channel.base_loss);
    num(spec.channel.loss_exponent);
    num(spec.channel.processing_delay);
    uns(spec.channel.rng_seed);
    uns(spec.master_seed);

    uint64_t h = 1469598103934665603ull;  // FNV-1a 64
    for (unsigned char ch : canon) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return buf;
}

double goodput_kbs(uint64_t file_size_bytes, double elapsed_s) {
    if (!(elapsed_s > 0)) {
        throw std::domain_error("goodput needs elapsed > 0, got " + std::to_string(elapsed_s));
    }
    return static_cast<double>(file_size_bytes) / elapsed_s / 1000.0;
}

ResultSet run_matrix(const ExperimentSpec& spec) {
    validate(spec);

    // All sizes share one generated buffer (prefix-stable), hashed once each.
    uint64_t max_size = *std::max_element(spec.file_sizes.begin(), spec.file_sizes.end());
    auto base = generate_payload(max_size, kPayloadContentSeed);
    std::vector<StoredFile> files(spec.file_sizes.size());
    for (std::size_t j = 0; j < spec.file_sizes.size(); ++j) {
        auto bytes = std::make_shared<const std::vector<uint8_t>>(
            base.begin(), base.begin() + static_cast<std::ptrdiff_t>(spec.file_sizes[j]));
        files[j].crc32 = crc32_of(bytes->data(), bytes->size());
        files[j].bytes = std::move(bytes);
    }

    ResultSet rs;
    rs.fingerprint = spec_fingerprint(spec);
    rs.master_seed = spec.master_seed;
    rs.trials.reserve(spec.configs.size() * spec.file_sizes.size() *
                      static_cast<std::size_t>(spec.repetitions) * spec.regimes.size());

    uint64_t scrambled = splitmix64(spec.master_seed);
    uint64_t cell = 0;
    for (const auto& cfg : spec.configs) {
        for (std::size_t j = 0; j < spec.file_sizes.size(); ++j) {
            for (int rep = 1; rep <= spec.repetitions; ++rep) {
                for (const auto& regime : spec.regimes) {
                    SimScenario sc;
                    sc.config = cfg;
                    sc.file_size = spec.file_sizes[j];
                    sc.mobility = regime;
                    sc.channel = spec.channel;
                    sc.seed = scrambled ^ cell;
                    sc.file = &files[j];
                    SimResult r = sim_run(sc);

                    TrialResult t;
                    t.config = cfg.name;
                    t.file_size_bytes = spec.file_sizes[j];
                    t.regime = regime.name;
                    t.rep = rep;
                    t.outcome = r.outcome;
                    t.elapsed_s = r.elapsed;
                    t.lost_packets = r.lost_packets;
                    t.lost_bytes = r.lost_bytes;
                    if (r.outcome == TrialOutcome::complete) {
                        t.goodput_kbs = goodput_kbs(spec.file_sizes[j], r.elapsed);
                    }
                    rs.trials.push_back(std::move(t));
                    ++cell;
                }
            }
        }
    }
    return rs;
}

// ---- summary tables ---------------------------------------------------------

namespace {

// Index of `name` in `order`, appending it on first sight.
template <typename T>
std::size_t index_of(std::vector<T>& order, const T& value) {
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (order[i] == value) return i;
    }
    order.push_back(value);
    return order.size() - 1;
}

struct CellAcc {
    uint64_t completed = 0;
    double lost_sum = 0;
    double goodput_sum = 0;
    uint64_t refused = 0;
};

}  // namespace

AggregateReport aggregate(const ResultSet& rs) {
    if (rs.trials.empty()) throw std::invalid_argument("aggregate: empty result set");

    std::vector<std::string> configs, regimes;
    std::vector<uint64_t> sizes;
    for (const auto& t : rs.trials) {
        index_of(configs, t.config);
        index_of(regimes, t.regime);
        index_of(sizes, t.file_size_bytes);
    }

    // acc[size][config][regime]
    std::vector<std::vector<std::vector<CellAcc>>> acc(
        sizes.size(),
        std::vector<std::vector<CellAcc>>(configs.size(), std::vector<CellAcc>(regimes.size())));
    for (const auto& t : rs.trials) {
        auto& cell = acc[index_of(sizes, t.file_size_bytes)][index_of(configs, t.config)]
                        [index_of(regimes, t.regime)];
        if (t.outcome == TrialOutcome::complete) {
            ++cell.completed;
            cell.lost_sum += static_cast<double>(t.lost_packets);
            cell.goodput_sum += t.goodput_kbs;
        } else if (t.outcome == TrialOutcome::refused) {
            ++cell.refused;
        }
    }

    AggregateReport rep;
    rep.regimes = regimes;

    // Per-size AVERAGE cells feed the GLOBAL row.
    std::vector<std::vector<AggregateCell>> averages;
    for (std::size_t s = 0; s < sizes.size(); ++s) {
        std::vector<AggregateCell> avg(regimes.size());
        for (std::size_t c = 0; c < configs.size(); ++c) {
            AggregateRow row;
            row.config = configs[c];
            row.file_size_bytes = sizes[s];
            row.by_regime.resize(regimes.size());
            for (std::size_t g = 0; g < regimes.size(); ++g) {
                const CellAcc& a = acc[s][c][g];
                AggregateCell& out = row.by_regime[g];
                out.completed = a.completed;
                if (a.completed > 0) {
                    out.lost_packets_mean = a.lost_sum / static_cast<double>(a.completed);
                    out.goodput_mean_kbs = a.goodput_sum / static_cast<double>(a.completed);
                    // AVERAGE = mean of config means, each config one vote
                    ++avg[g].completed;
                    avg[g].lost_packets_mean += out.lost_packets_mean;
                    avg[g].goodput_mean_kbs += out.goodput_mean_kbs;
                }
                row.refused += a.refused;
            }
            rep.rows.push_back(std::move(row));
        }
        AggregateRow avg_row;
        avg_row.config = "AVERAGE";
        avg_row.file_size_bytes = sizes[s];
        for (auto& cell : avg) {
            if (cell.completed > 0) {
                cell.lost_packets_mean /= static_cast<double>(cell.completed);
                cell.goodput_mean_kbs /= static_cast<double>(cell.completed);
            }
        }
        avg_row.by_regime = avg;
        for (std::size_t c = 0; c < configs.size(); ++c) {
            for (std::size_t g = 0; g < regimes.size(); ++g) {
                avg_row.refused += acc[s][c][g].refused;
            }
        }
        rep.rows.push_back(avg_row);
        averages.push_back(std::move(avg));
    }

    AggregateRow global;
    global.config = "GLOBAL";
    global.by_regime.resize(regimes.size());
    for (std::size_t g = 0; g < regimes.size(); ++g) {
        AggregateCell& out = global.by_regime[g];
        for (const auto& avg : averages) {
            if (avg[g].completed > 0) {
                ++out.completed;
                out.lost_packets_mean += avg[g].lost_packets_mean;
                out.goodput_mean_kbs += avg[g].goodput_mean_kbs;
            }
        }
        if (out.completed > 0) {
            out.lost_packets_mean /= static_cast<double>(out.completed);
            out.goodput_mean_kbs /= static_cast<double>(out.completed);
        }
    }
    for (const auto& row : rep.rows) {
        if (row.config == "AVERAGE") global.refused += row.refused;
    }
    rep.rows.push_back(std::move(global));
    return rep;
}

LostDataReport lost_data_table(const ResultSet& rs) {
    std::vector<std::string> configs, regimes;
    for (const auto& t : rs.trials) {
        index_of(configs, t.config);
        index_of(regimes, t.regime);
    }

    LostDataReport rep;
    rep.regimes = regimes;
    rep.rows.resize(configs.size());
    for (std::size_t c = 0; c < configs.size(); ++c) {
        rep.rows[c].config = configs[c];
        rep.rows[c].by_regime.assign(regimes.size(), 0);
    }
    for (const auto& t : rs.trials) {
        auto& row = rep.rows[index_of(configs, t.config)];
        row.by_regime[index_of(regimes, t.regime)] += t.lost_bytes;
        row.total += t.lost_bytes;
    }
    std::stable_sort(rep.rows.begin(), rep.rows.end(),
                     [](const LostDataRow& a, const LostDataRow& b) { return a.total < b.total; });
    return rep;
}

// ---- persistence ------------------------------------------------------------

static const char kResultsHeader[] =
    "config,file_size_bytes,regime,rep,outcome,elapsed_s,lost_packets,lost_bytes,goodput_kbs";

void persist(const ResultSet& rs, const std::string& csv_path) {
    std::string out = kResultsHeader;
    out += '\n';
    char buf[96];
    for (const auto& t : rs.trials) {
        out += t.config;
        out += ',';
        out += std::to_string(t.file_size_bytes);
        out += ',';
        out += t.regime;
        out += ',';
        out += std::to_string(t.rep);
        out += ',';
        out += trial_outcome_name(t.outcome);
        std::snprintf(buf, sizeof(buf), ",%.17g,%" PRIu64 ",%" PRIu64 ",", t.elapsed_s,
                      t.lost_packets, t.lost_bytes);
        out += buf;
        if (t.outcome == TrialOutcome::complete) {
            std::snprintf(buf, sizeof(buf), "%.17g", t.goodput_kbs);
            out += buf;
        }
        out += '\n';
    }

    std::ofstream f(csv_path, std::ios::binary | std::ios::trunc);
    if (!f || !(f << out) || !f.flush()) {
        throw ResultIoError(ResultIoKind::io, "cannot write " + csv_path);
    }

    nlohmann::ordered_json meta;
    meta["schema_version"] = 1;
    meta["fingerprint"] = rs.fingerprint;
    meta["master_seed"] = rs.master_seed;
    meta["trials"] = rs.trials.size();
    meta["tool_version"] = kToolVersion;
    std::ofstream m(csv_path + ".meta.json", std::ios::binary | std::ios::trunc);
    if (!m || !(m << meta.dump(2) << '\n') || !m.flush()) {
        throw ResultIoError(ResultIoKind::io, "cannot write " + csv_path + ".meta.json");
    }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

uint64_t parse_u64(const std::string& s, std::size_t line_no) {
    uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
        throw ResultIoError(ResultIoKind::corrupt_row,
                            "line " + std::to_string(line_no) + ": bad integer '" + s + "'");
    }
    return v;
}

double parse_f64(const std::string& s, std::size_t line_no) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || s.empty()) {
        throw ResultIoError(ResultIoKind::corrupt_row,
                            "line " + std::to_string(line_no) + ": bad number '" + s + "'");
    }
    return v;
}

TrialOutcome parse_outcome(const std::string& s, std::size_t line_no) {
    for (TrialOutcome o : {TrialOutcome::complete, TrialOutcome::refused, TrialOutcome::incomplete,
                           TrialOutcome::failed}) {
        if (s == trial_outcome_name(o)) return o;
    }
    throw ResultIoError(ResultIoKind::corrupt_row,
                        "line " + std::to_string(line_no) + ": unknown outcome '" + s + "'");
}

}  // namespace

ResultSet load_results(const std::string& csv_path) {
    std::ifstream f(csv_path, std::ios::binary);
    if (!f) throw ResultIoError(ResultIoKind::io, "cannot open " + csv_path);
    std::stringstream ss;
    ss << f.rdbuf();
    std::string content = ss.str();
    if (content.empty()) {
        throw ResultIoError(ResultIoKind::empty, "empty results file: " + csv_path);
    }

    ResultSet rs;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < content.size()) {
        std::size_t eol = content.find('\n', pos);
        std::string line = content.substr(pos, eol == std::string::npos ? eol : eol - pos);
        pos = eol == std::string::npos ? content.size() : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1) {
            if (line != kResultsHeader) {
                throw ResultIoError(ResultIoKind::schema, "unexpected header '" + line +
                                                              "', want '" + kResultsHeader + "'");
            }
            continue;
        }
        if (line.empty()) continue;
        auto fields = split_csv(line);
        if (fields.size() != 9) {
            throw ResultIoError(ResultIoKind::corrupt_row,
                                "line " + std::to_string(line_no) + ": expected 9 fields, got " +
                                    std::to_string(fields.size()));
        }
        TrialResult t;
        t.config = fields[0];
        t.file_size_bytes = parse_u64(fields[1], line_no);
        t.regime = fields[2];
        t.rep = static_cast<int>(parse_u64(fields[3], line_no));
        t.outcome = parse_outcome(fields[4], line_no);
        t.elapsed_s = parse_f64(fields[5], line_no);
        t.lost_packets = parse_u64(fields[6], line_no);
        t.lost_bytes = parse_u64(fields[7], line_no);
        t.goodput_kbs = fields[8].empty() ? 0.0 : parse_f64(fields[8], line_no);
        rs.trials.push_back(std::move(t));
    }

    std::ifstream m(csv_path + ".meta.json", std::ios::binary);
    if (m) {
        nlohmann::json meta = nlohmann::json::parse(m, nullptr, false);
        if (meta.is_discarded()) {
            throw ResultIoError(ResultIoKind::schema, "unparsable metadata " + csv_path +
                                                          ".meta.json");
        }
        if (meta.contains("fingerprint") && meta["fingerprint"].is_string()) {
            rs.fingerprint = meta["fingerprint"].get<std::string>();
        }
        if (meta.contains("master_seed") && meta["master_seed"].is_number_unsigned()) {
            rs.master_seed = meta["master_seed"].get<uint64_t>();
        }
    }
    return rs;
}

}  // namespace vdtp
