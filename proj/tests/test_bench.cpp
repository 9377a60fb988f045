#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "vdtp/bench.hpp"

using namespace vdtp;

namespace {

ExperimentSpec tiny_spec() {
    ExperimentSpec spec;
    spec.configs = {preset_configs()[5], preset_configs()[0]};
    spec.file_sizes = {50'000, 100'000};
    spec.repetitions = 2;
    spec.master_seed = 3;
    return spec;
}

std::filesystem::path temp_path(const char* stem) {
    return std::filesystem::temp_directory_path() / stem;
}

constexpr const char* kHeader =
    "config,file_size_bytes,regime,rep,outcome,elapsed_s,lost_packets,lost_bytes,goodput_kbs";

std::size_t regime_index(const std::vector<std::string>& regimes, const std::string& name) {
    for (std::size_t i = 0; i < regimes.size(); ++i)
        if (regimes[i] == name) return i;
    FAIL("regime not present: " << name);
    return 0;
}

void spit(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
    REQUIRE(out.good());
}

}  // namespace

TEST_CASE("goodput follows the decimal kB/s convention") {
    CHECK(goodput_kbs(1'000'000, 2.0) == doctest::Approx(500.0).epsilon(1e-12));
    CHECK(goodput_kbs(1'000'000, 1.4633) == doctest::Approx(683.3869).epsilon(1e-6));
    CHECK_THROWS_AS(goodput_kbs(1'000'000, 0.0), std::domain_error);
    CHECK_THROWS_AS(goodput_kbs(1'000'000, -1.0), std::domain_error);
}

TEST_CASE("the matrix runs configs x sizes x repetitions x regimes in order") {
    ExperimentSpec spec = tiny_spec();
    ResultSet rs = run_matrix(spec);
    REQUIRE(rs.trials.size() == 2 * 2 * 2 * 2);
    CHECK(rs.fingerprint == spec_fingerprint(spec));
    CHECK(rs.master_seed == 3);

    // Nesting: config outermost, then size, then rep, then regime.
    const auto& t0 = rs.trials[0];
    CHECK(t0.config == "EXPERTS");
    CHECK(t0.file_size_bytes == 50'000);
    CHECK(t0.rep == 1);
    CHECK(t0.regime == "low");
    CHECK(rs.trials[1].regime == "high");
    CHECK(rs.trials[2].rep == 2);
    CHECK(rs.trials[4].file_size_bytes == 100'000);
    CHECK(rs.trials[8].config == "PSO");

    for (const auto& t : rs.trials) {
        if (t.outcome == TrialOutcome::complete) {
            CHECK(t.goodput_kbs > 0.0);
            CHECK(t.goodput_kbs <= 687.5);
        } else {
            CHECK(t.goodput_kbs == 0.0);
        }
    }
}

TEST_CASE("identical specs reproduce identical result sets") {
    ResultSet a = run_matrix(tiny_spec());
    ResultSet b = run_matrix(tiny_spec());
    CHECK(a == b);

    ExperimentSpec other = tiny_spec();
    other.master_seed = 4;
    ResultSet c = run_matrix(other);
    CHECK(c.fingerprint != a.fingerprint);  // the seed is part of the spec
    CHECK(!(c == a));
}

TEST_CASE("fingerprints react to any plan change") {
    ExperimentSpec spec = tiny_spec();
    std::string base = spec_fingerprint(spec);
    CHECK(base.size() == 16);

    ExperimentSpec s1 = tiny_spec();
    s1.repetitions = 3;
    ExperimentSpec s2 = tiny_spec();
    s2.file_sizes[0] = 50'001;
    ExperimentSpec s3 = tiny_spec();
    s3.configs[0].retransmission_time = 7.99;
    ExperimentSpec s4 = tiny_spec();
    s4.channel.base_loss *= 2;
    CHECK(spec_fingerprint(s1) != base);
    CHECK(spec_fingerprint(s2) != base);
    CHECK(spec_fingerprint(s3) != base);
    CHECK(spec_fingerprint(s4) != base);
    CHECK(spec_fingerprint(tiny_spec()) == base);  // stable across calls
}

TEST_CASE("validate rejects degenerate experiment plans") {
    ExperimentSpec spec = tiny_spec();
    spec.repetitions = 0;
    CHECK_THROWS_AS(validate(spec), std::invalid_argument);

    spec = tiny_spec();
    spec.file_sizes.clear();
    CHECK_THROWS_AS(validate(spec), std::invalid_argument);

    spec = tiny_spec();
    spec.file_sizes[1] = 0;
    CHECK_THROWS_AS(validate(spec), std::invalid_argument);

    spec = tiny_spec();
    spec.configs[1].name = spec.configs[0].name;  // duplicate name
    CHECK_THROWS_AS(validate(spec), std::invalid_argument);

    spec = tiny_spec();
    spec.configs[0].name = "a,b";  // breaks the CSV column
    CHECK_THROWS_AS(validate(spec), std::invalid_argument);

    spec = tiny_spec();
    spec.regimes.clear();
    CHECK_THROWS_AS(validate(spec), std::invalid_argument);
}

TEST_CASE("aggregate averages completed trials and counts refusals aside") {
    ResultSet rs;
    rs.fingerprint = "f";
    auto add = [&](const char* cfg, uint64_t size, const char* regime, TrialOutcome o,
                   uint64_t lost, double goodput) {
        TrialResult t;
        t.config = cfg;
        t.file_size_bytes = size;
        t.regime = regime;
        t.rep = static_cast<int>(rs.trials.size()) + 1;
        t.outcome = o;
        t.elapsed_s = 1.0;
        t.lost_packets = lost;
        t.goodput_kbs = goodput;
        rs.trials.push_back(t);
    };
    add("A", 100, "low", TrialOutcome::complete, 2, 400.0);
    add("A", 100, "low", TrialOutcome::complete, 4, 600.0);
    add("A", 100, "low", TrialOutcome::refused, 9, 0.0);
    add("A", 100, "high", TrialOutcome::complete, 10, 300.0);
    add("B", 100, "low", TrialOutcome::complete, 0, 100.0);
    add("B", 100, "high", TrialOutcome::complete, 2, 500.0);

    AggregateReport rep = aggregate(rs);
    REQUIRE(rep.regimes == std::vector<std::string>{"low", "high"});
    std::size_t lo = regime_index(rep.regimes, "low");
    std::size_t hi = regime_index(rep.regimes, "high");
    // rows: A@100, B@100, AVERAGE@100, GLOBAL
    REQUIRE(rep.rows.size() == 4);

    const AggregateRow& a = rep.rows[0];
    CHECK(a.config == "A");
    CHECK(*a.file_size_bytes == 100);
    CHECK(a.refused == 1);
    CHECK(a.by_regime[lo].completed == 2);
    CHECK(a.by_regime[lo].goodput_mean_kbs == doctest::Approx(500.0));
    CHECK(a.by_regime[lo].lost_packets_mean == doctest::Approx(3.0));
    CHECK(a.by_regime[hi].goodput_mean_kbs == doctest::Approx(300.0));

    const AggregateRow& avg = rep.rows[2];
    CHECK(avg.config == "AVERAGE");
    CHECK(avg.by_regime[lo].goodput_mean_kbs == doctest::Approx(300.0));   // (500+100)/2
    CHECK(avg.by_regime[hi].goodput_mean_kbs == doctest::Approx(400.0));  // (300+500)/2
    CHECK(avg.refused == 1);

    const AggregateRow& global = rep.rows[3];
    CHECK(global.config == "GLOBAL");
    CHECK(!global.file_size_bytes.has_value());
    CHECK(global.by_regime[lo].goodput_mean_kbs == doctest::Approx(300.0));
    CHECK(global.by_regime[hi].goodput_mean_kbs == doctest::Approx(400.0));

    CHECK_THROWS_AS(aggregate(ResultSet{}), std::invalid_argument);
}

TEST_CASE("lost-data totals sort ascending with stable ties") {
    ResultSet rs;
    auto add = [&](const char* cfg, const char* regime, uint64_t lost_bytes) {
        TrialResult t;
        t.config = cfg;
        t.file_size_bytes = 100;
        t.regime = regime;
        t.rep = 1;
        t.outcome = TrialOutcome::complete;
        t.elapsed_s = 1.0;
        t.lost_bytes = lost_bytes;
        rs.trials.push_back(t);
    };
    add("X", "low", 500);
    add("X", "high", 700);
    add("Y", "low", 100);
    add("Y", "high", 200);
    add("Z", "low", 150);
    add("Z", "high", 150);

    LostDataReport rep = lost_data_table(rs);
    REQUIRE(rep.rows.size() == 3);
    std::size_t lo = regime_index(rep.regimes, "low");
    CHECK(rep.rows[0].config == "Y");
    CHECK(rep.rows[0].total == 300);
    CHECK(rep.rows[0].by_regime[lo] == 100);
    CHECK(rep.rows[1].config == "Z");  // ties with Y at 300; appearance order breaks the tie
    CHECK(rep.rows[1].total == 300);
    CHECK(rep.rows[2].config == "X");
    CHECK(rep.rows[2].total == 1200);
}

TEST_CASE("results survive a persist/load round trip") {
    ExperimentSpec spec = tiny_spec();
    spec.channel.base_loss = 0.02;  // provoke some losses so the columns matter
    ResultSet out = run_matrix(spec);

    auto path = temp_path("vdtp_bench_roundtrip.csv");
    persist(out, path.string());
    ResultSet in = load_results(path.string());
    CHECK(in == out);

    std::filesystem::remove(path);
    std::filesystem::remove(path.string() + ".meta.json");
}

TEST_CASE("load failures carry a typed kind") {
    auto path = temp_path("vdtp_bench_badload.csv");

    spit(path, "");
    CHECK_THROWS_WITH_AS(load_results(path.string()), doctest::Contains("empty"),
                         ResultIoError);
    try {
        load_results(path.string());
    } catch (const ResultIoError& e) {
        CHECK(e.kind() == ResultIoKind::empty);
    }

    spit(path, "config,file_size_bytes,regime,rep\nEXPERTS,100,low,1\n");
    try {
        load_results(path.string());
        FAIL("schema error expected");
    } catch (const ResultIoError& e) {
        CHECK(e.kind() == ResultIoKind::schema);
    }

    spit(path, std::string(kHeader) + "\nEXPERTS,100,low,not-a-number,complete,1,0,0,1\n");
    try {
        load_results(path.string());
        FAIL("corrupt row expected");
    } catch (const ResultIoError& e) {
        CHECK(e.kind() == ResultIoKind::corrupt_row);
    }

    CHECK_THROWS_AS(load_results((temp_path("vdtp_no_such_dir") / "x.csv").string()),
                    ResultIoError);

    // Header only: a valid, zero-trial result set rather than an error.
    spit(path, std::string(kHeader) + "\n");
    ResultSet empty = load_results(path.string());
    CHECK(empty.trials.empty());

    std::filesystem::remove(path);
}

TEST_CASE("larger files amortize the handshake into higher goodput") {
    ExperimentSpec spec;
    spec.configs = {preset_configs()[5]};
    spec.file_sizes = {100'000, 500'000, 1'000'000, 5'000'000, 10'000'000};
    spec.repetitions = 1;
    spec.regimes = {low_speed_profile()};
    spec.channel.base_loss = 0.0;
    spec.channel.radio_range = 1e9;
    spec.master_seed = 1;

    ResultSet rs = run_matrix(spec);
    REQUIRE(rs.trials.size() == 5);
    double prev = 0;
    for (const auto& t : rs.trials) {
        REQUIRE(t.outcome == TrialOutcome::complete);
        CHECK(t.goodput_kbs > prev);
        prev = t.goodput_kbs;
    }
    CHECK(prev <= 687.5);
}
