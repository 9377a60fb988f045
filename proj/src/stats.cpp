#include "vdtp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>

namespace vdtp {

std::vector<double> rank_block(const std::vector<double>& row) {
    std::size_t k = row.size();
    if (k < 2) throw std::invalid_argument("rank_block needs at least 2 values");

    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return row[a] < row[b]; });

    // Runs of equal values share the mean of the positions they occupy.
    std::vector<double> ranks(k);
    std::size_t i = 0;
    while (i < k) {
        std::size_t j = i;
        while (j + 1 < k && row[order[j + 1]] == row[order[i]]) ++j;
        double midrank = static_cast<double>(i + j + 2) / 2.0;  // positions are 1-based
        for (std::size_t p = i; p <= j; ++p) ranks[order[p]] = midrank;
        i = j + 1;
    }
    return ranks;
}

FriedmanResult friedman(const BlockMatrix& m) {
    std::size_t n = m.values.size();
    std::size_t k = m.treatments.size();
    if (k < 2) throw std::invalid_argument("friedman needs at least 2 treatments");
    if (n < 2) {
        throw InsufficientDataError("friedman needs at least 2 blocks, got " +
                                    std::to_string(n));
    }

    std::vector<double> rank_sums(k, 0.0);
    for (const auto& row : m.values) {
        if (row.size() != k) throw std::invalid_argument("ragged block matrix");
        auto ranks = rank_block(row);
        for (std::size_t j = 0; j < k; ++j) rank_sums[j] += ranks[j];
    }

    FriedmanResult res;
    res.avg_ranks.resize(k);
    double center = static_cast<double>(k + 1) / 2.0;
    double spread = 0;
    for (std::size_t j = 0; j < k; ++j) {
        res.avg_ranks[j] = rank_sums[j] / static_cast<double>(n);
        double dev = res.avg_ranks[j] - center;
        spread += dev * dev;
    }
    res.statistic = 12.0 * static_cast<double>(n) /
                    (static_cast<double>(k) * static_cast<double>(k + 1)) * spread;
    res.degrees_of_freedom = static_cast<int>(k) - 1;
    res.p_value = chi_square_sf(res.statistic, res.degrees_of_freedom);
    return res;
}

double chi_square_sf(double x, int df) {
    if (df < 1) throw std::domain_error("chi_square_sf: df must be positive");
    if (!(x >= 0)) throw std::domain_error("chi_square_sf: x must be >= 0");
    if (x == 0) return 1.0;

    double a = static_cast<double>(df) / 2.0;
    double half_x = x / 2.0;
    double log_prefactor = -half_x + a * std::log(half_x) - std::lgamma(a);

    if (half_x < a + 1.0) {
        // Lower regularized gamma as a series, then complement.
        double term = 1.0 / a;
        double sum = term;
        for (int n = 1; n < 500; ++n) {
            term *= half_x / (a + static_cast<double>(n));
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-16) break;
        }
        return 1.0 - sum * std::exp(log_prefactor);
    }

    // Upper regularized gamma as a continued fraction (modified Lentz).
    constexpr double tiny = 1e-300;
    double b = half_x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(log_prefactor) * h;
}

const char* rank_scope_name(RankScope scope) {
    switch (scope) {
        case RankScope::low: return "low";
        case RankScope::high: return "high";
        case RankScope::combined: return "combined";
    }
    return "?";
}

RankTable rank_table(const ResultSet& rs, RankScope scope) {
    std::vector<std::string> configs;
    for (const auto& t : rs.trials) {
        if (std::find(configs.begin(), configs.end(), t.config) == configs.end()) {
            configs.push_back(t.config);
        }
    }
    std::size_t k = configs.size();

    struct Block {
        std::vector<double> goodput;
        std::vector<bool> filled;
        bool usable = true;
    };
    // Ordered key so block iteration (and thus float summation) is stable.
    std::map<std::tuple<uint64_t, int, std::string>, Block> blocks;

    for (const auto& t : rs.trials) {
        if (scope != RankScope::combined && t.regime != rank_scope_name(scope)) continue;
        auto key = std::make_tuple(t.file_size_bytes, t.rep,
                                   scope == RankScope::combined ? t.regime : std::string());
        auto& block = blocks[key];
        if (block.goodput.empty()) {
            block.goodput.assign(k, 0.0);
            block.filled.assign(k, false);
        }
        std::size_t c = static_cast<std::size_t>(
            std::find(configs.begin(), configs.end(), t.config) - configs.begin());
        if (t.outcome != TrialOutcome::complete || block.filled[c]) {
            block.usable = false;  // refusal/timeout or duplicate cell taints the whole block
            continue;
        }
        block.goodput[c] = t.goodput_kbs;
        block.filled[c] = true;
    }

    BlockMatrix m;
    m.treatments = configs;
    for (const auto& [key, block] : blocks) {
        if (!block.usable ||
            !std::all_of(block.filled.begin(), block.filled.end(), [](bool f) { return f; })) {
            continue;
        }
        std::string label = std::to_string(std::get<0>(key)) + "/" +
                            std::to_string(std::get<1>(key));
        if (!std::get<2>(key).empty()) label += "/" + std::get<2>(key);
        m.block_labels.push_back(std::move(label));
        m.values.push_back(block.goodput);
    }

    if (k < 2) {
        throw InsufficientDataError("ranking needs at least 2 configs, got " +
                                    std::to_string(k));
    }
    if (m.values.size() < 2) {
        throw InsufficientDataError("ranking needs at least 2 complete blocks, got " +
                                    std::to_string(m.values.size()));
    }

    RankTable table;
    table.test = friedman(m);
    table.entries.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
        table.entries[j] = {configs[j], table.test.avg_ranks[j]};
    }
    std::stable_sort(table.entries.begin(), table.entries.end(),
                     [](const RankEntry& a, const RankEntry& b) { return a.avg_rank > b.avg_rank; });
    return table;
}

}  // namespace vdtp
