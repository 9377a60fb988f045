#include "vdtp/report.hpp"

#include <algorithm>
#include <cstdio>
#include <vector>

#include <json.hpp>

namespace vdtp {

namespace {

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

// Left-aligns the first `left_cols` columns and right-aligns the rest, with
// two-space gutters. rows[0] is the header.
std::string align(const std::vector<std::vector<std::string>>& rows, std::size_t left_cols) {
    std::vector<std::size_t> width;
    for (const auto& row : rows) {
        if (width.size() < row.size()) width.resize(row.size(), 0);
        for (std::size_t i = 0; i < row.size(); ++i) {
            width[i] = std::max(width[i], row[i].size());
        }
    }
    std::string out;
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::string cell = row[i];
            if (i < left_cols) {
                cell.resize(width[i], ' ');
            } else {
                cell.insert(0, width[i] - cell.size(), ' ');
            }
            if (i > 0) line += "  ";
            line += cell;
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line;
        out += '\n';
    }
    return out;
}

std::vector<std::vector<std::string>> aggregate_rows(const AggregateReport& rep) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header = {"file_size_bytes", "config"};
    for (const auto& r : rep.regimes) {
        header.push_back(r + "_lost_packets");
        header.push_back(r + "_goodput_kbs");
    }
    header.push_back("refused");
    rows.push_back(std::move(header));

    for (const auto& row : rep.rows) {
        std::vector<std::string> cells;
        cells.push_back(row.file_size_bytes ? std::to_string(*row.file_size_bytes) : "");
        cells.push_back(row.config);
        for (const auto& cell : row.by_regime) {
            if (cell.completed > 0) {
                cells.push_back(fixed(cell.lost_packets_mean, 3));
                cells.push_back(fixed(cell.goodput_mean_kbs, 3));
            } else {
                cells.push_back("");
                cells.push_back("");
            }
        }
        cells.push_back(std::to_string(row.refused));
        rows.push_back(std::move(cells));
    }
    return rows;
}

std::string csv_join(const std::vector<std::vector<std::string>>& rows) {
    std::string out;
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out += ',';
            out += row[i];
        }
        out += '\n';
    }
    return out;
}

std::vector<std::vector<std::string>> lost_data_rows(const LostDataReport& rep) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header = {"config"};
    for (const auto& r : rep.regimes) header.push_back(r + "_lost_bytes");
    header.push_back("total_lost_bytes");
    rows.push_back(std::move(header));
    for (const auto& row : rep.rows) {
        std::vector<std::string> cells = {row.config};
        for (uint64_t v : row.by_regime) cells.push_back(std::to_string(v));
        cells.push_back(std::to_string(row.total));
        rows.push_back(std::move(cells));
    }
    return rows;
}

}  // namespace

std::string aggregate_csv(const AggregateReport& rep) { return csv_join(aggregate_rows(rep)); }

std::string aggregate_text(const AggregateReport& rep) { return align(aggregate_rows(rep), 2); }

std::string lost_data_csv(const LostDataReport& rep) { return csv_join(lost_data_rows(rep)); }

std::string lost_data_text(const LostDataReport& rep) { return align(lost_data_rows(rep), 1); }

std::string rank_csv(const RankTable& table) {
    std::string out = "config,avg_rank\n";
    for (const auto& e : table.entries) {
        out += e.config;
        out += ',';
        out += fixed(e.avg_rank, 6);
        out += '\n';
    }
    return out;
}

std::string rank_text(const RankTable& table) {
    std::vector<std::vector<std::string>> rows = {{"config", "avg_rank"}};
    for (const auto& e : table.entries) {
        rows.push_back({e.config, fixed(e.avg_rank, 2)});
    }
    return align(rows, 1);
}

std::string rank_json_line(const RankTable& table) {
    nlohmann::ordered_json j;
    j["statistic"] = table.test.statistic;
    j["df"] = table.test.degrees_of_freedom;
    j["p_value"] = table.test.p_value;
    j["significant"] = table.test.p_value < 0.05;
    return j.dump() + "\n";
}

}  // namespace vdtp
