#pragma once

#include <string>

#include "vdtp/bench.hpp"
#include "vdtp/stats.hpp"

namespace vdtp {

// Pure renderers: structured reports in, CSV or aligned plain text out.
// Numeric cells are printed with fixed precision so identical inputs give
// byte-identical output.

std::string aggregate_csv(const AggregateReport& rep);
std::string aggregate_text(const AggregateReport& rep);

std::string lost_data_csv(const LostDataReport& rep);
std::string lost_data_text(const LostDataReport& rep);

std::string rank_csv(const RankTable& table);
std::string rank_text(const RankTable& table);

// One line: {"statistic": ..., "df": ..., "p_value": ..., "significant": ...}
std::string rank_json_line(const RankTable& table);

}  // namespace vdtp
