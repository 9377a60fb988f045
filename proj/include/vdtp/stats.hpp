#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "vdtp/bench.hpp"

namespace vdtp {

// Thrown when there are not enough usable blocks to run the test (N < 2).
class InsufficientDataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// N blocks x k treatments of goodput values. Every cell filled: blocks with
// refused or otherwise incomplete trials are dropped before this is built.
struct BlockMatrix {
    std::vector<std::string> treatments;      // k config names
    std::vector<std::string> block_labels;    // N labels, "size/rep[/regime]"
    std::vector<std::vector<double>> values;  // N rows of k values
};

struct FriedmanResult {
    std::vector<double> avg_ranks;  // per treatment; sums to k(k+1)/2
    double statistic = 0;
    int degrees_of_freedom = 0;
    double p_value = 1;
};

// Ranks one block, higher value => higher rank; ties get midranks. k >= 2.
std::vector<double> rank_block(const std::vector<double>& row);

// statistic = (12N / (k(k+1))) * sum_j (Rbar_j - (k+1)/2)^2, p from the
// chi-square survival function at k-1 degrees of freedom. No tie correction.
FriedmanResult friedman(const BlockMatrix& m);

// Upper-tail chi-square probability Q(df/2, x/2) via the regularized
// incomplete gamma function (series for x < df/2 + 1, continued fraction
// otherwise). Absolute error below 1e-9 for df in 1..50, x in [0, 200].
double chi_square_sf(double x, int df);

// Which trials feed the ranking.
enum class RankScope : uint8_t { low, high, combined };

const char* rank_scope_name(RankScope scope);

struct RankEntry {
    std::string config;
    double avg_rank = 0;
};

struct RankTable {
    std::vector<RankEntry> entries;  // sorted by descending avg_rank
    FriedmanResult test;
};

// Blocks trials on (file_size, repetition) within the scoped regime, or on
// (file_size, repetition, regime) for combined scope; drops any block that
// is missing a config or holds a non-complete trial; runs friedman on the
// rest. Throws InsufficientDataError when fewer than 2 blocks survive.
RankTable rank_table(const ResultSet& rs, RankScope scope);

}  // namespace vdtp
