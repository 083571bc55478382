#pragma once

#include <span>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace divkit {

// Z-score each list (population deviation), then sum position-wise.
// A zero-variance list contributes zeros and leaves a warning.
std::vector<double> zscore_aggregate(const std::vector<std::vector<double>>& lists,
                                     std::vector<std::string>* warnings = nullptr);

// Classic product-moment correlation. Inputs must be finite and non-constant.
double pearson(std::span<const double> a, std::span<const double> b);

// Rank correlation with average ranks for ties. a may contain negative
// infinity (ranked below every finite value); b must be finite.
double spearman(std::span<const double> a, std::span<const double> b);

struct MetricCorrelation {
    std::string metric;
    double pearson;
    double spearman;
    double average;                    // (pearson + spearman) / 2
    size_t n_points;                   // rows entering the linear correlation
    std::vector<std::string> excluded; // dataset ids dropped from that side
};

struct CorrelationReport {
    std::vector<MetricCorrelation> rows; // sorted by average, descending
    std::vector<std::string> warnings;
};

// Correlate every metric column of the table against performance. Rows with
// negative-infinity scores are excluded from the linear side (and logged) but
// still anchor the bottom of the rank correlation.
CorrelationReport correlate_metrics(const ScoreTable& table);

} // namespace divkit
