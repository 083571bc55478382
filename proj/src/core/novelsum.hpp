#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/geometry.hpp"
#include "core/metrics.hpp"
#include "core/types.hpp"

namespace divkit {

enum class Normalization {
    MeanWeightedNovelty, // per-sample weighted mean of contributions, then mean over samples
    RawSum,              // plain sum of per-sample novelty
};

inline const char* normalization_name(Normalization n) {
    return n == Normalization::MeanWeightedNovelty ? "mean" : "rawsum";
}

struct NovelSumConfig {
    double alpha = 1.0;        // exponent on the reciprocal proximity-rank weight
    double beta = 0.5;         // exponent on the target point's density weight
    size_t density_k = 10;     // neighbors defining the density profile
    DistanceKind distance = DistanceKind::Cosine;
    double epsilon = 1e-12;    // floor for the neighbor-distance sum
    Normalization normalization = Normalization::MeanWeightedNovelty;
};

struct NoveltyBreakdown {
    std::vector<double> per_sample_novelty; // in the configured normalization
    std::vector<double> sigma;              // density weight per dataset row
    std::string sigma_source;
    std::string rank_digest;                // hash over all proximity-rank rows
};

struct NovelSumResult {
    MetricReport report;
    NoveltyBreakdown breakdown;
};

// Density-scaled distances: entry (i, j) = sigma_j^beta * d(x_i, x_j), diagonal
// zero. Row-major n*n. The profile must describe exactly these dataset rows.
std::vector<double> density_aware_matrix(const EmbeddingMatrix& dataset,
                                         const DensityProfile& profile,
                                         const NovelSumConfig& cfg);

// Row-wise proximity ranks of a density-aware matrix: in each row the off-
// diagonal entries get ranks 1..n-1 by ascending value, ties by ascending
// column; the diagonal holds 0. Row-major n*n.
std::vector<uint32_t> proximity_ranks(const std::vector<double>& dam, size_t n);

// Novelty of one sample given the matrix and ranks.
double novelty(size_t i, const std::vector<double>& dam, const std::vector<uint32_t>& ranks,
               size_t n, const NovelSumConfig& cfg);

// End-to-end score of a dataset against a reference distribution. The
// reference supplies the density profile; when dataset and reference are the
// same store, each row's positional self is excluded from its own neighbors.
NovelSumResult novelsum(const EmbeddingMatrix& dataset, const EmbeddingMatrix& reference,
                        const NovelSumConfig& cfg);

// Same, for a dataset extracted from the reference: dataset row i corresponds
// to reference row dataset_ref_indices[i] and is excluded from its own
// neighbor search. kNoSelf entries mean "not a reference row".
NovelSumResult novelsum(const EmbeddingMatrix& dataset, const EmbeddingMatrix& reference,
                        const NovelSumConfig& cfg,
                        const std::vector<uint32_t>& dataset_ref_indices);

// Convenience: score the subset reference[indices] with self-exclusion wired up.
NovelSumResult novelsum_of_subset(const EmbeddingMatrix& reference,
                                  const std::vector<uint32_t>& indices,
                                  const NovelSumConfig& cfg);

} // namespace divkit
