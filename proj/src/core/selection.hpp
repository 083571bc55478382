#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core/novelsum.hpp"
#include "core/types.hpp"

namespace divkit {

struct SelectionConfig {
    size_t budget = 0;
    uint64_t seed = 0;
    DistanceKind distance = DistanceKind::Cosine; // spatial strategies
    double repr_threshold = 0.3;    // max cosine similarity admitted by the filter
    size_t kmeans_clusters = 100;
    size_t duplicate_unique = 1;    // distinct points in a duplicated construction
    std::optional<uint32_t> forced_first; // pins the seeded first pick; test hook
    NovelSumConfig novel;           // knobs for the novelty-greedy strategy
};

struct TraceStep {
    uint32_t index;
    double objective; // strategy's objective value at the moment of the pick
};

struct SelectionResult {
    std::string strategy;
    std::vector<uint32_t> indices; // pool row ids, in pick order
    bool partial = false;          // filter ran out of admissible points
    std::vector<TraceStep> trace;  // greedy strategies record their steps
    std::vector<std::pair<std::string, std::string>> config;
    double duration_ms = 0.0;
};

// Uniform without replacement.
SelectionResult random_select(const EmbeddingMatrix& pool, const SelectionConfig& cfg);

// Largest total distance to the whole pool, descending; ties by index.
SelectionResult farthest_select(const EmbeddingMatrix& pool, const SelectionConfig& cfg);

// Classic max-min coverage greedy from a seeded random start.
SelectionResult k_center_greedy(const EmbeddingMatrix& pool, const SelectionConfig& cfg);

// Seeded scan order; admit a point only if its max cosine similarity to the
// picks so far is strictly below the threshold. May return partial = true.
SelectionResult repr_filter(const EmbeddingMatrix& pool, const SelectionConfig& cfg);

// Greedy facility-location (sum of best cosine similarity over the pool).
// Deterministic; the first pick is the point with the highest total similarity.
SelectionResult qdit_select(const EmbeddingMatrix& pool, const SelectionConfig& cfg);

// Cluster the pool, then draw near-equal quotas per cluster, remainder to the
// largest clusters and over-quota mass pushed proportionally to the rest.
SelectionResult kmeans_select(const EmbeddingMatrix& pool, const SelectionConfig& cfg);

// budget/m copies of each of m seeded unique points; controlled redundancy.
SelectionResult duplicate_construct(const EmbeddingMatrix& pool, const SelectionConfig& cfg);

// Greedy novelty maximization: each step adds the candidate with the highest
// rank-weighted, density-scaled distance sum to the already selected points.
// The density profile is computed against reference (the pool itself in the
// single-argument form). Seeded uniform first pick.
SelectionResult novel_select(const EmbeddingMatrix& pool, const EmbeddingMatrix& reference,
                             const SelectionConfig& cfg);
SelectionResult novel_select(const EmbeddingMatrix& pool, const SelectionConfig& cfg);

} // namespace divkit
