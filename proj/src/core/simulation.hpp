#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace divkit {

// Axis-aligned Gaussian blob, clipped to the 10 x 10 working box.
struct ClusterSpec {
    double cx;
    double cy;
    double spread;
    size_t count;
};

std::vector<ClusterSpec> default_cluster_spec();

struct SimulationScenario {
    uint64_t seed = 42;
    std::vector<ClusterSpec> clusters = default_cluster_spec();
    size_t budget = 20;
    // Overridable selections (indices into the source); empty means "build".
    std::vector<uint32_t> selection_a;
    std::vector<uint32_t> selection_b;
    std::vector<uint32_t> selection_c;
};

struct SimulationMetricRow {
    std::string selection; // "A", "B", "C"
    std::string metric;    // "distsum", "proxdistsum", "novelsum"
    double score;
    std::string flag;      // claim verdict on the row that closes a metric block
};

struct SimulationResult {
    EmbeddingMatrix source;
    std::vector<uint32_t> a, b, c;
    std::vector<SimulationMetricRow> rows; // 3 metrics x 3 selections
    bool novelsum_order_pass = false;  // novelty score ranks A < B < C
    bool proximity_pass = false;       // proximity-weighted distance sum has B > C
    bool distsum_pass = false;         // plain distance sum cannot split A from C
    double distsum_rel_gap = 0.0;      // |distsum(A) - distsum(C)| / distsum(C)
};

struct SimulationSummary {
    uint64_t seed_begin = 0;
    uint64_t seed_end = 0; // inclusive
    size_t total = 0;
    size_t novelsum_order_pass = 0;
    size_t proximity_pass = 0;
    size_t distsum_pass = 0;
    size_t all_pass = 0; // seeds where every ordering claim held at once
};

// Three blobs of very different density, clipped into the box.
EmbeddingMatrix generate_source(uint64_t seed, const std::vector<ClusterSpec>& clusters);

// A: redundant picks hugging the first two cluster centers (half budget each).
std::vector<uint32_t> build_selection_a(const EmbeddingMatrix& source,
                                        const std::vector<ClusterSpec>& clusters, size_t budget);
// B: max-min coverage greedy over the source.
std::vector<uint32_t> build_selection_b(const EmbeddingMatrix& source, uint64_t seed,
                                        size_t budget);
// C: greedy novelty maximization against the source as reference.
std::vector<uint32_t> build_selection_c(const EmbeddingMatrix& source, uint64_t seed,
                                        size_t budget);

SimulationResult simulate_study(const SimulationScenario& scenario);
SimulationSummary simulate_many(uint64_t seed_begin, uint64_t seed_end);

} // namespace divkit
