#pragma once

#include <cstdint>
#include <vector>

#include "core/types.hpp"

namespace divkit {

struct KMeansResult {
    size_t k = 0;
    size_t dim = 0;
    std::vector<double> centroids;    // k * dim
    std::vector<uint32_t> assignments; // one cluster id per input row
    double inertia = 0.0;             // sum of squared L2 distances to assigned centroid
    size_t iterations = 0;
};

// Seeded k-means++ init followed by Lloyd iterations until the assignment
// fixpoint or max_iters. Squared L2 geometry. Empty clusters are re-seeded to
// the point currently farthest from its own centroid.
//
// Rows are processed in a content-derived canonical order internally, so the
// result (inertia, cluster populations) does not depend on input row order.
KMeansResult kmeans(const EmbeddingMatrix& data, size_t k, uint64_t seed, size_t max_iters = 300);

} // namespace divkit
