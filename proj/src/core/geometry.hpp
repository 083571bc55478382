#pragma once

#include <cstdint>
#include <vector>

#include "core/types.hpp"

namespace divkit {

constexpr uint32_t kNoSelf = 0xffffffffu;

struct Neighbor {
    uint32_t index;
    double distance;
};

// Per-point crowding weight against a reference set:
//   sigma_j = 1 / max(sum of distances to the K nearest reference points, epsilon)
// Large sigma marks points sitting in dense regions.
struct DensityProfile {
    std::vector<double> sigma;
    size_t k = 0;
    DistanceKind kind = DistanceKind::Cosine;
    double epsilon = 0.0;
    size_t reference_count = 0;
};

// Distance computations between two row stores, with norms cached once.
// All arithmetic is double precision over the float32 rows.
class DistanceContext {
public:
    DistanceContext(const EmbeddingMatrix& a, const EmbeddingMatrix& b, DistanceKind kind);

    // Distances from a.row(i) to every row of b, written to out[0..b.count).
    void row(size_t i, double* out) const;
    double one(size_t i, size_t j) const;

    size_t rows() const { return a_->count; }
    size_t cols() const { return b_->count; }
    bool same_store() const { return a_ == b_; }
    DistanceKind kind() const { return kind_; }

private:
    const EmbeddingMatrix* a_;
    const EmbeddingMatrix* b_;
    DistanceKind kind_;
    std::vector<double> inv_norm_a_; // cosine only
    std::vector<double> inv_norm_b_;
};

// Full |a| x |b| distance matrix, row-major. When a and b are the same store
// the diagonal is exactly zero. Intended for desk-scale inputs; larger flows
// go through DistanceContext row streaming.
std::vector<double> pairwise_distances(const EmbeddingMatrix& a, const EmbeddingMatrix& b,
                                       DistanceKind kind);

// Exact k nearest neighbors by brute force. Results per query are sorted by
// (distance, index) ascending; ties always resolve to the lower index.
// exclude_self drops the positional self match when query and pool are the
// same store. self_map, when given, names for each query row the pool row
// that is "itself" (kNoSelf for none); used when a dataset was extracted
// from the pool and positional identity is otherwise lost.
std::vector<std::vector<Neighbor>> knn(const EmbeddingMatrix& query, const EmbeddingMatrix& pool,
                                       size_t k, DistanceKind kind, bool exclude_self);
std::vector<std::vector<Neighbor>> knn(const EmbeddingMatrix& query, const EmbeddingMatrix& pool,
                                       size_t k, DistanceKind kind,
                                       const std::vector<uint32_t>& self_map);

DensityProfile density_profile(const EmbeddingMatrix& samples, const EmbeddingMatrix& reference,
                               size_t k, DistanceKind kind, double epsilon = 1e-12);
DensityProfile density_profile(const EmbeddingMatrix& samples, const EmbeddingMatrix& reference,
                               size_t k, DistanceKind kind, double epsilon,
                               const std::vector<uint32_t>& self_map);

} // namespace divkit
