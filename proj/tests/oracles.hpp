#pragma once

// Naive reference implementations used to cross-check the library. Everything
// here favors clarity over speed and deliberately avoids the library's
// distance/rank/eigen kernels so that agreement is evidence, not tautology.

#include <cstdint>
#include <utility>
#include <vector>

#include "core/kmeans.hpp"
#include "core/metrics.hpp"
#include "core/novelsum.hpp"
#include "core/types.hpp"

namespace oracle {

inline constexpr uint32_t kNone = 0xffffffffu;

// ---- distances (independent double-precision loops) ----
double dist(const float* a, const float* b, size_t dim, divkit::DistanceKind kind);
double dist_rows(const divkit::EmbeddingMatrix& a, size_t i, const divkit::EmbeddingMatrix& b,
                 size_t j, divkit::DistanceKind kind);
std::vector<double> pairwise(const divkit::EmbeddingMatrix& a, const divkit::EmbeddingMatrix& b,
                             divkit::DistanceKind kind);

// k nearest pool rows to query row qi, full sort, ties by ascending index;
// `exclude` removes one pool row (kNone = keep all).
std::vector<std::pair<double, uint32_t>> knn_list(const divkit::EmbeddingMatrix& query, size_t qi,
                                                  const divkit::EmbeddingMatrix& pool, size_t k,
                                                  divkit::DistanceKind kind, uint32_t exclude);

// Inverse summed distance to the K nearest reference rows.
double sigma(const divkit::EmbeddingMatrix& samples, size_t i,
             const divkit::EmbeddingMatrix& reference, size_t K, divkit::DistanceKind kind,
             double epsilon, uint32_t exclude);

// ---- metric value oracles ----
double distsum_mean(const divkit::EmbeddingMatrix& m, divkit::DistanceKind kind);
double distsum_raw(const divkit::EmbeddingMatrix& m, divkit::DistanceKind kind);
double knn_metric(const divkit::EmbeddingMatrix& m, size_t k, divkit::DistanceKind kind);
double vendi(const divkit::EmbeddingMatrix& m, double alpha);
double radius(const divkit::EmbeddingMatrix& m);
double ldd(const divkit::EmbeddingMatrix& m);
double facility_location(const divkit::EmbeddingMatrix& selected,
                         const divkit::EmbeddingMatrix& pool);
double entropy_of(const std::vector<uint32_t>& assignments,
                  const std::vector<uint32_t>& selected);
double inertia_of(const divkit::EmbeddingMatrix& data, const divkit::KMeansResult& km);

// k-means post-conditions: each point sits with its nearest centroid and each
// centroid is the mean of its members.
bool kmeans_is_fixpoint(const divkit::EmbeddingMatrix& data, const divkit::KMeansResult& km,
                        double tol);

// ---- lexical oracles ----
// These reuse the library's documented seeding chain (content hash + seed) and
// index sampler so they see identical token draws, then do their own counting,
// averaging, and curve fitting.
double ttr(const divkit::Corpus& corpus, const divkit::MetricConfig& cfg);
double vocd(const divkit::Corpus& corpus, const divkit::MetricConfig& cfg);

// ---- end-to-end novelty oracle (no shared kernels) ----
struct NovelResult {
    double mean = 0.0;
    double raw = 0.0;
    std::vector<double> per_sample; // normalization applied
    std::vector<double> sigma;
};
// `self_of[i]` is the reference row to exclude when profiling dataset row i
// (kNone = no exclusion); pass an empty vector for "no exclusions anywhere".
NovelResult novelsum(const divkit::EmbeddingMatrix& dataset,
                     const divkit::EmbeddingMatrix& reference, const divkit::NovelSumConfig& cfg,
                     const std::vector<uint32_t>& self_of);

// ---- statistics ----
double pearson(const std::vector<double>& x, const std::vector<double>& y);
std::vector<double> ranks_average_ties(const std::vector<double>& v);
double spearman(const std::vector<double>& x, const std::vector<double>& y);
std::vector<double> zscore_sum(const std::vector<std::vector<double>>& lists);

// Symmetric eigenvalues by cyclic Jacobi sweeps (returned unsorted).
std::vector<double> jacobi_eigenvalues(std::vector<double> a, size_t n);

} // namespace oracle
