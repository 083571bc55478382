#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "core/types.hpp"

namespace divkit {

struct MetricConfig {
    DistanceKind distance = DistanceKind::Cosine;
    uint64_t seed = 0;
    size_t knn_k = 1;              // which neighbor the knn metric averages
    size_t inertia_clusters = 200;
    size_t entropy_clusters = 1000;
    double vendi_alpha = 0.5;
    size_t ttr_sample_len = 30;
    std::vector<size_t> vocd_lengths = {10, 20, 30, 40, 50};
    size_t vocd_subsamples = 100;
};

struct MetricReport {
    std::string metric;
    double score = 0.0;
    std::optional<double> raw_sum;  // unaveraged companion value where one exists
    size_t dataset_size = 0;
    std::vector<std::string> notes;
    std::vector<std::pair<std::string, std::string>> config; // resolved knobs, in report order
    double duration_ms = 0.0;       // stamped by callers that time the run
};

// Lexical metrics over tokenized samples.
MetricReport ttr(const Corpus& corpus, const MetricConfig& cfg);
MetricReport vocd_d(const Corpus& corpus, const MetricConfig& cfg);

// Embedding metrics. Scores are doubles; log-det may be negative infinity.
MetricReport dist_sum(const EmbeddingMatrix& data, const MetricConfig& cfg);
MetricReport knn_distance(const EmbeddingMatrix& data, const MetricConfig& cfg);
MetricReport cluster_inertia(const EmbeddingMatrix& data, const MetricConfig& cfg);
MetricReport vendi_score(const EmbeddingMatrix& data, const MetricConfig& cfg);
MetricReport radius(const EmbeddingMatrix& data, const MetricConfig& cfg);
MetricReport log_det_distance(const EmbeddingMatrix& data, const MetricConfig& cfg);

// Coverage metrics of a selection against the pool it came from.
MetricReport facility_location(const EmbeddingMatrix& selected, const EmbeddingMatrix& pool,
                               const MetricConfig& cfg);
MetricReport partition_entropy(std::span<const uint32_t> selected_indices,
                               const EmbeddingMatrix& pool, const MetricConfig& cfg);

// Fitted curve for the vocd D estimate; exposed for tests.
double vocd_curve(double d, double length);

} // namespace divkit
