#include "core/novelsum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "core/parallel.hpp"
#include "core/rng.hpp"
#include "core/strutil.hpp"

namespace divkit {

namespace {

void check_profile(const DensityProfile& profile, const EmbeddingMatrix& dataset,
                   const NovelSumConfig& cfg) {
    if (profile.sigma.size() != dataset.count)
        raise(errc::profile_mismatch, "density profile covers " +
                                          std::to_string(profile.sigma.size()) + " rows, dataset has " +
                                          std::to_string(dataset.count));
    if (profile.kind != cfg.distance)
        raise(errc::profile_mismatch, "density profile was built under a different distance");
}

void check_config(const NovelSumConfig& cfg) {
    if (!std::isfinite(cfg.alpha) || cfg.alpha < 0.0)
        raise(errc::invalid_spec, "alpha must be finite and nonnegative");
    if (!std::isfinite(cfg.beta) || cfg.beta < 0.0)
        raise(errc::invalid_spec, "beta must be finite and nonnegative");
    if (cfg.density_k == 0) raise(errc::invalid_k, "density k must be positive");
    if (cfg.epsilon <= 0.0) raise(errc::invalid_spec, "epsilon must be positive");
}

// (1/rank)^alpha for rank = 1..n-1; rank weights depend only on position.
std::vector<double> rank_weights(size_t n, double alpha) {
    std::vector<double> w(n, 0.0);
    for (size_t t = 1; t < n; ++t) w[t] = std::pow(1.0 / static_cast<double>(t), alpha);
    return w;
}

} // namespace

std::vector<double> density_aware_matrix(const EmbeddingMatrix& dataset,
                                         const DensityProfile& profile,
                                         const NovelSumConfig& cfg) {
    check_config(cfg);
    check_profile(profile, dataset, cfg);
    const size_t n = dataset.count;
    std::vector<double> scale(n);
    for (size_t j = 0; j < n; ++j) scale[j] = std::pow(profile.sigma[j], cfg.beta);

    DistanceContext ctx(dataset, dataset, cfg.distance);
    std::vector<double> dam(n * n);
    parallel_for(0, n, [&](size_t lo, size_t hi) {
        for (size_t i = lo; i < hi; ++i) {
            double* row = dam.data() + i * n;
            ctx.row(i, row);
            for (size_t j = 0; j < n; ++j) row[j] *= scale[j];
            row[i] = 0.0;
        }
    });
    return dam;
}

std::vector<uint32_t> proximity_ranks(const std::vector<double>& dam, size_t n) {
    if (dam.size() != n * n) raise(errc::size_mismatch, "matrix is not n*n");
    std::vector<uint32_t> ranks(n * n, 0);
    parallel_for(0, n, [&](size_t lo, size_t hi) {
        std::vector<uint32_t> order(n);
        for (size_t i = lo; i < hi; ++i) {
            const double* row = dam.data() + i * n;
            order.clear();
            for (size_t j = 0; j < n; ++j)
                if (j != i) order.push_back(static_cast<uint32_t>(j));
            std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
                return row[a] < row[b] || (row[a] == row[b] && a < b);
            });
            uint32_t* out = ranks.data() + i * n;
            for (size_t t = 0; t < order.size(); ++t) out[order[t]] = static_cast<uint32_t>(t + 1);
            out[i] = 0;
        }
    });
    return ranks;
}

double novelty(size_t i, const std::vector<double>& dam, const std::vector<uint32_t>& ranks,
               size_t n, const NovelSumConfig& cfg) {
    check_config(cfg);
    if (dam.size() != n * n || ranks.size() != n * n)
        raise(errc::size_mismatch, "matrix is not n*n");
    if (i >= n) raise(errc::size_mismatch, "sample index out of range");
    const double* drow = dam.data() + i * n;
    const uint32_t* rrow = ranks.data() + i * n;
    auto weights = rank_weights(n, cfg.alpha);
    // Accumulate in rank order so the value is independent of column layout.
    std::vector<double> by_rank(n, 0.0);
    for (size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        by_rank[rrow[j]] = weights[rrow[j]] * drow[j];
    }
    double acc = 0.0, wsum = 0.0;
    for (size_t t = 1; t < n; ++t) {
        acc += by_rank[t];
        wsum += weights[t];
    }
    if (cfg.normalization == Normalization::RawSum) return acc;
    return wsum > 0.0 ? acc / wsum : 0.0;
}

namespace {

NovelSumResult novelsum_impl(const EmbeddingMatrix& dataset, const EmbeddingMatrix& reference,
                             const NovelSumConfig& cfg, const std::vector<uint32_t>* self_map,
                             const std::string& sigma_source) {
    check_config(cfg);
    if (dataset.count == 0) raise(errc::empty_dataset, "dataset is empty");

    DensityProfile profile =
        self_map ? density_profile(dataset, reference, cfg.density_k, cfg.distance, cfg.epsilon,
                                   *self_map)
                 : density_profile(dataset, reference, cfg.density_k, cfg.distance, cfg.epsilon);

    const size_t n = dataset.count;
    std::vector<double> scale(n);
    for (size_t j = 0; j < n; ++j) scale[j] = std::pow(profile.sigma[j], cfg.beta);
    auto weights = rank_weights(n, cfg.alpha);
    double wsum = std::accumulate(weights.begin(), weights.end(), 0.0);

    // Row streaming: distances -> density scaling -> rank by sorted order ->
    // weighted accumulation, O(n) memory per worker.
    DistanceContext ctx(dataset, dataset, cfg.distance);
    std::vector<double> raw(n, 0.0);
    std::vector<uint64_t> row_hash(n, 0);
    parallel_for(0, n, [&](size_t lo, size_t hi) {
        std::vector<double> delta(n);
        std::vector<uint32_t> order(n);
        std::vector<uint32_t> rank_row(n);
        for (size_t i = lo; i < hi; ++i) {
            ctx.row(i, delta.data());
            for (size_t j = 0; j < n; ++j) delta[j] *= scale[j];
            delta[i] = 0.0;
            order.clear();
            for (size_t j = 0; j < n; ++j)
                if (j != i) order.push_back(static_cast<uint32_t>(j));
            std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
                return delta[a] < delta[b] || (delta[a] == delta[b] && a < b);
            });
            double acc = 0.0;
            for (size_t t = 0; t < order.size(); ++t) acc += weights[t + 1] * delta[order[t]];
            raw[i] = acc;
            rank_row[i] = 0;
            for (size_t t = 0; t < order.size(); ++t) rank_row[order[t]] = static_cast<uint32_t>(t + 1);
            row_hash[i] = fnv1a(rank_row.data(), n * sizeof(uint32_t));
        }
    });

    NovelSumResult out;
    out.breakdown.sigma = std::move(profile.sigma);
    out.breakdown.sigma_source = sigma_source;
    uint64_t digest = 0xcbf29ce484222325ULL;
    for (size_t i = 0; i < n; ++i) digest = fnv1a(&row_hash[i], sizeof(uint64_t), digest);
    {
        char hex[17];
        std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(digest));
        out.breakdown.rank_digest = hex;
    }

    double raw_total = 0.0;
    for (double v : raw) raw_total += v;
    out.breakdown.per_sample_novelty.resize(n);
    double score;
    if (cfg.normalization == Normalization::RawSum) {
        out.breakdown.per_sample_novelty = raw;
        score = raw_total;
    } else {
        double mean = 0.0;
        for (size_t i = 0; i < n; ++i) {
            double v = wsum > 0.0 ? raw[i] / wsum : 0.0;
            out.breakdown.per_sample_novelty[i] = v;
            mean += v;
        }
        score = mean / static_cast<double>(n);
    }

    MetricReport& rep = out.report;
    rep.metric = "novelsum";
    rep.score = score;
    rep.raw_sum = raw_total;
    rep.dataset_size = n;
    rep.config = {{"alpha", format_double(cfg.alpha)},
                  {"beta", format_double(cfg.beta)},
                  {"density_k", std::to_string(cfg.density_k)},
                  {"distance", distance_name(cfg.distance)},
                  {"epsilon", format_double(cfg.epsilon)},
                  {"normalization", normalization_name(cfg.normalization)},
                  {"reference", sigma_source}};
    rep.notes.push_back(
        "density divides by the sum of neighbor distances; the constant factor against "
        "an averaged form is absorbed by beta");
    return out;
}

std::string describe_reference(const EmbeddingMatrix& dataset, const EmbeddingMatrix& reference) {
    if (&dataset == &reference) return "self";
    return "external:" + std::to_string(reference.count) + "x" + std::to_string(reference.dim);
}

} // namespace

NovelSumResult novelsum(const EmbeddingMatrix& dataset, const EmbeddingMatrix& reference,
                        const NovelSumConfig& cfg) {
    return novelsum_impl(dataset, reference, cfg, nullptr, describe_reference(dataset, reference));
}

NovelSumResult novelsum(const EmbeddingMatrix& dataset, const EmbeddingMatrix& reference,
                        const NovelSumConfig& cfg,
                        const std::vector<uint32_t>& dataset_ref_indices) {
    return novelsum_impl(dataset, reference, cfg, &dataset_ref_indices,
                         "subset-of:" + std::to_string(reference.count) + "x" +
                             std::to_string(reference.dim));
}

NovelSumResult novelsum_of_subset(const EmbeddingMatrix& reference,
                                  const std::vector<uint32_t>& indices,
                                  const NovelSumConfig& cfg) {
    EmbeddingMatrix subset = reference.take_rows(indices);
    return novelsum(subset, reference, cfg, indices);
}

} // namespace divkit
