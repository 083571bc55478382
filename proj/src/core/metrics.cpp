#include "core/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>
#include <unordered_set>

#include <Eigen/Core>
#include <Eigen/SVD>

#include "core/geometry.hpp"
#include "core/kmeans.hpp"
#include "core/parallel.hpp"
#include "core/rng.hpp"
#include "core/strutil.hpp"

namespace divkit {

namespace {

using kv_list = std::vector<std::pair<std::string, std::string>>;

std::string join_sizes(const std::vector<size_t>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(v[i]);
    }
    return out;
}

// Per-sample hash so token subsampling depends on content, not row position.
uint64_t sample_hash(const std::vector<std::string>& tokens) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& t : tokens) {
        h = fnv1a(t.data(), t.size(), h);
        unsigned char sep = 0x1f;
        h = fnv1a(&sep, 1, h);
    }
    return h;
}

double subsample_ttr(const std::vector<std::string>& tokens, size_t take, rng& r) {
    auto idx = sample_without_replacement(tokens.size(), take, r);
    std::unordered_set<std::string_view> unique;
    unique.reserve(take * 2);
    for (uint32_t i : idx) unique.insert(tokens[i]);
    return static_cast<double>(unique.size()) / static_cast<double>(take);
}

// Row-normalized copy in double precision; the cosine-similarity kernel of the
// data is X * X^T for this X, so its eigenvalues are squared singular values.
Eigen::MatrixXd normalized_rows(const EmbeddingMatrix& data) {
    Eigen::MatrixXd x(data.count, data.dim);
    for (size_t i = 0; i < data.count; ++i) {
        const float* p = data.data.data() + i * data.dim;
        double s = 0.0;
        for (size_t d = 0; d < data.dim; ++d) s += static_cast<double>(p[d]) * p[d];
        if (s <= 0.0)
            raise(errc::zero_norm_vector,
                  "row " + std::to_string(i) + " has zero norm in cosine mode");
        double inv = 1.0 / std::sqrt(s);
        for (size_t d = 0; d < data.dim; ++d) x(i, d) = static_cast<double>(p[d]) * inv;
    }
    return x;
}

std::vector<double> kernel_singular_values(const EmbeddingMatrix& data) {
    Eigen::MatrixXd x = normalized_rows(data);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(x);
    if (svd.info() != Eigen::Success)
        raise(errc::eigen_failure, "singular value decomposition did not converge");
    const auto& sv = svd.singularValues();
    return std::vector<double>(sv.data(), sv.data() + sv.size());
}

} // namespace

MetricReport ttr(const Corpus& corpus, const MetricConfig& cfg) {
    if (corpus.size() == 0) raise(errc::empty_corpus, "corpus has no samples");
    if (cfg.ttr_sample_len == 0) raise(errc::invalid_spec, "ttr sample length must be positive");
    double acc = 0.0;
    for (const auto& sample : corpus.samples) {
        size_t take = std::min(sample.size(), cfg.ttr_sample_len);
        rng r(mix64(cfg.seed, sample_hash(sample)));
        acc += subsample_ttr(sample, take, r);
    }
    MetricReport rep;
    rep.metric = "ttr";
    rep.score = acc / static_cast<double>(corpus.size());
    rep.dataset_size = corpus.size();
    rep.config = kv_list{{"sample_len", std::to_string(cfg.ttr_sample_len)},
                         {"seed", std::to_string(cfg.seed)}};
    return rep;
}

double vocd_curve(double d, double length) {
    return d / length * (std::sqrt(1.0 + 2.0 * length / d) - 1.0);
}

namespace {

double vocd_sse(double d, const std::vector<std::pair<size_t, double>>& observed) {
    double sse = 0.0;
    for (const auto& [len, obs] : observed) {
        double diff = obs - vocd_curve(d, static_cast<double>(len));
        sse += diff * diff;
    }
    return sse;
}

} // namespace

MetricReport vocd_d(const Corpus& corpus, const MetricConfig& cfg) {
    if (corpus.size() == 0) raise(errc::empty_corpus, "corpus has no samples");
    if (cfg.vocd_lengths.empty() || cfg.vocd_subsamples == 0)
        raise(errc::invalid_spec, "vocd needs at least one length and one subsample");

    MetricReport rep;
    rep.metric = "vocd-d";
    rep.dataset_size = corpus.size();

    // Observed mean TTR per subsample length, averaged per sample first.
    std::vector<std::pair<size_t, double>> observed;
    for (size_t len : cfg.vocd_lengths) {
        double acc = 0.0;
        size_t usable = 0;
        for (const auto& sample : corpus.samples) {
            if (sample.size() < len) continue;
            rng r(mix64(mix64(cfg.seed, sample_hash(sample)), len));
            double per_sample = 0.0;
            for (size_t t = 0; t < cfg.vocd_subsamples; ++t)
                per_sample += subsample_ttr(sample, len, r);
            acc += per_sample / static_cast<double>(cfg.vocd_subsamples);
            ++usable;
        }
        if (usable == 0) {
            rep.notes.push_back("length " + std::to_string(len) + " skipped: no sample long enough");
            continue;
        }
        observed.emplace_back(len, acc / static_cast<double>(usable));
    }
    if (observed.empty())
        raise(errc::no_usable_samples, "no sample reaches any requested subsample length");

    // Bounded 1-D fit: coarse log grid, then golden-section inside the best bracket.
    constexpr double kLo = 0.01, kHi = 1000.0;
    constexpr size_t kGrid = 600;
    double best_d = kLo, best_sse = std::numeric_limits<double>::infinity();
    size_t best_i = 0;
    for (size_t i = 0; i < kGrid; ++i) {
        double d = kLo * std::pow(kHi / kLo, static_cast<double>(i) / (kGrid - 1));
        double sse = vocd_sse(d, observed);
        if (sse < best_sse) { best_sse = sse; best_d = d; best_i = i; }
    }
    double lo = best_i == 0 ? kLo
                            : kLo * std::pow(kHi / kLo, static_cast<double>(best_i - 1) / (kGrid - 1));
    double hi = best_i == kGrid - 1
                    ? kHi
                    : kLo * std::pow(kHi / kLo, static_cast<double>(best_i + 1) / (kGrid - 1));
    constexpr double kGolden = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
    double f1 = vocd_sse(x1, observed), f2 = vocd_sse(x2, observed);
    for (int it = 0; it < 200 && (b - a) > 1e-12 * b; ++it) {
        if (f1 <= f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - kGolden * (b - a);
            f1 = vocd_sse(x1, observed);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + kGolden * (b - a);
            f2 = vocd_sse(x2, observed);
        }
    }
    double refined = 0.5 * (a + b);
    rep.score = vocd_sse(refined, observed) <= best_sse ? refined : best_d;
    rep.config = kv_list{{"lengths", join_sizes(cfg.vocd_lengths)},
                         {"subsamples", std::to_string(cfg.vocd_subsamples)},
                         {"seed", std::to_string(cfg.seed)}};
    return rep;
}

MetricReport dist_sum(const EmbeddingMatrix& data, const MetricConfig& cfg) {
    if (data.count < 2) raise(errc::too_few_samples, "distance sum needs at least two rows");
    DistanceContext ctx(data, data, cfg.distance);
    std::vector<double> row_sums(data.count, 0.0);
    parallel_for(0, data.count, [&](size_t lo, size_t hi) {
        std::vector<double> dist(data.count);
        for (size_t i = lo; i < hi; ++i) {
            ctx.row(i, dist.data());
            double s = 0.0;
            for (size_t j = 0; j < data.count; ++j) s += dist[j];
            row_sums[i] = s;
        }
    });
    double raw = 0.0;
    for (double s : row_sums) raw += s; // ordered pairs, both directions
    MetricReport rep;
    rep.metric = std::string("distsum-") + distance_name(cfg.distance);
    rep.raw_sum = raw;
    rep.score = raw / (static_cast<double>(data.count) * static_cast<double>(data.count - 1));
    rep.dataset_size = data.count;
    rep.notes.push_back("mean over n(n-1)/2 pairs; raw_sum counts both directions");
    rep.config = kv_list{{"distance", distance_name(cfg.distance)}};
    return rep;
}

MetricReport knn_distance(const EmbeddingMatrix& data, const MetricConfig& cfg) {
    if (cfg.knn_k == 0) raise(errc::invalid_k, "knn metric needs k >= 1");
    auto neighbors = knn(data, data, cfg.knn_k, cfg.distance, /*exclude_self=*/true);
    double acc = 0.0;
    for (const auto& nb : neighbors) acc += nb.back().distance;
    MetricReport rep;
    rep.metric = "knn";
    rep.score = acc / static_cast<double>(data.count);
    rep.dataset_size = data.count;
    rep.config = kv_list{{"k", std::to_string(cfg.knn_k)},
                         {"distance", distance_name(cfg.distance)}};
    return rep;
}

MetricReport cluster_inertia(const EmbeddingMatrix& data, const MetricConfig& cfg) {
    if (data.count == 0) raise(errc::empty_dataset, "inertia needs a nonempty dataset");
    size_t k = cfg.inertia_clusters;
    MetricReport rep;
    rep.metric = "inertia";
    if (k > data.count) {
        k = data.count;
        rep.notes.push_back("clusters reduced to dataset size " + std::to_string(k));
    }
    if (k == 0) raise(errc::invalid_k, "inertia needs at least one cluster");
    KMeansResult km = kmeans(data, k, cfg.seed);
    rep.score = km.inertia;
    rep.dataset_size = data.count;
    rep.config = kv_list{{"clusters", std::to_string(k)}, {"seed", std::to_string(cfg.seed)}};
    return rep;
}

MetricReport vendi_score(const EmbeddingMatrix& data, const MetricConfig& cfg) {
    if (data.count == 0) raise(errc::empty_dataset, "vendi needs a nonempty dataset");
    if (cfg.vendi_alpha < 0.0 || !std::isfinite(cfg.vendi_alpha))
        raise(errc::invalid_spec, "vendi alpha must be finite and nonnegative");
    auto sv = kernel_singular_values(data);
    std::vector<double> lambda(sv.size());
    double total = 0.0;
    for (size_t i = 0; i < sv.size(); ++i) {
        lambda[i] = sv[i] * sv[i];
        total += lambda[i];
    }
    if (total <= 0.0) raise(errc::eigen_failure, "kernel trace vanished");

    double alpha = cfg.vendi_alpha;
    double score;
    // Trace-normalized spectrum; entries below -1e-8 would be rejected, tiny
    // negatives clipped to zero. The factorization above cannot produce them,
    // the guard documents the contract.
    double entropy = 0.0, moment = 0.0;
    for (double l : lambda) {
        double lb = l / total;
        if (lb < -1e-8) raise(errc::negative_eigenvalue, "kernel eigenvalue below tolerance");
        if (lb <= 0.0) continue;
        entropy -= lb * std::log(lb);
        moment += std::pow(lb, alpha);
    }
    if (std::abs(alpha - 1.0) < 1e-12) {
        score = std::exp(entropy);
    } else {
        score = std::exp(std::log(moment) / (1.0 - alpha));
    }
    MetricReport rep;
    rep.metric = "vendi";
    rep.score = score;
    rep.dataset_size = data.count;
    rep.config = kv_list{{"alpha", format_double(alpha)}};
    return rep;
}

MetricReport radius(const EmbeddingMatrix& data, const MetricConfig& cfg) {
    (void)cfg;
    if (data.count == 0) raise(errc::empty_dataset, "radius needs a nonempty dataset");
    if (data.dim == 0) raise(errc::invalid_spec, "radius needs at least one dimension");
    constexpr double kFloor = 1e-12;
    const double n = static_cast<double>(data.count);
    bool floored = false;
    double log_acc = 0.0;
    for (size_t d = 0; d < data.dim; ++d) {
        double mean = 0.0;
        for (size_t i = 0; i < data.count; ++i) mean += data.data[i * data.dim + d];
        mean /= n;
        double var = 0.0;
        for (size_t i = 0; i < data.count; ++i) {
            double diff = static_cast<double>(data.data[i * data.dim + d]) - mean;
            var += diff * diff;
        }
        double sd = std::sqrt(var / n);
        if (sd < kFloor) { sd = kFloor; floored = true; }
        log_acc += std::log(sd);
    }
    MetricReport rep;
    rep.metric = "radius";
    rep.score = std::exp(log_acc / static_cast<double>(data.dim));
    rep.dataset_size = data.count;
    if (floored) rep.notes.push_back("per-dimension deviation floored at 1e-12");
    return rep;
}

MetricReport log_det_distance(const EmbeddingMatrix& data, const MetricConfig& cfg) {
    (void)cfg;
    if (data.count == 0) raise(errc::empty_dataset, "log-det needs a nonempty dataset");
    auto sv = kernel_singular_values(data);
    MetricReport rep;
    rep.metric = "ldd";
    rep.dataset_size = data.count;

    double tol = sv.empty() ? 0.0
                            : sv.front() * static_cast<double>(std::max(data.count, data.dim)) *
                                  std::numeric_limits<double>::epsilon();
    if (sv.size() < data.count || sv.back() <= tol) {
        rep.score = -std::numeric_limits<double>::infinity();
        rep.notes.push_back("similarity kernel singular to tolerance");
        return rep;
    }
    double logdet = 0.0;
    for (double s : sv) logdet += 2.0 * std::log(s);
    rep.score = logdet;
    return rep;
}

MetricReport facility_location(const EmbeddingMatrix& selected, const EmbeddingMatrix& pool,
                               const MetricConfig& cfg) {
    (void)cfg;
    if (selected.count == 0) raise(errc::empty_selection, "facility location needs a selection");
    if (pool.count == 0) raise(errc::empty_dataset, "facility location needs a pool");
    if (selected.dim != pool.dim)
        raise(errc::dim_mismatch, "selection and pool dimensions differ");
    Eigen::MatrixXd sel = normalized_rows(selected);
    Eigen::MatrixXd pl = normalized_rows(pool);
    std::vector<double> best(pool.count);
    parallel_for(0, pool.count, [&](size_t lo, size_t hi) {
        for (size_t j = lo; j < hi; ++j) {
            double b = -std::numeric_limits<double>::infinity();
            for (Eigen::Index s = 0; s < sel.rows(); ++s) {
                double sim = sel.row(s).dot(pl.row(j));
                if (sim > b) b = sim;
            }
            best[j] = b;
        }
    });
    double score = 0.0;
    for (double b : best) score += b;
    MetricReport rep;
    rep.metric = "fl";
    rep.score = score;
    rep.dataset_size = selected.count;
    rep.config = kv_list{{"pool_size", std::to_string(pool.count)}};
    return rep;
}

MetricReport partition_entropy(std::span<const uint32_t> selected_indices,
                               const EmbeddingMatrix& pool, const MetricConfig& cfg) {
    if (selected_indices.empty()) raise(errc::empty_selection, "entropy needs a selection");
    if (cfg.entropy_clusters == 0 || cfg.entropy_clusters > pool.count)
        raise(errc::invalid_k, "entropy clusters must lie in [1, pool size]");
    for (uint32_t idx : selected_indices) {
        if (idx >= pool.count)
            raise(errc::size_mismatch, "selected index " + std::to_string(idx) + " out of pool");
    }
    KMeansResult km = kmeans(pool, cfg.entropy_clusters, cfg.seed);
    std::vector<size_t> counts(cfg.entropy_clusters, 0);
    for (uint32_t idx : selected_indices) ++counts[km.assignments[idx]];
    double total = static_cast<double>(selected_indices.size());
    double entropy = 0.0;
    for (size_t c : counts) {
        if (c == 0) continue;
        double p = static_cast<double>(c) / total;
        entropy -= p * std::log(p);
    }
    MetricReport rep;
    rep.metric = "entropy";
    rep.score = entropy;
    rep.dataset_size = selected_indices.size();
    rep.config = kv_list{{"clusters", std::to_string(cfg.entropy_clusters)},
                         {"seed", std::to_string(cfg.seed)}};
    return rep;
}

} // namespace divkit
