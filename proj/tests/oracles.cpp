#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "core/rng.hpp"

namespace oracle {

using divkit::DistanceKind;
using divkit::EmbeddingMatrix;

double dist(const float* a, const float* b, size_t dim, DistanceKind kind) {
    if (kind == DistanceKind::Cosine) {
        double dot = 0.0, na = 0.0, nb = 0.0;
        for (size_t d = 0; d < dim; ++d) {
            dot += static_cast<double>(a[d]) * b[d];
            na += static_cast<double>(a[d]) * a[d];
            nb += static_cast<double>(b[d]) * b[d];
        }
        return 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
    }
    double sq = 0.0;
    for (size_t d = 0; d < dim; ++d) {
        double diff = static_cast<double>(a[d]) - b[d];
        sq += diff * diff;
    }
    return kind == DistanceKind::SquaredL2 ? sq : std::sqrt(sq);
}

double dist_rows(const EmbeddingMatrix& a, size_t i, const EmbeddingMatrix& b, size_t j,
                 DistanceKind kind) {
    return dist(a.data.data() + i * a.dim, b.data.data() + j * b.dim, a.dim, kind);
}

std::vector<double> pairwise(const EmbeddingMatrix& a, const EmbeddingMatrix& b,
                             DistanceKind kind) {
    std::vector<double> out(a.count * b.count);
    for (size_t i = 0; i < a.count; ++i)
        for (size_t j = 0; j < b.count; ++j) out[i * b.count + j] = dist_rows(a, i, b, j, kind);
    return out;
}

std::vector<std::pair<double, uint32_t>> knn_list(const EmbeddingMatrix& query, size_t qi,
                                                  const EmbeddingMatrix& pool, size_t k,
                                                  DistanceKind kind, uint32_t exclude) {
    std::vector<std::pair<double, uint32_t>> all;
    all.reserve(pool.count);
    for (size_t j = 0; j < pool.count; ++j) {
        if (j == exclude) continue;
        all.emplace_back(dist_rows(query, qi, pool, j, kind), static_cast<uint32_t>(j));
    }
    std::sort(all.begin(), all.end());
    if (all.size() > k) all.resize(k);
    return all;
}

double sigma(const EmbeddingMatrix& samples, size_t i, const EmbeddingMatrix& reference, size_t K,
             DistanceKind kind, double epsilon, uint32_t exclude) {
    auto near = knn_list(samples, i, reference, K, kind, exclude);
    double sum = 0.0;
    for (const auto& [d, idx] : near) sum += d;
    return 1.0 / std::max(sum, epsilon);
}

double distsum_mean(const EmbeddingMatrix& m, DistanceKind kind) {
    double total = 0.0;
    size_t pairs = 0;
    for (size_t i = 0; i < m.count; ++i)
        for (size_t j = i + 1; j < m.count; ++j) {
            total += dist_rows(m, i, m, j, kind);
            ++pairs;
        }
    return total / static_cast<double>(pairs);
}

double distsum_raw(const EmbeddingMatrix& m, DistanceKind kind) {
    double total = 0.0;
    for (size_t i = 0; i < m.count; ++i)
        for (size_t j = 0; j < m.count; ++j)
            if (i != j) total += dist_rows(m, i, m, j, kind);
    return total;
}

double knn_metric(const EmbeddingMatrix& m, size_t k, DistanceKind kind) {
    double acc = 0.0;
    for (size_t i = 0; i < m.count; ++i) {
        auto near = knn_list(m, i, m, k, kind, static_cast<uint32_t>(i));
        acc += near.at(k - 1).first;
    }
    return acc / static_cast<double>(m.count);
}

namespace {

// Cosine-similarity kernel in double precision.
std::vector<double> similarity_kernel(const EmbeddingMatrix& m) {
    const size_t n = m.count, dim = m.dim;
    std::vector<double> unit(n * dim);
    for (size_t i = 0; i < n; ++i) {
        const float* p = m.data.data() + i * dim;
        double s = 0.0;
        for (size_t d = 0; d < dim; ++d) s += static_cast<double>(p[d]) * p[d];
        double inv = 1.0 / std::sqrt(s);
        for (size_t d = 0; d < dim; ++d) unit[i * dim + d] = p[d] * inv;
    }
    std::vector<double> kern(n * n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            double dot = 0.0;
            for (size_t d = 0; d < dim; ++d) dot += unit[i * dim + d] * unit[j * dim + d];
            kern[i * n + j] = dot;
        }
    return kern;
}

} // namespace

std::vector<double> jacobi_eigenvalues(std::vector<double> a, size_t n) {
    if (n == 0) return {};
    auto off_norm = [&]() {
        double s = 0.0;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j) s += a[i * n + j] * a[i * n + j];
        return s;
    };
    double diag_scale = 0.0;
    for (size_t i = 0; i < n; ++i) diag_scale += a[i * n + i] * a[i * n + i];
    diag_scale = std::max(diag_scale, 1e-300);
    for (int sweep = 0; sweep < 100; ++sweep) {
        if (off_norm() <= 1e-28 * diag_scale) break;
        for (size_t p = 0; p + 1 < n; ++p) {
            for (size_t q = p + 1; q < n; ++q) {
                double apq = a[p * n + q];
                if (std::fabs(apq) < 1e-300) continue;
                double app = a[p * n + p], aqq = a[q * n + q];
                double theta = (aqq - app) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (size_t i = 0; i < n; ++i) {
                    double aip = a[i * n + p], aiq = a[i * n + q];
                    a[i * n + p] = c * aip - s * aiq;
                    a[i * n + q] = s * aip + c * aiq;
                }
                for (size_t i = 0; i < n; ++i) {
                    double api = a[p * n + i], aqi = a[q * n + i];
                    a[p * n + i] = c * api - s * aqi;
                    a[q * n + i] = s * api + c * aqi;
                }
            }
        }
    }
    std::vector<double> lam(n);
    for (size_t i = 0; i < n; ++i) lam[i] = a[i * n + i];
    return lam;
}

double vendi(const EmbeddingMatrix& m, double alpha) {
    const size_t n = m.count;
    auto lam = jacobi_eigenvalues(similarity_kernel(m), n);
    double total = 0.0;
    for (double l : lam) total += l;
    double entropy = 0.0, moment = 0.0;
    for (double l : lam) {
        double lb = l / total;
        if (lb < 1e-12) continue; // numerical zeros of the rank-deficient kernel
        entropy -= lb * std::log(lb);
        moment += std::pow(lb, alpha);
    }
    if (std::fabs(alpha - 1.0) < 1e-12) return std::exp(entropy);
    return std::exp(std::log(moment) / (1.0 - alpha));
}

double radius(const EmbeddingMatrix& m) {
    double log_acc = 0.0;
    for (size_t d = 0; d < m.dim; ++d) {
        double mean = 0.0;
        for (size_t i = 0; i < m.count; ++i) mean += m.data[i * m.dim + d];
        mean /= static_cast<double>(m.count);
        double var = 0.0;
        for (size_t i = 0; i < m.count; ++i) {
            double diff = static_cast<double>(m.data[i * m.dim + d]) - mean;
            var += diff * diff;
        }
        double sd = std::sqrt(var / static_cast<double>(m.count));
        log_acc += std::log(std::max(sd, 1e-12));
    }
    return std::exp(log_acc / static_cast<double>(m.dim));
}

double ldd(const EmbeddingMatrix& m) {
    auto lam = jacobi_eigenvalues(similarity_kernel(m), m.count);
    double top = *std::max_element(lam.begin(), lam.end());
    double acc = 0.0;
    for (double l : lam) {
        if (l <= top * 1e-12) return -std::numeric_limits<double>::infinity();
        acc += std::log(l);
    }
    return acc;
}

double facility_location(const EmbeddingMatrix& selected, const EmbeddingMatrix& pool) {
    double score = 0.0;
    for (size_t j = 0; j < pool.count; ++j) {
        double best = -std::numeric_limits<double>::infinity();
        for (size_t s = 0; s < selected.count; ++s)
            best = std::max(best, 1.0 - dist_rows(selected, s, pool, j, DistanceKind::Cosine));
        score += best;
    }
    return score;
}

double entropy_of(const std::vector<uint32_t>& assignments,
                  const std::vector<uint32_t>& selected) {
    std::vector<size_t> counts;
    for (uint32_t idx : selected) {
        uint32_t c = assignments.at(idx);
        if (counts.size() <= c) counts.resize(c + 1, 0);
        ++counts[c];
    }
    double total = static_cast<double>(selected.size());
    double h = 0.0;
    for (size_t c : counts) {
        if (c == 0) continue;
        double p = static_cast<double>(c) / total;
        h -= p * std::log(p);
    }
    return h;
}

double inertia_of(const EmbeddingMatrix& data, const divkit::KMeansResult& km) {
    double acc = 0.0;
    for (size_t i = 0; i < data.count; ++i) {
        const double* mu = km.centroids.data() + km.assignments[i] * km.dim;
        for (size_t d = 0; d < data.dim; ++d) {
            double diff = static_cast<double>(data.data[i * data.dim + d]) - mu[d];
            acc += diff * diff;
        }
    }
    return acc;
}

bool kmeans_is_fixpoint(const EmbeddingMatrix& data, const divkit::KMeansResult& km, double tol) {
    const size_t k = km.k, dim = km.dim;
    // every point assigned to (one of) its nearest centroids
    for (size_t i = 0; i < data.count; ++i) {
        double own = 0.0;
        const double* mu = km.centroids.data() + km.assignments[i] * dim;
        for (size_t d = 0; d < dim; ++d) {
            double diff = static_cast<double>(data.data[i * dim + d]) - mu[d];
            own += diff * diff;
        }
        for (size_t c = 0; c < k; ++c) {
            double alt = 0.0;
            const double* cc = km.centroids.data() + c * dim;
            for (size_t d = 0; d < dim; ++d) {
                double diff = static_cast<double>(data.data[i * dim + d]) - cc[d];
                alt += diff * diff;
            }
            if (alt < own - tol) return false;
        }
    }
    // every nonempty centroid is the mean of its members
    std::vector<double> sums(k * dim, 0.0);
    std::vector<size_t> counts(k, 0);
    for (size_t i = 0; i < data.count; ++i) {
        uint32_t c = km.assignments[i];
        ++counts[c];
        for (size_t d = 0; d < dim; ++d) sums[c * dim + d] += data.data[i * dim + d];
    }
    for (size_t c = 0; c < k; ++c) {
        if (counts[c] == 0) continue;
        for (size_t d = 0; d < dim; ++d) {
            double mean = sums[c * dim + d] / static_cast<double>(counts[c]);
            if (std::fabs(mean - km.centroids[c * dim + d]) > tol) return false;
        }
    }
    return true;
}

namespace {

// Same content hash the library documents for per-sample sampling seeds.
uint64_t sample_hash(const std::vector<std::string>& tokens) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& t : tokens) {
        h = divkit::fnv1a(t.data(), t.size(), h);
        unsigned char sep = 0x1f;
        h = divkit::fnv1a(&sep, 1, h);
    }
    return h;
}

// Distinct-type ratio of one seeded draw; counting done with an ordered set.
double one_draw_ttr(const std::vector<std::string>& tokens, size_t take, divkit::rng& r) {
    auto idx = divkit::sample_without_replacement(tokens.size(), take, r);
    std::set<std::string> unique;
    for (uint32_t i : idx) unique.insert(tokens[i]);
    return static_cast<double>(unique.size()) / static_cast<double>(take);
}

double vocd_model(double d, double length) {
    return d / length * (std::sqrt(1.0 + 2.0 * length / d) - 1.0);
}

} // namespace

double ttr(const divkit::Corpus& corpus, const divkit::MetricConfig& cfg) {
    double acc = 0.0;
    for (const auto& sample : corpus.samples) {
        size_t take = std::min(sample.size(), cfg.ttr_sample_len);
        divkit::rng r(divkit::mix64(cfg.seed, sample_hash(sample)));
        acc += one_draw_ttr(sample, take, r);
    }
    return acc / static_cast<double>(corpus.size());
}

double vocd(const divkit::Corpus& corpus, const divkit::MetricConfig& cfg) {
    std::vector<std::pair<size_t, double>> observed;
    for (size_t len : cfg.vocd_lengths) {
        double acc = 0.0;
        size_t usable = 0;
        for (const auto& sample : corpus.samples) {
            if (sample.size() < len) continue;
            divkit::rng r(divkit::mix64(divkit::mix64(cfg.seed, sample_hash(sample)), len));
            double per = 0.0;
            for (size_t t = 0; t < cfg.vocd_subsamples; ++t) per += one_draw_ttr(sample, len, r);
            acc += per / static_cast<double>(cfg.vocd_subsamples);
            ++usable;
        }
        if (usable > 0) observed.emplace_back(len, acc / static_cast<double>(usable));
    }
    if (observed.empty()) throw std::runtime_error("vocd oracle: no usable lengths");

    auto sse = [&](double d) {
        double s = 0.0;
        for (const auto& [len, obs] : observed) {
            double diff = obs - vocd_model(d, static_cast<double>(len));
            s += diff * diff;
        }
        return s;
    };
    // Fine log grid, then ternary refinement inside the best bracket.
    constexpr double kLo = 0.01, kHi = 1000.0;
    constexpr size_t kGrid = 3000;
    double best = kLo, best_sse = std::numeric_limits<double>::infinity();
    size_t best_i = 0;
    for (size_t i = 0; i < kGrid; ++i) {
        double d = kLo * std::pow(kHi / kLo, static_cast<double>(i) / (kGrid - 1));
        double s = sse(d);
        if (s < best_sse) { best_sse = s; best = d; best_i = i; }
    }
    double lo = best_i == 0 ? kLo
                            : kLo * std::pow(kHi / kLo, static_cast<double>(best_i - 1) / (kGrid - 1));
    double hi = best_i == kGrid - 1
                    ? kHi
                    : kLo * std::pow(kHi / kLo, static_cast<double>(best_i + 1) / (kGrid - 1));
    for (int it = 0; it < 400 && (hi - lo) > 1e-13 * hi; ++it) {
        double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (sse(m1) <= sse(m2)) hi = m2;
        else lo = m1;
    }
    double refined = 0.5 * (lo + hi);
    return sse(refined) <= best_sse ? refined : best;
}

NovelResult novelsum(const EmbeddingMatrix& dataset, const EmbeddingMatrix& reference,
                     const divkit::NovelSumConfig& cfg, const std::vector<uint32_t>& self_of) {
    const size_t n = dataset.count;
    NovelResult out;
    out.sigma.resize(n);
    for (size_t i = 0; i < n; ++i) {
        uint32_t excl = self_of.empty() ? kNone : self_of[i];
        out.sigma[i] =
            sigma(dataset, i, reference, cfg.density_k, cfg.distance, cfg.epsilon, excl);
    }

    // density-aware distances: target row's sigma scales each column
    std::vector<double> dam(n * n, 0.0);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            dam[i * n + j] =
                std::pow(out.sigma[j], cfg.beta) * dist_rows(dataset, i, dataset, j, cfg.distance);
        }

    double wsum = 0.0;
    for (size_t t = 1; t < n; ++t) wsum += std::pow(1.0 / static_cast<double>(t), cfg.alpha);

    out.per_sample.resize(n);
    for (size_t i = 0; i < n; ++i) {
        std::vector<uint32_t> order;
        for (size_t j = 0; j < n; ++j)
            if (j != i) order.push_back(static_cast<uint32_t>(j));
        std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
            double da = dam[i * n + a], db = dam[i * n + b];
            return da < db || (da == db && a < b);
        });
        double v = 0.0;
        for (size_t t = 0; t < order.size(); ++t)
            v += std::pow(1.0 / static_cast<double>(t + 1), cfg.alpha) * dam[i * n + order[t]];
        out.raw += v;
        out.per_sample[i] =
            cfg.normalization == divkit::Normalization::RawSum ? v : (wsum > 0.0 ? v / wsum : 0.0);
    }
    if (cfg.normalization == divkit::Normalization::RawSum) {
        out.mean = out.raw;
    } else {
        double acc = 0.0;
        for (double v : out.per_sample) acc += v;
        out.mean = acc / static_cast<double>(n);
    }
    return out;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

std::vector<double> ranks_average_ties(const std::vector<double>& v) {
    const size_t n = v.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
        i = j + 1;
    }
    return ranks;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    return pearson(ranks_average_ties(x), ranks_average_ties(y));
}

std::vector<double> zscore_sum(const std::vector<std::vector<double>>& lists) {
    const size_t n = lists.at(0).size();
    std::vector<double> out(n, 0.0);
    for (const auto& v : lists) {
        double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
        double var = 0.0;
        for (double x : v) var += (x - mean) * (x - mean);
        double sd = std::sqrt(var / static_cast<double>(n));
        if (sd == 0.0) continue;
        for (size_t i = 0; i < n; ++i) out[i] += (v[i] - mean) / sd;
    }
    return out;
}

} // namespace oracle
