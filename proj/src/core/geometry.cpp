#include "core/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "core/parallel.hpp"

namespace divkit {

namespace {

// Cosine distance of bitwise-equal rows must come out exactly 0 (and never
// negative), so collapse rounding residue when it is small enough to be one.
constexpr double kCosineSnap = 1e-12;

inline double snap_cosine(double d, const float* x, const float* y, size_t dim) {
    if (d > kCosineSnap) return d;
    if (d < 0.0) return 0.0;
    if (std::memcmp(x, y, dim * sizeof(float)) == 0) return 0.0;
    return d;
}

// Reciprocal norms for cosine mode; rejects zero-norm rows up front.
std::vector<double> inv_norms(const EmbeddingMatrix& m, const char* role) {
    std::vector<double> inv(m.count);
    for (size_t i = 0; i < m.count; ++i) {
        const float* p = m.data.data() + i * m.dim;
        double s = 0.0;
        for (size_t d = 0; d < m.dim; ++d) s += static_cast<double>(p[d]) * p[d];
        if (s <= 0.0)
            raise(errc::zero_norm_vector,
                  std::string(role) + " row " + std::to_string(i) + " has zero norm in cosine mode");
        inv[i] = 1.0 / std::sqrt(s);
    }
    return inv;
}

} // namespace

DistanceContext::DistanceContext(const EmbeddingMatrix& a, const EmbeddingMatrix& b,
                                 DistanceKind kind)
    : a_(&a), b_(&b), kind_(kind) {
    if (a.dim != b.dim)
        raise(errc::dim_mismatch, "dimension mismatch: " + std::to_string(a.dim) + " vs " +
                                      std::to_string(b.dim));
    if (kind == DistanceKind::Cosine) {
        inv_norm_a_ = inv_norms(a, "left");
        inv_norm_b_ = same_store() ? inv_norm_a_ : inv_norms(b, "right");
    }
}

void DistanceContext::row(size_t i, double* out) const {
    const size_t dim = a_->dim;
    const size_t nb = b_->count;
    const float* x = a_->data.data() + i * dim;
    const float* bdata = b_->data.data();
    if (kind_ == DistanceKind::Cosine) {
        const double sx = inv_norm_a_[i];
        for (size_t j = 0; j < nb; ++j) {
            const float* y = bdata + j * dim;
            double dot = 0.0;
            for (size_t d = 0; d < dim; ++d) dot += static_cast<double>(x[d]) * y[d];
            out[j] = snap_cosine(1.0 - dot * sx * inv_norm_b_[j], x, y, dim);
        }
    } else {
        for (size_t j = 0; j < nb; ++j) {
            const float* y = bdata + j * dim;
            double acc = 0.0;
            for (size_t d = 0; d < dim; ++d) {
                double diff = static_cast<double>(x[d]) - y[d];
                acc += diff * diff;
            }
            out[j] = acc;
        }
        if (kind_ == DistanceKind::L2)
            for (size_t j = 0; j < nb; ++j) out[j] = std::sqrt(out[j]);
    }
    if (same_store()) out[i] = 0.0;
}

double DistanceContext::one(size_t i, size_t j) const {
    const size_t dim = a_->dim;
    const float* x = a_->data.data() + i * dim;
    const float* y = b_->data.data() + j * dim;
    if (same_store() && i == j) return 0.0;
    if (kind_ == DistanceKind::Cosine) {
        double dot = 0.0;
        for (size_t d = 0; d < dim; ++d) dot += static_cast<double>(x[d]) * y[d];
        return snap_cosine(1.0 - dot * inv_norm_a_[i] * inv_norm_b_[j], x, y, dim);
    }
    double acc = 0.0;
    for (size_t d = 0; d < dim; ++d) {
        double diff = static_cast<double>(x[d]) - y[d];
        acc += diff * diff;
    }
    return kind_ == DistanceKind::L2 ? std::sqrt(acc) : acc;
}

std::vector<double> pairwise_distances(const EmbeddingMatrix& a, const EmbeddingMatrix& b,
                                       DistanceKind kind) {
    DistanceContext ctx(a, b, kind);
    std::vector<double> out(a.count * b.count);
    parallel_for(0, a.count, [&](size_t lo, size_t hi) {
        for (size_t i = lo; i < hi; ++i) ctx.row(i, out.data() + i * b.count);
    });
    return out;
}

namespace {

std::vector<std::vector<Neighbor>> knn_impl(const EmbeddingMatrix& query,
                                            const EmbeddingMatrix& pool, size_t k,
                                            DistanceKind kind,
                                            const std::vector<uint32_t>* self_map) {
    if (k == 0) raise(errc::invalid_k, "k must be positive");
    if (self_map && self_map->size() != query.count)
        raise(errc::size_mismatch, "self map length does not match query count");
    size_t excluded = self_map ? 1 : 0; // at most one exclusion per query row
    if (k + excluded > pool.count)
        raise(errc::k_too_large, "k=" + std::to_string(k) + " exceeds available pool of " +
                                     std::to_string(pool.count) +
                                     (excluded ? " (self excluded)" : ""));

    DistanceContext ctx(query, pool, kind);
    std::vector<std::vector<Neighbor>> result(query.count);
    parallel_for(0, query.count, [&](size_t lo, size_t hi) {
        std::vector<double> dist(pool.count);
        std::vector<Neighbor> heap; // heap front = current worst of the k best
        auto better = [](const Neighbor& a, const Neighbor& b) {
            return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
        };
        for (size_t qi = lo; qi < hi; ++qi) {
            ctx.row(qi, dist.data());
            uint32_t self = self_map ? (*self_map)[qi] : kNoSelf;
            heap.clear();
            for (size_t j = 0; j < pool.count; ++j) {
                if (static_cast<uint32_t>(j) == self) continue;
                Neighbor cand{static_cast<uint32_t>(j), dist[j]};
                if (heap.size() < k) {
                    heap.push_back(cand);
                    std::push_heap(heap.begin(), heap.end(), better);
                } else if (better(cand, heap.front())) {
                    std::pop_heap(heap.begin(), heap.end(), better);
                    heap.back() = cand;
                    std::push_heap(heap.begin(), heap.end(), better);
                }
            }
            std::sort(heap.begin(), heap.end(), better);
            result[qi] = heap;
        }
    });
    return result;
}

} // namespace

std::vector<std::vector<Neighbor>> knn(const EmbeddingMatrix& query, const EmbeddingMatrix& pool,
                                       size_t k, DistanceKind kind, bool exclude_self) {
    if (exclude_self && &query == &pool) {
        std::vector<uint32_t> identity(query.count);
        for (size_t i = 0; i < query.count; ++i) identity[i] = static_cast<uint32_t>(i);
        return knn_impl(query, pool, k, kind, &identity);
    }
    return knn_impl(query, pool, k, kind, nullptr);
}

std::vector<std::vector<Neighbor>> knn(const EmbeddingMatrix& query, const EmbeddingMatrix& pool,
                                       size_t k, DistanceKind kind,
                                       const std::vector<uint32_t>& self_map) {
    return knn_impl(query, pool, k, kind, &self_map);
}

namespace {

DensityProfile density_impl(const EmbeddingMatrix& samples, const EmbeddingMatrix& reference,
                            size_t k, DistanceKind kind, double epsilon,
                            const std::vector<uint32_t>* self_map) {
    if (epsilon <= 0.0) raise(errc::invalid_spec, "density epsilon must be positive");
    auto neighbors = self_map ? knn(samples, reference, k, kind, *self_map)
                              : knn(samples, reference, k, kind, /*exclude_self=*/true);
    DensityProfile profile;
    profile.k = k;
    profile.kind = kind;
    profile.epsilon = epsilon;
    profile.reference_count = reference.count;
    profile.sigma.resize(samples.count);
    for (size_t i = 0; i < samples.count; ++i) {
        double sum = 0.0;
        for (const auto& nb : neighbors[i]) sum += nb.distance;
        profile.sigma[i] = 1.0 / std::max(sum, epsilon);
    }
    return profile;
}

} // namespace

DensityProfile density_profile(const EmbeddingMatrix& samples, const EmbeddingMatrix& reference,
                               size_t k, DistanceKind kind, double epsilon) {
    return density_impl(samples, reference, k, kind, epsilon, nullptr);
}

DensityProfile density_profile(const EmbeddingMatrix& samples, const EmbeddingMatrix& reference,
                               size_t k, DistanceKind kind, double epsilon,
                               const std::vector<uint32_t>& self_map) {
    return density_impl(samples, reference, k, kind, epsilon, &self_map);
}

} // namespace divkit
