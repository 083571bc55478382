#include "core/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "core/parallel.hpp"
#include "core/rng.hpp"

namespace divkit {

namespace {

double sq_dist(const float* x, const double* c, size_t dim) {
    double acc = 0.0;
    for (size_t d = 0; d < dim; ++d) {
        double diff = static_cast<double>(x[d]) - c[d];
        acc += diff * diff;
    }
    return acc;
}

double sq_dist_rows(const float* x, const float* y, size_t dim) {
    double acc = 0.0;
    for (size_t d = 0; d < dim; ++d) {
        double diff = static_cast<double>(x[d]) - y[d];
        acc += diff * diff;
    }
    return acc;
}

} // namespace

KMeansResult kmeans(const EmbeddingMatrix& data, size_t k, uint64_t seed, size_t max_iters) {
    const size_t n = data.count;
    const size_t dim = data.dim;
    if (n == 0) raise(errc::empty_dataset, "k-means needs at least one row");
    if (k == 0 || k > n)
        raise(errc::invalid_k, "k=" + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");

    // Canonical row order: lexicographic by value. All seeded choices and all
    // accumulations run in this order, which makes the outcome independent of
    // how the input rows happened to be arranged.
    std::vector<uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
        auto ra = data.row(a), rb = data.row(b);
        return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
    });
    auto crow = [&](size_t ci) { return data.data.data() + static_cast<size_t>(order[ci]) * dim; };

    rng r(mix64(seed, 0x6b6d65616e73ULL));
    std::vector<double> centroids(k * dim, 0.0);

    // k-means++ seeding over the canonical view.
    std::vector<double> mindist(n, std::numeric_limits<double>::infinity());
    {
        size_t first = r.next_index(n);
        const float* p = crow(first);
        for (size_t d = 0; d < dim; ++d) centroids[d] = p[d];
        for (size_t i = 0; i < n; ++i) mindist[i] = sq_dist_rows(crow(i), p, dim);
        for (size_t c = 1; c < k; ++c) {
            double total = 0.0;
            for (size_t i = 0; i < n; ++i) total += mindist[i];
            size_t pick;
            if (total > 0.0) {
                double target = r.next_double() * total;
                double accum = 0.0;
                pick = n - 1;
                for (size_t i = 0; i < n; ++i) {
                    accum += mindist[i];
                    if (accum >= target) { pick = i; break; }
                }
            } else {
                pick = r.next_index(n); // all rows coincide with current centers
            }
            const float* q = crow(pick);
            double* dst = centroids.data() + c * dim;
            for (size_t d = 0; d < dim; ++d) dst[d] = q[d];
            for (size_t i = 0; i < n; ++i)
                mindist[i] = std::min(mindist[i], sq_dist_rows(crow(i), q, dim));
        }
    }

    std::vector<uint32_t> assign(n, 0);
    std::vector<double> adist(n, 0.0);
    auto assign_pass = [&]() {
        parallel_for(0, n, [&](size_t lo, size_t hi) {
            for (size_t i = lo; i < hi; ++i) {
                const float* x = crow(i);
                uint32_t best = 0;
                double bestd = sq_dist(x, centroids.data(), dim);
                for (size_t c = 1; c < k; ++c) {
                    double d = sq_dist(x, centroids.data() + c * dim, dim);
                    if (d < bestd) { bestd = d; best = static_cast<uint32_t>(c); }
                }
                assign[i] = best;
                adist[i] = bestd;
            }
        });
    };

    assign_pass();
    size_t iterations = 0;
    std::vector<uint32_t> prev(n);
    std::vector<size_t> counts(k);
    std::vector<char> taken(n);
    for (size_t it = 0; it < max_iters; ++it) {
        ++iterations;
        std::fill(centroids.begin(), centroids.end(), 0.0);
        std::fill(counts.begin(), counts.end(), 0);
        for (size_t i = 0; i < n; ++i) {
            double* c = centroids.data() + static_cast<size_t>(assign[i]) * dim;
            const float* x = crow(i);
            for (size_t d = 0; d < dim; ++d) c[d] += x[d];
            ++counts[assign[i]];
        }
        std::fill(taken.begin(), taken.end(), 0);
        for (size_t c = 0; c < k; ++c) {
            if (counts[c] > 0) {
                double inv = 1.0 / static_cast<double>(counts[c]);
                double* dst = centroids.data() + c * dim;
                for (size_t d = 0; d < dim; ++d) dst[d] *= inv;
            } else {
                // Re-seat the empty cluster on the most misfit point.
                size_t far = n;
                double fard = -1.0;
                for (size_t i = 0; i < n; ++i) {
                    if (!taken[i] && adist[i] > fard) { fard = adist[i]; far = i; }
                }
                taken[far] = 1;
                const float* x = crow(far);
                double* dst = centroids.data() + c * dim;
                for (size_t d = 0; d < dim; ++d) dst[d] = x[d];
            }
        }
        prev.swap(assign);
        assign_pass();
        if (assign == prev) break;
    }

    KMeansResult out;
    out.k = k;
    out.dim = dim;
    out.centroids = std::move(centroids);
    out.iterations = iterations;
    out.assignments.resize(n);
    double inertia = 0.0;
    for (size_t i = 0; i < n; ++i) {
        out.assignments[order[i]] = assign[i];
        inertia += adist[i];
    }
    out.inertia = inertia;
    return out;
}

} // namespace divkit
