#include "core/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "core/kmeans.hpp"
#include "core/parallel.hpp"
#include "core/rng.hpp"
#include "core/strutil.hpp"

namespace divkit {

namespace {

using kv_list = std::vector<std::pair<std::string, std::string>>;

// One shared stream construction so strategies that degenerate into plain
// uniform sampling (single-cluster quota draw, one-copy duplication) produce
// byte-identical picks to random_select under the same seed.
rng selection_rng(uint64_t seed) { return rng(mix64(seed, 0x646b2d73656c6563ULL)); }

void check_pool_budget(const EmbeddingMatrix& pool, size_t budget, bool with_repetition = false) {
    if (pool.count == 0) raise(errc::empty_dataset, "pool is empty");
    if (budget == 0) raise(errc::invalid_spec, "budget must be positive");
    if (!with_repetition && budget > pool.count)
        raise(errc::budget_too_large, "budget " + std::to_string(budget) + " exceeds pool of " +
                                          std::to_string(pool.count));
}

kv_list base_config(const SelectionConfig& cfg) {
    return kv_list{{"budget", std::to_string(cfg.budget)}, {"seed", std::to_string(cfg.seed)}};
}

// Row-normalized copy for cosine-similarity strategies.
std::vector<double> unit_rows(const EmbeddingMatrix& m) {
    std::vector<double> out(m.count * m.dim);
    for (size_t i = 0; i < m.count; ++i) {
        const float* p = m.data.data() + i * m.dim;
        double s = 0.0;
        for (size_t d = 0; d < m.dim; ++d) s += static_cast<double>(p[d]) * p[d];
        if (s <= 0.0)
            raise(errc::zero_norm_vector,
                  "row " + std::to_string(i) + " has zero norm in cosine mode");
        double inv = 1.0 / std::sqrt(s);
        for (size_t d = 0; d < m.dim; ++d) out[i * m.dim + d] = p[d] * inv;
    }
    return out;
}

double dot_rows(const std::vector<double>& rows, size_t dim, size_t a, size_t b) {
    const double* x = rows.data() + a * dim;
    const double* y = rows.data() + b * dim;
    double acc = 0.0;
    for (size_t d = 0; d < dim; ++d) acc += x[d] * y[d];
    return acc;
}

} // namespace

SelectionResult random_select(const EmbeddingMatrix& pool, const SelectionConfig& cfg) {
    check_pool_budget(pool, cfg.budget);
    rng r = selection_rng(cfg.seed);
    SelectionResult out;
    out.strategy = "random";
    out.indices = sample_without_replacement(pool.count, cfg.budget, r);
    out.config = base_config(cfg);
    return out;
}

SelectionResult farthest_select(const EmbeddingMatrix& pool, const SelectionConfig& cfg) {
    check_pool_budget(pool, cfg.budget);
    DistanceContext ctx(pool, pool, cfg.distance);
    const size_t n = pool.count;
    std::vector<double> total(n, 0.0);
    parallel_for(0, n, [&](size_t lo, size_t hi) {
        std::vector<double> dist(n);
        for (size_t i = lo; i < hi; ++i) {
            ctx.row(i, dist.data());
            double s = 0.0;
            for (size_t j = 0; j < n; ++j) s += dist[j];
            total[i] = s;
        }
    });
    std::vector<uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
        return total[a] > total[b] || (total[a] == total[b] && a < b);
    });
    SelectionResult out;
    out.strategy = "farthest";
    out.indices.assign(order.begin(), order.begin() + cfg.budget);
    out.config = base_config(cfg);
    out.config.emplace_back("distance", distance_name(cfg.distance));
    for (uint32_t idx : out.indices) out.trace.push_back({idx, total[idx]});
    return out;
}

SelectionResult k_center_greedy(const EmbeddingMatrix& pool, const SelectionConfig& cfg) {
    check_pool_budget(pool, cfg.budget);
    const size_t n = pool.count;
    uint32_t start;
    if (cfg.forced_first) {
        if (*cfg.forced_first >= n) raise(errc::size_mismatch, "forced first pick out of range");
        start = *cfg.forced_first;
    } else {
        rng r = selection_rng(cfg.seed);
        start = static_cast<uint32_t>(r.next_index(n));
    }
    DistanceContext ctx(pool, pool, cfg.distance);
    std::vector<double> mindist(n, std::numeric_limits<double>::infinity());
    std::vector<char> picked(n, 0);
    std::vector<double> row(n);

    SelectionResult out;
    out.strategy = "kcenter";
    out.indices.push_back(start);
    out.trace.push_back({start, std::numeric_limits<double>::infinity()});
    picked[start] = 1;
    while (out.indices.size() < cfg.budget) {
        ctx.row(out.indices.back(), row.data());
        for (size_t j = 0; j < n; ++j) mindist[j] = std::min(mindist[j], row[j]);
        uint32_t best = 0;
        double bestd = -1.0;
        for (size_t j = 0; j < n; ++j) {
            if (!picked[j] && mindist[j] > bestd) {
                bestd = mindist[j];
                best = static_cast<uint32_t>(j);
            }
        }
        out.indices.push_back(best);
        out.trace.push_back({best, bestd});
        picked[best] = 1;
    }
    out.config = base_config(cfg);
    out.config.emplace_back("distance", distance_name(cfg.distance));
    return out;
}

SelectionResult repr_filter(const EmbeddingMatrix& pool, const SelectionConfig& cfg) {
    check_pool_budget(pool, cfg.budget);
    auto rows = unit_rows(pool);
    rng r = selection_rng(cfg.seed);
    auto scan = sample_without_replacement(pool.count, pool.count, r); // seeded shuffle

    SelectionResult out;
    out.strategy = "reprfilter";
    for (uint32_t cand : scan) {
        if (out.indices.size() == cfg.budget) break;
        double max_sim = -std::numeric_limits<double>::infinity();
        for (uint32_t s : out.indices)
            max_sim = std::max(max_sim, dot_rows(rows, pool.dim, cand, s));
        if (out.indices.empty() || max_sim < cfg.repr_threshold) out.indices.push_back(cand);
    }
    out.config = base_config(cfg);
    out.config.emplace_back("threshold", format_double(cfg.repr_threshold));
    if (out.indices.size() < cfg.budget) out.partial = true;
    return out;
}

SelectionResult qdit_select(const EmbeddingMatrix& pool, const SelectionConfig& cfg) {
    check_pool_budget(pool, cfg.budget);
    const size_t n = pool.count;
    const size_t dim = pool.dim;
    auto rows = unit_rows(pool);

    // Cache the similarity matrix when it fits; otherwise dot on the fly.
    const bool cache = n <= 4096;
    std::vector<double> sims;
    if (cache) {
        sims.resize(n * n);
        parallel_for(0, n, [&](size_t lo, size_t hi) {
            for (size_t i = lo; i < hi; ++i)
                for (size_t j = 0; j < n; ++j) sims[i * n + j] = dot_rows(rows, dim, i, j);
        });
    }
    auto sim = [&](size_t a, size_t b) {
        return cache ? sims[a * n + b] : dot_rows(rows, dim, a, b);
    };

    std::vector<double> best(n, -std::numeric_limits<double>::infinity());
    std::vector<char> picked(n, 0);
    std::vector<double> gain(n);
    SelectionResult out;
    out.strategy = "qdit";
    while (out.indices.size() < cfg.budget) {
        parallel_for(0, n, [&](size_t lo, size_t hi) {
            for (size_t c = lo; c < hi; ++c) {
                if (picked[c]) { gain[c] = -std::numeric_limits<double>::infinity(); continue; }
                double g = 0.0;
                for (size_t j = 0; j < n; ++j) g += std::max(best[j], sim(c, j));
                gain[c] = g;
            }
        });
        uint32_t winner = 0;
        double wgain = -std::numeric_limits<double>::infinity();
        for (size_t c = 0; c < n; ++c) {
            if (!picked[c] && gain[c] > wgain) {
                wgain = gain[c];
                winner = static_cast<uint32_t>(c);
            }
        }
        picked[winner] = 1;
        out.indices.push_back(winner);
        out.trace.push_back({winner, wgain});
        for (size_t j = 0; j < n; ++j) best[j] = std::max(best[j], sim(winner, j));
    }
    out.config = base_config(cfg);
    return out;
}

SelectionResult kmeans_select(const EmbeddingMatrix& pool, const SelectionConfig& cfg) {
    check_pool_budget(pool, cfg.budget);
    SelectionResult out;
    out.strategy = "kmeans";
    size_t k = cfg.kmeans_clusters;
    if (k == 0) raise(errc::invalid_k, "cluster count must be positive");
    if (k > pool.count) k = pool.count;

    KMeansResult km = kmeans(pool, k, cfg.seed);
    std::vector<std::vector<uint32_t>> members(k);
    for (size_t i = 0; i < pool.count; ++i)
        members[km.assignments[i]].push_back(static_cast<uint32_t>(i));

    // Base quota with the remainder going to the largest clusters.
    std::vector<size_t> quota(k, cfg.budget / k);
    {
        size_t rem = cfg.budget % k;
        std::vector<uint32_t> by_size(k);
        std::iota(by_size.begin(), by_size.end(), 0u);
        std::sort(by_size.begin(), by_size.end(), [&](uint32_t a, uint32_t b) {
            return members[a].size() > members[b].size() ||
                   (members[a].size() == members[b].size() && a < b);
        });
        for (size_t i = 0; i < rem; ++i) ++quota[by_size[i]];
    }

    // Clusters smaller than their quota yield everything; the deficit moves to
    // clusters with spare capacity, proportionally to their size.
    size_t deficit = 0;
    for (size_t c = 0; c < k; ++c) {
        if (quota[c] > members[c].size()) {
            deficit += quota[c] - members[c].size();
            quota[c] = members[c].size();
        }
    }
    while (deficit > 0) {
        std::vector<uint32_t> spare;
        double spare_size = 0.0;
        for (size_t c = 0; c < k; ++c) {
            if (quota[c] < members[c].size()) {
                spare.push_back(static_cast<uint32_t>(c));
                spare_size += static_cast<double>(members[c].size());
            }
        }
        // budget <= pool size guarantees some capacity remains
        if (spare.empty())
            raise(errc::invalid_spec, "quota redistribution ran out of capacity");
        std::vector<size_t> add(spare.size(), 0);
        std::vector<double> frac(spare.size(), 0.0);
        size_t assigned = 0;
        for (size_t s = 0; s < spare.size(); ++s) {
            uint32_t c = spare[s];
            double ideal = static_cast<double>(deficit) * members[c].size() / spare_size;
            size_t cap = members[c].size() - quota[c];
            add[s] = std::min(static_cast<size_t>(ideal), cap);
            frac[s] = ideal - std::floor(ideal);
            assigned += add[s];
        }
        if (assigned < deficit) {
            std::vector<uint32_t> by_frac(spare.size());
            std::iota(by_frac.begin(), by_frac.end(), 0u);
            std::sort(by_frac.begin(), by_frac.end(), [&](uint32_t a, uint32_t b) {
                return frac[a] > frac[b] || (frac[a] == frac[b] && spare[a] < spare[b]);
            });
            bool progress = true;
            while (assigned < deficit && progress) {
                progress = false;
                for (uint32_t s : by_frac) {
                    if (assigned == deficit) break;
                    size_t cap = members[spare[s]].size() - quota[spare[s]];
                    if (add[s] < cap) { ++add[s]; ++assigned; progress = true; }
                }
            }
        }
        size_t granted = std::min(assigned, deficit);
        for (size_t s = 0; s < spare.size(); ++s) quota[spare[s]] += add[s];
        deficit -= granted;
    }

    rng r = selection_rng(cfg.seed);
    for (size_t c = 0; c < k; ++c) {
        if (quota[c] == 0) continue;
        auto picks = sample_without_replacement(members[c].size(), quota[c], r);
        for (uint32_t p : picks) out.indices.push_back(members[c][p]);
    }
    out.config = base_config(cfg);
    out.config.emplace_back("clusters", std::to_string(k));
    return out;
}

SelectionResult duplicate_construct(const EmbeddingMatrix& pool, const SelectionConfig& cfg) {
    check_pool_budget(pool, cfg.budget, /*with_repetition=*/true);
    size_t m = cfg.duplicate_unique;
    if (m == 0) raise(errc::invalid_spec, "need at least one unique point");
    if (m > pool.count)
        raise(errc::budget_too_large, "cannot draw " + std::to_string(m) + " unique points from " +
                                          std::to_string(pool.count));
    if (cfg.budget % m != 0)
        raise(errc::indivisible_budget, std::to_string(m) + " unique points cannot evenly fill a "
                                            "budget of " + std::to_string(cfg.budget));
    rng r = selection_rng(cfg.seed);
    auto uniques = sample_without_replacement(pool.count, m, r);
    size_t copies = cfg.budget / m;
    SelectionResult out;
    out.strategy = "duplicate";
    out.indices.reserve(cfg.budget);
    for (uint32_t u : uniques)
        for (size_t c = 0; c < copies; ++c) out.indices.push_back(u);
    out.config = base_config(cfg);
    out.config.emplace_back("unique", std::to_string(m));
    return out;
}

namespace {

SelectionResult novel_select_impl(const EmbeddingMatrix& pool, const EmbeddingMatrix& reference,
                                  const SelectionConfig& cfg) {
    check_pool_budget(pool, cfg.budget);
    const size_t n = pool.count;
    const NovelSumConfig& nc = cfg.novel;

    DensityProfile profile =
        density_profile(pool, reference, nc.density_k, nc.distance, nc.epsilon);
    std::vector<double> sig_beta(n);
    for (size_t j = 0; j < n; ++j) sig_beta[j] = std::pow(profile.sigma[j], nc.beta);

    // (1/rank)^alpha lookup; ranks never exceed budget - 1.
    std::vector<double> weights(cfg.budget + 1, 0.0);
    for (size_t t = 1; t <= cfg.budget; ++t)
        weights[t] = std::pow(1.0 / static_cast<double>(t), nc.alpha);

    uint32_t first;
    if (cfg.forced_first) {
        if (*cfg.forced_first >= n) raise(errc::size_mismatch, "forced first pick out of range");
        first = *cfg.forced_first;
    } else {
        rng r = selection_rng(cfg.seed);
        first = static_cast<uint32_t>(r.next_index(n));
    }

    // Per-candidate sorted lists of density-scaled distances to the selected
    // set, kept in (value, selected index) order so rank assignment and the
    // tie rule stay exact under insertion.
    const size_t cap = cfg.budget;
    std::vector<double> delta(n * cap);
    std::vector<uint32_t> didx(n * cap);
    std::vector<double> value(n, 0.0);
    std::vector<char> picked(n, 0);

    DistanceContext ctx(pool, pool, nc.distance);
    std::vector<double> dist_row(n);

    SelectionResult out;
    out.strategy = "novelselect";
    out.indices.push_back(first);
    out.trace.push_back({first, 0.0}); // novelty against an empty set
    picked[first] = 1;

    for (size_t step = 1; step < cfg.budget; ++step) {
        const uint32_t p = out.indices.back();
        ctx.row(p, dist_row.data());
        const double sp = sig_beta[p];
        const size_t have = step - 1; // entries per candidate before this update
        parallel_for(0, n, [&](size_t lo, size_t hi) {
            for (size_t c = lo; c < hi; ++c) {
                if (picked[c]) continue;
                double nv = sp * dist_row[c];
                double* dl = delta.data() + c * cap;
                uint32_t* di = didx.data() + c * cap;
                // binary search for the (value, index) insertion slot
                size_t lo_i = 0, hi_i = have;
                while (lo_i < hi_i) {
                    size_t mid = (lo_i + hi_i) / 2;
                    if (dl[mid] < nv || (dl[mid] == nv && di[mid] < p)) lo_i = mid + 1;
                    else hi_i = mid;
                }
                for (size_t t = have; t > lo_i; --t) {
                    dl[t] = dl[t - 1];
                    di[t] = di[t - 1];
                }
                dl[lo_i] = nv;
                di[lo_i] = p;
                double acc = 0.0;
                for (size_t t = 0; t <= have; ++t) acc += weights[t + 1] * dl[t];
                value[c] = acc;
            }
        });
        uint32_t winner = 0;
        double wv = -std::numeric_limits<double>::infinity();
        for (size_t c = 0; c < n; ++c) {
            if (!picked[c] && value[c] > wv) {
                wv = value[c];
                winner = static_cast<uint32_t>(c);
            }
        }
        out.indices.push_back(winner);
        out.trace.push_back({winner, wv});
        picked[winner] = 1;
    }

    out.config = base_config(cfg);
    out.config.emplace_back("alpha", format_double(nc.alpha));
    out.config.emplace_back("beta", format_double(nc.beta));
    out.config.emplace_back("density_k", std::to_string(nc.density_k));
    out.config.emplace_back("distance", distance_name(nc.distance));
    out.config.emplace_back("epsilon", format_double(nc.epsilon));
    out.config.emplace_back("reference", &pool == &reference
                                             ? "self"
                                             : "external:" + std::to_string(reference.count) + "x" +
                                                   std::to_string(reference.dim));
    return out;
}

} // namespace

SelectionResult novel_select(const EmbeddingMatrix& pool, const EmbeddingMatrix& reference,
                             const SelectionConfig& cfg) {
    return novel_select_impl(pool, reference, cfg);
}

SelectionResult novel_select(const EmbeddingMatrix& pool, const SelectionConfig& cfg) {
    return novel_select_impl(pool, pool, cfg);
}

} // namespace divkit
