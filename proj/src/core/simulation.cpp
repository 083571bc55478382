#include "core/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "core/metrics.hpp"
#include "core/novelsum.hpp"
#include "core/rng.hpp"
#include "core/selection.hpp"

namespace divkit {

std::vector<ClusterSpec> default_cluster_spec() {
    // Layout chosen so the three scripted selections behave distinctly under
    // the scored metrics.  The diffuse blob near the lower-left corner fans
    // out over a wide range of directions from the origin; the mid blob sits
    // far out along the diagonal; the tight blob hugs the upper-left edge,
    // occupying the angular extreme.  The redundant selection draws from the
    // first two blobs, whose separation keeps its raw distance sum close to
    // that of the density-aware selection.
    return {
        {2.4, 1.0, 2.0, 20},
        {7.8, 7.0, 1.0, 40},
        {-0.2, 9.9, 0.5, 90},
    };
}

EmbeddingMatrix generate_source(uint64_t seed, const std::vector<ClusterSpec>& clusters) {
    if (clusters.empty()) raise(errc::invalid_spec, "need at least one cluster");
    EmbeddingMatrix m;
    m.dim = 2;
    rng r(mix64(seed, 0x73696d2d737263ULL));
    for (const auto& c : clusters) {
        if (c.spread < 0.0) raise(errc::invalid_spec, "cluster spread must be nonnegative");
        for (size_t i = 0; i < c.count; ++i) {
            // Floor slightly above zero so no point can land exactly on the
            // origin, which would have no direction for angular distances.
            double x = std::clamp(c.cx + c.spread * r.next_normal(), 0.01, 10.0);
            double y = std::clamp(c.cy + c.spread * r.next_normal(), 0.01, 10.0);
            m.data.push_back(static_cast<float>(x));
            m.data.push_back(static_cast<float>(y));
            ++m.count;
        }
    }
    return m;
}

std::vector<uint32_t> build_selection_a(const EmbeddingMatrix& source,
                                        const std::vector<ClusterSpec>& clusters, size_t budget) {
    if (clusters.size() < 2) raise(errc::invalid_spec, "redundant selection needs two clusters");
    if (budget % 2 != 0) raise(errc::invalid_spec, "redundant selection needs an even budget");
    const size_t per_center = budget / 2;
    std::vector<uint32_t> picked;
    std::vector<char> used(source.count, 0);
    for (size_t c = 0; c < 2; ++c) {
        std::vector<std::pair<double, uint32_t>> by_dist;
        for (size_t i = 0; i < source.count; ++i) {
            if (used[i]) continue;
            double dx = static_cast<double>(source.data[i * 2]) - clusters[c].cx;
            double dy = static_cast<double>(source.data[i * 2 + 1]) - clusters[c].cy;
            by_dist.emplace_back(dx * dx + dy * dy, static_cast<uint32_t>(i));
        }
        if (by_dist.size() < per_center)
            raise(errc::budget_too_large, "source too small for the redundant selection");
        std::sort(by_dist.begin(), by_dist.end());
        for (size_t t = 0; t < per_center; ++t) {
            picked.push_back(by_dist[t].second);
            used[by_dist[t].second] = 1;
        }
    }
    return picked;
}

std::vector<uint32_t> build_selection_b(const EmbeddingMatrix& source, uint64_t seed,
                                        size_t budget) {
    SelectionConfig cfg;
    cfg.budget = budget;
    cfg.seed = seed;
    cfg.distance = DistanceKind::SquaredL2;
    return k_center_greedy(source, cfg).indices;
}

std::vector<uint32_t> build_selection_c(const EmbeddingMatrix& source, uint64_t seed,
                                        size_t budget) {
    SelectionConfig cfg;
    cfg.budget = budget;
    cfg.seed = seed;
    cfg.novel.alpha = 1.0;
    cfg.novel.beta = 0.5;
    cfg.novel.density_k = 10;
    cfg.novel.distance = DistanceKind::Cosine;
    return novel_select(source, cfg).indices;
}

namespace {

double subset_distsum(const EmbeddingMatrix& source, const std::vector<uint32_t>& idx) {
    EmbeddingMatrix subset = source.take_rows(idx);
    MetricConfig cfg;
    cfg.distance = DistanceKind::SquaredL2;
    return dist_sum(subset, cfg).score;
}

double subset_novelsum(const EmbeddingMatrix& source, const std::vector<uint32_t>& idx,
                       double beta, Normalization norm, DistanceKind distance) {
    NovelSumConfig cfg;
    cfg.alpha = 1.0;
    cfg.beta = beta;
    cfg.density_k = 10;
    cfg.distance = distance;
    cfg.normalization = norm;
    return novelsum_of_subset(source, idx, cfg).report.score;
}

} // namespace

SimulationResult simulate_study(const SimulationScenario& scenario) {
    SimulationResult res;
    res.source = generate_source(scenario.seed, scenario.clusters);

    res.a = scenario.selection_a.empty()
                ? build_selection_a(res.source, scenario.clusters, scenario.budget)
                : scenario.selection_a;
    res.b = scenario.selection_b.empty()
                ? build_selection_b(res.source, scenario.seed, scenario.budget)
                : scenario.selection_b;
    res.c = scenario.selection_c.empty()
                ? build_selection_c(res.source, scenario.seed, scenario.budget)
                : scenario.selection_c;
    for (const auto* sel : {&res.a, &res.b, &res.c}) {
        for (uint32_t i : *sel)
            if (i >= res.source.count)
                raise(errc::size_mismatch, "selection index out of source range");
    }

    const std::vector<uint32_t>* sels[3] = {&res.a, &res.b, &res.c};
    const char* names[3] = {"A", "B", "C"};
    double ds[3], pw[3], ns[3];
    for (int s = 0; s < 3; ++s) {
        ds[s] = subset_distsum(res.source, *sels[s]);
        // proximity-weighted variant of the distance sum: same squared
        // distances, rank weights, no density factor
        pw[s] = subset_novelsum(res.source, *sels[s], 0.0, Normalization::RawSum,
                                DistanceKind::SquaredL2);
        ns[s] = subset_novelsum(res.source, *sels[s], 0.5, Normalization::MeanWeightedNovelty,
                                DistanceKind::Cosine);
    }

    res.novelsum_order_pass = ns[0] < ns[1] && ns[1] < ns[2];
    res.proximity_pass = pw[1] > pw[2];
    res.distsum_rel_gap = std::abs(ds[0] - ds[2]) / ds[2];
    res.distsum_pass = res.distsum_rel_gap <= 0.15;

    auto verdict = [](bool ok) { return ok ? "pass" : "fail"; };
    for (int s = 0; s < 3; ++s)
        res.rows.push_back({names[s], "distsum", ds[s], s == 2 ? verdict(res.distsum_pass) : ""});
    for (int s = 0; s < 3; ++s)
        res.rows.push_back(
            {names[s], "proxdistsum", pw[s], s == 2 ? verdict(res.proximity_pass) : ""});
    for (int s = 0; s < 3; ++s)
        res.rows.push_back(
            {names[s], "novelsum", ns[s], s == 2 ? verdict(res.novelsum_order_pass) : ""});
    return res;
}

SimulationSummary simulate_many(uint64_t seed_begin, uint64_t seed_end) {
    if (seed_end < seed_begin) raise(errc::invalid_spec, "seed range is reversed");
    SimulationSummary sum;
    sum.seed_begin = seed_begin;
    sum.seed_end = seed_end;
    for (uint64_t s = seed_begin; s <= seed_end; ++s) {
        SimulationScenario scenario;
        scenario.seed = s;
        SimulationResult res = simulate_study(scenario);
        ++sum.total;
        sum.novelsum_order_pass += res.novelsum_order_pass ? 1 : 0;
        sum.proximity_pass += res.proximity_pass ? 1 : 0;
        sum.distsum_pass += res.distsum_pass ? 1 : 0;
        sum.all_pass += (res.novelsum_order_pass && res.proximity_pass &&
                         res.distsum_pass)
                            ? 1
                            : 0;
    }
    return sum;
}

} // namespace divkit
