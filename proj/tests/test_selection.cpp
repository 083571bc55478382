#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <vector>

#include "core/error.hpp"
#include "core/rng.hpp"
#include "core/selection.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace divkit;

namespace {

// The library derives every strategy's stream from this construction.
rng seeded_stream(uint64_t seed) { return rng(mix64(seed, 0x646b2d73656c6563ULL)); }

std::vector<double> pool_sigma(const EmbeddingMatrix& pool, const EmbeddingMatrix& reference,
                               bool same_store, const NovelSumConfig& nc) {
    std::vector<double> s(pool.count);
    for (size_t j = 0; j < pool.count; ++j)
        s[j] = oracle::sigma(pool, j, reference, nc.density_k, nc.distance, nc.epsilon,
                             same_store ? static_cast<uint32_t>(j) : oracle::kNone);
    return s;
}

} // namespace

TEST_CASE("random selection replicates the documented seeded draw") {
    auto pool = testutil::make_matrix(60, 3, 70);
    SelectionConfig cfg;
    cfg.budget = 10;
    cfg.seed = 5;
    SelectionResult res = random_select(pool, cfg);
    CHECK(res.strategy == "random");
    rng r = seeded_stream(5);
    CHECK(res.indices == sample_without_replacement(60, 10, r));
    CHECK(random_select(pool, cfg).indices == res.indices);

    cfg.budget = 60;
    auto all = random_select(pool, cfg).indices;
    std::sort(all.begin(), all.end());
    for (uint32_t i = 0; i < 60; ++i) CHECK(all[i] == i);
}

TEST_CASE("random selection picks each point at the uniform long-run rate") {
    auto pool = testutil::make_matrix(50, 2, 71);
    SelectionConfig cfg;
    cfg.budget = 5;
    size_t hits = 0;
    const size_t trials = 10000;
    for (size_t s = 0; s < trials; ++s) {
        cfg.seed = s;
        for (uint32_t idx : random_select(pool, cfg).indices)
            if (idx == 7) ++hits;
    }
    double freq = static_cast<double>(hits) / trials;
    CHECK(freq > 0.08);
    CHECK(freq < 0.12);
}

TEST_CASE("farthest selection ranks points by total distance") {
    EmbeddingMatrix line = testutil::matrix_from({{0.0}, {1.0}, {10.0}});
    SelectionConfig cfg;
    cfg.budget = 2;
    cfg.distance = DistanceKind::SquaredL2;
    SelectionResult res = farthest_select(line, cfg);
    REQUIRE(res.indices.size() == 2);
    CHECK(res.indices[0] == 2); // total 181
    CHECK(res.indices[1] == 0); // total 101
    CHECK(res.trace[0].objective == doctest::Approx(181.0));
    CHECK(res.trace[1].objective == doctest::Approx(101.0));

    cfg.budget = 3;
    CHECK(farthest_select(line, cfg).indices == std::vector<uint32_t>{2, 0, 1});
}

TEST_CASE("farthest selection breaks ties by ascending index") {
    EmbeddingMatrix same = testutil::matrix_from(
        std::vector<std::vector<double>>(8, {1.0, 2.0}));
    SelectionConfig cfg;
    cfg.budget = 4;
    CHECK(farthest_select(same, cfg).indices == std::vector<uint32_t>{0, 1, 2, 3});
}

TEST_CASE("farthest selection matches a naive total-distance sort") {
    auto pool = testutil::make_matrix(100, 4, 72);
    SelectionConfig cfg;
    cfg.budget = 30;
    SelectionResult res = farthest_select(pool, cfg);

    std::vector<double> total(100, 0.0);
    for (size_t i = 0; i < 100; ++i)
        for (size_t j = 0; j < 100; ++j)
            if (i != j) total[i] += oracle::dist_rows(pool, i, pool, j, cfg.distance);
    std::vector<uint32_t> order(100);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
        return total[a] > total[b] || (total[a] == total[b] && a < b);
    });
    for (size_t i = 0; i < 30; ++i) {
        CHECK(res.indices[i] == order[i]);
        CHECK(res.trace[i].objective == doctest::Approx(total[order[i]]).epsilon(1e-9));
    }
}

TEST_CASE("k-center greedy walks the classic maximin sequence") {
    EmbeddingMatrix line = testutil::matrix_from({{0.0}, {1.0}, {2.0}, {10.0}});
    SelectionConfig cfg;
    cfg.budget = 3;
    cfg.distance = DistanceKind::SquaredL2;
    cfg.forced_first = 0;
    SelectionResult res = k_center_greedy(line, cfg);
    CHECK(res.indices == std::vector<uint32_t>{0, 3, 2});
    CHECK(std::isinf(res.trace[0].objective));
    CHECK(res.trace[1].objective == doctest::Approx(100.0));
    CHECK(res.trace[2].objective == doctest::Approx(4.0));
}

TEST_CASE("k-center greedy covers the whole pool at full budget") {
    auto pool = testutil::make_matrix(17, 3, 73);
    SelectionConfig cfg;
    cfg.budget = 17;
    cfg.seed = 4;
    auto idx = k_center_greedy(pool, cfg).indices;
    std::sort(idx.begin(), idx.end());
    for (uint32_t i = 0; i < 17; ++i) CHECK(idx[i] == i);
}

TEST_CASE("k-center greedy starts from the seeded uniform pick") {
    auto pool = testutil::make_matrix(31, 2, 74);
    SelectionConfig cfg;
    cfg.budget = 5;
    cfg.seed = 11;
    rng r = seeded_stream(11);
    CHECK(k_center_greedy(pool, cfg).indices[0] == static_cast<uint32_t>(r.next_index(31)));
}

TEST_CASE("k-center greedy certificate: each pick is the unique maximin point") {
    auto pool = testutil::make_matrix(150, 2, 75);
    SelectionConfig cfg;
    cfg.budget = 20;
    cfg.forced_first = 3;
    SelectionResult res = k_center_greedy(pool, cfg);
    REQUIRE(res.indices.size() == 20);
    CHECK(res.indices[0] == 3);

    std::vector<double> mindist(150, std::numeric_limits<double>::infinity());
    double prev_obj = std::numeric_limits<double>::infinity();
    std::set<uint32_t> chosen = {3};
    for (size_t t = 1; t < 20; ++t) {
        uint32_t last = res.indices[t - 1];
        for (size_t j = 0; j < 150; ++j)
            mindist[j] = std::min(mindist[j],
                                  oracle::dist_rows(pool, last, pool, j, cfg.distance));
        uint32_t best = 0;
        double bestd = -1.0;
        for (uint32_t j = 0; j < 150; ++j) {
            if (!chosen.count(j) && mindist[j] > bestd) {
                bestd = mindist[j];
                best = j;
            }
        }
        CHECK(res.indices[t] == best);
        CHECK(res.trace[t].objective == doctest::Approx(bestd).epsilon(1e-9));
        CHECK(res.trace[t].objective <= prev_obj + 1e-12); // covering radius shrinks
        prev_obj = res.trace[t].objective;
        chosen.insert(best);
    }
}

TEST_CASE("representative filter visits the pool in the seeded shuffle order") {
    auto pool = testutil::make_matrix(40, 5, 76);
    SelectionConfig cfg;
    cfg.budget = 10;
    cfg.seed = 21;
    cfg.repr_threshold = 1.01; // everything is admissible
    SelectionResult res = repr_filter(pool, cfg);
    CHECK_FALSE(res.partial);
    rng r = seeded_stream(21);
    auto scan = sample_without_replacement(40, 40, r);
    scan.resize(10);
    CHECK(res.indices == scan);
}

TEST_CASE("representative filter stops early on an all-duplicate pool") {
    EmbeddingMatrix same = testutil::matrix_from(
        std::vector<std::vector<double>>(12, {0.5, 0.5, 0.7}));
    SelectionConfig cfg;
    cfg.budget = 5;
    cfg.seed = 3;
    SelectionResult res = repr_filter(same, cfg);
    REQUIRE(res.indices.size() == 1);
    CHECK(res.partial);
    rng r = seeded_stream(3);
    CHECK(res.indices[0] == sample_without_replacement(12, 12, r)[0]);
}

TEST_CASE("representative filter admits mutually orthogonal points") {
    std::vector<std::vector<double>> eye(6, std::vector<double>(6, 0.0));
    for (size_t i = 0; i < 6; ++i) eye[i][i] = 1.0;
    EmbeddingMatrix pool = testutil::matrix_from(eye);
    SelectionConfig cfg;
    cfg.budget = 6;
    cfg.repr_threshold = 0.5;
    SelectionResult res = repr_filter(pool, cfg);
    CHECK_FALSE(res.partial);
    auto idx = res.indices;
    std::sort(idx.begin(), idx.end());
    for (uint32_t i = 0; i < 6; ++i) CHECK(idx[i] == i);
}

TEST_CASE("facility-location greedy matches an exhaustive gain replay") {
    auto pool = testutil::make_matrix(25, 3, 77);
    SelectionConfig cfg;
    cfg.budget = 6;
    SelectionResult res = qdit_select(pool, cfg);
    REQUIRE(res.indices.size() == 6);

    const size_t n = 25;
    std::vector<double> sim(n * n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            sim[i * n + j] = 1.0 - oracle::dist_rows(pool, i, pool, j, DistanceKind::Cosine);

    std::vector<double> best(n, -std::numeric_limits<double>::infinity());
    std::set<uint32_t> chosen;
    for (size_t t = 0; t < 6; ++t) {
        uint32_t arg = 0;
        double top = -std::numeric_limits<double>::infinity();
        for (uint32_t c = 0; c < n; ++c) {
            if (chosen.count(c)) continue;
            double g = 0.0;
            for (size_t j = 0; j < n; ++j) g += std::max(best[j], sim[c * n + j]);
            if (g > top) {
                top = g;
                arg = c;
            }
        }
        CHECK(res.indices[t] == arg);
        CHECK(res.trace[t].objective == doctest::Approx(top).epsilon(1e-9));
        chosen.insert(arg);
        for (size_t j = 0; j < n; ++j) best[j] = std::max(best[j], sim[arg * n + j]);
    }

    // objective never decreases; marginal gains never increase
    for (size_t t = 1; t < 6; ++t)
        CHECK(res.trace[t].objective >= res.trace[t - 1].objective - 1e-9);
    for (size_t t = 2; t < 6; ++t) {
        double m_prev = res.trace[t - 1].objective - res.trace[t - 2].objective;
        double m_cur = res.trace[t].objective - res.trace[t - 1].objective;
        CHECK(m_cur <= m_prev + 1e-9);
    }
}

TEST_CASE("facility-location greedy on an all-duplicate pool counts up from zero") {
    EmbeddingMatrix same = testutil::matrix_from(
        std::vector<std::vector<double>>(9, {0.2, 0.9}));
    SelectionConfig cfg;
    cfg.budget = 4;
    SelectionResult res = qdit_select(same, cfg);
    CHECK(res.indices == std::vector<uint32_t>{0, 1, 2, 3});
    for (const auto& step : res.trace)
        CHECK(step.objective == doctest::Approx(9.0).epsilon(1e-9));
}

TEST_CASE("cluster-quota selection with one cluster degenerates to the uniform draw") {
    auto pool = testutil::make_matrix(45, 3, 78);
    SelectionConfig cfg;
    cfg.budget = 12;
    cfg.seed = 6;
    cfg.kmeans_clusters = 1;
    SelectionResult km = kmeans_select(pool, cfg);
    SelectionResult rnd = random_select(pool, cfg);
    CHECK(km.indices == rnd.indices);
}

TEST_CASE("cluster-quota selection splits the budget across balanced blobs") {
    EmbeddingMatrix pool = testutil::gaussian_blobs(
        {{0.0, 0.0}, {100.0, 100.0}}, 30, 0.5, 79);
    SelectionConfig cfg;
    cfg.budget = 10;
    cfg.seed = 2;
    cfg.kmeans_clusters = 2;
    SelectionResult res = kmeans_select(pool, cfg);
    REQUIRE(res.indices.size() == 10);
    size_t low = 0;
    for (uint32_t idx : res.indices)
        if (idx < 30) ++low;
    CHECK(low == 5);
}

TEST_CASE("cluster-quota selection takes one point per cluster at matching budget") {
    EmbeddingMatrix pool = testutil::gaussian_blobs(
        {{0, 0}, {50, 0}, {0, 50}, {50, 50}, {-50, 0}, {0, -50}}, 10, 0.4, 80);
    SelectionConfig cfg;
    cfg.budget = 6;
    cfg.seed = 8;
    cfg.kmeans_clusters = 6;
    SelectionResult res = kmeans_select(pool, cfg);
    REQUIRE(res.indices.size() == 6);
    std::set<uint32_t> blobs;
    for (uint32_t idx : res.indices) blobs.insert(idx / 10);
    CHECK(blobs.size() == 6);
}

TEST_CASE("duplicated construction controls the unique-point count exactly") {
    auto pool = testutil::make_matrix(40, 2, 81);
    SelectionConfig cfg;
    cfg.seed = 13;

    cfg.duplicate_unique = 1;
    cfg.budget = 4;
    SelectionResult one = duplicate_construct(pool, cfg);
    REQUIRE(one.indices.size() == 4);
    rng r = seeded_stream(13);
    uint32_t only = sample_without_replacement(40, 1, r)[0];
    for (uint32_t idx : one.indices) CHECK(idx == only);

    cfg.duplicate_unique = 10;
    cfg.budget = 100;
    SelectionResult ten = duplicate_construct(pool, cfg);
    REQUIRE(ten.indices.size() == 100);
    std::set<uint32_t> uniq(ten.indices.begin(), ten.indices.end());
    CHECK(uniq.size() == 10);
    for (uint32_t u : uniq)
        CHECK(std::count(ten.indices.begin(), ten.indices.end(), u) == 10);

    // one copy each degenerates to the plain uniform draw
    cfg.duplicate_unique = 40;
    cfg.budget = 40;
    SelectionResult all = duplicate_construct(pool, cfg);
    SelectionConfig rc;
    rc.budget = 40;
    rc.seed = 13;
    CHECK(all.indices == random_select(pool, rc).indices);
}

TEST_CASE("duplicated construction may exceed the pool and rejects uneven budgets") {
    auto pool = testutil::make_matrix(5, 2, 82);
    SelectionConfig cfg;
    cfg.duplicate_unique = 5;
    cfg.budget = 10;
    SelectionResult res = duplicate_construct(pool, cfg);
    REQUIRE(res.indices.size() == 10);
    std::set<uint32_t> uniq(res.indices.begin(), res.indices.end());
    CHECK(uniq.size() == 5);

    cfg.duplicate_unique = 3;
    cfg.budget = 10;
    try {
        duplicate_construct(pool, cfg);
        FAIL("expected an indivisible budget error");
    } catch (const error& e) {
        CHECK(e.code() == errc::indivisible_budget);
    }

    cfg.duplicate_unique = 6; // more uniques than pool rows
    cfg.budget = 12;
    CHECK_THROWS_AS(duplicate_construct(pool, cfg), error);
}

TEST_CASE("novelty-greedy selection keeps ascending order on an all-duplicate pool") {
    EmbeddingMatrix same = testutil::matrix_from(
        std::vector<std::vector<double>>(8, {1.0, 1.0}));
    SelectionConfig cfg;
    cfg.budget = 5;
    cfg.forced_first = 2;
    cfg.novel.density_k = 5; // the pool only has 7 eligible neighbors per row
    SelectionResult res = novel_select(same, cfg);
    CHECK(res.indices == std::vector<uint32_t>{2, 0, 1, 3, 4});
    CHECK(res.trace[0].objective == 0.0);
}

TEST_CASE("novelty-greedy selection at full budget is a permutation") {
    auto pool = testutil::make_matrix(14, 3, 83);
    SelectionConfig cfg;
    cfg.budget = 14;
    cfg.seed = 9;
    auto idx = novel_select(pool, cfg).indices;
    std::sort(idx.begin(), idx.end());
    for (uint32_t i = 0; i < 14; ++i) CHECK(idx[i] == i);
}

TEST_CASE("novelty-greedy selection starts from the seeded uniform pick") {
    auto pool = testutil::make_matrix(57, 2, 84);
    SelectionConfig cfg;
    cfg.budget = 3;
    cfg.seed = 30;
    rng r = seeded_stream(30);
    SelectionResult res = novel_select(pool, cfg);
    CHECK(res.indices[0] == static_cast<uint32_t>(r.next_index(57)));
    CHECK(res.trace[0].objective == 0.0);
}

TEST_CASE("novelty-greedy selection maximizes rank-weighted novelty at every step") {
    auto pool = testutil::make_matrix(100, 2, 85);
    SelectionConfig cfg;
    cfg.budget = 15;
    cfg.seed = 1;

    SUBCASE("pool as its own reference") {}
    EmbeddingMatrix reference = testutil::make_matrix(300, 2, 86);
    bool external = false;
    SUBCASE("external reference distribution") { external = true; }

    SelectionResult res =
        external ? novel_select(pool, reference, cfg) : novel_select(pool, cfg);
    REQUIRE(res.indices.size() == 15);

    const NovelSumConfig& nc = cfg.novel;
    std::vector<double> sig =
        pool_sigma(pool, external ? reference : pool, !external, nc);
    std::vector<double> sig_beta(100);
    for (size_t j = 0; j < 100; ++j) sig_beta[j] = std::pow(sig[j], nc.beta);

    std::set<uint32_t> chosen = {res.indices[0]};
    for (size_t t = 1; t < 15; ++t) {
        uint32_t arg = 0;
        double top = -std::numeric_limits<double>::infinity();
        for (uint32_t c = 0; c < 100; ++c) {
            if (chosen.count(c)) continue;
            std::vector<std::pair<double, uint32_t>> deltas;
            for (size_t s = 0; s < t; ++s) {
                uint32_t sel = res.indices[s];
                deltas.emplace_back(
                    sig_beta[sel] * oracle::dist_rows(pool, sel, pool, c, nc.distance), sel);
            }
            std::sort(deltas.begin(), deltas.end());
            double v = 0.0;
            for (size_t pos = 0; pos < deltas.size(); ++pos)
                v += std::pow(1.0 / static_cast<double>(pos + 1), nc.alpha) * deltas[pos].first;
            if (v > top) {
                top = v;
                arg = c;
            }
        }
        CHECK(res.indices[t] == arg);
        CHECK(res.trace[t].objective == doctest::Approx(top).epsilon(1e-9));
        chosen.insert(res.indices[t]);
    }
}

TEST_CASE("selection runs are deterministic with valid unique indices") {
    auto pool = testutil::make_matrix(64, 4, 87);
    SelectionConfig cfg;
    cfg.budget = 12;
    cfg.seed = 9;
    cfg.kmeans_clusters = 7;
    cfg.repr_threshold = 1.01;

    using fn = SelectionResult (*)(const EmbeddingMatrix&, const SelectionConfig&);
    fn strategies[] = {random_select, farthest_select, k_center_greedy, repr_filter,
                       qdit_select,   kmeans_select,
                       static_cast<SelectionResult (*)(const EmbeddingMatrix&,
                                                       const SelectionConfig&)>(novel_select)};
    for (fn f : strategies) {
        SelectionResult a = f(pool, cfg);
        SelectionResult b = f(pool, cfg);
        CHECK(a.indices == b.indices);
        REQUIRE(a.indices.size() == 12);
        CHECK_FALSE(a.partial);
        std::set<uint32_t> uniq(a.indices.begin(), a.indices.end());
        CHECK(uniq.size() == 12);
        for (uint32_t idx : a.indices) CHECK(idx < 64);
        REQUIRE(a.trace.size() == b.trace.size());
        for (size_t i = 0; i < a.trace.size(); ++i) {
            CHECK(a.trace[i].index == b.trace[i].index);
            CHECK(a.trace[i].objective == b.trace[i].objective);
        }
    }
}

TEST_CASE("selection rejects impossible requests") {
    auto pool = testutil::make_matrix(10, 2, 88);
    SelectionConfig cfg;

    cfg.budget = 0;
    CHECK_THROWS_AS(random_select(pool, cfg), error);

    cfg.budget = 11;
    try {
        random_select(pool, cfg);
        FAIL("expected a budget error");
    } catch (const error& e) {
        CHECK(e.code() == errc::budget_too_large);
    }

    EmbeddingMatrix empty;
    cfg.budget = 1;
    CHECK_THROWS_AS(random_select(empty, cfg), error);

    cfg.budget = 4;
    cfg.kmeans_clusters = 0;
    CHECK_THROWS_AS(kmeans_select(pool, cfg), error);

    cfg.kmeans_clusters = 5;
    cfg.forced_first = 10;
    cfg.novel.density_k = 3;
    CHECK_THROWS_AS(k_center_greedy(pool, cfg), error);
    CHECK_THROWS_AS(novel_select(pool, cfg), error);
}
