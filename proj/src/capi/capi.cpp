#include "divkit/divkit.h"

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "core/analysis.hpp"
#include "core/dataset_io.hpp"
#include "core/error.hpp"
#include "core/metrics.hpp"
#include "core/novelsum.hpp"
#include "core/options.hpp"
#include "core/parallel.hpp"
#include "core/report.hpp"
#include "core/selection.hpp"
#include "core/simulation.hpp"
#include "core/types.hpp"

using namespace divkit;

struct dk_embeddings {
    EmbeddingMatrix m;
};
struct dk_corpus {
    Corpus c;
};
struct dk_score_table {
    ScoreTable t;
};

namespace {

thread_local std::string g_last_error;

dk_status fail(dk_status s, const std::string& msg) {
    g_last_error = msg;
    return s;
}

dk_status from_exception(const error& e) {
    switch (e.cls()) {
    case error_class::numeric: return fail(DK_ERR_NUMERIC, e.what());
    case error_class::threshold_exhausted: return fail(DK_PARTIAL, e.what());
    case error_class::input: break;
    }
    return fail(DK_ERR_INPUT, e.what());
}

template <typename Fn> dk_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const error& e) {
        return from_exception(e);
    } catch (const std::bad_alloc&) {
        return fail(DK_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(DK_ERR_INTERNAL, e.what());
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

dk_status require(const void* p, const char* what) {
    if (p) return DK_OK;
    return fail(DK_ERR_INPUT, std::string("null ") + what);
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

MetricReport run_metric(const char* metric, const dk_embeddings* dataset,
                        const dk_embeddings* reference, const dk_corpus* corpus,
                        const uint32_t* indices, size_t n_indices, const char* options) {
    std::string name = metric ? metric : "";
    auto kv = parse_options(options ? options : "");

    auto need = [&](const void* p, const char* what) {
        if (!p) raise(errc::bad_option, "metric '" + name + "' needs " + what);
    };

    if (name == "ttr" || name == "vocd-d") {
        need(corpus, "a corpus");
        MetricConfig cfg = metric_config_from(kv);
        reject_unknown(kv);
        return name == "ttr" ? ttr(corpus->c, cfg) : vocd_d(corpus->c, cfg);
    }

    if (name == "novelsum") {
        NovelSumConfig cfg = novelsum_config_from(kv);
        reject_unknown(kv);
        if (indices && n_indices > 0) {
            need(reference, "a reference pool when scoring by indices");
            std::vector<uint32_t> idx(indices, indices + n_indices);
            return novelsum_of_subset(reference->m, idx, cfg).report;
        }
        need(dataset, "a dataset");
        const EmbeddingMatrix& ref = reference ? reference->m : dataset->m;
        return novelsum(dataset->m, ref, cfg).report;
    }

    if (name == "entropy") {
        need(reference, "a reference pool");
        need(indices, "selected indices");
        MetricConfig cfg = metric_config_from(kv);
        reject_unknown(kv);
        return partition_entropy(std::span<const uint32_t>(indices, n_indices), reference->m,
                                 cfg);
    }

    if (name == "fl") {
        need(dataset, "the selected embeddings");
        need(reference, "the pool embeddings");
        MetricConfig cfg = metric_config_from(kv);
        reject_unknown(kv);
        return facility_location(dataset->m, reference->m, cfg);
    }

    // remaining metrics score a single embedding matrix
    need(dataset, "a dataset");
    DistanceKind pinned = DistanceKind::Cosine;
    bool has_pin = false;
    if (name == "distsum-cosine") {
        pinned = DistanceKind::Cosine;
        has_pin = true;
    } else if (name == "distsum-sql2") {
        pinned = DistanceKind::SquaredL2;
        has_pin = true;
    }
    if (has_pin) {
        auto it = kv.find("distance");
        if (it != kv.end() && it->second != distance_name(pinned))
            raise(errc::bad_option,
                  "metric '" + name + "' conflicts with distance=" + it->second);
        kv.erase("distance");
    }
    MetricConfig cfg = metric_config_from(kv);
    reject_unknown(kv);
    if (has_pin) {
        cfg.distance = pinned;
        return dist_sum(dataset->m, cfg);
    }
    if (name == "knn") return knn_distance(dataset->m, cfg);
    if (name == "inertia") return cluster_inertia(dataset->m, cfg);
    if (name == "vendi") return vendi_score(dataset->m, cfg);
    if (name == "radius") return radius(dataset->m, cfg);
    if (name == "ldd") return log_det_distance(dataset->m, cfg);
    raise(errc::unknown_name, "unknown metric '" + name + "'");
}

SelectionResult run_strategy(const char* strategy, const dk_embeddings* pool,
                             const dk_embeddings* reference, const char* options) {
    std::string name = strategy ? strategy : "";
    auto kv = parse_options(options ? options : "");
    SelectionConfig cfg = selection_config_from(kv);
    reject_unknown(kv);
    if (!pool) raise(errc::bad_option, "selection needs a pool");

    if (name == "random") return random_select(pool->m, cfg);
    if (name == "farthest") return farthest_select(pool->m, cfg);
    if (name == "kcenter") return k_center_greedy(pool->m, cfg);
    if (name == "reprfilter") return repr_filter(pool->m, cfg);
    if (name == "qdit") return qdit_select(pool->m, cfg);
    if (name == "kmeans") return kmeans_select(pool->m, cfg);
    if (name == "duplicate") return duplicate_construct(pool->m, cfg);
    if (name == "novelselect")
        return reference ? novel_select(pool->m, reference->m, cfg) : novel_select(pool->m, cfg);
    raise(errc::unknown_name, "unknown strategy '" + name + "'");
}

} // namespace

extern "C" {

const char* dk_version(void) { return "divkit 0.1.0"; }

const char* dk_last_error(void) { return g_last_error.c_str(); }

void dk_set_threads(unsigned threads) { set_thread_count(threads); }

void dk_string_free(char* s) { std::free(s); }

void dk_indices_free(uint32_t* indices) { std::free(indices); }

dk_status dk_embeddings_load(const char* path, dk_embeddings** out) {
    if (dk_status s = require(path, "path"); s != DK_OK) return s;
    if (dk_status s = require(out, "output handle"); s != DK_OK) return s;
    return guarded([&] {
        auto* h = new dk_embeddings{load_embeddings(path)};
        *out = h;
        return DK_OK;
    });
}

dk_status dk_embeddings_save(const dk_embeddings* m, const char* path) {
    if (dk_status s = require(m, "embeddings"); s != DK_OK) return s;
    if (dk_status s = require(path, "path"); s != DK_OK) return s;
    return guarded([&] {
        save_embeddings(m->m, path);
        return DK_OK;
    });
}

dk_status dk_embeddings_create(const float* data, uint32_t count, uint32_t dim,
                               dk_embeddings** out) {
    if (dk_status s = require(out, "output handle"); s != DK_OK) return s;
    if (count > 0 && dim > 0) {
        if (dk_status s = require(data, "data"); s != DK_OK) return s;
    }
    return guarded([&] {
        EmbeddingMatrix m;
        m.count = count;
        m.dim = dim;
        m.data.assign(data, data + static_cast<size_t>(count) * dim);
        m.validate();
        *out = new dk_embeddings{std::move(m)};
        return DK_OK;
    });
}

dk_status dk_embeddings_take_rows(const dk_embeddings* m, const uint32_t* rows, size_t n_rows,
                                  dk_embeddings** out) {
    if (dk_status s = require(m, "embeddings"); s != DK_OK) return s;
    if (dk_status s = require(out, "output handle"); s != DK_OK) return s;
    if (n_rows > 0) {
        if (dk_status s = require(rows, "row indices"); s != DK_OK) return s;
    }
    return guarded([&] {
        *out = new dk_embeddings{m->m.take_rows(std::span<const uint32_t>(rows, n_rows))};
        return DK_OK;
    });
}

uint32_t dk_embeddings_count(const dk_embeddings* m) {
    return m ? static_cast<uint32_t>(m->m.count) : 0;
}

uint32_t dk_embeddings_dim(const dk_embeddings* m) {
    return m ? static_cast<uint32_t>(m->m.dim) : 0;
}

const float* dk_embeddings_data(const dk_embeddings* m) { return m ? m->m.data.data() : NULL; }

void dk_embeddings_free(dk_embeddings* m) { delete m; }

dk_status dk_corpus_load(const char* path, dk_corpus** out) {
    if (dk_status s = require(path, "path"); s != DK_OK) return s;
    if (dk_status s = require(out, "output handle"); s != DK_OK) return s;
    return guarded([&] {
        *out = new dk_corpus{load_corpus_jsonl(path)};
        return DK_OK;
    });
}

size_t dk_corpus_size(const dk_corpus* c) { return c ? c->c.size() : 0; }

void dk_corpus_free(dk_corpus* c) { delete c; }

dk_status dk_score_table_load(const char* path, dk_score_table** out) {
    if (dk_status s = require(path, "path"); s != DK_OK) return s;
    if (dk_status s = require(out, "output handle"); s != DK_OK) return s;
    return guarded([&] {
        *out = new dk_score_table{load_score_table_csv(path)};
        return DK_OK;
    });
}

void dk_score_table_free(dk_score_table* t) { delete t; }

dk_status dk_score(const dk_embeddings* dataset, const dk_embeddings* reference,
                   const dk_corpus* corpus, const uint32_t* indices, size_t n_indices,
                   const char* metric, const char* options, char** out_json) {
    if (dk_status s = require(metric, "metric name"); s != DK_OK) return s;
    if (dk_status s = require(out_json, "output handle"); s != DK_OK) return s;
    return guarded([&] {
        auto t0 = std::chrono::steady_clock::now();
        MetricReport report =
            run_metric(metric, dataset, reference, corpus, indices, n_indices, options);
        report.duration_ms = ms_since(t0);
        *out_json = dup_string(metric_report_json(report));
        return DK_OK;
    });
}

dk_status dk_select(const dk_embeddings* pool, const dk_embeddings* reference,
                    const char* strategy, const char* options, char** out_json,
                    uint32_t** out_indices, size_t* out_count) {
    if (dk_status s = require(pool, "pool"); s != DK_OK) return s;
    if (dk_status s = require(strategy, "strategy name"); s != DK_OK) return s;
    return guarded([&] {
        auto t0 = std::chrono::steady_clock::now();
        SelectionResult result = run_strategy(strategy, pool, reference, options);
        result.duration_ms = ms_since(t0);
        if (out_json) *out_json = dup_string(selection_result_json(result));
        if (out_indices) {
            size_t bytes = result.indices.size() * sizeof(uint32_t);
            auto* buf = static_cast<uint32_t*>(std::malloc(bytes ? bytes : 1));
            if (!buf) throw std::bad_alloc();
            std::memcpy(buf, result.indices.data(), bytes);
            *out_indices = buf;
        }
        if (out_count) *out_count = result.indices.size();
        if (result.partial)
            return fail(DK_PARTIAL, "selection exhausted the admissible pool before the budget");
        return DK_OK;
    });
}

dk_status dk_simulate(uint64_t seed, char** out_csv) {
    if (dk_status s = require(out_csv, "output handle"); s != DK_OK) return s;
    return guarded([&] {
        SimulationScenario scenario;
        scenario.seed = seed;
        *out_csv = dup_string(simulation_csv(simulate_study(scenario)));
        return DK_OK;
    });
}

dk_status dk_simulate_range(uint64_t seed_begin, uint64_t seed_end, char** out_json) {
    if (dk_status s = require(out_json, "output handle"); s != DK_OK) return s;
    return guarded([&] {
        *out_json = dup_string(simulation_summary_json(simulate_many(seed_begin, seed_end)));
        return DK_OK;
    });
}

dk_status dk_correlate(const dk_score_table* table, int as_json, char** out_text) {
    if (dk_status s = require(table, "score table"); s != DK_OK) return s;
    if (dk_status s = require(out_text, "output handle"); s != DK_OK) return s;
    return guarded([&] {
        CorrelationReport report = correlate_metrics(table->t);
        *out_text = dup_string(as_json ? correlation_json(report) : correlation_csv(report));
        return DK_OK;
    });
}

} // extern "C"
