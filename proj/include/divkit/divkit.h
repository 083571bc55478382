#ifndef DIVKIT_H
#define DIVKIT_H

/* divkit: dataset diversity measurement and diversity-driven subset
 * selection over embedding matrices, plus lexical baselines over token
 * corpora. All functions return dk_status; failures leave a message
 * retrievable with dk_last_error() on the calling thread. Out-parameters
 * are written only on DK_OK (and on DK_PARTIAL, which carries a usable
 * partial result). Strings and index buffers returned by the library are
 * freed with dk_string_free / dk_indices_free.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DK_API __declspec(dllexport)
#else
#define DK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dk_status {
    DK_OK = 0,
    DK_ERR_INPUT = 2,    /* bad arguments, malformed files, unknown names */
    DK_ERR_NUMERIC = 3,  /* numeric failure inside a computation */
    DK_PARTIAL = 4,      /* selection ran out of admissible points; result valid */
    DK_ERR_INTERNAL = 5  /* unexpected condition; report a bug */
} dk_status;

typedef struct dk_embeddings dk_embeddings;   /* count x dim float32 matrix */
typedef struct dk_corpus dk_corpus;           /* tokenized text samples */
typedef struct dk_score_table dk_score_table; /* per-dataset metric scores */

DK_API const char* dk_version(void);

/* Message for the most recent failure on this thread; never NULL. */
DK_API const char* dk_last_error(void);

/* Worker-thread hint for the parallel kernels; 0 restores the hardware
 * default. Results are independent of the setting. */
DK_API void dk_set_threads(unsigned threads);

DK_API void dk_string_free(char* s);
DK_API void dk_indices_free(uint32_t* indices);

/* ---- embeddings ---- */

DK_API dk_status dk_embeddings_load(const char* path, dk_embeddings** out);
DK_API dk_status dk_embeddings_save(const dk_embeddings* m, const char* path);
DK_API dk_status dk_embeddings_create(const float* data, uint32_t count, uint32_t dim,
                                      dk_embeddings** out);
DK_API dk_status dk_embeddings_take_rows(const dk_embeddings* m, const uint32_t* rows,
                                         size_t n_rows, dk_embeddings** out);
DK_API uint32_t dk_embeddings_count(const dk_embeddings* m);
DK_API uint32_t dk_embeddings_dim(const dk_embeddings* m);
DK_API const float* dk_embeddings_data(const dk_embeddings* m);
DK_API void dk_embeddings_free(dk_embeddings* m);

/* ---- corpora and score tables ---- */

DK_API dk_status dk_corpus_load(const char* path, dk_corpus** out);
DK_API size_t dk_corpus_size(const dk_corpus* c);
DK_API void dk_corpus_free(dk_corpus* c);

DK_API dk_status dk_score_table_load(const char* path, dk_score_table** out);
DK_API void dk_score_table_free(dk_score_table* t);

/* ---- scoring ----
 *
 * metric names: ttr, vocd-d, distsum-cosine, distsum-sql2, knn, inertia,
 * vendi, radius, ldd, fl, entropy, novelsum.
 *
 * options: flat "key=value" text (newline or ';' separated, '#' comments),
 * or NULL for defaults. Keys depend on the metric; unknown keys fail.
 *
 * Inputs by metric:
 *   ttr, vocd-d   corpus
 *   fl            dataset (the selected rows) and reference (the pool)
 *   entropy       reference (the pool) and indices (the selected rows)
 *   novelsum      dataset alone; dataset plus reference (density from the
 *                 reference); or reference plus indices (scores the subset
 *                 reference[indices] with self-neighbor exclusion)
 *   others        dataset
 *
 * *out_json receives a MetricReport JSON document. */
DK_API dk_status dk_score(const dk_embeddings* dataset, const dk_embeddings* reference,
                          const dk_corpus* corpus, const uint32_t* indices, size_t n_indices,
                          const char* metric, const char* options, char** out_json);

/* ---- selection ----
 *
 * strategy names: random, farthest, kcenter, reprfilter, qdit, kmeans,
 * duplicate, novelselect. reference (optional) supplies the density pool
 * for novelselect and is ignored elsewhere.
 *
 * *out_json receives a SelectionResult JSON document; *out_indices /
 * *out_count receive the picked pool rows in pick order (either pointer may
 * be NULL to skip). DK_PARTIAL reports a filter that could not fill the
 * budget; the partial result is still returned. */
DK_API dk_status dk_select(const dk_embeddings* pool, const dk_embeddings* reference,
                           const char* strategy, const char* options, char** out_json,
                           uint32_t** out_indices, size_t* out_count);

/* ---- synthetic 2D study ----
 *
 * One seeded scenario: generates the planar source, builds the redundant /
 * coverage / novelty-greedy selections, scores each with the three signals,
 * and returns a CSV (selection,metric,score,flag). The range form returns a
 * summary JSON with per-claim pass counts over seeds [seed_begin, seed_end]. */
DK_API dk_status dk_simulate(uint64_t seed, char** out_csv);
DK_API dk_status dk_simulate_range(uint64_t seed_begin, uint64_t seed_end, char** out_json);

/* ---- correlation ----
 *
 * Rank metrics by how well they track measured performance: Pearson and
 * Spearman per metric column, rows sorted by the descending average of the
 * two. as_json selects the JSON rendering over CSV. */
DK_API dk_status dk_correlate(const dk_score_table* table, int as_json, char** out_text);

#ifdef __cplusplus
}
#endif

#endif /* DIVKIT_H */
