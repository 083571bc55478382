#pragma once

#include <string>

#include "core/types.hpp"

namespace divkit {

// Binary embedding container:
//   bytes 0-3   magic "EMB1"
//   bytes 4-7   row count, u32 little-endian
//   bytes 8-11  dimension, u32 little-endian
//   bytes 12-15 reserved, must be zero
//   then count*dim float32 little-endian, row-major
EmbeddingMatrix load_embeddings(const std::string& path);
void save_embeddings(const EmbeddingMatrix& m, const std::string& path);

// JSON-lines corpus. Each line is an object with either "tokens" (array of
// strings) or "text" (whitespace-tokenized); optional "id".
Corpus load_corpus_jsonl(const std::string& path);

// RFC-4180 CSV with header: dataset_id,<metric...>[,performance].
// Metric cells parse as doubles; the literal "-inf" maps to negative infinity.
ScoreTable load_score_table_csv(const std::string& path);
void save_score_table_csv(const ScoreTable& table, const std::string& path);

} // namespace divkit
