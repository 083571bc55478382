#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/error.hpp"

namespace divkit {

enum class DistanceKind {
    Cosine,    // 1 - cos(a, b), range [0, 2]
    SquaredL2, // ||a - b||^2
    L2,        // ||a - b||
};

inline const char* distance_name(DistanceKind k) {
    switch (k) {
    case DistanceKind::Cosine: return "cosine";
    case DistanceKind::SquaredL2: return "sql2";
    case DistanceKind::L2: break;
    }
    return "l2";
}

// Dense row-major float32 embedding store. ids, when present, parallel the rows.
struct EmbeddingMatrix {
    size_t count = 0;
    size_t dim = 0;
    std::vector<float> data;             // count * dim
    std::vector<std::string> ids;        // empty or size == count

    std::span<const float> row(size_t i) const {
        return std::span<const float>(data.data() + i * dim, dim);
    }

    bool has_ids() const { return !ids.empty(); }

    void validate() const {
        if (data.size() != count * dim)
            raise(errc::size_mismatch, "embedding buffer holds " + std::to_string(data.size()) +
                                           " values, expected " + std::to_string(count * dim));
        if (!ids.empty() && ids.size() != count)
            raise(errc::size_mismatch, "id list length does not match row count");
    }

    // Rows gathered by index, in the given order. Repeats allowed.
    EmbeddingMatrix take_rows(std::span<const uint32_t> rows) const {
        EmbeddingMatrix out;
        out.count = rows.size();
        out.dim = dim;
        out.data.resize(rows.size() * dim);
        if (has_ids()) out.ids.reserve(rows.size());
        for (size_t i = 0; i < rows.size(); ++i) {
            size_t r = rows[i];
            if (r >= count)
                raise(errc::size_mismatch, "row index " + std::to_string(r) + " out of range");
            std::copy(row(r).begin(), row(r).end(), out.data.begin() + i * dim);
            if (has_ids()) out.ids.push_back(ids[r]);
        }
        return out;
    }
};

// Tokenized text samples; embeddings-free metrics (type-token ones) run on this.
struct Corpus {
    std::vector<std::vector<std::string>> samples;
    std::vector<std::string> ids; // empty or size == samples.size()

    size_t size() const { return samples.size(); }
};

// One scored dataset: metric name -> value. performance is the downstream
// benchmark number when known. Negative infinity is a legal metric value
// (log-det collapses there); NaN and +inf are not.
struct ScoreRow {
    std::string dataset_id;
    std::map<std::string, double> metrics;
    std::optional<double> performance;
};

struct ScoreTable {
    std::vector<ScoreRow> rows;
    std::vector<std::string> metric_names; // column order as loaded/constructed
};

} // namespace divkit
