#include "core/dataset_io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "core/strutil.hpp"

namespace divkit {

static_assert(std::endian::native == std::endian::little,
              "embedding container I/O assumes a little-endian host");
static_assert(sizeof(float) == 4 && std::numeric_limits<float>::is_iec559);

namespace {

constexpr char kMagic[4] = {'E', 'M', 'B', '1'};

uint32_t read_u32le(const unsigned char* p) {
    return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
           (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

void write_u32le(unsigned char* p, uint32_t v) {
    p[0] = static_cast<unsigned char>(v & 0xff);
    p[1] = static_cast<unsigned char>((v >> 8) & 0xff);
    p[2] = static_cast<unsigned char>((v >> 16) & 0xff);
    p[3] = static_cast<unsigned char>((v >> 24) & 0xff);
}

} // namespace

EmbeddingMatrix load_embeddings(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(errc::io_error, "cannot open " + path);
    unsigned char header[16];
    in.read(reinterpret_cast<char*>(header), sizeof(header));
    if (in.gcount() != sizeof(header))
        raise(errc::malformed_header, path + ": truncated header");
    if (std::memcmp(header, kMagic, 4) != 0)
        raise(errc::malformed_header, path + ": bad magic");
    uint32_t count = read_u32le(header + 4);
    uint32_t dim = read_u32le(header + 8);
    if (read_u32le(header + 12) != 0)
        raise(errc::malformed_header, path + ": reserved bytes not zero");

    EmbeddingMatrix m;
    m.count = count;
    m.dim = dim;
    size_t values = static_cast<size_t>(count) * dim;
    m.data.resize(values);
    if (values > 0) {
        in.read(reinterpret_cast<char*>(m.data.data()),
                static_cast<std::streamsize>(values * sizeof(float)));
        if (static_cast<size_t>(in.gcount()) != values * sizeof(float))
            raise(errc::size_mismatch, path + ": payload shorter than header promises");
    }
    // Exactly count*dim floats, nothing more.
    char extra;
    if (in.read(&extra, 1); in.gcount() != 0)
        raise(errc::size_mismatch, path + ": trailing bytes after payload");

    for (size_t i = 0; i < values; ++i) {
        if (!std::isfinite(m.data[i]))
            raise(errc::non_finite_value,
                  path + ": non-finite value at row " + std::to_string(i / dim) + ", col " +
                      std::to_string(i % dim));
    }
    return m;
}

void save_embeddings(const EmbeddingMatrix& m, const std::string& path) {
    m.validate();
    if (m.count > std::numeric_limits<uint32_t>::max() || m.dim > std::numeric_limits<uint32_t>::max())
        raise(errc::size_mismatch, "matrix too large for the container header");
    for (size_t i = 0; i < m.data.size(); ++i) {
        if (!std::isfinite(m.data[i]))
            raise(errc::non_finite_value, "refusing to save non-finite value at row " +
                                              std::to_string(i / m.dim));
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) raise(errc::io_error, "cannot open " + path + " for writing");
    unsigned char header[16] = {};
    std::memcpy(header, kMagic, 4);
    write_u32le(header + 4, static_cast<uint32_t>(m.count));
    write_u32le(header + 8, static_cast<uint32_t>(m.dim));
    out.write(reinterpret_cast<const char*>(header), sizeof(header));
    out.write(reinterpret_cast<const char*>(m.data.data()),
              static_cast<std::streamsize>(m.data.size() * sizeof(float)));
    if (!out) raise(errc::io_error, "write failed for " + path);
}

Corpus load_corpus_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(errc::io_error, "cannot open " + path);
    Corpus corpus;
    bool any_ids = false;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;

        nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object())
            raise(errc::malformed_line, path + ":" + std::to_string(lineno) + ": not a JSON object");

        std::vector<std::string> tokens;
        if (obj.contains("tokens")) {
            if (!obj["tokens"].is_array())
                raise(errc::malformed_line,
                      path + ":" + std::to_string(lineno) + ": tokens is not an array");
            for (const auto& t : obj["tokens"]) {
                if (!t.is_string())
                    raise(errc::malformed_line,
                          path + ":" + std::to_string(lineno) + ": non-string token");
                tokens.push_back(t.get<std::string>());
            }
        } else if (obj.contains("text")) {
            if (!obj["text"].is_string())
                raise(errc::malformed_line,
                      path + ":" + std::to_string(lineno) + ": text is not a string");
            std::istringstream split(obj["text"].get<std::string>());
            std::string tok;
            while (split >> tok) tokens.push_back(tok);
        } else {
            raise(errc::malformed_line,
                  path + ":" + std::to_string(lineno) + ": needs \"tokens\" or \"text\"");
        }
        if (tokens.empty())
            raise(errc::empty_sample, path + ":" + std::to_string(lineno) + ": sample has no tokens");

        std::string id;
        if (obj.contains("id")) {
            if (!obj["id"].is_string())
                raise(errc::malformed_line, path + ":" + std::to_string(lineno) + ": id is not a string");
            id = obj["id"].get<std::string>();
            any_ids = true;
        }
        corpus.samples.push_back(std::move(tokens));
        corpus.ids.push_back(std::move(id));
    }
    if (corpus.samples.empty()) raise(errc::empty_corpus, path + ": no samples");
    if (!any_ids) corpus.ids.clear();
    return corpus;
}

namespace {

// RFC-4180 reader: quoted fields may contain commas, doubled quotes, newlines.
std::vector<std::vector<std::string>> read_csv_records(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(errc::io_error, "cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    size_t i = 0;
    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        if (record.size() > 1 || !record[0].empty()) records.push_back(std::move(record));
        record.clear();
    };
    while (i < text.size()) {
        char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"' && !field_started) {
            quoted = true;
            field_started = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\n') {
            if (!field.empty() && field.back() == '\r') field.pop_back();
            end_record();
        } else {
            field.push_back(c);
            field_started = true;
        }
        ++i;
    }
    if (quoted) raise(errc::unparsable_cell, path + ": unterminated quoted field");
    if (field_started || !record.empty()) end_record();
    return records;
}

double parse_score_cell(const std::string& cell, const std::string& where) {
    if (cell == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const char* b = cell.data();
    const char* e = b + cell.size();
    auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc() || res.ptr != e || !std::isfinite(v))
        raise(errc::unparsable_cell, where + ": cannot parse \"" + cell + "\"");
    return v;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

} // namespace

ScoreTable load_score_table_csv(const std::string& path) {
    auto records = read_csv_records(path);
    if (records.empty()) raise(errc::malformed_header, path + ": empty file");
    const auto& header = records[0];
    if (header.empty() || header[0] != "dataset_id")
        raise(errc::malformed_header, path + ": first column must be dataset_id");

    bool has_perf = !header.empty() && header.back() == "performance";
    size_t metric_end = header.size() - (has_perf ? 1 : 0);
    if (metric_end < 2) raise(errc::malformed_header, path + ": no metric columns");

    ScoreTable table;
    for (size_t c = 1; c < metric_end; ++c) table.metric_names.push_back(header[c]);

    std::unordered_set<std::string> seen;
    for (size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        std::string where = path + ": row " + std::to_string(r + 1);
        if (rec.size() != header.size())
            raise(errc::unparsable_cell, where + ": expected " + std::to_string(header.size()) +
                                             " fields, got " + std::to_string(rec.size()));
        ScoreRow row;
        row.dataset_id = rec[0];
        if (!seen.insert(row.dataset_id).second)
            raise(errc::duplicate_dataset_id, where + ": duplicate id \"" + row.dataset_id + "\"");
        for (size_t c = 1; c < metric_end; ++c)
            row.metrics[header[c]] = parse_score_cell(rec[c], where + ", column " + header[c]);
        if (has_perf && !rec.back().empty())
            row.performance = parse_score_cell(rec.back(), where + ", column performance");
        table.rows.push_back(std::move(row));
    }
    return table;
}

void save_score_table_csv(const ScoreTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) raise(errc::io_error, "cannot open " + path + " for writing");
    bool has_perf = false;
    for (const auto& r : table.rows) has_perf = has_perf || r.performance.has_value();

    out << "dataset_id";
    for (const auto& name : table.metric_names) out << ',' << csv_escape(name);
    if (has_perf) out << ",performance";
    out << '\n';
    for (const auto& r : table.rows) {
        out << csv_escape(r.dataset_id);
        for (const auto& name : table.metric_names) {
            auto it = r.metrics.find(name);
            out << ',';
            if (it != r.metrics.end()) out << format_double(it->second);
        }
        if (has_perf) {
            out << ',';
            if (r.performance) out << format_double(*r.performance);
        }
        out << '\n';
    }
    if (!out) raise(errc::io_error, "write failed for " + path);
}

} // namespace divkit
