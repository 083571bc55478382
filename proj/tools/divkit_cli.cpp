#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "divkit/divkit.h"

namespace {

// RAII wrappers around the C handles so error paths don't leak.
struct Embeddings {
    dk_embeddings* h = nullptr;
    ~Embeddings() { dk_embeddings_free(h); }
};
struct OwnedString {
    char* s = nullptr;
    ~OwnedString() { dk_string_free(s); }
};
struct OwnedIndices {
    uint32_t* p = nullptr;
    size_t n = 0;
    ~OwnedIndices() { dk_indices_free(p); }
};

int fail_input(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    return 2;
}

int status_to_exit(dk_status s) {
    switch (s) {
    case DK_OK: return 0;
    case DK_ERR_INPUT: return 2;
    case DK_ERR_NUMERIC: return 3;
    case DK_PARTIAL: return 4;
    default: return 5;
    }
}

int report_status(dk_status s) {
    int code = status_to_exit(s);
    if (code != 0) std::cerr << "error: " << dk_last_error() << "\n";
    return code;
}

bool read_file(const std::string& path, std::string& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::ostringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return true;
}

bool write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) return false;
    out << content;
    return out.good();
}

// Emits the report: to the file (printing its path) when a path was given,
// otherwise to stdout.
int emit(const std::string& out_path, const char* content) {
    if (out_path.empty()) {
        std::cout << content;
        return 0;
    }
    if (!write_file(out_path, content)) return fail_input("cannot write " + out_path);
    std::cout << out_path << "\n";
    return 0;
}

bool parse_u32(const std::string& text, uint32_t& out) {
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

bool parse_u64(const std::string& text, uint64_t& out) {
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

// Option text handed to the library: config file content first, explicit
// flags after, so flags win (later keys override earlier ones).
struct OptionText {
    std::string text;

    void add(const std::string& key, const std::string& value) {
        text += key;
        text += '=';
        text += value;
        text += '\n';
    }
};

// One CLI flag mirroring a library option key. The raw string is forwarded
// untouched so the library parses and validates every value.
struct OptFlag {
    std::string key;   // library option key
    std::string flag;  // CLI spelling; empty derives --key with -_ swapped
    std::string value;
    CLI::Option* opt = nullptr;
};

struct OptFlagDef {
    const char* key;
    const char* help;
    const char* flag = nullptr;
};

void add_option_flags(CLI::App* cmd, std::vector<OptFlag>& flags,
                      std::initializer_list<OptFlagDef> defs) {
    flags.reserve(flags.size() + defs.size()); // keeps bound value references stable
    for (const auto& def : defs) {
        flags.push_back({def.key, def.flag ? def.flag : "", "", nullptr});
        OptFlag& f = flags.back();
        if (f.flag.empty()) {
            f.flag = "--" + f.key;
            for (auto& ch : f.flag)
                if (ch == '_') ch = '-';
        }
        f.opt = cmd->add_option(f.flag, f.value, def.help);
    }
}

void collect_option_flags(const std::vector<OptFlag>& flags, OptionText& opts) {
    for (const auto& f : flags)
        if (f.opt->count() > 0) opts.add(f.key, f.value);
}

int load_indices_file(const std::string& path, std::vector<uint32_t>& out) {
    std::string content;
    if (!read_file(path, content)) return fail_input("cannot read " + path);
    std::istringstream in(content);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string trimmed;
        for (char c : line)
            if (c != ' ' && c != '\t') trimmed += c;
        if (trimmed.empty()) continue;
        uint32_t v = 0;
        if (!parse_u32(trimmed, v))
            return fail_input(path + ":" + std::to_string(lineno) + ": expected a row index");
        out.push_back(v);
    }
    return 0;
}

struct ScoreArgs {
    std::string metric, embeddings, reference, corpus, indices, out;
    std::vector<OptFlag> flags;
};

struct SelectArgs {
    std::string strategy, pool, reference, out, emit_subset;
    std::vector<OptFlag> flags;
};

struct SimulateArgs {
    std::string seed = "42";
    std::string seeds, out, summary;
};

struct CorrelateArgs {
    std::string table, out;
    bool as_json = false;
};

int run_score(const ScoreArgs& a, OptionText opts) {
    if (a.embeddings.empty() && a.corpus.empty() && a.reference.empty())
        return fail_input("score needs --embeddings, --corpus, or --reference input");
    collect_option_flags(a.flags, opts);

    Embeddings dataset, reference;
    dk_corpus* corpus = nullptr;
    struct CorpusGuard {
        dk_corpus*& c;
        ~CorpusGuard() { dk_corpus_free(c); }
    } corpus_guard{corpus};

    if (!a.embeddings.empty())
        if (dk_status s = dk_embeddings_load(a.embeddings.c_str(), &dataset.h); s != DK_OK)
            return report_status(s);
    if (!a.reference.empty())
        if (dk_status s = dk_embeddings_load(a.reference.c_str(), &reference.h); s != DK_OK)
            return report_status(s);
    if (!a.corpus.empty())
        if (dk_status s = dk_corpus_load(a.corpus.c_str(), &corpus); s != DK_OK)
            return report_status(s);

    std::vector<uint32_t> idx;
    if (!a.indices.empty())
        if (int code = load_indices_file(a.indices, idx); code != 0) return code;

    OwnedString json;
    dk_status s = dk_score(dataset.h, reference.h, corpus, idx.empty() ? nullptr : idx.data(),
                           idx.size(), a.metric.c_str(), opts.text.c_str(), &json.s);
    if (s != DK_OK) return report_status(s);
    return emit(a.out, json.s);
}

int run_select(const SelectArgs& a, OptionText opts) {
    collect_option_flags(a.flags, opts);

    Embeddings pool, reference;
    if (dk_status s = dk_embeddings_load(a.pool.c_str(), &pool.h); s != DK_OK)
        return report_status(s);
    if (!a.reference.empty())
        if (dk_status s = dk_embeddings_load(a.reference.c_str(), &reference.h); s != DK_OK)
            return report_status(s);

    OwnedString json;
    OwnedIndices picked;
    dk_status s = dk_select(pool.h, reference.h, a.strategy.c_str(), opts.text.c_str(), &json.s,
                            &picked.p, &picked.n);
    if (s != DK_OK && s != DK_PARTIAL) return report_status(s);

    if (int code = emit(a.out, json.s); code != 0) return code;
    if (!a.emit_subset.empty()) {
        Embeddings subset;
        if (dk_status ts = dk_embeddings_take_rows(pool.h, picked.p, picked.n, &subset.h);
            ts != DK_OK)
            return report_status(ts);
        if (dk_status ws = dk_embeddings_save(subset.h, a.emit_subset.c_str()); ws != DK_OK)
            return report_status(ws);
    }
    if (s == DK_PARTIAL) {
        std::cerr << "warning: " << dk_last_error() << "\n";
        return 4;
    }
    return 0;
}

int run_simulate(const SimulateArgs& a) {
    if (!a.seeds.empty()) {
        size_t dots = a.seeds.find("..");
        uint64_t begin = 0, end = 0;
        if (dots == std::string::npos || !parse_u64(a.seeds.substr(0, dots), begin) ||
            !parse_u64(a.seeds.substr(dots + 2), end))
            return fail_input("--seeds wants a range like 0..19");
        if (a.summary.empty()) return fail_input("--seeds needs --summary for the report");
        OwnedString json;
        if (dk_status s = dk_simulate_range(begin, end, &json.s); s != DK_OK)
            return report_status(s);
        return emit(a.summary, json.s);
    }
    uint64_t seed = 0;
    if (!parse_u64(a.seed, seed)) return fail_input("--seed wants a nonnegative integer");
    if (a.out.empty()) return fail_input("simulate needs --out for the score table");
    OwnedString csv;
    if (dk_status s = dk_simulate(seed, &csv.s); s != DK_OK) return report_status(s);
    return emit(a.out, csv.s);
}

int run_correlate(const CorrelateArgs& a) {
    dk_score_table* table = nullptr;
    struct TableGuard {
        dk_score_table*& t;
        ~TableGuard() { dk_score_table_free(t); }
    } guard{table};
    if (dk_status s = dk_score_table_load(a.table.c_str(), &table); s != DK_OK)
        return report_status(s);
    OwnedString text;
    if (dk_status s = dk_correlate(table, a.as_json ? 1 : 0, &text.s); s != DK_OK)
        return report_status(s);
    return emit(a.out, text.s);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dataset diversity measurement and subset selection"};
    app.require_subcommand(1);

    unsigned threads = 0;
    std::string config_path;
    app.add_option("--threads", threads, "worker thread hint (0 = hardware default)");
    app.add_option("--config", config_path, "key=value file with option defaults");

    ScoreArgs score;
    CLI::App* score_cmd = app.add_subcommand("score", "compute one diversity metric");
    score_cmd->add_option("--metric", score.metric,
                          "ttr, vocd-d, distsum-cosine, distsum-sql2, knn, inertia, vendi, "
                          "radius, ldd, fl, entropy, or novelsum")
        ->required();
    score_cmd->add_option("--embeddings", score.embeddings, "dataset embeddings (EMB1)");
    score_cmd->add_option("--reference", score.reference,
                          "reference pool embeddings (novelsum density, fl/entropy pool)");
    score_cmd->add_option("--corpus", score.corpus, "JSONL token corpus for lexical metrics");
    score_cmd->add_option("--indices", score.indices,
                          "text file of reference row indices (entropy selection, novelsum "
                          "subset scoring)");
    score_cmd->add_option("--out", score.out, "report path (default: report to stdout)");
    add_option_flags(score_cmd, score.flags,
                     {{"distance", "cosine or sql2"},
                      {"seed", "seed for sampling-based metrics"},
                      {"alpha", "proximity-rank weight exponent (novelsum)"},
                      {"beta", "density weight exponent (novelsum)"},
                      {"density_k", "neighbors in the density profile (novelsum)"},
                      {"epsilon", "density denominator floor (novelsum)"},
                      {"normalization", "novelsum score form: mean or rawsum"},
                      {"knn_k", "which nearest neighbor the knn metric averages"},
                      {"inertia_clusters", "cluster count for the inertia metric"},
                      {"entropy_clusters", "pool partition size for the entropy metric"},
                      {"vendi_alpha", "spectrum order of the vendi metric"},
                      {"ttr_sample_len", "tokens drawn per sample for ttr"},
                      {"vocd_subsamples", "subsamples per length for vocd-d"}});

    SelectArgs select;
    CLI::App* select_cmd = app.add_subcommand("select", "pick a diverse subset of a pool");
    select_cmd->add_option("--strategy", select.strategy,
                           "random, farthest, kcenter, reprfilter, qdit, kmeans, duplicate, "
                           "or novelselect")
        ->required();
    select_cmd->add_option("--pool", select.pool, "candidate embeddings (EMB1)")->required();
    select_cmd->add_option("--reference", select.reference,
                           "density reference for novelselect (default: the pool)");
    select_cmd->add_option("--out", select.out, "report path (default: report to stdout)");
    select_cmd->add_option("--emit-subset", select.emit_subset,
                           "also write the selected rows as EMB1");
    add_option_flags(
        select_cmd, select.flags,
        {{"budget", "number of rows to select"},
         {"seed", "seed for randomized strategies"},
         {"distance", "cosine or sql2"},
         {"repr_threshold", "max cosine similarity the filter admits", "--threshold"},
         {"duplicate_unique", "distinct rows in the duplicate construction", "--unique"},
         {"kmeans_clusters", "cluster count for the kmeans strategy"},
         {"alpha", "proximity-rank weight exponent (novelselect)"},
         {"beta", "density weight exponent (novelselect)"},
         {"density_k", "neighbors in the density profile (novelselect)"},
         {"epsilon", "density denominator floor (novelselect)"}});

    SimulateArgs simulate;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "run the planar selection study");
    sim_cmd->add_option("--seed", simulate.seed, "scenario seed (default 42)");
    sim_cmd->add_option("--seeds", simulate.seeds, "seed range like 0..19 for the summary");
    sim_cmd->add_option("--out", simulate.out, "CSV path for the per-selection scores");
    sim_cmd->add_option("--summary", simulate.summary, "JSON path for range pass counts");

    CorrelateArgs correlate;
    CLI::App* corr_cmd =
        app.add_subcommand("correlate", "rank metrics against measured performance");
    corr_cmd->add_option("--table", correlate.table, "score table CSV")->required();
    corr_cmd->add_option("--out", correlate.out, "report path (default: report to stdout)");
    corr_cmd->add_flag("--json", correlate.as_json, "emit JSON instead of CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (threads > 0) dk_set_threads(threads);

    OptionText opts;
    if (!config_path.empty()) {
        std::string content;
        if (!read_file(config_path, content)) return fail_input("cannot read " + config_path);
        opts.text = content;
        opts.text += '\n';
    }

    if (score_cmd->parsed()) return run_score(score, std::move(opts));
    if (select_cmd->parsed()) return run_select(select, std::move(opts));
    if (sim_cmd->parsed()) return run_simulate(simulate);
    return run_correlate(correlate);
}
