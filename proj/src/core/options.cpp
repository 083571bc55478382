#include "core/options.hpp"

#include <charconv>
#include <vector>

#include "core/error.hpp"

namespace divkit {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

std::map<std::string, std::string> parse_options(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::vector<std::string> entries;
    std::string cur;
    for (char c : text) {
        if (c == '\n' || c == ';') {
            entries.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    entries.push_back(cur);
    for (auto& raw : entries) {
        size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.resize(hash);
        std::string entry = trim(raw);
        if (entry.empty()) continue;
        size_t eq = entry.find('=');
        if (eq == std::string::npos)
            raise(errc::bad_option, "expected key=value, got '" + entry + "'");
        std::string key = trim(entry.substr(0, eq));
        std::string value = trim(entry.substr(eq + 1));
        if (key.empty()) raise(errc::bad_option, "empty option key in '" + entry + "'");
        kv[key] = value;
    }
    return kv;
}

double take_double(std::map<std::string, std::string>& kv, const std::string& key,
                   double fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    const std::string& v = it->second;
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        raise(errc::bad_option, "option '" + key + "' needs a number, got '" + v + "'");
    kv.erase(it);
    return out;
}

uint64_t take_u64(std::map<std::string, std::string>& kv, const std::string& key,
                  uint64_t fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    const std::string& v = it->second;
    uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        raise(errc::bad_option, "option '" + key + "' needs a nonnegative integer, got '" + v + "'");
    kv.erase(it);
    return out;
}

std::string take_string(std::map<std::string, std::string>& kv, const std::string& key,
                        const std::string& fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    std::string out = it->second;
    kv.erase(it);
    return out;
}

DistanceKind parse_distance(const std::string& name) {
    if (name == "cosine") return DistanceKind::Cosine;
    if (name == "sql2") return DistanceKind::SquaredL2;
    if (name == "l2") return DistanceKind::L2;
    raise(errc::bad_option, "unknown distance '" + name + "' (want cosine, sql2, or l2)");
}

Normalization parse_normalization(const std::string& name) {
    if (name == "mean") return Normalization::MeanWeightedNovelty;
    if (name == "rawsum") return Normalization::RawSum;
    raise(errc::bad_option, "unknown normalization '" + name + "' (want mean or rawsum)");
}

MetricConfig metric_config_from(std::map<std::string, std::string>& kv) {
    MetricConfig cfg;
    cfg.distance = parse_distance(take_string(kv, "distance", distance_name(cfg.distance)));
    cfg.seed = take_u64(kv, "seed", cfg.seed);
    cfg.knn_k = static_cast<size_t>(take_u64(kv, "knn_k", cfg.knn_k));
    cfg.inertia_clusters = static_cast<size_t>(take_u64(kv, "inertia_clusters", cfg.inertia_clusters));
    cfg.entropy_clusters = static_cast<size_t>(take_u64(kv, "entropy_clusters", cfg.entropy_clusters));
    cfg.vendi_alpha = take_double(kv, "vendi_alpha", cfg.vendi_alpha);
    cfg.ttr_sample_len = static_cast<size_t>(take_u64(kv, "ttr_sample_len", cfg.ttr_sample_len));
    cfg.vocd_subsamples = static_cast<size_t>(take_u64(kv, "vocd_subsamples", cfg.vocd_subsamples));
    return cfg;
}

NovelSumConfig novelsum_config_from(std::map<std::string, std::string>& kv) {
    NovelSumConfig cfg;
    cfg.alpha = take_double(kv, "alpha", cfg.alpha);
    cfg.beta = take_double(kv, "beta", cfg.beta);
    cfg.density_k = static_cast<size_t>(take_u64(kv, "density_k", cfg.density_k));
    cfg.distance = parse_distance(take_string(kv, "distance", distance_name(cfg.distance)));
    cfg.epsilon = take_double(kv, "epsilon", cfg.epsilon);
    cfg.normalization =
        parse_normalization(take_string(kv, "normalization", normalization_name(cfg.normalization)));
    return cfg;
}

SelectionConfig selection_config_from(std::map<std::string, std::string>& kv) {
    SelectionConfig cfg;
    cfg.budget = static_cast<size_t>(take_u64(kv, "budget", cfg.budget));
    cfg.seed = take_u64(kv, "seed", cfg.seed);
    cfg.distance = parse_distance(take_string(kv, "distance", distance_name(cfg.distance)));
    cfg.repr_threshold = take_double(kv, "repr_threshold", cfg.repr_threshold);
    cfg.kmeans_clusters = static_cast<size_t>(take_u64(kv, "kmeans_clusters", cfg.kmeans_clusters));
    cfg.duplicate_unique = static_cast<size_t>(take_u64(kv, "duplicate_unique", cfg.duplicate_unique));
    cfg.novel.alpha = take_double(kv, "alpha", cfg.novel.alpha);
    cfg.novel.beta = take_double(kv, "beta", cfg.novel.beta);
    cfg.novel.density_k = static_cast<size_t>(take_u64(kv, "density_k", cfg.novel.density_k));
    cfg.novel.distance = cfg.distance;
    cfg.novel.epsilon = take_double(kv, "epsilon", cfg.novel.epsilon);
    return cfg;
}

void reject_unknown(const std::map<std::string, std::string>& kv) {
    if (kv.empty()) return;
    raise(errc::bad_option, "unknown option '" + kv.begin()->first + "'");
}

} // namespace divkit
