#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "core/metrics.hpp"
#include "core/novelsum.hpp"
#include "core/selection.hpp"

namespace divkit {

// Flat key=value option text: one pair per line or semicolon-separated,
// '#' starts a comment, blank entries ignored. Later keys override earlier
// ones, so a config file can be concatenated with command-line overrides.
std::map<std::string, std::string> parse_options(const std::string& text);

// Typed lookups; every consumed key is erased so the callers below can
// reject leftovers as unknown.
double take_double(std::map<std::string, std::string>& kv, const std::string& key, double fallback);
uint64_t take_u64(std::map<std::string, std::string>& kv, const std::string& key,
                  uint64_t fallback);
std::string take_string(std::map<std::string, std::string>& kv, const std::string& key,
                        const std::string& fallback);

DistanceKind parse_distance(const std::string& name);
Normalization parse_normalization(const std::string& name);

// Builders consume their keys from kv and raise bad_option on anything left
// when `reject_unknown` is set.
MetricConfig metric_config_from(std::map<std::string, std::string>& kv);
NovelSumConfig novelsum_config_from(std::map<std::string, std::string>& kv);
SelectionConfig selection_config_from(std::map<std::string, std::string>& kv);
void reject_unknown(const std::map<std::string, std::string>& kv);

} // namespace divkit
