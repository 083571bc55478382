#include "core/report.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "core/strutil.hpp"

namespace divkit {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json number_or_string(double v) {
    if (std::isfinite(v)) return v;
    if (v == -std::numeric_limits<double>::infinity()) return "-inf";
    if (v == std::numeric_limits<double>::infinity()) return "inf";
    return "nan";
}

// Config maps carry stringified values; render numeric ones as JSON numbers
// so consumers don't need to reparse.
ordered_json config_value(const std::string& v) {
    double d = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), d);
    if (ec == std::errc{} && ptr == v.data() + v.size()) {
        if (v.find_first_of(".eE") == std::string::npos) {
            long long i = 0;
            auto [ip, iec] = std::from_chars(v.data(), v.data() + v.size(), i);
            if (iec == std::errc{} && ip == v.data() + v.size()) return i;
        }
        return d;
    }
    return v;
}

ordered_json config_object(const std::vector<std::pair<std::string, std::string>>& kv) {
    ordered_json obj = ordered_json::object();
    for (const auto& [k, v] : kv) obj[k] = config_value(v);
    return obj;
}

} // namespace

std::string metric_report_json(const MetricReport& report) {
    ordered_json j;
    j["metric"] = report.metric;
    j["score"] = number_or_string(report.score);
    if (report.raw_sum) j["raw_sum"] = number_or_string(*report.raw_sum);
    j["dataset_size"] = report.dataset_size;
    j["config"] = config_object(report.config);
    j["notes"] = report.notes;
    j["duration_ms"] = report.duration_ms;
    return j.dump(2) + "\n";
}

std::string selection_result_json(const SelectionResult& result) {
    ordered_json j;
    j["strategy"] = result.strategy;
    j["indices"] = result.indices;
    j["partial"] = result.partial;
    ordered_json trace = ordered_json::array();
    for (const auto& step : result.trace) {
        ordered_json t;
        t["index"] = step.index;
        t["objective"] = number_or_string(step.objective);
        trace.push_back(std::move(t));
    }
    j["trace"] = std::move(trace);
    j["config"] = config_object(result.config);
    j["duration_ms"] = result.duration_ms;
    return j.dump(2) + "\n";
}

std::string simulation_csv(const SimulationResult& result) {
    std::string out = "selection,metric,score,flag\n";
    for (const auto& row : result.rows) {
        out += row.selection;
        out += ',';
        out += row.metric;
        out += ',';
        out += format_double(row.score);
        out += ',';
        out += row.flag;
        out += '\n';
    }
    return out;
}

std::string simulation_summary_json(const SimulationSummary& summary) {
    ordered_json j;
    j["seed_begin"] = summary.seed_begin;
    j["seed_end"] = summary.seed_end;
    j["total"] = summary.total;
    j["novelsum_order_pass"] = summary.novelsum_order_pass;
    j["proximity_pass"] = summary.proximity_pass;
    j["distsum_pass"] = summary.distsum_pass;
    j["all_pass"] = summary.all_pass;
    return j.dump(2) + "\n";
}

std::string correlation_csv(const CorrelationReport& report) {
    std::string out = "metric,pearson,spearman,average,n_points,excluded\n";
    for (const auto& row : report.rows) {
        out += row.metric;
        out += ',';
        out += format_double(row.pearson);
        out += ',';
        out += format_double(row.spearman);
        out += ',';
        out += format_double(row.average);
        out += ',';
        out += std::to_string(row.n_points);
        out += ',';
        for (size_t i = 0; i < row.excluded.size(); ++i) {
            if (i) out += ';';
            out += row.excluded[i];
        }
        out += '\n';
    }
    return out;
}

std::string correlation_json(const CorrelationReport& report) {
    ordered_json j;
    ordered_json arr = ordered_json::array();
    for (const auto& row : report.rows) {
        ordered_json r;
        r["metric"] = row.metric;
        r["pearson"] = number_or_string(row.pearson);
        r["spearman"] = number_or_string(row.spearman);
        r["average"] = number_or_string(row.average);
        r["n_points"] = row.n_points;
        r["excluded"] = row.excluded;
        arr.push_back(std::move(r));
    }
    j["metrics"] = std::move(arr);
    j["warnings"] = report.warnings;
    return j.dump(2) + "\n";
}

} // namespace divkit
