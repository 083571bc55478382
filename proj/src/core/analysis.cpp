#include "core/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace divkit {

std::vector<double> zscore_aggregate(const std::vector<std::vector<double>>& lists,
                                     std::vector<std::string>* warnings) {
    if (lists.empty()) raise(errc::length_mismatch, "no lists to aggregate");
    const size_t n = lists[0].size();
    if (n == 0) raise(errc::length_mismatch, "lists are empty");
    for (size_t l = 1; l < lists.size(); ++l) {
        if (lists[l].size() != n)
            raise(errc::length_mismatch, "list " + std::to_string(l) + " has length " +
                                             std::to_string(lists[l].size()) + ", expected " +
                                             std::to_string(n));
    }
    std::vector<double> out(n, 0.0);
    for (size_t l = 0; l < lists.size(); ++l) {
        const auto& v = lists[l];
        for (double x : v) {
            if (!std::isfinite(x))
                raise(errc::non_finite_input, "list " + std::to_string(l) + " has a non-finite value");
        }
        double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
        double var = 0.0;
        for (double x : v) var += (x - mean) * (x - mean);
        double sd = std::sqrt(var / static_cast<double>(n));
        if (sd == 0.0) {
            if (warnings)
                warnings->push_back("list " + std::to_string(l) +
                                    " is constant; it contributes zeros");
            continue; // zeros already in place
        }
        for (size_t i = 0; i < n; ++i) out[i] += (v[i] - mean) / sd;
    }
    return out;
}

double pearson(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        raise(errc::length_mismatch, "series lengths differ: " + std::to_string(a.size()) + " vs " +
                                         std::to_string(b.size()));
    const size_t n = a.size();
    if (n < 2) raise(errc::too_few_rows, "correlation needs at least two points");
    for (size_t i = 0; i < n; ++i) {
        if (!std::isfinite(a[i]) || !std::isfinite(b[i]))
            raise(errc::non_finite_input, "non-finite value at row " + std::to_string(i));
    }
    double ma = 0.0, mb = 0.0;
    for (size_t i = 0; i < n; ++i) { ma += a[i]; mb += b[i]; }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double da = a[i] - ma, db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0)
        raise(errc::degenerate_variance, "a series is constant");
    return sab / (std::sqrt(saa) * std::sqrt(sbb));
}

namespace {

// Average ranks with ties shared; negative infinity sorts below all finite.
std::vector<double> average_ranks(std::span<const double> v) {
    const size_t n = v.size();
    std::vector<uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](uint32_t x, uint32_t y) {
        return v[x] < v[y] || (v[x] == v[y] && x < y);
    });
    std::vector<double> ranks(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        double shared = 0.5 * static_cast<double>(i + j) + 1.0; // ranks are 1-based
        for (size_t t = i; t <= j; ++t) ranks[order[t]] = shared;
        i = j + 1;
    }
    return ranks;
}

} // namespace

double spearman(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        raise(errc::length_mismatch, "series lengths differ");
    const size_t n = a.size();
    if (n < 2) raise(errc::too_few_rows, "correlation needs at least two points");
    const double ninf = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i) {
        if (!std::isfinite(a[i]) && a[i] != ninf)
            raise(errc::non_finite_input, "left series has a non-finite, non -inf value");
        if (!std::isfinite(b[i]))
            raise(errc::non_finite_input, "right series has a non-finite value");
    }
    auto ra = average_ranks(a);
    auto rb = average_ranks(b);
    return pearson(ra, rb);
}

CorrelationReport correlate_metrics(const ScoreTable& table) {
    CorrelationReport report;

    std::vector<size_t> perf_rows;
    for (size_t i = 0; i < table.rows.size(); ++i) {
        if (table.rows[i].performance) perf_rows.push_back(i);
        else
            report.warnings.push_back("row " + table.rows[i].dataset_id +
                                      " has no performance; excluded");
    }
    if (perf_rows.empty())
        raise(errc::missing_performance, "table has no performance values");

    for (const auto& name : table.metric_names) {
        MetricCorrelation mc;
        mc.metric = name;

        std::vector<double> lin_m, lin_p;   // finite rows only
        std::vector<double> rank_m, rank_p; // -inf kept for the rank side
        for (size_t i : perf_rows) {
            const auto& row = table.rows[i];
            auto it = row.metrics.find(name);
            if (it == row.metrics.end()) {
                mc.excluded.push_back(row.dataset_id);
                continue;
            }
            double v = it->second;
            rank_m.push_back(v);
            rank_p.push_back(*row.performance);
            if (std::isfinite(v)) {
                lin_m.push_back(v);
                lin_p.push_back(*row.performance);
            } else {
                mc.excluded.push_back(row.dataset_id);
            }
        }
        if (lin_m.size() < 3)
            raise(errc::too_few_rows, "metric " + name + " has " + std::to_string(lin_m.size()) +
                                          " usable rows; need at least 3");
        mc.pearson = pearson(lin_m, lin_p);
        mc.spearman = spearman(rank_m, rank_p);
        mc.average = 0.5 * (mc.pearson + mc.spearman);
        mc.n_points = lin_m.size();
        if (!mc.excluded.empty())
            report.warnings.push_back("metric " + name + " excluded " +
                                      std::to_string(mc.excluded.size()) +
                                      " row(s) from the linear side");
        report.rows.push_back(std::move(mc));
    }
    std::sort(report.rows.begin(), report.rows.end(),
              [](const MetricCorrelation& x, const MetricCorrelation& y) {
                  return x.average > y.average ||
                         (x.average == y.average && x.metric < y.metric);
              });
    return report;
}

} // namespace divkit
