#include "decdyn/batch.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <set>
#include <thread>

#include "decdyn/dyndist.hpp"
#include "decdyn/format.hpp"
#include "decdyn/polyfit.hpp"

namespace decdyn {

namespace {

void check_shared_meta(std::span<const DecileSeries> series) {
    const SeriesMeta first = series.front().meta();
    std::set<std::string> labels;
    for (const auto& s : series) {
        if (s.meta() != first) {
            throw ValidationError("MetaMismatch", "series '" + s.label +
                                                      "' does not share the batch metadata");
        }
        if (!labels.insert(s.label).second) {
            throw ValidationError("DuplicateSeries",
                                  "label '" + s.label + "' appears twice in the batch");
        }
    }
}

FitRow fit_pair(const DecileSeries& earlier, const DecileSeries& later, int degree) {
    const std::string pair_label = later.label + "/" + earlier.label;
    try {
        const DifferenceSet diffs = diff_series(earlier, later);
        const CumulativePlotSet plot = build_plot_set(diffs);
        const PolynomialFit f = fit(plot.points, degree);
        return {pair_label, FitRecord{pair_label, f.coefficients, f.r_squared_percent}, ""};
    } catch (const FitError& e) {
        return {pair_label, std::nullopt, e.code() + ": " + e.what()};
    }
}

}  // namespace

FitTable pair_fits(std::span<const DecileSeries> series, int lag, int degree) {
    if (lag < 1) {
        throw ValidationError("InvalidLag", "lag must be >= 1, got " + std::to_string(lag));
    }
    if (series.size() < static_cast<std::size_t>(lag) + 1) {
        throw ValidationError("InsufficientSeries",
                              "lag " + std::to_string(lag) + " needs at least " +
                                  std::to_string(lag + 1) + " series, got " +
                                  std::to_string(series.size()));
    }
    check_shared_meta(series);

    const std::size_t n_pairs = series.size() - static_cast<std::size_t>(lag);
    FitTable table;
    table.degree = degree;
    table.meta = FitTableMeta{series.front().kind, series.front().measure, series.front().basis};
    table.rows.resize(n_pairs);

    auto fill = [&](std::size_t i) {
        table.rows[i] = fit_pair(series[i], series[i + static_cast<std::size_t>(lag)], degree);
    };

    // Pairs are independent; rows are written by index, so the assembled
    // table does not depend on scheduling.
    const std::size_t n_workers =
        std::min(n_pairs, static_cast<std::size_t>(std::max(2u, std::thread::hardware_concurrency())));
    if (n_pairs >= 8 && n_workers > 1) {
        std::vector<std::exception_ptr> errors(n_workers);
        std::vector<std::thread> workers;
        workers.reserve(n_workers);
        for (std::size_t w = 0; w < n_workers; ++w) {
            workers.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < n_pairs; i += n_workers) fill(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : workers) t.join();
        for (const auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    } else {
        for (std::size_t i = 0; i < n_pairs; ++i) fill(i);
    }
    return table;
}

GridResult degree_lag_grid(std::span<const DecileSeries> series, std::vector<int> degrees,
                           std::vector<int> lags) {
    if (degrees.empty() || lags.empty()) {
        throw ValidationError("EmptyGrid", "degree and lag sets must be non-empty");
    }
    std::sort(degrees.begin(), degrees.end());
    degrees.erase(std::unique(degrees.begin(), degrees.end()), degrees.end());
    std::sort(lags.begin(), lags.end());
    lags.erase(std::unique(lags.begin(), lags.end()), lags.end());

    GridResult grid;
    for (int lag : lags) {
        for (int degree : degrees) {
            FitTable table;
            try {
                table = pair_fits(series, lag, degree);
            } catch (const ValidationError& e) {
                if (e.code() == "InsufficientSeries") continue;  // zero-pair cell: absent
                throw;
            }
            GridRow row;
            row.lag = lag;
            row.degree = degree;
            row.min_r2 = std::numeric_limits<double>::infinity();
            row.max_r2 = -std::numeric_limits<double>::infinity();
            double sum = 0.0;
            for (const auto& r : table.rows) {
                if (r.failed()) continue;
                const double r2 = r.record->r_squared_percent;
                sum += r2;
                row.min_r2 = std::min(row.min_r2, r2);
                row.max_r2 = std::max(row.max_r2, r2);
                ++row.pair_count;
            }
            if (row.pair_count == 0) continue;
            row.mean_r2 = sum / row.pair_count;
            grid.rows.push_back(row);
        }
    }
    return grid;
}

std::vector<SlopeEntry> slope_sign_report(const FitTable& table) {
    if (table.degree != 1) {
        throw ValidationError("WrongDegree", "slope sign report needs a degree-1 table, got degree " +
                                                 std::to_string(table.degree));
    }
    std::vector<SlopeEntry> report;
    for (const auto& row : table.rows) {
        if (row.failed()) continue;
        const double p1 = row.record->coefficients.front();
        SlopeSign sign = SlopeSign::zero;
        if (std::abs(p1) >= 1e-12) sign = p1 > 0.0 ? SlopeSign::positive : SlopeSign::negative;
        report.push_back({row.pair_label, sign});
    }
    return report;
}

std::vector<std::string> positive_slope_pairs(const FitTable& table) {
    std::vector<std::string> out;
    for (const auto& entry : slope_sign_report(table)) {
        if (entry.sign == SlopeSign::positive) out.push_back(entry.pair_label);
    }
    return out;
}

std::string serialize_grid(const GridResult& grid) {
    std::string out = "lag,degree,mean_r2,min_r2,max_r2,pairs\n";
    for (const auto& row : grid.rows) {
        out += std::to_string(row.lag) + ',' + std::to_string(row.degree) + ',';
        out += format_r2(row.mean_r2) + ',' + format_r2(row.min_r2) + ',' +
               format_r2(row.max_r2) + ',';
        out += std::to_string(row.pair_count) + '\n';
    }
    return out;
}

std::string to_string(SlopeSign sign) {
    switch (sign) {
        case SlopeSign::positive: return "positive";
        case SlopeSign::negative: return "negative";
        default: return "zero";
    }
}

}  // namespace decdyn
