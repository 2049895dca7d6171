#pragma once

#include <span>
#include <string>
#include <vector>

#include "decdyn/model.hpp"

namespace decdyn {

// One aggregated cell of the degree/lag sweep: distribution summary of R^2
// over every admissible year pair at that lag, fitted at that degree.
struct GridRow {
    int lag = 1;
    int degree = 1;
    double mean_r2 = 0.0;
    double min_r2 = 0.0;
    double max_r2 = 0.0;
    int pair_count = 0;

    bool operator==(const GridRow&) const = default;
};

struct GridResult {
    std::vector<GridRow> rows;

    bool operator==(const GridResult&) const = default;
};

// Fits every pair (series[i], series[i+lag]) at the given degree and collects
// the records into a table, labeled "later/earlier", in chronological order.
// The input list must already be in manifest chronological order and share
// one meta. Pairs whose fit fails (e.g. RankDeficient from tied deltas) are
// kept as failure markers instead of aborting the batch. Pairs are fitted
// concurrently when it pays off; assembly order is fixed, so output is
// deterministic. Throws ValidationError: "InsufficientSeries",
// "MetaMismatch", "DuplicateSeries", "InvalidLag".
FitTable pair_fits(std::span<const DecileSeries> series, int lag, int degree);

// Sweeps the (lag, degree) grid and aggregates R^2 per cell; cells with no
// fitted pair are skipped rather than reported. Rows come out sorted by
// (lag, degree).
GridResult degree_lag_grid(std::span<const DecileSeries> series, std::vector<int> degrees,
                           std::vector<int> lags);

enum class SlopeSign { positive, negative, zero };

struct SlopeEntry {
    std::string pair_label;
    SlopeSign sign = SlopeSign::negative;

    bool operator==(const SlopeEntry&) const = default;
};

// Classifies every fitted record of a degree-1 table by the sign of its
// leading coefficient (zero when |P1| < 1e-12). Throws ValidationError
// "WrongDegree" for any other degree.
std::vector<SlopeEntry> slope_sign_report(const FitTable& table);

// Pair labels whose slope is positive, in table order.
std::vector<std::string> positive_slope_pairs(const FitTable& table);

// Grid text: header lag,degree,mean_r2,min_r2,max_r2,pairs.
std::string serialize_grid(const GridResult& grid);

std::string to_string(SlopeSign sign);

}  // namespace decdyn
