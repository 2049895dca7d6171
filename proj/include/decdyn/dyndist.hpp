#pragma once

#include <array>
#include <span>
#include <string>

#include "decdyn/model.hpp"

namespace decdyn {

// Per-decile differences between two years of the same series: deltas[i] is
// the later-minus-earlier change of decile i+1. Deltas may be negative.
struct DifferenceSet {
    std::string earlier_label;
    std::string later_label;
    std::array<double, kDecileCount> deltas{};
    SeriesMeta meta;

    [[nodiscard]] std::string pair_label() const { return later_label + "/" + earlier_label; }

    bool operator==(const DifferenceSet&) const = default;
};

// The ten sorted deltas paired with cumulated population percentages. The
// percentage ladder is fixed by the measure alone:
//   mean        -> 90, 80, ..., 10, 0
//   lower_limit -> 100, 90, ..., 20, 10
// x values are the sorted deltas themselves, untransformed, on a linear
// scale.
struct CumulativePlotSet {
    std::array<PlotPoint, kDecileCount> points{};
    Measure measure = Measure::mean;
    std::string pair_label;

    bool operator==(const CumulativePlotSet&) const = default;
};

std::array<double, kDecileCount> percentage_ladder(Measure measure);

// later.values - earlier.values, elementwise. Both series must share
// variable kind, measure, basis, period, and unit (MetaMismatch names the
// first offending field); identical labels are rejected as NotChronological.
// The caller vouches that `later` follows `earlier` chronologically.
DifferenceSet diff_series(const DecileSeries& earlier, const DecileSeries& later);

// Same, but verifies the order against an explicit chronology (earliest
// first); throws NotChronological when the labels are out of order, equal,
// or absent from the chronology.
DifferenceSet diff_series(const DecileSeries& earlier, const DecileSeries& later,
                          std::span<const std::string> chronology);

// Sorts the deltas ascending (stable, so tied values keep decile order) and
// pairs them with the measure's percentage ladder.
CumulativePlotSet build_plot_set(const DifferenceSet& diffs);

// Plot-set text: header "x,p" plus ten data rows.
std::string serialize_plot_set(const CumulativePlotSet& set);

}  // namespace decdyn
