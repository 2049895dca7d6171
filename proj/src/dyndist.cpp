#include "decdyn/dyndist.hpp"

#include <algorithm>

#include "decdyn/format.hpp"

namespace decdyn {

namespace {

void check_meta_match(const DecileSeries& earlier, const DecileSeries& later) {
    auto mismatch = [&](const std::string& field) {
        throw ValidationError("MetaMismatch", "series '" + earlier.label + "' and '" +
                                                  later.label + "' differ in " + field);
    };
    if (earlier.kind != later.kind) mismatch("variable_kind");
    if (earlier.measure != later.measure) mismatch("measure");
    if (earlier.basis != later.basis) mismatch("basis");
    if (earlier.period != later.period) mismatch("period");
    if (earlier.unit != later.unit) mismatch("unit");
}

DifferenceSet diff_unchecked(const DecileSeries& earlier, const DecileSeries& later) {
    DifferenceSet out;
    out.earlier_label = earlier.label;
    out.later_label = later.label;
    out.meta = earlier.meta();
    for (std::size_t i = 0; i < kDecileCount; ++i) {
        out.deltas[i] = later.values[i] - earlier.values[i];
    }
    return out;
}

}  // namespace

std::array<double, kDecileCount> percentage_ladder(Measure measure) {
    std::array<double, kDecileCount> ladder{};
    const double top = measure == Measure::mean ? 90.0 : 100.0;
    for (std::size_t i = 0; i < kDecileCount; ++i) ladder[i] = top - 10.0 * static_cast<double>(i);
    return ladder;
}

DifferenceSet diff_series(const DecileSeries& earlier, const DecileSeries& later) {
    check_meta_match(earlier, later);
    if (earlier.label == later.label) {
        throw ValidationError("NotChronological",
                              "cannot difference '" + later.label + "' against itself");
    }
    return diff_unchecked(earlier, later);
}

DifferenceSet diff_series(const DecileSeries& earlier, const DecileSeries& later,
                          std::span<const std::string> chronology) {
    check_meta_match(earlier, later);
    auto position = [&](const std::string& label) {
        auto it = std::find(chronology.begin(), chronology.end(), label);
        if (it == chronology.end()) {
            throw ValidationError("NotChronological",
                                  "label '" + label + "' is not in the chronology");
        }
        return it - chronology.begin();
    };
    if (position(later.label) <= position(earlier.label)) {
        throw ValidationError("NotChronological", "'" + later.label +
                                                      "' does not follow '" + earlier.label +
                                                      "' in the chronology");
    }
    return diff_unchecked(earlier, later);
}

CumulativePlotSet build_plot_set(const DifferenceSet& diffs) {
    auto sorted = diffs.deltas;
    std::stable_sort(sorted.begin(), sorted.end());
    const auto ladder = percentage_ladder(diffs.meta.measure);

    CumulativePlotSet out;
    out.measure = diffs.meta.measure;
    out.pair_label = diffs.pair_label();
    for (std::size_t i = 0; i < kDecileCount; ++i) out.points[i] = {sorted[i], ladder[i]};
    return out;
}

std::string serialize_plot_set(const CumulativePlotSet& set) {
    std::string out = "x,p\n";
    for (const auto& pt : set.points) {
        out += format_double(pt.x);
        out += ',';
        out += format_double(pt.p);
        out += '\n';
    }
    return out;
}

}  // namespace decdyn
