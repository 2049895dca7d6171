// Independent reference implementations used to check the library. These are
// deliberately written from the textbook formulas, not by calling the code
// under test.
#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "decdyn/model.hpp"
#include "decdyn/synthgen.hpp"

namespace oracle {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2_percent = 0.0;
};

// Closed-form two-parameter OLS: slope = Sxy/Sxx, intercept = ybar - slope*xbar.
inline LineFit ols_line(std::span<const decdyn::PlotPoint> pts) {
    const double n = static_cast<double>(pts.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& p : pts) {
        sx += p.x;
        sy += p.p;
    }
    const double xbar = sx / n;
    const double ybar = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& p : pts) {
        sxx += (p.x - xbar) * (p.x - xbar);
        sxy += (p.x - xbar) * (p.p - ybar);
    }
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = ybar - f.slope * xbar;
    double ss_res = 0.0, ss_tot = 0.0;
    for (const auto& p : pts) {
        const double e = p.p - (f.slope * p.x + f.intercept);
        ss_res += e * e;
        ss_tot += (p.p - ybar) * (p.p - ybar);
    }
    f.r2_percent = 100.0 * (1.0 - ss_res / ss_tot);
    return f;
}

// Sum of squared residuals of an arbitrary high-first coefficient vector.
inline double sse(std::span<const decdyn::PlotPoint> pts, std::span<const double> coef_high_first) {
    double total = 0.0;
    for (const auto& p : pts) {
        double yhat = 0.0;
        for (double c : coef_high_first) yhat = yhat * p.x + c;
        const double e = p.p - yhat;
        total += e * e;
    }
    return total;
}

// Brute-force sort-split-reduce decile aggregation: rank (income, original
// index) pairs, cut into ten runs, reduce each run.
template <typename Select>
std::array<double, 10> decile_reference(std::span<const decdyn::HouseholdRecord> records,
                                        Select select, bool lower_limit) {
    std::vector<std::pair<double, std::size_t>> ranked;
    ranked.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) ranked.emplace_back(records[i].income, i);
    std::sort(ranked.begin(), ranked.end());

    const std::size_t group = records.size() / 10;
    std::array<double, 10> out{};
    for (std::size_t d = 0; d < 10; ++d) {
        if (lower_limit) {
            double lo = std::numeric_limits<double>::infinity();
            for (std::size_t i = d * group; i < (d + 1) * group; ++i) {
                lo = std::min(lo, select(records[ranked[i].second]));
            }
            out[d] = lo;
        } else {
            double sum = 0.0;
            for (std::size_t i = d * group; i < (d + 1) * group; ++i) {
                sum += select(records[ranked[i].second]);
            }
            out[d] = sum / static_cast<double>(group);
        }
    }
    return out;
}

}  // namespace oracle
