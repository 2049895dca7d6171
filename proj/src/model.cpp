#include "decdyn/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace decdyn {

DecileSeries make_series(std::string label, const SeriesMeta& meta, std::span<const double> values) {
    if (values.size() != kDecileCount) {
        throw ValidationError("WrongValueCount",
                              "series '" + label + "': expected " + std::to_string(kDecileCount) +
                                  " decile values, got " + std::to_string(values.size()));
    }
    DecileSeries s;
    s.label = std::move(label);
    s.kind = meta.kind;
    s.measure = meta.measure;
    s.basis = meta.basis;
    s.period = meta.period;
    s.unit = meta.unit;
    std::copy(values.begin(), values.end(), s.values.begin());
    return s;
}

bool ValidationReport::ok() const {
    return std::none_of(violations.begin(), violations.end(),
                        [](const Violation& v) { return v.severity == Severity::error; });
}

std::optional<std::string> variable_kind_violation(const VariableKind& kind) {
    if (kind.variable == Variable::expenditure && kind.flow == Flow::unspecified) {
        return "expenditure series must specify gross or disposable flow";
    }
    return std::nullopt;
}

ValidationReport validate_series(const DecileSeries& series) {
    ValidationReport report;
    auto add = [&](Severity sev, std::string msg) {
        report.violations.push_back({sev, std::move(msg)});
    };

    if (auto msg = variable_kind_violation(series.kind)) {
        add(Severity::error, *msg);
    }
    if (series.basis.kind == BasisKind::real && !series.basis.base_year.has_value()) {
        add(Severity::error, "real basis missing a base year");
    }

    for (std::size_t i = 0; i < kDecileCount; ++i) {
        if (!std::isfinite(series.values[i])) {
            add(Severity::error, "decile " + std::to_string(i + 1) + " value is not finite");
        }
    }

    // Income deciles are ranked by income, so their values cannot decrease.
    // Expenditure deciles are keyed to income rank and need not be monotone.
    if (series.kind.variable == Variable::income) {
        for (std::size_t i = 0; i + 1 < kDecileCount; ++i) {
            if (series.values[i] > series.values[i + 1]) {
                add(Severity::error, "income deciles not non-decreasing (decile " +
                                         std::to_string(i + 1) + " > decile " +
                                         std::to_string(i + 2) + ")");
                break;
            }
        }
        if (series.period == Period::weekly) {
            add(Severity::warning, "income series measured weekly (annual is customary)");
        }
    } else if (series.period == Period::annual) {
        add(Severity::warning, "expenditure series measured annually (weekly is customary)");
    }

    return report;
}

SeriesKey series_key(const DecileSeries& series) {
    return {series.label, series.kind, series.measure, series.basis, series.period};
}

std::string to_string(const SeriesKey& key) {
    std::ostringstream os;
    os << key.label << '/' << to_string(key.kind.variable);
    if (key.kind.flow != Flow::unspecified) os << '.' << to_string(key.kind.flow);
    os << '/' << to_string(key.measure) << '/' << to_string(key.basis) << '/'
       << to_string(key.period);
    return os.str();
}

std::size_t FitTable::record_count() const {
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [](const FitRow& r) { return !r.failed(); }));
}

const FitRecord* FitTable::find(const std::string& pair_label) const {
    for (const auto& row : rows) {
        if (row.pair_label == pair_label && row.record.has_value()) return &*row.record;
    }
    return nullptr;
}

std::string to_string(Variable v) {
    return v == Variable::income ? "income" : "expenditure";
}

std::string to_string(Flow f) {
    switch (f) {
        case Flow::gross: return "gross";
        case Flow::disposable: return "disposable";
        default: return "unspecified";
    }
}

std::string to_string(Measure m) {
    return m == Measure::mean ? "mean" : "lower-limit";
}

std::string to_string(Period p) {
    return p == Period::annual ? "annual" : "weekly";
}

std::string to_string(const Basis& b) {
    if (b.kind == BasisKind::nominal) return "nominal";
    return "real(" + b.base_year.value_or("?") + ")";
}

Variable variable_from_string(const std::string& s) {
    if (s == "income") return Variable::income;
    if (s == "expenditure") return Variable::expenditure;
    throw ValidationError("UnknownVariable", "unknown variable '" + s + "'");
}

Flow flow_from_string(const std::string& s) {
    if (s == "gross") return Flow::gross;
    if (s == "disposable") return Flow::disposable;
    if (s == "unspecified" || s.empty()) return Flow::unspecified;
    throw ValidationError("UnknownFlow", "unknown flow '" + s + "'");
}

Measure measure_from_string(const std::string& s) {
    if (s == "mean") return Measure::mean;
    if (s == "lower-limit" || s == "lower_limit") return Measure::lower_limit;
    throw ValidationError("UnknownMeasure", "unknown measure '" + s + "'");
}

Period period_from_string(const std::string& s) {
    if (s == "annual") return Period::annual;
    if (s == "weekly") return Period::weekly;
    throw ValidationError("UnknownPeriod", "unknown period '" + s + "'");
}

}  // namespace decdyn
