#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "decdyn/errors.hpp"

namespace decdyn {

inline constexpr std::size_t kDecileCount = 10;

// ---------------------------------------------------------------------------
// Series identity: what was measured, for whom, in what money.
// ---------------------------------------------------------------------------

enum class Variable { income, expenditure };

// Before-tax vs after-tax money flow. `unspecified` is admissible for income
// only; expenditure series must say which flow they describe.
enum class Flow { gross, disposable, unspecified };

struct VariableKind {
    Variable variable = Variable::income;
    Flow flow = Flow::unspecified;

    bool operator==(const VariableKind&) const = default;
};

// How a decile's single value is computed from the households in the decile:
// group mean, or the lowest value observed within the group (lower limit).
enum class Measure { mean, lower_limit };

enum class BasisKind { nominal, real };

// Money basis. A real basis always names the base year its purchasing power
// refers to.
struct Basis {
    BasisKind kind = BasisKind::nominal;
    std::optional<std::string> base_year;

    static Basis nominal() { return {}; }
    static Basis real(std::string base_year_label) {
        return Basis{BasisKind::real, std::move(base_year_label)};
    }

    bool operator==(const Basis&) const = default;
};

enum class Period { annual, weekly };

// Metadata shared by the rows of one decile table.
struct SeriesMeta {
    VariableKind kind;
    Measure measure = Measure::mean;
    Basis basis;
    Period period = Period::annual;
    std::string unit;

    bool operator==(const SeriesMeta&) const = default;
};

// ---------------------------------------------------------------------------
// DecileSeries: one year's ten decile values for one meta combination.
// Deciles are ranked by income, ascending; index 0 is the lowest decile.
// Year labels are opaque strings ("2010", "2003-2002"); chronological order
// comes from the dataset manifest, never from parsing the label.
// ---------------------------------------------------------------------------

struct DecileSeries {
    std::string label;
    VariableKind kind;
    Measure measure = Measure::mean;
    Basis basis;
    Period period = Period::annual;
    std::string unit;
    std::array<double, kDecileCount> values{};

    [[nodiscard]] SeriesMeta meta() const { return {kind, measure, basis, period, unit}; }

    bool operator==(const DecileSeries&) const = default;
};

// Builds a series from a runtime-sized sequence; rejects any length other
// than ten with a ValidationError ("WrongValueCount").
DecileSeries make_series(std::string label, const SeriesMeta& meta, std::span<const double> values);

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

enum class Severity { error, warning };

struct Violation {
    Severity severity = Severity::error;
    std::string message;

    bool operator==(const Violation&) const = default;
};

struct ValidationReport {
    std::vector<Violation> violations;

    // True when no error-severity violation is present (warnings allowed).
    [[nodiscard]] bool ok() const;
    [[nodiscard]] bool empty() const { return violations.empty(); }
};

// Checks every series invariant and reports violations; never throws.
//  - income values must be non-decreasing across deciles (error);
//    expenditure is exempt (deciles are keyed to income rank).
//  - all values must be finite (error).
//  - flow = unspecified with variable = expenditure (error).
//  - real basis without a base year (error).
//  - income measured weekly / expenditure measured annually (warning only:
//    other datasets may legitimately differ).
ValidationReport validate_series(const DecileSeries& series);

// Nullopt when valid, otherwise the violation message.
std::optional<std::string> variable_kind_violation(const VariableKind& kind);

// ---------------------------------------------------------------------------
// Series identity key: two series with equal keys are duplicates. The unit
// string is deliberately not part of the key.
// ---------------------------------------------------------------------------

struct SeriesKey {
    std::string label;
    VariableKind kind;
    Measure measure = Measure::mean;
    Basis basis;
    Period period = Period::annual;

    bool operator==(const SeriesKey&) const = default;
};

SeriesKey series_key(const DecileSeries& series);
std::string to_string(const SeriesKey& key);

// One point of a cumulative plot set: a sorted decile delta on x paired with
// a cumulated population percentage on p (0..100 scale).
struct PlotPoint {
    double x = 0.0;
    double p = 0.0;

    bool operator==(const PlotPoint&) const = default;
};

// ---------------------------------------------------------------------------
// Fit records and tables (the coefficient-table results vocabulary).
// ---------------------------------------------------------------------------

// One fitted year pair. Coefficients are ordered highest power first, so for
// degree 1 coefficients[0] is the slope (P1) and coefficients[1] the
// intercept (P2).
struct FitRecord {
    std::string pair_label;
    std::vector<double> coefficients;
    double r_squared_percent = 0.0;

    [[nodiscard]] int degree() const { return static_cast<int>(coefficients.size()) - 1; }

    bool operator==(const FitRecord&) const = default;
};

// A pair whose fit failed (e.g. RankDeficient from all-equal deltas); kept in
// the table as a marker instead of aborting the batch.
struct FitFailure {
    std::string pair_label;
    std::string reason;

    bool operator==(const FitFailure&) const = default;
};

struct FitRow {
    std::string pair_label;
    std::optional<FitRecord> record;  // empty => failure
    std::string error;                // failure reason when record is empty

    [[nodiscard]] bool failed() const { return !record.has_value(); }

    bool operator==(const FitRow&) const = default;
};

struct FitTableMeta {
    VariableKind kind;
    Measure measure = Measure::mean;
    Basis basis;

    bool operator==(const FitTableMeta&) const = default;
};

// Year-pair-keyed collection of fit records, all sharing one degree. Parsed
// tables carry no meta (the file format does not encode it).
struct FitTable {
    int degree = 1;
    std::optional<FitTableMeta> meta;
    std::vector<FitRow> rows;

    [[nodiscard]] std::size_t record_count() const;
    [[nodiscard]] const FitRecord* find(const std::string& pair_label) const;

    bool operator==(const FitTable&) const = default;
};

// ---------------------------------------------------------------------------
// Enum names (used in messages, CLI flags, and serialized output).
// ---------------------------------------------------------------------------

std::string to_string(Variable v);
std::string to_string(Flow f);
std::string to_string(Measure m);
std::string to_string(Period p);
std::string to_string(const Basis& b);

Variable variable_from_string(const std::string& s);
Flow flow_from_string(const std::string& s);
Measure measure_from_string(const std::string& s);
Period period_from_string(const std::string& s);

}  // namespace decdyn
