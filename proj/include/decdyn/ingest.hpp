#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "decdyn/model.hpp"

namespace decdyn {

// Price-index series used to deflate nominal values. The index is
// user-supplied input, never built in; conversion is a plain ratio of
// indices.
struct Deflator {
    std::map<std::string, double> index;
    std::string description;

    [[nodiscard]] std::optional<double> at(const std::string& year) const {
        auto it = index.find(year);
        if (it == index.end()) return std::nullopt;
        return it->second;
    }
};

// Chronological ordering (earliest first) of the opaque year labels in a
// dataset, plus dataset-wide defaults. Labels like "2010" and "2003-2002"
// do not parse uniformly, so order is always explicit.
struct DatasetManifest {
    std::vector<std::string> chronology;
    std::string default_unit;
    std::string notes;

    [[nodiscard]] std::optional<std::size_t> position(const std::string& label) const;
};

// ---------------------------------------------------------------------------
// File formats. All files are newline-delimited UTF-8 text, comma separators,
// '.' decimal mark, with a mandatory header row. Lines starting with '#' are
// comments and are skipped.
//
//   decile table :  label,d1,d2,d3,d4,d5,d6,d7,d8,d9,d10
//   deflator     :  year,index
//   fit table    :  pair,p1,p2,r2        (p1..pN for higher degrees)
//   manifest     :  one year label per line, earliest first
//
// NaN/inf tokens are rejected; scientific notation is accepted.
// ---------------------------------------------------------------------------

// One validated-shape DecileSeries per data row, in row order. Throws
// ParseError: "WrongColumnCount" (row), "NonNumericField" (row, column),
// "DuplicateSeries" (key), "EmptyInput".
std::vector<DecileSeries> parse_decile_table(std::string_view text, const SeriesMeta& meta);

// Inverse of parse_decile_table. All series must share one meta. Values are
// written as the shortest text that round-trips the double exactly.
std::string serialize_decile_table(std::span<const DecileSeries> series);

// Throws ParseError: "NonPositiveIndex" (row), "DuplicateYear" (label),
// "EmptyInput".
Deflator parse_deflator(std::string_view text);

// Converts a nominal series to a real one: value * index[base_year] /
// index[series.label]. Throws ValidationError "AlreadyReal" or
// "MissingDeflatorYear".
DecileSeries to_real(const DecileSeries& series, const Deflator& deflator,
                     const std::string& base_year);

// Parses a degree-1 coefficient table. Throws ParseError:
// "WrongColumnCount", "NonNumericField", "DuplicatePair", "EmptyInput";
// ValidationError "RSquaredOutOfRange" when a row claims R^2 > 100.
FitTable parse_fit_table(std::string_view text);

// Writes a fit table in the same format (header pair,p1,..,pN,r2 for degree
// N-1). Failed rows are emitted as '#'-prefixed comment lines in place, so
// the output stays parseable.
std::string serialize_fit_table(const FitTable& table);

// Throws ParseError "DuplicateLabel".
DatasetManifest parse_manifest(std::string_view text);

}  // namespace decdyn
