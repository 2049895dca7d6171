#include "decdyn/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "decdyn/format.hpp"

namespace decdyn {

namespace {

struct Line {
    std::size_t number;  // 1-based physical line number, for diagnostics
    std::string_view text;
};

// Significant lines: blank lines and '#' comments dropped, CR stripped.
std::vector<Line> significant_lines(std::string_view text) {
    std::vector<Line> lines;
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos
                                                                              : nl - pos);
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty() && line.front() != '#') lines.push_back({lineno, line});
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    return lines;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = line.find(',', pos);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(pos)));
            break;
        }
        fields.push_back(trim(line.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return fields;
}

void require_column_count(const Line& line, std::size_t got, std::size_t want) {
    if (got != want) {
        throw ParseError("WrongColumnCount", "row " + std::to_string(line.number) + ": expected " +
                                                 std::to_string(want) + " fields, got " +
                                                 std::to_string(got));
    }
}

double parse_number(std::string_view field, std::size_t row, std::size_t col) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        throw ParseError("NonNumericField", "row " + std::to_string(row) + ", column " +
                                                std::to_string(col) + ": '" + std::string(field) +
                                                "' is not a finite number");
    }
    return value;
}

}  // namespace

std::optional<std::size_t> DatasetManifest::position(const std::string& label) const {
    auto it = std::find(chronology.begin(), chronology.end(), label);
    if (it == chronology.end()) return std::nullopt;
    return static_cast<std::size_t>(it - chronology.begin());
}

std::vector<DecileSeries> parse_decile_table(std::string_view text, const SeriesMeta& meta) {
    const auto lines = significant_lines(text);
    if (lines.size() < 2) {
        throw ParseError("EmptyInput", "decile table has no data rows");
    }
    require_column_count(lines[0], split_fields(lines[0].text).size(), kDecileCount + 1);

    std::vector<DecileSeries> series;
    std::set<std::string> seen;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const Line& line = lines[r];
        const auto fields = split_fields(line.text);
        require_column_count(line, fields.size(), kDecileCount + 1);
        if (fields[0].empty()) {
            throw ParseError("EmptyLabel", "row " + std::to_string(line.number) +
                                               ": year label is empty");
        }
        std::array<double, kDecileCount> values{};
        for (std::size_t c = 0; c < kDecileCount; ++c) {
            values[c] = parse_number(fields[c + 1], line.number, c + 2);
        }
        DecileSeries s = make_series(std::string(fields[0]), meta, values);
        if (!seen.insert(to_string(series_key(s))).second) {
            throw ParseError("DuplicateSeries",
                             "duplicate series " + to_string(series_key(s)) + " at row " +
                                 std::to_string(line.number));
        }
        series.push_back(std::move(s));
    }
    return series;
}

std::string serialize_decile_table(std::span<const DecileSeries> series) {
    for (const auto& s : series) {
        if (s.meta() != series.front().meta()) {
            throw ValidationError("MetaMismatch",
                                  "cannot serialize series with differing metadata into one table");
        }
    }
    std::string out = "label,d1,d2,d3,d4,d5,d6,d7,d8,d9,d10\n";
    for (const auto& s : series) {
        out += s.label;
        for (double v : s.values) {
            out += ',';
            out += format_double(v);
        }
        out += '\n';
    }
    return out;
}

Deflator parse_deflator(std::string_view text) {
    const auto lines = significant_lines(text);
    if (lines.empty()) {
        throw ParseError("EmptyInput", "deflator file is empty");
    }
    require_column_count(lines[0], split_fields(lines[0].text).size(), 2);

    Deflator deflator;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const Line& line = lines[r];
        const auto fields = split_fields(line.text);
        require_column_count(line, fields.size(), 2);
        const std::string year(fields[0]);
        const double index = parse_number(fields[1], line.number, 2);
        if (index <= 0.0) {
            throw ParseError("NonPositiveIndex", "row " + std::to_string(line.number) +
                                                     ": index " + std::string(fields[1]) +
                                                     " must be positive");
        }
        if (!deflator.index.emplace(year, index).second) {
            throw ParseError("DuplicateYear", "duplicate deflator year '" + year + "' at row " +
                                                  std::to_string(line.number));
        }
    }
    return deflator;
}

DecileSeries to_real(const DecileSeries& series, const Deflator& deflator,
                     const std::string& base_year) {
    if (series.basis.kind == BasisKind::real) {
        throw ValidationError("AlreadyReal",
                              "series '" + series.label + "' is already on a real basis");
    }
    const auto year_index = deflator.at(series.label);
    if (!year_index) {
        throw ValidationError("MissingDeflatorYear",
                              "deflator has no index for year '" + series.label + "'");
    }
    const auto base_index = deflator.at(base_year);
    if (!base_index) {
        throw ValidationError("MissingDeflatorYear",
                              "deflator has no index for base year '" + base_year + "'");
    }
    DecileSeries out = series;
    const double ratio = *base_index / *year_index;
    for (double& v : out.values) v *= ratio;
    out.basis = Basis::real(base_year);
    return out;
}

FitTable parse_fit_table(std::string_view text) {
    const auto lines = significant_lines(text);
    if (lines.size() < 2) {
        throw ParseError("EmptyInput", "fit table has no data rows");
    }
    require_column_count(lines[0], split_fields(lines[0].text).size(), 4);

    FitTable table;
    table.degree = 1;
    std::set<std::string> seen;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const Line& line = lines[r];
        const auto fields = split_fields(line.text);
        require_column_count(line, fields.size(), 4);
        FitRecord rec;
        rec.pair_label = std::string(fields[0]);
        rec.coefficients = {parse_number(fields[1], line.number, 2),
                            parse_number(fields[2], line.number, 3)};
        rec.r_squared_percent = parse_number(fields[3], line.number, 4);
        if (rec.r_squared_percent > 100.0) {
            throw ValidationError("RSquaredOutOfRange",
                                  "row " + std::to_string(line.number) + ": R^2 " +
                                      std::string(fields[3]) + " exceeds 100");
        }
        if (!seen.insert(rec.pair_label).second) {
            throw ParseError("DuplicatePair", "duplicate pair label '" + rec.pair_label +
                                                  "' at row " + std::to_string(line.number));
        }
        table.rows.push_back({rec.pair_label, std::move(rec), ""});
    }
    return table;
}

std::string serialize_fit_table(const FitTable& table) {
    std::string out = "pair";
    for (int i = 1; i <= table.degree + 1; ++i) out += ",p" + std::to_string(i);
    out += ",r2\n";
    for (const auto& row : table.rows) {
        if (row.failed()) {
            out += "# " + row.pair_label + ": " + row.error + "\n";
            continue;
        }
        out += row.pair_label;
        for (double c : row.record->coefficients) {
            out += ',';
            out += format_coefficient(c);
        }
        out += ',';
        out += format_r2(row.record->r_squared_percent);
        out += '\n';
    }
    return out;
}

DatasetManifest parse_manifest(std::string_view text) {
    DatasetManifest manifest;
    std::set<std::string> seen;
    for (const auto& line : significant_lines(text)) {
        std::string label(trim(line.text));
        if (!seen.insert(label).second) {
            throw ParseError("DuplicateLabel", "duplicate manifest label '" + label +
                                                   "' at row " + std::to_string(line.number));
        }
        manifest.chronology.push_back(std::move(label));
    }
    return manifest;
}

}  // namespace decdyn
