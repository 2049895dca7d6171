#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "decdyn/model.hpp"

namespace decdyn::cli {

enum class Command { validate, fit_pair, batch, grid, synth, plot_data, compare };
enum class OutputFormat { csv, json };

// Everything a command needs, resolved from flags. `run` re-checks that the
// required fields for the chosen command are present before doing any work.
struct RunConfig {
    Command command = Command::validate;
    OutputFormat format = OutputFormat::csv;

    // Paths. Empty output means stdout (plot-data requires an output prefix).
    std::string input_path;
    std::string manifest_path;
    std::string deflator_path;
    std::string reference_path;
    std::string output_path;

    // Series meta selectors.
    std::string variable = "income";
    std::string flow;  // empty = unspecified (income only)
    std::string measure = "mean";
    std::string basis = "nominal";
    std::string base_year;
    std::string period;  // empty = annual for income, weekly for expenditure
    std::string unit = "GBP";

    // Analysis parameters.
    int degree = 1;
    int lag = 1;
    std::vector<int> lags;
    std::vector<int> degrees;
    std::string earlier_label;
    std::string later_label;

    // Synthetic-panel parameters.
    std::string model = "exponential";
    double temperature = 500.0;
    double mu = 6.0;
    double sigma = 0.5;
    double alpha = 2.5;
    double xmin = 100.0;
    int households = 1000;
    int years = 10;
    double growth = 0.03;
    double propensity = 0.8;
    double noise = 0.1;
    double tax_wedge = 0.2;
    std::uint64_t seed = 1;
    int first_year = 2000;

    // Comparison tolerances (absolute; 0 = exact).
    double tol_p1 = 0.0;
    double tol_p2 = 0.0;
    double tol_r2 = 0.0;
};

// Dispatches the command. Returns the process exit status: 0 on success,
// 2 parse error, 3 validation error, 4 fit error, 5 I/O error. On error a
// single-line diagnostic naming file/row/field goes to stderr. Output files
// are written atomically (temp file + rename); inputs are never modified.
int run(const RunConfig& config);

// ---------------------------------------------------------------------------
// Fit-table comparison, for checking produced tables against published
// reference tables once the underlying source data is available.
// ---------------------------------------------------------------------------

struct ColumnTolerances {
    double p1 = 0.0;
    double p2 = 0.0;
    double r2 = 0.0;
};

struct RowComparison {
    std::string pair_label;
    double dp1 = 0.0;  // absolute differences, produced - reference
    double dp2 = 0.0;
    double dr2 = 0.0;
    bool pass = false;

    bool operator==(const RowComparison&) const = default;
};

struct ComparisonReport {
    std::vector<RowComparison> rows;
    int passed = 0;
    int failed = 0;

    [[nodiscard]] bool all_pass() const { return failed == 0; }
};

// Compares two degree-1 tables row by row (matched by pair label, reported
// in produced order). Throws ValidationError "LabelSetMismatch" naming the
// symmetric difference when the label sets differ, "WrongDegree" for
// non-degree-1 tables.
ComparisonReport compare_tables(const FitTable& produced, const FitTable& reference,
                                const ColumnTolerances& tolerances);

// Shared file helpers (atomic write, whole-file read). Throw IoError.
std::string read_file(const std::string& path);
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace decdyn::cli
