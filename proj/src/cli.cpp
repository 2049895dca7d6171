#include "decdyn/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <span>
#include <sstream>

#include <json.hpp>

#include "decdyn/batch.hpp"
#include "decdyn/dyndist.hpp"
#include "decdyn/format.hpp"
#include "decdyn/ingest.hpp"
#include "decdyn/polyfit.hpp"
#include "decdyn/synthgen.hpp"

namespace decdyn::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kCurveSamples = 200;

void require_flag(bool present, const std::string& what) {
    if (!present) throw ParseError("MissingFlag", what);
}

// Re-throws parse failures with the file path prepended, so diagnostics name
// file, row, and field.
template <typename Fn>
auto parse_with_path(const std::string& path, Fn&& fn) {
    try {
        return fn();
    } catch (const ParseError& e) {
        throw ParseError(e.code(), path + ": " + e.what());
    }
}

SeriesMeta meta_from(const RunConfig& cfg) {
    SeriesMeta meta;
    meta.kind.variable = variable_from_string(cfg.variable);
    meta.kind.flow = flow_from_string(cfg.flow);
    if (auto msg = variable_kind_violation(meta.kind)) {
        throw ValidationError("InvalidParameter", *msg + " (pass --flow gross|disposable)");
    }
    meta.measure = measure_from_string(cfg.measure);
    if (cfg.period.empty()) {
        meta.period = meta.kind.variable == Variable::income ? Period::annual : Period::weekly;
    } else {
        meta.period = period_from_string(cfg.period);
    }
    meta.unit = cfg.unit;

    if (cfg.basis == "nominal") {
        meta.basis = Basis::nominal();
    } else if (cfg.basis == "real") {
        require_flag(!cfg.base_year.empty(), "--basis real requires --base-year");
        meta.basis = Basis::real(cfg.base_year);
    } else {
        throw ValidationError("UnknownBasis", "unknown basis '" + cfg.basis + "'");
    }
    return meta;
}

struct LoadedPanel {
    std::vector<DecileSeries> series;
    std::vector<std::string> chronology;  // earliest first
};

// Reads, parses, optionally deflates, orders by the manifest chronology, and
// (when strict) rejects series with error-severity violations.
LoadedPanel load_panel(const RunConfig& cfg, bool strict) {
    require_flag(!cfg.input_path.empty(), "--input is required");
    SeriesMeta meta = meta_from(cfg);

    const bool deflate = !cfg.deflator_path.empty();
    if (deflate) {
        if (cfg.basis != "nominal") {
            throw ValidationError("AlreadyReal", "--deflator converts nominal input; drop --basis real");
        }
        require_flag(!cfg.base_year.empty(), "--deflator requires --base-year");
    }

    const std::string text = read_file(cfg.input_path);
    LoadedPanel panel;
    panel.series = parse_with_path(cfg.input_path,
                                   [&] { return parse_decile_table(text, meta); });

    if (deflate) {
        const std::string dtext = read_file(cfg.deflator_path);
        const Deflator deflator =
            parse_with_path(cfg.deflator_path, [&] { return parse_deflator(dtext); });
        for (auto& s : panel.series) s = to_real(s, deflator, cfg.base_year);
    }

    if (!cfg.manifest_path.empty()) {
        const std::string mtext = read_file(cfg.manifest_path);
        const DatasetManifest manifest =
            parse_with_path(cfg.manifest_path, [&] { return parse_manifest(mtext); });
        for (const auto& s : panel.series) {
            if (!manifest.position(s.label)) {
                throw ValidationError("UnknownLabel", "series '" + s.label +
                                                          "' is not in the manifest chronology");
            }
        }
        std::stable_sort(panel.series.begin(), panel.series.end(),
                         [&](const DecileSeries& a, const DecileSeries& b) {
                             return *manifest.position(a.label) < *manifest.position(b.label);
                         });
        panel.chronology = manifest.chronology;
    } else {
        for (const auto& s : panel.series) panel.chronology.push_back(s.label);
    }

    if (strict) {
        for (const auto& s : panel.series) {
            const ValidationReport report = validate_series(s);
            if (!report.ok()) {
                for (const auto& v : report.violations) {
                    if (v.severity == Severity::error) {
                        throw ValidationError("InvalidSeries",
                                              "series '" + s.label + "': " + v.message);
                    }
                }
            }
        }
    }
    return panel;
}

// Picks the (earlier, later) pair: explicit labels, or the two rows of a
// two-series input in chronological order.
std::pair<const DecileSeries*, const DecileSeries*> select_pair(const LoadedPanel& panel,
                                                                const RunConfig& cfg) {
    auto find = [&](const std::string& label) -> const DecileSeries* {
        for (const auto& s : panel.series) {
            if (s.label == label) return &s;
        }
        throw ValidationError("UnknownLabel", "no series labeled '" + label + "' in the input");
    };
    if (!cfg.earlier_label.empty() || !cfg.later_label.empty()) {
        require_flag(!cfg.earlier_label.empty() && !cfg.later_label.empty(),
                     "--earlier and --later must be given together");
        return {find(cfg.earlier_label), find(cfg.later_label)};
    }
    if (panel.series.size() == 2) {
        return {&panel.series[0], &panel.series[1]};  // already in chronological order
    }
    throw ParseError("MissingFlag",
                     "input has " + std::to_string(panel.series.size()) +
                         " series; select the pair with --earlier and --later");
}

void emit(const RunConfig& cfg, const std::string& content) {
    if (cfg.output_path.empty()) {
        std::cout << content;
    } else {
        write_file_atomic(cfg.output_path, content);
    }
}

// --- JSON mirrors of the CSV formats (same column names) -------------------

ordered_json fit_table_json(const FitTable& table) {
    ordered_json rows = ordered_json::array();
    for (const auto& row : table.rows) {
        ordered_json j;
        j["pair"] = row.pair_label;
        if (row.failed()) {
            j["error"] = row.error;
        } else {
            for (std::size_t i = 0; i < row.record->coefficients.size(); ++i) {
                j["p" + std::to_string(i + 1)] = row.record->coefficients[i];
            }
            j["r2"] = row.record->r_squared_percent;
        }
        rows.push_back(std::move(j));
    }
    return rows;
}

ordered_json grid_json(const GridResult& grid) {
    ordered_json rows = ordered_json::array();
    for (const auto& row : grid.rows) {
        rows.push_back({{"lag", row.lag},
                        {"degree", row.degree},
                        {"mean_r2", row.mean_r2},
                        {"min_r2", row.min_r2},
                        {"max_r2", row.max_r2},
                        {"pairs", row.pair_count}});
    }
    return rows;
}

ordered_json points_json(std::span<const PlotPoint> points) {
    ordered_json rows = ordered_json::array();
    for (const auto& pt : points) rows.push_back({{"x", pt.x}, {"p", pt.p}});
    return rows;
}

ordered_json panel_json(std::span<const DecileSeries> series) {
    ordered_json rows = ordered_json::array();
    for (const auto& s : series) {
        ordered_json j;
        j["label"] = s.label;
        for (std::size_t i = 0; i < kDecileCount; ++i) {
            j["d" + std::to_string(i + 1)] = s.values[i];
        }
        rows.push_back(std::move(j));
    }
    return rows;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

// --- command handlers -------------------------------------------------------

int cmd_validate(const RunConfig& cfg) {
    LoadedPanel panel = load_panel(cfg, /*strict=*/false);
    bool any_error = false;

    std::string csv = "label,severity,message\n";
    ordered_json jrows = ordered_json::array();
    for (const auto& s : panel.series) {
        const ValidationReport report = validate_series(s);
        if (!report.ok()) any_error = true;
        if (report.empty()) {
            csv += s.label + ",ok,\n";
            jrows.push_back({{"label", s.label}, {"severity", "ok"}, {"message", ""}});
            continue;
        }
        for (const auto& v : report.violations) {
            const std::string sev = v.severity == Severity::error ? "error" : "warning";
            csv += s.label + ',' + sev + ',' + v.message + '\n';
            jrows.push_back({{"label", s.label}, {"severity", sev}, {"message", v.message}});
        }
    }
    emit(cfg, cfg.format == OutputFormat::csv ? csv : dump(jrows));
    return any_error ? static_cast<int>(ErrorCategory::validation) : 0;
}

FitTable fit_single_pair(const LoadedPanel& panel, const RunConfig& cfg,
                         CumulativePlotSet* plot_out = nullptr, PolynomialFit* fit_out = nullptr) {
    auto [earlier, later] = select_pair(panel, cfg);
    const DifferenceSet diffs = diff_series(*earlier, *later, panel.chronology);
    const CumulativePlotSet plot = build_plot_set(diffs);
    const PolynomialFit f = fit(plot.points, cfg.degree);

    FitTable table;
    table.degree = cfg.degree;
    table.meta = FitTableMeta{earlier->kind, earlier->measure, earlier->basis};
    table.rows.push_back(
        {plot.pair_label, FitRecord{plot.pair_label, f.coefficients, f.r_squared_percent}, ""});
    if (plot_out) *plot_out = plot;
    if (fit_out) *fit_out = f;
    return table;
}

int cmd_fit_pair(const RunConfig& cfg) {
    LoadedPanel panel = load_panel(cfg, /*strict=*/true);
    const FitTable table = fit_single_pair(panel, cfg);
    emit(cfg, cfg.format == OutputFormat::csv ? serialize_fit_table(table)
                                              : dump(fit_table_json(table)));
    return 0;
}

int cmd_batch(const RunConfig& cfg) {
    LoadedPanel panel = load_panel(cfg, /*strict=*/true);
    const FitTable table = pair_fits(panel.series, cfg.lag, cfg.degree);
    emit(cfg, cfg.format == OutputFormat::csv ? serialize_fit_table(table)
                                              : dump(fit_table_json(table)));
    return 0;
}

int cmd_grid(const RunConfig& cfg) {
    LoadedPanel panel = load_panel(cfg, /*strict=*/true);
    const std::vector<int> lags = cfg.lags.empty() ? std::vector<int>{1} : cfg.lags;
    const std::vector<int> degrees = cfg.degrees.empty() ? std::vector<int>{1} : cfg.degrees;
    const GridResult grid = degree_lag_grid(panel.series, degrees, lags);
    emit(cfg, cfg.format == OutputFormat::csv ? serialize_grid(grid) : dump(grid_json(grid)));
    return 0;
}

int cmd_synth(const RunConfig& cfg) {
    SeriesMeta meta = meta_from(cfg);

    IncomeModel model;
    if (cfg.model == "exponential") {
        model = ExponentialIncome{cfg.temperature};
    } else if (cfg.model == "lognormal") {
        model = LognormalIncome{cfg.mu, cfg.sigma};
    } else if (cfg.model == "pareto") {
        model = ParetoIncome{cfg.alpha, cfg.xmin};
    } else {
        throw ValidationError("InvalidParameter", "unknown income model '" + cfg.model + "'");
    }

    ExpenditureRule rule{cfg.propensity, cfg.noise, cfg.tax_wedge};
    const std::vector<DecileSeries> panel =
        generate_panel(model, cfg.households, cfg.years, cfg.growth, rule, cfg.seed, meta.kind,
                       meta.measure, cfg.first_year, meta.unit, meta.period);

    const std::string header = "# generator: " + generator_name() + " seed=" +
                               std::to_string(cfg.seed) + "\n";
    if (cfg.format == OutputFormat::csv) {
        emit(cfg, header + serialize_decile_table(panel));
    } else {
        emit(cfg, dump(panel_json(panel)));
    }
    return 0;
}

int cmd_plot_data(const RunConfig& cfg) {
    require_flag(!cfg.output_path.empty(), "plot-data requires --output (used as file prefix)");
    LoadedPanel panel = load_panel(cfg, /*strict=*/true);

    CumulativePlotSet plot;
    PolynomialFit f;
    fit_single_pair(panel, cfg, &plot, &f);

    double lo = plot.points.front().x;
    double hi = plot.points.back().x;
    std::vector<PlotPoint> curve;
    curve.reserve(kCurveSamples);
    const double step = (hi - lo) / (kCurveSamples - 1);
    for (int k = 0; k < kCurveSamples; ++k) {
        const double x = lo + step * k;
        curve.push_back({x, evaluate(f, x)});
    }

    if (cfg.format == OutputFormat::csv) {
        std::string curve_csv = "x,p\n";
        for (const auto& pt : curve) {
            curve_csv += format_double(pt.x) + ',' + format_double(pt.p) + '\n';
        }
        write_file_atomic(cfg.output_path + ".points.csv", serialize_plot_set(plot));
        write_file_atomic(cfg.output_path + ".curve.csv", curve_csv);
    } else {
        write_file_atomic(cfg.output_path + ".points.json", dump(points_json(plot.points)));
        write_file_atomic(cfg.output_path + ".curve.json", dump(points_json(curve)));
    }
    return 0;
}

int cmd_compare(const RunConfig& cfg) {
    require_flag(!cfg.input_path.empty(), "--input is required");
    require_flag(!cfg.reference_path.empty(), "--reference is required");

    const std::string ptext = read_file(cfg.input_path);
    const std::string rtext = read_file(cfg.reference_path);
    const FitTable produced =
        parse_with_path(cfg.input_path, [&] { return parse_fit_table(ptext); });
    const FitTable reference =
        parse_with_path(cfg.reference_path, [&] { return parse_fit_table(rtext); });

    const ComparisonReport report =
        compare_tables(produced, reference, {cfg.tol_p1, cfg.tol_p2, cfg.tol_r2});

    if (cfg.format == OutputFormat::csv) {
        std::string csv = "pair,dp1,dp2,dr2,pass\n";
        for (const auto& row : report.rows) {
            csv += row.pair_label + ',' + format_double(row.dp1) + ',' + format_double(row.dp2) +
                   ',' + format_double(row.dr2) + ',' + (row.pass ? "true" : "false") + '\n';
        }
        csv += "# passed " + std::to_string(report.passed) + " of " +
               std::to_string(report.passed + report.failed) + "\n";
        emit(cfg, csv);
    } else {
        ordered_json j;
        ordered_json rows = ordered_json::array();
        for (const auto& row : report.rows) {
            rows.push_back({{"pair", row.pair_label},
                            {"dp1", row.dp1},
                            {"dp2", row.dp2},
                            {"dr2", row.dr2},
                            {"pass", row.pass}});
        }
        j["rows"] = std::move(rows);
        j["passed"] = report.passed;
        j["failed"] = report.failed;
        emit(cfg, dump(j));
    }
    return report.all_pass() ? 0 : static_cast<int>(ErrorCategory::validation);
}

}  // namespace

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("CannotRead", "cannot open '" + path + "' for reading");
    std::ostringstream os;
    os << is.rdbuf();
    if (is.bad()) throw IoError("CannotRead", "failed reading '" + path + "'");
    return os.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw IoError("CannotWrite", "cannot open '" + tmp + "' for writing");
        os << content;
        os.flush();
        if (!os) throw IoError("CannotWrite", "failed writing '" + tmp + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw IoError("CannotWrite", "cannot move '" + tmp + "' to '" + path + "'");
    }
}

ComparisonReport compare_tables(const FitTable& produced, const FitTable& reference,
                                const ColumnTolerances& tolerances) {
    if (produced.degree != 1 || reference.degree != 1) {
        throw ValidationError("WrongDegree", "table comparison is defined for degree-1 tables");
    }

    auto labels_of = [](const FitTable& t) {
        std::set<std::string> labels;
        for (const auto& row : t.rows) {
            if (!row.failed()) labels.insert(row.pair_label);
        }
        return labels;
    };
    const auto produced_labels = labels_of(produced);
    const auto reference_labels = labels_of(reference);
    if (produced_labels != reference_labels) {
        std::string missing, extra;
        for (const auto& l : reference_labels) {
            if (!produced_labels.count(l)) missing += (missing.empty() ? "" : " ") + l;
        }
        for (const auto& l : produced_labels) {
            if (!reference_labels.count(l)) extra += (extra.empty() ? "" : " ") + l;
        }
        std::string msg = "pair label sets differ;";
        if (!missing.empty()) msg += " missing from produced: " + missing + ";";
        if (!extra.empty()) msg += " extra in produced: " + extra + ";";
        throw ValidationError("LabelSetMismatch", msg);
    }

    ComparisonReport report;
    for (const auto& row : produced.rows) {
        if (row.failed()) continue;
        const FitRecord* ref = reference.find(row.pair_label);
        RowComparison cmp;
        cmp.pair_label = row.pair_label;
        cmp.dp1 = row.record->coefficients[0] - ref->coefficients[0];
        cmp.dp2 = row.record->coefficients[1] - ref->coefficients[1];
        cmp.dr2 = row.record->r_squared_percent - ref->r_squared_percent;
        cmp.pass = std::abs(cmp.dp1) <= tolerances.p1 && std::abs(cmp.dp2) <= tolerances.p2 &&
                   std::abs(cmp.dr2) <= tolerances.r2;
        (cmp.pass ? report.passed : report.failed) += 1;
        report.rows.push_back(std::move(cmp));
    }
    return report;
}

int run(const RunConfig& cfg) {
    try {
        switch (cfg.command) {
            case Command::validate: return cmd_validate(cfg);
            case Command::fit_pair: return cmd_fit_pair(cfg);
            case Command::batch: return cmd_batch(cfg);
            case Command::grid: return cmd_grid(cfg);
            case Command::synth: return cmd_synth(cfg);
            case Command::plot_data: return cmd_plot_data(cfg);
            case Command::compare: return cmd_compare(cfg);
        }
        return 0;
    } catch (const Error& e) {
        std::cerr << "error[" << e.code() << "]: " << e.what() << std::endl;
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
}

}  // namespace decdyn::cli
