#include <string>

#include <CLI11.hpp>

#include "decdyn/cli.hpp"

namespace {

using decdyn::cli::Command;
using decdyn::cli::OutputFormat;
using decdyn::cli::RunConfig;

void add_io_flags(CLI::App* sub, RunConfig& cfg, bool input_required) {
    auto* input = sub->add_option("--input", cfg.input_path, "Input decile table file");
    if (input_required) input->required();
    sub->add_option("--manifest", cfg.manifest_path,
                    "Chronology manifest (one year label per line, earliest first)");
    sub->add_option("--output", cfg.output_path, "Output path (default: stdout)");
    sub->add_option("--format", cfg.format, "Output format")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, OutputFormat>{{"csv", OutputFormat::csv},
                                                {"json", OutputFormat::json}}));
}

void add_meta_flags(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--variable", cfg.variable, "Variable: income|expenditure")
        ->check(CLI::IsMember({"income", "expenditure"}));
    sub->add_option("--flow", cfg.flow, "Flow: gross|disposable (required for expenditure)")
        ->check(CLI::IsMember({"gross", "disposable"}));
    sub->add_option("--measure", cfg.measure, "Decile measure: mean|lower-limit")
        ->check(CLI::IsMember({"mean", "lower-limit"}));
    sub->add_option("--basis", cfg.basis, "Money basis of the input: nominal|real")
        ->check(CLI::IsMember({"nominal", "real"}));
    sub->add_option("--deflator", cfg.deflator_path,
                    "Deflator file (year,index); converts nominal input to real");
    sub->add_option("--base-year", cfg.base_year, "Base year for the real basis");
    sub->add_option("--period", cfg.period, "Period: annual|weekly (default by variable)")
        ->check(CLI::IsMember({"annual", "weekly"}));
    sub->add_option("--unit", cfg.unit, "Currency unit label");
}

void add_pair_flags(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--earlier", cfg.earlier_label, "Label of the earlier year");
    sub->add_option("--later", cfg.later_label, "Label of the later year");
    sub->add_option("--degree", cfg.degree, "Polynomial degree")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;

    CLI::App app{
        "decdyn: dynamic decile-difference analysis of income and expenditure "
        "distributions.\n"
        "Builds per-decile inter-year differences, their cumulative plot sets, and "
        "least-squares polynomial fits."};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Print help for every subcommand");
    app.footer(
        "File formats (CSV, UTF-8, '#' comment lines skipped):\n"
        "  decile table: label,d1,d2,d3,d4,d5,d6,d7,d8,d9,d10\n"
        "  deflator:     year,index\n"
        "  fit table:    pair,p1,p2,r2\n"
        "  grid:         lag,degree,mean_r2,min_r2,max_r2,pairs\n"
        "  plot data:    x,p\n"
        "Exit codes:\n"
        "  0 success\n"
        "  2 parse error (malformed input or command line)\n"
        "  3 validation error (invariant or comparison failure)\n"
        "  4 fit error (degenerate fitting problem)\n"
        "  5 I/O error (unreadable input or unwritable output)");

    auto* validate = app.add_subcommand(
        "validate", "Check a decile table against the series invariants and report violations");
    add_io_flags(validate, cfg, true);
    add_meta_flags(validate, cfg);
    validate->callback([&] { cfg.command = Command::validate; });

    auto* fit_pair =
        app.add_subcommand("fit-pair", "Fit one year pair's cumulative difference distribution");
    add_io_flags(fit_pair, cfg, true);
    add_meta_flags(fit_pair, cfg);
    add_pair_flags(fit_pair, cfg);
    fit_pair->callback([&] { cfg.command = Command::fit_pair; });

    auto* batch = app.add_subcommand(
        "batch", "Fit every year pair at a fixed lag and emit a coefficient fit table");
    add_io_flags(batch, cfg, true);
    add_meta_flags(batch, cfg);
    batch->add_option("--lag", cfg.lag, "Chronology positions between pair members")
        ->check(CLI::PositiveNumber);
    batch->add_option("--degree", cfg.degree, "Polynomial degree")->check(CLI::PositiveNumber);
    batch->callback([&] { cfg.command = Command::batch; });

    auto* grid = app.add_subcommand(
        "grid", "Sweep lags and degrees; aggregate R^2 per (lag, degree) cell");
    add_io_flags(grid, cfg, true);
    add_meta_flags(grid, cfg);
    grid->add_option("--lags", cfg.lags, "Comma-separated lag set (e.g. 1,2,5)")
        ->delimiter(',');
    grid->add_option("--degrees", cfg.degrees, "Comma-separated degree set (e.g. 1,2,3)")
        ->delimiter(',');
    grid->callback([&] { cfg.command = Command::grid; });

    auto* synth = app.add_subcommand(
        "synth", "Generate a synthetic decile panel from a parametric income model");
    add_io_flags(synth, cfg, false);
    add_meta_flags(synth, cfg);
    synth->add_option("--model", cfg.model, "Income model: exponential|lognormal|pareto")
        ->check(CLI::IsMember({"exponential", "lognormal", "pareto"}));
    synth->add_option("--temperature", cfg.temperature, "Exponential model mean income");
    synth->add_option("--mu", cfg.mu, "Lognormal location parameter");
    synth->add_option("--sigma", cfg.sigma, "Lognormal shape parameter");
    synth->add_option("--alpha", cfg.alpha, "Pareto tail exponent");
    synth->add_option("--xmin", cfg.xmin, "Pareto lower bound");
    synth->add_option("--households", cfg.households, "Households per year (multiple of 10)");
    synth->add_option("--years", cfg.years, "Number of years in the panel");
    synth->add_option("--growth", cfg.growth, "Per-year multiplicative income growth");
    synth->add_option("--propensity", cfg.propensity, "Expenditure propensity, in (0,1]");
    synth->add_option("--noise", cfg.noise, "Expenditure noise bound, in [0,1)");
    synth->add_option("--tax-wedge", cfg.tax_wedge, "Gross-over-disposable wedge, >= 0");
    synth->add_option("--seed", cfg.seed, "Random seed (generator: mt19937_64)");
    synth->add_option("--first-year", cfg.first_year, "Label of the first synthetic year");
    synth->callback([&] { cfg.command = Command::synth; });

    auto* plot_data = app.add_subcommand(
        "plot-data", "Emit plot-ready files for one pair: points and a sampled fitted curve");
    add_io_flags(plot_data, cfg, true);
    add_meta_flags(plot_data, cfg);
    add_pair_flags(plot_data, cfg);
    plot_data->get_option("--output")->required();
    plot_data->callback([&] { cfg.command = Command::plot_data; });

    auto* compare = app.add_subcommand(
        "compare", "Compare a produced fit table against a reference table, per-row");
    compare->add_option("--input", cfg.input_path, "Produced fit table")->required();
    compare->add_option("--reference", cfg.reference_path, "Reference fit table")->required();
    compare->add_option("--tol-p1", cfg.tol_p1, "Absolute tolerance for P1 (default 0)");
    compare->add_option("--tol-p2", cfg.tol_p2, "Absolute tolerance for P2 (default 0)");
    compare->add_option("--tol-r2", cfg.tol_r2, "Absolute tolerance for R^2 (default 0)");
    compare->add_option("--output", cfg.output_path, "Output path (default: stdout)");
    compare->add_option("--format", cfg.format, "Output format")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, OutputFormat>{{"csv", OutputFormat::csv},
                                                {"json", OutputFormat::json}}));
    compare->callback([&] { cfg.command = Command::compare; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    return decdyn::cli::run(cfg);
}
