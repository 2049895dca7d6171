#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "decdyn/cli.hpp"
#include "decdyn/ingest.hpp"

using namespace decdyn;
using cli::Command;
using cli::OutputFormat;
using cli::RunConfig;

namespace {

namespace fs = std::filesystem;

fs::path test_dir() {
    const fs::path dir = fs::temp_directory_path() / "decdyn_cli_tests";
    fs::create_directories(dir);
    return dir;
}

std::string path_in(const std::string& name) { return (test_dir() / name).string(); }

void write(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    REQUIRE(os);
    os << content;
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    REQUIRE(is);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

std::string run_cli(const std::string& args, int* exit_code = nullptr) {
    const std::string cmd = std::string(DECDYN_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string output;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof(buf), pipe)) output.append(buf, n);
    const int status = pclose(pipe);
    if (exit_code) *exit_code = WEXITSTATUS(status);
    return output;
}

// A well-behaved five-year income panel: per-decile growth of 5*(i+1)/year.
std::string income_panel_csv(int years = 5) {
    std::string text = "label,d1,d2,d3,d4,d5,d6,d7,d8,d9,d10\n";
    for (int t = 0; t < years; ++t) {
        text += std::to_string(2000 + t);
        for (int i = 1; i <= 10; ++i) {
            text += ',' + std::to_string(100 * i + 5 * i * t);
        }
        text += '\n';
    }
    return text;
}

RunConfig base_config(Command command) {
    RunConfig cfg;
    cfg.command = command;
    return cfg;
}

}  // namespace

TEST_CASE("validate command reports and exits by severity") {
    const std::string good = path_in("good.csv");
    write(good, income_panel_csv());

    RunConfig cfg = base_config(Command::validate);
    cfg.input_path = good;
    cfg.output_path = path_in("validate_out.csv");
    CHECK(cli::run(cfg) == 0);
    CHECK(slurp(cfg.output_path).rfind("label,severity,message\n", 0) == 0);

    const std::string bad = path_in("bad.csv");
    write(bad,
          "label,d1,d2,d3,d4,d5,d6,d7,d8,d9,d10\n"
          "2000,100,50,300,400,500,600,700,800,900,1000\n");
    cfg.input_path = bad;
    cfg.output_path = path_in("validate_bad.csv");
    CHECK(cli::run(cfg) == 3);
    CHECK(slurp(cfg.output_path).find("non-decreasing") != std::string::npos);
}

TEST_CASE("exit codes map error categories") {
    SUBCASE("missing file is an I/O error") {
        RunConfig cfg = base_config(Command::validate);
        cfg.input_path = path_in("does_not_exist.csv");
        CHECK(cli::run(cfg) == 5);
    }
    SUBCASE("malformed input is a parse error") {
        const std::string broken = path_in("broken.csv");
        write(broken, "label,d1,d2,d3,d4,d5,d6,d7,d8,d9,d10\n2000,1,2,3\n");
        RunConfig cfg = base_config(Command::batch);
        cfg.input_path = broken;
        CHECK(cli::run(cfg) == 2);
    }
    SUBCASE("degenerate fit is a fit error") {
        const std::string flat = path_in("flat.csv");
        write(flat,
              "label,d1,d2,d3,d4,d5,d6,d7,d8,d9,d10\n"
              "2000,100,200,300,400,500,600,700,800,900,1000\n"
              "2001,100,200,300,400,500,600,700,800,900,1000\n");
        RunConfig cfg = base_config(Command::fit_pair);
        cfg.input_path = flat;
        CHECK(cli::run(cfg) == 4);
    }
    SUBCASE("non-chronological pair is a validation error") {
        const std::string panel = path_in("panel_chron.csv");
        write(panel, income_panel_csv());
        RunConfig cfg = base_config(Command::fit_pair);
        cfg.input_path = panel;
        cfg.earlier_label = "2003";
        cfg.later_label = "2000";
        CHECK(cli::run(cfg) == 3);
    }
}

TEST_CASE("batch over a 35-year panel yields 34 rows") {
    const std::string panel = path_in("panel35.csv");
    write(panel, income_panel_csv(35));

    RunConfig cfg = base_config(Command::batch);
    cfg.input_path = panel;
    cfg.lag = 1;
    cfg.degree = 1;
    cfg.output_path = path_in("batch35.csv");
    REQUIRE(cli::run(cfg) == 0);

    const auto table = parse_fit_table(slurp(cfg.output_path));
    CHECK(table.rows.size() == 34);
    CHECK(table.rows.front().pair_label == "2001/2000");
    CHECK(table.rows.back().pair_label == "2034/2033");
}

TEST_CASE("batch output is idempotent and inputs are untouched") {
    const std::string panel = path_in("panel_idem.csv");
    const std::string panel_bytes = income_panel_csv();
    write(panel, panel_bytes);

    RunConfig cfg = base_config(Command::batch);
    cfg.input_path = panel;
    cfg.output_path = path_in("batch_idem.csv");
    REQUIRE(cli::run(cfg) == 0);
    const std::string first = slurp(cfg.output_path);
    REQUIRE(cli::run(cfg) == 0);
    CHECK(slurp(cfg.output_path) == first);
    CHECK(slurp(panel) == panel_bytes);
}

TEST_CASE("fit-pair json mirrors the csv column names") {
    const std::string panel = path_in("panel_json.csv");
    write(panel, income_panel_csv(2));

    RunConfig cfg = base_config(Command::fit_pair);
    cfg.input_path = panel;
    cfg.format = OutputFormat::json;
    cfg.output_path = path_in("fit.json");
    REQUIRE(cli::run(cfg) == 0);
    const std::string json = slurp(cfg.output_path);
    for (const char* key : {"\"pair\"", "\"p1\"", "\"p2\"", "\"r2\""}) {
        CHECK(json.find(key) != std::string::npos);
    }
}

TEST_CASE("plot-data writes a 10-point file and a 200-sample curve") {
    const std::string panel = path_in("panel_plot.csv");
    write(panel, income_panel_csv(2));

    RunConfig cfg = base_config(Command::plot_data);
    cfg.input_path = panel;
    cfg.output_path = path_in("plot");
    REQUIRE(cli::run(cfg) == 0);

    const std::string points = slurp(path_in("plot.points.csv"));
    const std::string curve = slurp(path_in("plot.curve.csv"));
    CHECK(std::count(points.begin(), points.end(), '\n') == 11);  // header + 10
    CHECK(std::count(curve.begin(), curve.end(), '\n') == 201);   // header + 200
    CHECK(points.rfind("x,p\n", 0) == 0);
    CHECK(curve.rfind("x,p\n", 0) == 0);
}

TEST_CASE("synth emits a parseable deterministic panel") {
    RunConfig cfg = base_config(Command::synth);
    cfg.households = 200;
    cfg.years = 4;
    cfg.seed = 99;
    cfg.output_path = path_in("synth.csv");
    REQUIRE(cli::run(cfg) == 0);
    const std::string first = slurp(cfg.output_path);
    CHECK(first.rfind("# generator: mt19937_64 seed=99\n", 0) == 0);

    SeriesMeta meta{{Variable::income, Flow::unspecified}, Measure::mean, Basis::nominal(),
                    Period::annual, "GBP"};
    CHECK(parse_decile_table(first, meta).size() == 4);

    REQUIRE(cli::run(cfg) == 0);
    CHECK(slurp(cfg.output_path) == first);
}

TEST_CASE("deflated batch uses the real basis") {
    const std::string panel = path_in("panel_real.csv");
    write(panel, income_panel_csv(3));
    const std::string deflator = path_in("deflator.csv");
    write(deflator, "year,index\n2000,100\n2001,102\n2002,104\n");

    RunConfig cfg = base_config(Command::batch);
    cfg.input_path = panel;
    cfg.deflator_path = deflator;
    cfg.base_year = "2000";
    cfg.output_path = path_in("batch_real.csv");
    CHECK(cli::run(cfg) == 0);
    const auto real_table = parse_fit_table(slurp(cfg.output_path));
    REQUIRE(real_table.rows.size() == 2);

    // deflation changes the deltas, so the nominal fit differs
    RunConfig nominal = base_config(Command::batch);
    nominal.input_path = panel;
    nominal.output_path = path_in("batch_nominal.csv");
    CHECK(cli::run(nominal) == 0);
    const auto nominal_table = parse_fit_table(slurp(nominal.output_path));
    CHECK(real_table.rows[0].record->coefficients[0] !=
          nominal_table.rows[0].record->coefficients[0]);
}

TEST_CASE("manifest reorders a shuffled panel") {
    const std::string shuffled = path_in("shuffled.csv");
    write(shuffled,
          "label,d1,d2,d3,d4,d5,d6,d7,d8,d9,d10\n"
          "2002,110,220,330,440,550,660,770,880,990,1100\n"
          "2000,100,200,300,400,500,600,700,800,900,1000\n"
          "2001,105,210,315,420,525,630,735,840,945,1050\n");
    const std::string manifest = path_in("manifest.txt");
    write(manifest, "2000\n2001\n2002\n");

    RunConfig cfg = base_config(Command::batch);
    cfg.input_path = shuffled;
    cfg.manifest_path = manifest;
    cfg.output_path = path_in("batch_manifest.csv");
    REQUIRE(cli::run(cfg) == 0);
    const auto table = parse_fit_table(slurp(cfg.output_path));
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0].pair_label == "2001/2000");
    CHECK(table.rows[1].pair_label == "2002/2001");
}

TEST_CASE("compare") {
    const std::string ref = path_in("ref_table.csv");
    write(ref,
          "pair,p1,p2,r2\n"
          "2001/2000,-0.0138,77.85,94.29\n"
          "2002/2001,-0.0093,80.1,92.5\n");

    SUBCASE("a table passes against itself at zero tolerance") {
        RunConfig cfg = base_config(Command::compare);
        cfg.input_path = ref;
        cfg.reference_path = ref;
        cfg.output_path = path_in("cmp_self.csv");
        CHECK(cli::run(cfg) == 0);
        CHECK(slurp(cfg.output_path).find("# passed 2 of 2") != std::string::npos);
    }
    SUBCASE("small deltas pass inside the tolerance and fail outside") {
        const std::string near = path_in("near_table.csv");
        write(near,
              "pair,p1,p2,r2\n"
              "2001/2000,-0.0139,77.85,94.29\n"
              "2002/2001,-0.0093,80.1,92.5\n");
        RunConfig cfg = base_config(Command::compare);
        cfg.input_path = near;
        cfg.reference_path = ref;
        cfg.tol_p1 = 1e-3;
        cfg.output_path = path_in("cmp_near.csv");
        CHECK(cli::run(cfg) == 0);

        cfg.tol_p1 = 1e-5;
        cfg.output_path = path_in("cmp_tight.csv");
        CHECK(cli::run(cfg) == 3);
        CHECK(slurp(cfg.output_path).find("false") != std::string::npos);
    }
    SUBCASE("label mismatch names the difference") {
        const std::string other = path_in("other_table.csv");
        write(other, "pair,p1,p2,r2\n2001/2000,-0.0138,77.85,94.29\n");
        RunConfig cfg = base_config(Command::compare);
        cfg.input_path = other;
        cfg.reference_path = ref;
        CHECK(cli::run(cfg) == 3);

        try {
            cli::compare_tables(parse_fit_table(slurp(other)), parse_fit_table(slurp(ref)), {});
            FAIL("expected LabelSetMismatch");
        } catch (const ValidationError& e) {
            CHECK(e.code() == "LabelSetMismatch");
            CHECK(e.what() == doctest::Contains("2002/2001"));
        }
    }
}

TEST_CASE("compare_tables computes per-row deltas") {
    FitTable a, b;
    a.degree = b.degree = 1;
    a.rows.push_back({"y2/y1", FitRecord{"y2/y1", {-0.5, 70.0}, 95.0}, ""});
    b.rows.push_back({"y2/y1", FitRecord{"y2/y1", {-0.4, 71.0}, 94.0}, ""});
    const auto report = cli::compare_tables(a, b, {0.2, 2.0, 2.0});
    REQUIRE(report.rows.size() == 1);
    CHECK(report.rows[0].dp1 == doctest::Approx(-0.1));
    CHECK(report.rows[0].dp2 == doctest::Approx(-1.0));
    CHECK(report.rows[0].dr2 == doctest::Approx(1.0));
    CHECK(report.rows[0].pass);
    CHECK(report.all_pass());
}

TEST_CASE("--help-all documents every flag and the exit codes") {
    int rc = 0;
    const std::string help = run_cli("--help-all", &rc);
    CHECK(rc == 0);
    for (const char* flag :
         {"--input", "--manifest", "--measure", "--variable", "--flow", "--basis", "--deflator",
          "--base-year", "--degree", "--lags", "--seed", "--format", "--output", "--lag",
          "--degrees", "--earlier", "--later", "--reference", "--tol-p1", "--tol-p2", "--tol-r2",
          "--model", "--households", "--years", "--growth", "--seed"}) {
        CAPTURE(flag);
        CHECK(help.find(flag) != std::string::npos);
    }
    for (const char* line : {"Exit codes", "0 success", "2 parse error", "3 validation error",
                             "4 fit error", "5 I/O error"}) {
        CAPTURE(line);
        CHECK(help.find(line) != std::string::npos);
    }
    for (const char* sub :
         {"validate", "fit-pair", "batch", "grid", "synth", "plot-data", "compare"}) {
        CAPTURE(sub);
        CHECK(help.find(sub) != std::string::npos);
    }
}

TEST_CASE("command line parse failures exit with 2") {
    int rc = 0;
    run_cli("batch", &rc);  // missing required --input
    CHECK(rc == 2);
    run_cli("no-such-command", &rc);
    CHECK(rc == 2);
}

TEST_CASE("grid command end to end") {
    const std::string panel = path_in("panel_grid.csv");
    write(panel, income_panel_csv(8));

    RunConfig cfg = base_config(Command::grid);
    cfg.input_path = panel;
    cfg.lags = {1, 2};
    cfg.degrees = {1, 2};
    cfg.output_path = path_in("grid.csv");
    REQUIRE(cli::run(cfg) == 0);
    const std::string text = slurp(cfg.output_path);
    CHECK(text.rfind("lag,degree,mean_r2,min_r2,max_r2,pairs\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 5);  // header + 4 cells
}
