#include <doctest.h>

#include "snngb/error.hpp"
#include "snngb/harness.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace snngb;
namespace fs = std::filesystem;

namespace {
SweepConfig tiny(const std::string& dir) {
    SweepConfig c;
    c.T_values = {60};
    c.Nw_values = {2};
    c.L_values = {2};
    c.trials = 1;
    c.train.epochs = 3;
    c.params.u_firing = 1;
    c.output_dir = dir;
    return c;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}
} // namespace

TEST_CASE("value lists and ranges") {
    CHECK(parse_value_list("1,2,5") == std::vector<double>{1, 2, 5});
    CHECK(parse_value_list("100:100:500") == std::vector<double>{100, 200, 300, 400, 500});
    CHECK(parse_value_list("0:0.1:0.3").size() == 4);
    CHECK_THROWS_AS(parse_value_list("1:0:3"), ParseError);
    CHECK_THROWS_AS(parse_value_list("1:2"), ParseError);
    CHECK_THROWS_AS(parse_value_list(""), ParseError);
}

TEST_CASE("config parsing") {
    std::istringstream in("# comment\nexpression = DEF\nT = 100:100:300\nNw = 2,4\nlog2L = 1:1:3\n"
                          "trials = 2\nlearning_rate = 0.01\nseed = 42\n");
    const auto c = parse_sweep_config(in);
    CHECK(c.expression == Expression::DEF);
    CHECK(c.T_values.size() == 3);
    CHECK(c.L_values == std::vector<std::size_t>{2, 4, 8});
    CHECK(c.trials == 2);
    CHECK(c.seed == 42);
    std::istringstream bad("T = 100\nbogus = 1\n");
    try {
        parse_sweep_config(bad);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    std::istringstream invalid("trials = 0\n");
    CHECK_THROWS(parse_sweep_config(invalid));
}

TEST_CASE("full grid size") {
    SweepConfig c;
    c.apply_paper_scale();
    CHECK(c.T_values.size() * c.Nw_values.size() * c.L_values.size() * c.trials == 960);
}

TEST_CASE("seeds are pure functions of the row coordinates") {
    CHECK(row_seed(1, 500, 4, 2, 3) == row_seed(1, 500, 4, 2, 3));
    CHECK(row_seed(1, 500, 4, 2, 3) != row_seed(1, 500, 4, 4, 3));
    CHECK(dataset_seed(1, 500, 3) == dataset_seed(1, 500, 3));
    CHECK(dataset_seed(1, 500, 3) != dataset_seed(1, 500, 4));
    CHECK(dataset_seed(1, 500, 3) != dataset_seed(2, 500, 3));
}

TEST_CASE("single-row sweep, reruns and job invariance") {
    const auto dir = (fs::temp_directory_path() / "snngb_unit_sweep").string();
    fs::remove_all(dir);
    auto c = tiny(dir);
    const auto p1 = run_sweep(c);
    const std::string first = slurp(p1);
    std::size_t lines = 0;
    for (char ch : first) lines += ch == '\n';
    CHECK(lines == 3); // schema line, header, one row
    CHECK(first.rfind(csv_schema_line, 0) == 0);
    CHECK(slurp(run_sweep(c)) == first);

    c.T_values = {40, 60};
    c.trials = 2;
    c.output_name = "a.csv";
    const std::string seq = slurp(run_sweep(c));
    c.jobs = 3;
    c.output_name = "b.csv";
    CHECK(slurp(run_sweep(c)) == seq);

    std::ifstream in(p1);
    const auto rows = read_runs_csv(in);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].status == "ok");
    CHECK(rows[0].epsilon == doctest::Approx(rows[0].test_error - rows[0].train_error));
    std::ostringstream again;
    write_runs_csv(again, rows, false);
    CHECK(again.str() == first);
    fs::remove_all(dir);
}

TEST_CASE("plot series and SVG") {
    std::vector<RunRecord> rows;
    for (std::size_t L : {2u, 4u, 8u, 16u})
        for (std::size_t t = 0; t < 2; ++t) {
            RunRecord r;
            r.T = 500;
            r.N_w = 4;
            r.L = L;
            r.trial = t;
            r.epsilon = 0.1 * static_cast<double>(L) + 0.01 * static_cast<double>(t);
            rows.push_back(r);
        }
    RunRecord broken = rows.front();
    broken.status = "numerical";
    broken.epsilon = 1e9;
    rows.push_back(broken);

    const auto s = plot_series(rows, PlotAxis::L);
    REQUIRE(s.size() == 1);
    REQUIRE(s[0].points.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(s[0].points[i].x == doctest::Approx(static_cast<double>(i + 1)));
        CHECK(s[0].points[i].count == 2);
    }
    CHECK(s[0].points[0].mean == doctest::Approx(0.205));
    const auto svg = render_svg(s, PlotAxis::L);
    CHECK(svg == render_svg(s, PlotAxis::L));
    CHECK(svg.find("<svg") != std::string::npos);

    const auto one = plot_series(std::vector<RunRecord>(rows.begin(), rows.begin() + 1), PlotAxis::T);
    REQUIRE(one.size() == 1);
    CHECK(one[0].points[0].stddev == 0.0);
    CHECK_THROWS_AS(plot_series({broken}, PlotAxis::L), InvalidArgument);
    CHECK_THROWS_AS(parse_plot_axis("depth"), InvalidArgument);
}
