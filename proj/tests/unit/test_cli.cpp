#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "doctest.h"
#include "test_util.hpp"
#include "triml/cli.hpp"
#include "triml/csv.hpp"
#include "triml/fde.hpp"

using namespace triml;
using triml::testing::rel_err;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "triml");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> rows(const std::string& text) {
    std::vector<std::vector<std::string>> r;
    std::stringstream ss(text);
    for (std::string line; std::getline(ss, line);) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        r.push_back(cells);
    }
    return r;
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "triml_cli_test";
    std::filesystem::create_directories(dir);
    const auto p = dir / name;
    std::filesystem::remove(p);
    return p;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::vector<std::string> kWorkedFlags = {"--alpha",   "0.8", "--beta",    "0.6", "--gamma", "0.4",
                                               "--lambda1", "0.5", "--lambda2", "3",   "--lambda3", "5",
                                               "--y0",      "2"};

}  // namespace

TEST_CASE("csv formatting round-trips at 17 digits") {
    CHECK(csv::format(0.1L) == "0.1");
    CHECK(csv::format(1 / 3.0L) == "0.33333333333333333");
    CHECK(csv::format(2) == "2");
    CHECK(csv::format(-1.5e-300L) == "-1.5e-300");
    CHECK(csv::parse("2.3444577143e2272") > 1e2272L);
    CHECK(csv::parse(" 7 ") == 7);
    CHECK_THROWS_AS(csv::parse("7x"), DomainError);
    CHECK_THROWS_AS(csv::parse(""), DomainError);
    for (Real x : {0.1L, 1 / 3.0L, 2.3444577143e2272L, -4.5e-4000L}) CHECK(rel_err(csv::parse(csv::format(x)), x) < 1e-16L);
}

TEST_CASE("eval: header, values and exit codes") {
    Run r = run({"eval", "--u", "1", "--v", "1", "--w", "1"});
    REQUIRE(r.code == 0);
    auto t = rows(r.out);
    REQUIRE(t.size() == 2);
    CHECK(t[0].size() == 15);
    CHECK(r.out.rfind("alpha,beta,gamma,delta,eta,u_re,u_im,v_re,v_im,w_re,w_im,value_re,value_im,abs_err,shells\n", 0) == 0);
    CHECK(rel_err(csv::parse(t[1][11]), std::exp(3.0L)) < 1e-14L);
    CHECK(csv::parse(t[1][12]) == 0);

    r = run({"eval", "--alpha", "0.5", "--beta", "0.7"});
    REQUIRE(r.code == 0);
    CHECK(csv::parse(rows(r.out)[1][11]) == 1);

    // the printed value parses back to the library value
    const MLParams p{0.8L, 0.4L, 0.2L, 1.8L, 1};
    r = run({"eval", "--alpha", "0.8", "--beta", "0.4", "--gamma", "0.2", "--delta", "1.8", "--u", "0.25", "--v",
             "1.5,-0.5", "--w", "2"});
    REQUIRE(r.code == 0);
    const Complex want = eval_trivariate(p, 0.25L, Complex(1.5L, -0.5L), 2).value;
    t = rows(r.out);
    CHECK(rel_err(Complex(csv::parse(t[1][11]), csv::parse(t[1][12])), want) < 1e-16L);

    r = run({"eval", "--alpha", "-1"});
    CHECK(r.code == kExitInvalid);
    CHECK(r.out.empty());
    CHECK(!r.err.empty());
    CHECK(run({"eval", "--alpha", "abc"}).code == kExitInvalid);
    CHECK(run({"eval", "--bogus", "1"}).code == kExitInvalid);
    CHECK(run({}).code == kExitInvalid);
    // no tolerance below the rounding floor can be met
    r = run({"eval", "--u", "3", "--v", "3", "--w", "3", "--tol", "1e-30"});
    CHECK(r.code == kExitNotConverged);
    CHECK(r.out.empty());
}

TEST_CASE("eval-univariate") {
    const Run r = run({"eval-univariate", "--alpha", "0.8", "--beta", "0.4", "--gamma", "0.2", "--delta", "1.8",
                       "--lambda1", "0.5", "--lambda2", "3", "--lambda3", "5", "--r", "0.3"});
    REQUIRE(r.code == 0);
    const auto t = rows(r.out);
    CHECK(t[0][9] == "value");
    const Real want = eval_univariate({0.8L, 0.4L, 0.2L, 1.8L, 1}, {0.5L, 3, 5}, 0.3L).real();
    CHECK(rel_err(csv::parse(t[1][9]), want) < 1e-16L);
}

TEST_CASE("solve: series backend, oracle backend, forcing files") {
    std::vector<std::string> args = {"solve", "--n-points", "10"};
    args.insert(args.end(), kWorkedFlags.begin(), kWorkedFlags.end());
    Run r = run(args);
    REQUIRE(r.code == 0);
    auto t = rows(r.out);
    REQUIRE(t.size() == 12);
    CHECK(r.out.rfind("r,y,backend,abs_err\n", 0) == 0);
    CHECK(t[1][0] == "0");
    CHECK(t[1][1] == "2");
    CHECK(t[1][2] == "series");
    CHECK(t[11][0] == "1");

    r = run({"solve", "--y0", "7", "--n-points", "5", "--t-max", "3"});
    REQUIRE(r.code == 0);
    t = rows(r.out);
    for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i][1] == "7");

    // oracle on a benign problem, sampled at the output grid
    const std::vector<std::string> benign = {"--alpha", "0.8", "--beta", "0.6", "--gamma", "0.4", "--lambda1", "-0.5",
                                             "--y0",    "1",   "--n-points", "8"};
    args = {"solve", "--oracle", "h=0.0625"};
    args.insert(args.end(), benign.begin(), benign.end());
    r = run(args);
    REQUIRE(r.code == 0);
    t = rows(r.out);
    REQUIRE(t.size() == 10);
    CHECK(t[3][2] == "oracle");
    const SolutionTrace o = numeric_oracle_solve({0.8L, 0.6L, 0.4L, -0.5L, 0, 0, 1}, {}, 0.0625L, 1);
    CHECK(rel_err(csv::parse(t[9][1]), o.y.back()) < 1e-16L);
    CHECK(rel_err(csv::parse(t[5][1]), o.y[8]) < 1e-16L);
    CHECK(run({"solve", "--oracle", "h=-1"}).code == kExitInvalid);

    // a tabulated forcing equals the same table given to the library
    const auto forcing = scratch("g.csv");
    {
        std::ofstream f(forcing);
        f << "r,g\n0,1\n0.5,2\n1,0\n";
    }
    args = {"solve", "--forcing", forcing.string()};
    args.insert(args.end(), benign.begin(), benign.end());
    r = run(args);
    REQUIRE(r.code == 0);
    IVPSpec spec{0.8L, 0.6L, 0.4L, -0.5L, 0, 0, 1};
    const Real y1 = solve_homogeneous(spec, 1) + particular_solution(spec, Forcing::table({0, 0.5L, 1}, {1, 2, 0}), 1).value;
    CHECK(rel_err(csv::parse(rows(r.out).back()[1]), y1) < 1e-15L);
    // the table must cover [0, t-max]
    args.push_back("--t-max");
    args.push_back("2");
    CHECK(run(args).code == kExitInvalid);

    args = {"solve", "--forcing", scratch("missing.csv").string()};
    CHECK(run(args).code == kExitIo);
    {
        std::ofstream f(forcing);
        f << "r,g\n0,1\n0.5,oops\n";
    }
    CHECK(run({"solve", "--forcing", forcing.string()}).code == kExitIo);
}

TEST_CASE("solve: validation failures leave no output file") {
    const auto out = scratch("trace.csv");
    Run r = run({"solve", "--alpha", "0.5", "--beta", "0.6", "--gamma", "0.1", "--out", out.string()});
    CHECK(r.code == kExitInvalid);
    CHECK(!std::filesystem::exists(out));
    CHECK(run({"solve", "--n-points", "0", "--out", out.string()}).code == kExitInvalid);
    CHECK(!std::filesystem::exists(out));

    r = run({"solve", "--y0", "3", "--n-points", "4", "--out", out.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    CHECK(rows(slurp(out)).size() == 6);
    CHECK(!std::filesystem::exists(out.string() + ".tmp"));
}

TEST_CASE("verify: filtering and tolerance override") {
    Run r = run({"verify", "--only", "exp-reduction"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("PASS exp-reduction ", 0) == 0);
    CHECK(rows(r.out).size() == 1);

    r = run({"verify", "--only", "exp-reduction,pascal", "--tol", "1e-30"});
    CHECK(r.code == kExitCheckFailed);
    CHECK(r.out.find("FAIL exp-reduction") != std::string::npos);
    // the Pascal identity is exact, so it passes any tolerance
    CHECK(r.out.find("PASS pascal 0 1e-30") != std::string::npos);

    CHECK(run({"verify", "--only", "nonsense"}).code == kExitInvalid);
}

TEST_CASE("table: presets, families and sweeps") {
    Run r = run({"table", "--preset", "table1", "--n-points", "4"});
    REQUIRE(r.code == 0);
    auto t = rows(r.out);
    REQUIRE(t.size() == 1 + 4 * 5);
    CHECK(r.out.rfind("family,alpha,beta,gamma,delta,eta,r,value\n", 0) == 0);
    CHECK(t[1][0] == "trivariate");
    CHECK(t[6][0] == "bivariate");
    CHECK(t[6][3].empty());
    CHECK(t[11][0] == "prabhakar");
    CHECK(t[11][5] == "1.5");
    CHECK(t[16][0] == "two-param");
    // r = 0: every family is 1/Γ(δ)
    CHECK(rel_err(csv::parse(t[1][7]), 1 / std::tgamma(1.5L)) < 1e-16L);
    CHECK(rel_err(csv::parse(t[11][7]), 1 / std::tgamma(0.75L)) < 1e-16L);

    // a zero third slot makes trivariate and bivariate identical
    r = run({"table", "--family", "trivariate,bivariate", "--alpha", "0.5", "--beta", "0.9", "--gamma", "1.3",
             "--lambda3", "0", "--n-points", "6"});
    REQUIRE(r.code == 0);
    t = rows(r.out);
    REQUIRE(t.size() == 15);
    for (int i = 1; i <= 7; ++i) CHECK(t[i][7] == t[i + 7][7]);

    r = run({"table", "--alpha", "0.7", "--t-max", "0.5", "--n-points", "0"});
    REQUIRE(r.code == 0);
    CHECK(rows(r.out).size() == 2);

    r = run({"table", "--alpha", "0.5:1.5:3", "--delta", "1,2", "--n-points", "1"});
    REQUIRE(r.code == 0);
    CHECK(rows(r.out).size() == 1 + 3 * 2 * 2);

    CHECK(run({"table", "--alpha", "1:0.5:3"}).code == kExitInvalid);
    CHECK(run({"table", "--alpha", "0.5:1:0"}).code == kExitInvalid);
    CHECK(run({"table", "--alpha", "0.5:inf:2"}).code == kExitInvalid);
    CHECK(run({"table", "--family", "quadvariate"}).code == kExitInvalid);
    CHECK(run({"table", "--preset", "table9"}).code == kExitInvalid);
}

TEST_CASE("JSON config fills unset options; flags win") {
    const auto cfg = scratch("run.json");
    {
        std::ofstream f(cfg);
        f << R"({"command": "eval", "alpha": 1, "beta": 1, "gamma": 1, "delta": 1, "u": 1, "v": [1, 0], "w": 0.5})";
    }
    Run r = run({"eval", "--config", cfg.string(), "--w", "1"});
    REQUIRE(r.code == 0);
    CHECK(rel_err(csv::parse(rows(r.out)[1][11]), std::exp(3.0L)) < 1e-14L);
    r = run({"eval", "--config", cfg.string()});
    REQUIRE(r.code == 0);
    CHECK(rel_err(csv::parse(rows(r.out)[1][11]), std::exp(2.5L)) < 1e-14L);

    {
        std::ofstream f(cfg);
        f << R"({"t_max": 2})";
    }
    CHECK(run({"eval", "--config", cfg.string()}).code == kExitInvalid);
    CHECK(run({"eval", "--config", scratch("none.json").string()}).code == kExitIo);
    {
        std::ofstream f(cfg);
        f << "{not json";
    }
    CHECK(run({"eval", "--config", cfg.string()}).code == kExitIo);
}

TEST_CASE("the installed binary reports exit statuses") {
    const std::string tool = TRIML_TOOL_PATH;
    auto status = [&](const std::string& args) {
        const int raw = std::system((tool + " " + args + " > /dev/null 2>&1").c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    };
    CHECK(status("eval --u 1") == 0);
    CHECK(status("eval --alpha 0") == kExitInvalid);
    CHECK(status("verify --only pascal") == 0);
    CHECK(status("verify --only exp-reduction --tol 1e-30") == kExitCheckFailed);
    CHECK(status("--help") == 0);
}
