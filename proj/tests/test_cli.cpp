#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "intwist/job.hpp"

using namespace intwist;
using nlohmann::json;

namespace {

// ctest runs from the build directory; the CLI and the job corpus live at
// fixed relative locations.
int run_cli(const std::string& args, std::string& out) {
    std::string cmd = "./intwist_cli " + args + " > cli_test_out.txt 2>&1";
    int status = std::system(cmd.c_str());
    std::ifstream in("cli_test_out.txt");
    std::ostringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return WEXITSTATUS(status);
}

const char* kMinimal = R"(vars z1
params g
twist (z1*(1+z1))^(g)
left 1/z1
right 1
order z1
)";

}  // namespace

TEST_CASE("job parsing") {
    SECTION("minimal job parses") {
        Job job = parse_job(kMinimal);
        CHECK(job.vars == std::vector<std::string>{"z1"});
        CHECK(job.params == std::vector<std::string>{"g"});
        REQUIRE(job.twist_factors.size() == 1);
        CHECK(job.twist_factors[0].first == "z1*(1+z1)");
        CHECK(job.twist_factors[0].second == "g");
        CHECK(job.left == "1/z1");
        CHECK(job.right == "1");
        CHECK(job.order == std::vector<std::string>{"z1"});
    }

    SECTION("comments and blank lines are ignored") {
        Job a = parse_job(kMinimal);
        Job b = parse_job("# heading\n\nvars z1\nparams g  # inline\n"
                          "twist (z1*(1+z1))^(g)\nleft 1/z1\nright 1\norder z1\n");
        CHECK(a == b);
    }

    SECTION("serialization round-trips") {
        for (const char* path :
             {"../jobs/example1.job", "../jobs/example2.job", "../jobs/example3.job",
              "../jobs/higgs.job", "../jobs/sunrise_equal.job",
              "../jobs/sunrise_equal_rot.job"}) {
            std::ifstream in(path);
            REQUIRE(in);
            std::ostringstream ss;
            ss << in.rdbuf();
            Job job = parse_job(ss.str());
            CHECK(parse_job(serialize_job(job)) == job);
        }
    }

    SECTION("malformed double caret is a parse error with a location") {
        try {
            parse_job("vars z1\nparams g\ntwist (z1)^(g)\nleft z1^^2\nright 1\n");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.line == 4);
            CHECK(e.column == 9);  // the second caret
        }
    }

    SECTION("undeclared names are rejected") {
        CHECK_THROWS_AS(
            parse_job("vars z1\nparams g\ntwist (z1)^(g)\nleft 1/w\nright 1\n"),
            ParseError);
    }

    SECTION("unknown keyword is rejected") {
        CHECK_THROWS_AS(parse_job("vars z1\nfrobnicate 3\n"), ParseError);
    }
}

TEST_CASE("run_job on the univariate example") {
    std::ifstream in("../jobs/example1.job");
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    Job job = parse_job(ss.str());
    RunOptions opt;
    opt.want_trace = true;
    RunReport rep = run_job(job, opt);
    auto reg = make_registry(job.vars, job.params);
    CHECK(parse_ratfunc(reg, rep.result) ==
          parse_ratfunc(reg, "6*g/((1-g)*(1-7*g))"));
    CHECK(rep.dims == std::vector<std::size_t>{6});
    REQUIRE(rep.reductions.size() == 1);
    CHECK(rep.reductions[0] > 0);
    // trace carries the level line and both reduced forms
    REQUIRE(rep.trace.size() == 3);
    CHECK(rep.trace[0].find("nu=6") != std::string::npos);
    CHECK(rep.trace[1].rfind("reduced left:", 0) == 0);
    CHECK(rep.trace[2].rfind("reduced right:", 0) == 0);
}

TEST_CASE("run_job honours an order override") {
    std::ifstream in("../jobs/example2.job");
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    Job job = parse_job(ss.str());
    RunOptions opt;
    opt.order_override = {"z1", "z2"};
    RunReport rep = run_job(job, opt);
    CHECK(rep.order == std::vector<std::string>{"z1", "z2"});
    auto reg = make_registry(job.vars, job.params);
    CHECK(parse_ratfunc(reg, rep.result) ==
          parse_ratfunc(reg, "1/(4*g*(1-11*g))"));
}

TEST_CASE("cli end to end") {
    std::string out;

    SECTION("json report matches the schema") {
        int rc = run_cli("--job ../jobs/example1.job --json --oracle 2 --seed 5", out);
        REQUIRE(rc == 0);
        json j = json::parse(out);
        REQUIRE(j.contains("result"));
        REQUIRE(j.contains("order"));
        REQUIRE(j.contains("dims"));
        REQUIRE(j.contains("reductions"));
        REQUIRE(j.contains("oracle"));
        CHECK(j["order"] == json::array({"z1"}));
        CHECK(j["dims"] == json::array({6}));
        REQUIRE(j["oracle"].size() == 2);
        for (const auto& rec : j["oracle"]) {
            CHECK(rec.contains("sample"));
            CHECK(rec.contains("numeric"));
            CHECK(rec.contains("exact_at_sample"));
            CHECK(rec["rel_err"].get<double>() < 1e-8);
        }
        // the exact result string reparses through the expression grammar
        auto reg = make_registry({"z1"}, {"g"});
        CHECK(parse_ratfunc(reg, j["result"].get<std::string>()) ==
              parse_ratfunc(reg, "6*g/((1-g)*(1-7*g))"));
    }

    SECTION("parse failure exits 1") {
        std::ofstream bad("cli_test_bad.job");
        bad << "vars z1\nparams g\ntwist (z1)^(g)\nleft z1^^2\n";
        bad.close();
        int rc = run_cli("--job cli_test_bad.job", out);
        CHECK(rc == 1);
        CHECK(out.find("parse error") != std::string::npos);
    }

    SECTION("missing job file exits 1") {
        int rc = run_cli("--job does_not_exist.job", out);
        CHECK(rc == 1);
    }

    SECTION("degenerate fibration exits 2 with the rotation hint") {
        int rc = run_cli("--job ../jobs/sunrise_equal.job", out);
        CHECK(rc == 2);
        CHECK(out.find("suggestion: rotate z1 z2 1 2") != std::string::npos);
    }

    SECTION("the suggested rotation job exits 0") {
        int rc = run_cli("--job ../jobs/sunrise_equal_rot.job", out);
        CHECK(rc == 0);
        CHECK(out.find("dims: 2 4") != std::string::npos);
    }
}
