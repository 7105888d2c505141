// End-to-end tests of the benchmark command-line tool: subcommands, exit
// codes, file outputs, and the documented error contract (0 = success,
// 2 = usage/configuration, 3 = I/O).

#include <catch2/catch_amalgamated.hpp>

#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>
#include <qvi/qvi.hpp>

namespace {

std::string bin_path() {
    const char* env = std::getenv("QVIBENCH_BIN");
    return env ? env : "/root/proj/build/tools/qvibench";
}

std::string work_dir() {
    static const std::string dir = [] {
        std::string d = "/tmp/qvi_cli_" + std::to_string(::getpid());
        ::mkdir(d.c_str(), 0755);
        return d;
    }();
    return dir;
}

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    const std::string out = work_dir() + "/stdout.txt";
    const std::string err = work_dir() + "/stderr.txt";
    const std::string cmd =
        env_prefix + (env_prefix.empty() ? "" : " ") + "'" + bin_path() + "' " + args + " > '" +
        out + "' 2> '" + err + "'";
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

int count_lines(const std::string& text) {
    int n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

}  // namespace

TEST_CASE("cli: catalog listing") {
    const auto r = run_cli("list");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("analytic1d") != std::string::npos);
    // header plus at least ten problems
    CHECK(count_lines(r.out) >= 11);
}

TEST_CASE("cli: benchmark runs") {
    const std::string csv = work_dir() + "/run.csv";

    SECTION("csv output over all solvers") {
        const auto r = run_cli("run --problems analytic1d --solvers all --format csv --out " + csv);
        REQUIRE(r.code == 0);
        std::ifstream in(csv);
        REQUIRE(in.good());
        const auto records = qvi::parse_csv(in);
        REQUIRE(records.size() == 12);  // 2 starts x 6 solvers
        for (const auto& rec : records) CHECK(rec.problem == "analytic1d");
    }

    SECTION("json output") {
        const std::string out = work_dir() + "/run.json";
        const auto r = run_cli("run --problems analytic1d --solvers proposed gradproj --format json --out " + out);
        REQUIRE(r.code == 0);
        const auto j = nlohmann::json::parse(slurp(out));
        REQUIRE(j.contains("runs"));
        CHECK(j["runs"].size() == 4);  // 2 starts x 2 solvers
        CHECK(j["runs"][0]["solver"] == "proposed");
    }

    SECTION("problem files load alongside builtin names") {
        const std::string out = work_dir() + "/file.csv";
        const auto r = run_cli("run --problems " QVI_DATA_DIR "/problems/boxint2.json"
                               " --solvers proposed --format csv --out " + out);
        REQUIRE(r.code == 0);
        std::ifstream in(out);
        const auto records = qvi::parse_csv(in);
        REQUIRE(!records.empty());
        CHECK(records.front().problem == "boxint2");
        CHECK(records.front().status == qvi::Status::SolvedToTol);
    }

    SECTION("identical reruns modulo timing") {
        const std::string a = work_dir() + "/a.csv";
        const std::string b = work_dir() + "/b.csv";
        REQUIRE(run_cli("run --problems movbox2a --solvers all --format csv --out " + a).code == 0);
        REQUIRE(run_cli("run --problems movbox2a --solvers all --jobs 4 --format csv --out " + b).code == 0);
        std::ifstream fa(a), fb(b);
        const auto ra = qvi::parse_csv(fa);
        const auto rb = qvi::parse_csv(fb);
        REQUIRE(ra.size() == rb.size());
        for (std::size_t i = 0; i < ra.size(); ++i) {
            CHECK(ra[i].solver == rb[i].solver);
            CHECK(ra[i].iters == rb[i].iters);
            CHECK(ra[i].final_opt == rb[i].final_opt);
            CHECK(ra[i].status == rb[i].status);
        }
    }

    SECTION("configuration errors exit with code 2") {
        CHECK(run_cli("run --problems analytic1d --solvers newton --format csv --out " + csv).code == 2);
        CHECK(run_cli("run --problems /nonexistent/p.json --solvers proposed --format csv --out " + csv).code == 2);
        CHECK(run_cli("run --problems nonesuch --solvers proposed --format csv --out " + csv).code == 2);
        CHECK(run_cli("run --problems analytic1d --solvers proposed --format yaml --out " + csv).code == 2);
        CHECK(run_cli("run --problems analytic1d --solvers proposed --jobs 0 --format csv --out " + csv).code == 2);
        // invalid worker-count environment override
        CHECK(run_cli("run --problems analytic1d --solvers proposed --format csv --out " + csv,
                      "QVIBENCH_JOBS=abc").code == 2);
    }

    SECTION("unwritable output exits with code 3") {
        CHECK(run_cli("run --problems analytic1d --solvers proposed --format csv --out /nonexistent/dir/o.csv")
                  .code == 3);
    }
}

TEST_CASE("cli: rate verification") {
    SECTION("certified defaults") {
        const auto r = run_cli("rate --problem analytic1d --solver proposed");
        REQUIRE(r.code == 0);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j["problem"] == "analytic1d");
        // rho = beta^2 with beta = 0.7 at the certified defaults (one ulp off 0.49)
        CHECK(std::abs(j["rho_theoretical"].get<double>() - 0.49) <= 1e-15);
        CHECK(j["bound_violations"].get<int>() == 0);
        CHECK(j["rho_empirical"].get<double>() <= 0.49 + 1e-6);
    }

    SECTION("explicit admissible overrides") {
        const auto r = run_cli(
            "rate --problem analytic1d --solver proposed --gamma 1.0 --theta 0.3333333333333333");
        REQUIRE(r.code == 0);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j["beta"].get<double>() == 0.2);
        CHECK(j["rho_theoretical"].get<double>() == 0.64);
        CHECK(j["bound_violations"].get<int>() == 0);
        const auto interval = j["gamma_interval"];
        CHECK(interval[0].get<double>() < 1.0);
        CHECK(interval[1].get<double>() > 1.0);
    }

    SECTION("eoc dump") {
        const auto r = run_cli("rate --problem analytic1d --solver proposed --dump-eoc");
        REQUIRE(r.code == 0);
        const auto j = nlohmann::json::parse(r.out);
        REQUIRE(j.contains("eoc_windows"));
    }

    SECTION("configuration errors exit with code 2") {
        CHECK(run_cli("rate --problem nonesuch --solver proposed").code == 2);
        const auto r = run_cli("rate --problem analytic1d --solver gradproj");
        CHECK(r.code == 2);
        CHECK(r.err.find("averaged companion") != std::string::npos);
        const auto g = run_cli("rate --problem analytic1d --solver proposed --gamma 5.0");
        CHECK(g.code == 2);
        CHECK(g.err.find("interval") != std::string::npos);
        CHECK(run_cli("rate --problem analytic1d --solver proposed --start 7").code == 2);
    }
}

TEST_CASE("cli: performance profiles") {
    const std::string csv = work_dir() + "/prof.csv";
    REQUIRE(run_cli("run --problems analytic1d movbox2a --solvers all --format csv --out " + csv).code == 0);

    SECTION("curves to stdout") {
        const auto r = run_cli("profile " + csv + " --metric iters");
        REQUIRE(r.code == 0);
        CHECK(r.out.rfind("solver,T,rho", 0) == 0);
        CHECK(r.out.find("proposed") != std::string::npos);
        CHECK(r.out.find("gradproj") != std::string::npos);
    }

    SECTION("curve files and plot scripts") {
        const std::string out = work_dir() + "/curves.csv";
        const std::string plot = work_dir() + "/curves.gp";
        const auto r = run_cli("profile " + csv + " --metric time --points 16 --out " + out +
                               " --gnuplot " + plot);
        REQUIRE(r.code == 0);
        CHECK(slurp(out).rfind("solver,T,rho", 0) == 0);
        CHECK(slurp(plot).find("\"proposed\"") != std::string::npos);
    }

    SECTION("error contract") {
        CHECK(run_cli("profile /nonexistent/results.csv --metric iters").code == 3);
        const std::string bad = work_dir() + "/bad.csv";
        std::ofstream(bad) << "not,a,results,file\n";
        CHECK(run_cli("profile " + bad + " --metric iters").code == 2);
        CHECK(run_cli("profile " + csv + " --metric memory").code == 2);
    }
}

TEST_CASE("cli: top-level usage") {
    CHECK(run_cli("").code == 2);
    CHECK(run_cli("--help").code == 0);
    CHECK(run_cli("frobnicate").code == 2);
    const auto r = run_cli("run --problems analytic1d");  // missing required options
    CHECK(r.code == 2);
}
