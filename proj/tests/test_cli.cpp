#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <string>

#include <sys/wait.h>

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(CUBE_PISIER_BIN) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

}  // namespace

TEST_CASE("help exits cleanly") {
    CHECK(run("--help").exit_code == 0);
    CHECK(run("estimate --help").exit_code == 0);
}

TEST_CASE("usage errors exit with code 1") {
    CHECK(run("").exit_code == 1);                                  // missing subcommand
    CHECK(run("estimate --n 3").exit_code == 1);                    // missing --ineq
    CHECK(run("estimate --ineq nope --n 3").exit_code == 1);        // unknown kind
    CHECK(run("estimate --ineq pisier --norm banana").exit_code == 1);
    CHECK(run("estimate --ineq pisier --n 8").exit_code == 1);      // over the cap
    CHECK(run("estimate --ineq pisier --n 3 --p 0.5").exit_code == 1);
    CHECK(run("verify --n 99").exit_code == 1);
    CHECK(run("bound --n 4..2").exit_code == 1);                    // empty range
    CHECK(run("moduli --kind nope").exit_code == 1);
}

TEST_CASE("verify reports a passing suite") {
    const auto r = run("verify --n 3 --d 2 --funcs 3");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"pass\": true") != std::string::npos);
    CHECK(r.out.find("\"sign\": 1") != std::string::npos);
}

TEST_CASE("estimate csv has the documented header and is deterministic") {
    const std::string args =
        "estimate --ineq df --n 3 --p 2 --norm ellq:d=2,q=2 --restarts 6 --seed 9 --format csv";
    const auto a = run(args);
    CHECK(a.exit_code == 0);
    CHECK(a.out.rfind("n,kind,norm,p,estimate,converged,seed\n", 0) == 0);
    const auto b = run(args);
    CHECK(a.out == b.out);  // byte identical
}

TEST_CASE("estimate json is deterministic too") {
    const std::string args =
        "estimate --ineq pisier --n 3 --p 3 --norm l1cube:k=2 --restarts 6 --seed 4";
    const auto a = run(args);
    CHECK(a.exit_code == 0);
    CHECK(run(args).out == a.out);
    CHECK(a.out.find("\"witness\"") != std::string::npos);
}

TEST_CASE("scan emits one csv row per dimension") {
    const auto r = run("scan --ineq deltafi --n 1..3 --p 2 --restarts 4 --seed 2 --format csv");
    CHECK(r.exit_code == 0);
    int lines = 0;
    for (char c : r.out) lines += c == '\n';
    CHECK(lines == 4);  // header + 3 rows
    CHECK(r.out.rfind("n,kind,norm,p,estimate,converged,seed\n", 0) == 0);
}

TEST_CASE("bound runs the documented sweep quickly") {
    const auto r = run("bound --n 4..64 --p 2 --format csv");
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("n,p,r_star,bound,bound_over_nlogn\n", 0) == 0);
    int lines = 0;
    for (char c : r.out) lines += c == '\n';
    CHECK(lines == 62);
}

TEST_CASE("moduli subcommand reports a value") {
    const auto r = run("moduli --kind cotype --norm ellq:d=2,q=2 --q 2 --m 3 --seed 1");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"value\"") != std::string::npos);
}

TEST_CASE("output lands in a file when requested") {
    const char* path = "/tmp/cube_pisier_cli_test.csv";
    std::remove(path);
    const auto r = run(std::string("bound --n 4..8 --p 1 --out ") + path);
    CHECK(r.exit_code == 0);
    FILE* f = std::fopen(path, "r");
    REQUIRE(f != nullptr);
    char line[256] = {0};
    REQUIRE(std::fgets(line, sizeof line, f) != nullptr);
    CHECK(std::string(line) == "n,p,r_star,bound,bound_over_nlogn\n");
    std::fclose(f);
    std::remove(path);
}
