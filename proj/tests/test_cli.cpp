#include "support.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

struct Run {
    int status = -1;
    std::string out;
};

/// Runs the CLI through the shell with stderr folded into stdout.
Run run(const std::string& args, const std::string& env = {}) {
    const std::string cmd = env + " \"" + std::string(SMALLPOLY_CLI) + "\" " + args + " 2>&1";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    while (std::size_t k = std::fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), k);
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

std::filesystem::path temp_path(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "smallpoly_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string data_file(const std::string& name) { return std::string(SMALLPOLY_DATA_DIR) + "/" + name; }

} // namespace

TEST(Cli, Bound) {
    const auto r = run("bound 32");
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out, "3.140331156954753\n");
    EXPECT_EQ(run("--digits 5 bound 32").out, "3.1403\n");
    EXPECT_EQ(run("bound 2").status, 2);
}

TEST(Cli, VerifyFixture) {
    for (const std::string& arg : {data_file("triacontadigon.json"), std::string("triacontadigon.json"),
                                  data_file("triacontadigon.txt")}) {
        const auto r = run("verify " + arg);
        EXPECT_EQ(r.status, 0) << r.out;
        EXPECT_NE(r.out.find("perimeter      3.14033115695461"), std::string::npos) << r.out;
        EXPECT_NE(r.out.find("cycle length   21"), std::string::npos) << r.out;
        EXPECT_NE(r.out.find("status         ok"), std::string::npos) << r.out;
    }
}

TEST(Cli, VerifyCorruptedFixtureFails) {
    auto f = smallpoly::fixture("triacontadigon");
    f.vertices[9].x += 1e-2;
    const auto path = temp_path("corrupted.json");
    std::ofstream(path) << smallpoly::serialize(f);
    const auto r = run("verify " + path.string());
    EXPECT_EQ(r.status, 1) << r.out;
    EXPECT_TRUE(r.out.find("diameter violation") != std::string::npos ||
                r.out.find("structure") != std::string::npos)
        << r.out;
}

TEST(Cli, VerifyRejectsNonConvexAndMissingInput) {
    const auto path = temp_path("bowtie.txt");
    std::ofstream(path) << "0 0\n1 1\n1 0\n0 1\n";
    const auto r = run("verify " + path.string());
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.out.find("convexity"), std::string::npos) << r.out;
    EXPECT_EQ(run("verify /nonexistent/poly.json").status, 1);
}

TEST(Cli, Graph) {
    const auto r = run("graph triacontadigon");
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("topology (32, 21, [0,0,0,0,0,1,1,0,1,0,1,1,0,0,0,0,0,2,1,1,2])"), std::string::npos)
        << r.out;
}

TEST(Cli, ConstructThenVerify) {
    const auto path = temp_path("pentagon.json");
    EXPECT_EQ(run("construct regular 5 -o " + path.string()).status, 0);
    const auto r = run("verify " + path.string());
    EXPECT_EQ(r.status, 0) << r.out;
    EXPECT_NE(r.out.find("topology       (5, 5, [0,0,0,0,0])"), std::string::npos) << r.out;
    EXPECT_EQ(run("construct irregular 5").status, 2);
}

TEST(Cli, PlotIsDeterministic) {
    const auto a = temp_path("a.svg"), b = temp_path("b.svg");
    EXPECT_EQ(run("plot triacontadigon.json -o " + a.string()).status, 0);
    EXPECT_EQ(run("plot " + data_file("triacontadigon.json") + " -o " + b.string()).status, 0);
    const auto svg = slurp(a);
    EXPECT_EQ(svg, slurp(b));
    std::size_t lines = 0;
    for (auto at = svg.find("<line "); at != std::string::npos; at = svg.find("<line ", at + 1)) ++lines;
    EXPECT_EQ(lines, 32u);
}

TEST(Cli, OptimizeWritesVerifiablePolygon) {
    const auto path = temp_path("seven.json");
    const auto r = run("optimize 7 --seed 3 -o " + path.string());
    EXPECT_EQ(r.status, 0) << r.out;
    EXPECT_NE(r.out.find("best topology (7, 7, [0,0,0,0,0,0,0])"), std::string::npos) << r.out;
    const auto v = run("verify " + path.string());
    EXPECT_EQ(v.status, 0) << v.out;
}

TEST(Cli, SeedFallsBackToEnvironment) {
    const auto a = run("optimize 9 --cycle 5 --restarts 2 --seed 11");
    const auto b = run("optimize 9 --cycle 5 --restarts 2", "SMALLPOLY_SEED=11");
    EXPECT_EQ(a.status, 0);
    EXPECT_EQ(a.out, b.out);
}

TEST(Cli, RecordsPublishedOnly) {
    const auto r = run("records --published-only");
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("3.140331156954614"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("3.140323421103532"), std::string::npos) << r.out;
}

TEST(Cli, RecordsFreshValuesDominatePublished) {
    const auto r = run("records");
    ASSERT_EQ(r.status, 0) << r.out;
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line); // header
    int rows = 0;
    while (std::getline(lines, line)) {
        std::istringstream fields(line);
        int cycle = 0;
        double published = 0.0, computed = 0.0;
        ASSERT_TRUE(fields >> cycle >> published >> computed) << line;
        EXPECT_GE(computed, published - 1e-8) << line;
        EXPECT_LE(computed, smallpoly::upper_bound(32) + 1e-12) << line;
        ++rows;
    }
    EXPECT_EQ(rows, 5);
}

TEST(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(run("").status, 2);
    EXPECT_EQ(run("frobnicate").status, 2);
    EXPECT_EQ(run("bound 32 --bogus").status, 2);
    EXPECT_EQ(run("optimize").status, 2);
    EXPECT_EQ(run("optimize 10 --restarts 0").status, 2);
    EXPECT_EQ(run("optimize 10 --cycle 4").status, 2);
}
