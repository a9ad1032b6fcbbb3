#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"

#include <bnsl/cli.hpp>
#include <bnsl/generator.hpp>
#include <bnsl/network.hpp>
#include <bnsl/pops.hpp>
#include <bnsl/score_file.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <sys/wait.h>

namespace fs = std::filesystem;
using namespace bnsl;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run bnsl_run(std::vector<std::string> args)
{
    args.insert(args.begin(), "bnsl");
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct TempDir {
    fs::path path;
    TempDir()
    {
        path = fs::temp_directory_path() / ("bnsl_cli_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string field(const std::string& summary, const std::string& key)
{
    const std::regex re(key + "=([^ \\n]+)");
    std::smatch m;
    REQUIRE(std::regex_search(summary, m, re));
    return m[1];
}

void make_instance(const TempDir& dir, std::size_t n, std::size_t records, std::uint64_t seed)
{
    REQUIRE(bnsl_run({"gen-net", "--vars", std::to_string(n), "--max-parents", "2", "--seed", std::to_string(seed),
                      "--out", dir / "net.txt"})
                .code == 0);
    REQUIRE(bnsl_run({"sample", "--net", dir / "net.txt", "--records", std::to_string(records), "--seed",
                      std::to_string(seed), "--out", dir / "data.csv"})
                .code == 0);
    REQUIRE(bnsl_run({"score", "--data", dir / "data.csv", "--max-parents", "3", "--out", dir / "scores.txt"}).code ==
            0);
}

}  // namespace

TEST_CASE("gen-net is deterministic and validated")
{
    TempDir dir;
    CHECK(bnsl_run({"gen-net", "--vars", "5", "--max-parents", "2", "--seed", "7", "--out", dir / "a.txt"}).code == 0);
    CHECK(bnsl_run({"gen-net", "--vars", "5", "--max-parents", "2", "--seed", "7", "--out", dir / "b.txt"}).code == 0);
    CHECK(slurp(dir / "a.txt") == slurp(dir / "b.txt"));
    const auto bad = bnsl_run({"gen-net", "--vars", "5", "--max-parents", "0", "--seed", "7"});
    CHECK(bad.code == 2);
    CHECK(!bad.err.empty());
    CHECK(bnsl_run({"gen-net", "--vars", "5"}).code == 2);
    CHECK(bnsl_run({"gen-net", "--vars", "five", "--max-parents", "2"}).code == 2);

    CHECK(bnsl_run({"gen-net", "--vars", "29", "--max-parents", "6", "--seed", "1", "--out", dir / "big.txt"}).code ==
          0);
    const auto big = read_structure_file(dir / "big.txt");
    CHECK(big.num_variables() == 29);
    for (VariableId v = 0; v < 29; ++v) CHECK(big.parents(v).size() <= 6);
}

TEST_CASE("sample counts and determinism")
{
    TempDir dir;
    REQUIRE(bnsl_run({"gen-net", "--vars", "5", "--max-parents", "2", "--seed", "3", "--out", dir / "net.txt"}).code ==
            0);
    CHECK(bnsl_run({"sample", "--net", dir / "net.txt", "--records", "1000", "--seed", "4", "--out", dir / "a.csv"})
              .code == 0);
    CHECK(bnsl_run({"sample", "--net", dir / "net.txt", "--records", "1000", "--seed", "4", "--out", dir / "b.csv"})
              .code == 0);
    const auto text = slurp(dir / "a.csv");
    CHECK(std::count(text.begin(), text.end(), '\n') == 1001);
    CHECK(text == slurp(dir / "b.csv"));
    CHECK(bnsl_run({"sample", "--net", dir / "net.txt", "--records", "0", "--seed", "4"}).code == 2);
    CHECK(bnsl_run({"sample", "--net", dir / "missing.txt", "--records", "10"}).code == 2);
}

TEST_CASE("score writes POPS and reports counts")
{
    TempDir dir;
    {
        std::ofstream csv(dir / "tiny.csv");
        csv << "A,B,C\n0,1,0\n1,1,0\n0,0,1\n1,0,1\n0,1,1\n";
    }
    const auto r = bnsl_run({"score", "--data", dir / "tiny.csv", "--max-parents", "2", "--out", dir / "s.txt"});
    REQUIRE(r.code == 0);
    const auto store = read_scores_file(dir / "s.txt");
    CHECK(store.total_pops() <= 12);
    CHECK(r.out.find("total " + std::to_string(store.total_pops())) != std::string::npos);

    make_instance(dir, 6, 500, 9);
    REQUIRE(bnsl_run({"score", "--data", dir / "data.csv", "--max-parents", "3", "--no-prune", "--out",
                      dir / "raw.txt"})
                .code == 0);
    const auto pruned = read_scores_file(dir / "scores.txt");
    const auto raw = read_scores_file(dir / "raw.txt");
    for (VariableId x = 0; x < 6; ++x) {
        for (std::uint64_t bits = 0; bits < 64; ++bits) {
            const VarSet u(bits);
            if (u.contains(x)) continue;
            CHECK(pruned.best_score(x, u) == raw.best_score(x, u));
        }
    }
    CHECK(round_trip(pruned) == pruned);
    CHECK(bnsl_run({"score", "--data", dir / "nope.csv", "--max-parents", "2", "--out", dir / "x.txt"}).code == 2);
}

TEST_CASE("solve: algorithms agree and routes agree")
{
    TempDir dir;
    make_instance(dir, 9, 1000, 21);
    const auto astar = bnsl_run({"solve", "--scores", dir / "scores.txt", "--alg", "astar", "--out", dir / "a.net"});
    REQUIRE(astar.code == 0);
    CHECK(field(astar.out, "proved_optimal") == "true");
    for (const std::string alg : {"wastar", "aweia", "ara", "awina"}) {
        std::vector<std::string> args{"solve", "--scores", dir / "scores.txt", "--alg", alg, "--trace", dir / "t.csv"};
        if (alg == "wastar") args.insert(args.end(), {"--epsilon", "1"});
        const auto r = bnsl_run(args);
        REQUIRE(r.code == 0);
        CHECK(field(r.out, "score") == field(astar.out, "score"));
        CHECK(field(r.out, "proved_optimal") == "true");
        CHECK(slurp(dir / "t.csv").rfind("elapsed_ms,event,", 0) == 0);
    }
    const auto via_data = bnsl_run({"solve", "--data", dir / "data.csv", "--max-parents", "3", "--alg", "astar",
                                    "--out", dir / "b.net"});
    REQUIRE(via_data.code == 0);
    CHECK(field(via_data.out, "score") == field(astar.out, "score"));
    CHECK(slurp(dir / "a.net") == slurp(dir / "b.net"));
    const auto simple = bnsl_run({"solve", "--scores", dir / "scores.txt", "--alg", "ara", "--heuristic", "simple"});
    CHECK(field(simple.out, "score") == field(astar.out, "score"));
    const auto groups = bnsl_run({"solve", "--scores", dir / "scores.txt", "--alg", "astar", "--pd-groups", "0-2:3,5:4,6-8"});
    REQUIRE(groups.code == 0);
    CHECK(field(groups.out, "score") == field(astar.out, "score"));
}

TEST_CASE("solve flag validation and exit codes")
{
    TempDir dir;
    make_instance(dir, 8, 300, 5);
    const auto s = dir / "scores.txt";
    CHECK(bnsl_run({"solve", "--scores", s, "--alg", "astar", "--epsilon", "1.5"}).code == 2);
    CHECK(bnsl_run({"solve", "--scores", s, "--alg", "aweia", "--window", "2"}).code == 2);
    CHECK(bnsl_run({"solve", "--scores", s, "--alg", "aweia", "--epsilon-step", "0.1"}).code == 2);
    CHECK(bnsl_run({"solve", "--scores", s, "--alg", "bogus"}).code == 2);
    CHECK(bnsl_run({"solve", "--alg", "astar"}).code == 2);
    CHECK(bnsl_run({"solve", "--scores", s, "--data", dir / "data.csv", "--alg", "astar"}).code == 2);
    CHECK(bnsl_run({"solve", "--data", dir / "data.csv", "--alg", "astar"}).code == 2);
    CHECK(bnsl_run({"solve", "--scores", s, "--alg", "astar", "--heuristic", "simple", "--pd-groups", "0-7"}).code == 2);
    CHECK(bnsl_run({"solve", "--scores", s, "--alg", "astar", "--pd-groups", "0-3:3-7"}).code == 2);
    CHECK(bnsl_run({"solve", "--scores", s, "--alg", "ara", "--epsilon", "0.5"}).code == 2);

    const auto limited =
        bnsl_run({"solve", "--scores", s, "--alg", "astar", "--heuristic", "simple", "--node-limit", "3"});
    CHECK(limited.code == 3);
    CHECK(field(limited.out, "score") == "none");
    CHECK(field(limited.out, "error_bound") == "inf");
}

TEST_CASE("anytime solve under a tiny time limit on a larger instance")
{
    TempDir dir;
    REQUIRE(bnsl_run({"gen-net", "--vars", "25", "--max-parents", "3", "--seed", "2", "--out", dir / "net.txt"}).code ==
            0);
    REQUIRE(bnsl_run({"sample", "--net", dir / "net.txt", "--records", "2000", "--seed", "2", "--out", dir / "d.csv"})
                .code == 0);
    REQUIRE(bnsl_run({"score", "--data", dir / "d.csv", "--max-parents", "3", "--out", dir / "s.txt"}).code == 0);
    const auto r = bnsl_run({"solve", "--scores", dir / "s.txt", "--alg", "awina", "--time-limit-ms", "1"});
    CHECK(r.code == 0);
    CHECK(field(r.out, "score") != "none");
    CHECK(std::stod(field(r.out, "error_bound")) > 1.0);
}

TEST_CASE("analyze")
{
    TempDir dir;
    make_instance(dir, 8, 400, 13);
    const auto self = bnsl_run({"analyze", "--shd", dir / "net.txt", dir / "net.txt"});
    CHECK(self.code == 0);
    CHECK(self.out == "0\n");

    const auto census = bnsl_run({"analyze", "--scores", dir / "scores.txt", "--census", dir / "census.csv",
                                  "--histogram", dir / "hist.csv", "--records", "400"});
    REQUIRE(census.code == 0);
    std::ifstream in(dir / "census.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "layer,node_count,mean_f,mean_parent_set_size");
    std::uint64_t nodes = 0;
    while (std::getline(in, line) && line[0] != '#') nodes += std::stoull(line.substr(line.find(',') + 1));
    CHECK(nodes == 256);
    CHECK(line.rfind("# n=8 total_nodes=256", 0) == 0);
    CHECK(slurp(dir / "hist.csv").rfind("bin_lo,bin_hi,count\n", 0) == 0);

    CHECK(bnsl_run({"analyze", "--scores", dir / "scores.txt", "--histogram", dir / "h.csv"}).code == 2);
    CHECK(bnsl_run({"analyze", "--scores", dir / "scores.txt", "--census", dir / "c.csv", "--census-limit", "7"})
              .code == 2);
    CHECK(bnsl_run({"analyze"}).code == 2);

    const auto avg = bnsl_run({"analyze", "--avg-parents", dir / "net.txt"});
    REQUIRE(avg.code == 0);
    const auto net = read_structure_file(dir / "net.txt");
    CHECK(std::stod(avg.out) == doctest::Approx(static_cast<double>(net.num_arcs()) / 8.0).epsilon(1e-6));
}

TEST_CASE("end-to-end pipeline is byte-identical across runs")
{
    TempDir a;
    TempDir b;
    for (const auto* dir : {&a, &b}) {
        make_instance(*dir, 8, 800, 99);
        const auto r = bnsl_run({"solve", "--scores", *dir / "scores.txt", "--alg", "ara", "--trace",
                                 *dir / "trace.csv", "--out", *dir / "learned.net"});
        REQUIRE(r.code == 0);
    }
    for (const std::string f : {"net.txt", "data.csv", "scores.txt", "learned.net"}) CHECK(slurp(a / f) == slurp(b / f));
}

TEST_CASE("installed binary honours the exit-code contract")
{
    const char* exe = std::getenv("BNSL_CLI");
    if (exe == nullptr) return;
    const std::string bin = exe;
    CHECK(std::system((bin + " --help > /dev/null").c_str()) == 0);
    CHECK(WEXITSTATUS(std::system((bin + " gen-net --vars 4 --max-parents 0 2> /dev/null").c_str())) == 2);
    CHECK(WEXITSTATUS(std::system((bin + " frobnicate 2> /dev/null > /dev/null").c_str())) == 2);
}
