#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = FLATCLUSTER_CLI;

struct Scratch {
    fs::path dir;
    Scratch() {
        dir = fs::temp_directory_path() / ("flatcluster_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    std::string operator()(const std::string& name) const { return (dir / name).string(); }
};

int run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + (env.empty() ? "" : " ") + "'" + kCli + "' " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::size_t count(const std::string& s, const std::string& needle) {
    std::size_t n = 0;
    for (std::size_t pos = 0; (pos = s.find(needle, pos)) != std::string::npos; pos += needle.size()) ++n;
    return n;
}

std::size_t accepted_rows(const std::string& csv) {
    std::istringstream rows(csv);
    std::string line;
    std::getline(rows, line);
    std::size_t accepted = 0;
    while (std::getline(rows, line)) {
        std::size_t comma = 0;
        for (int f = 0; f < 3; ++f) comma = line.find(',', comma) + 1;
        accepted += line[comma] == '1' ? 1 : 0;
    }
    return accepted;
}

}  // namespace

TEST_CASE("generate writes the two-ball dataset deterministically") {
    Scratch tmp;
    const std::string flags = "generate --d 30 --k 10 --centers two-ball:200 --per-cluster 10 --seed 7";
    REQUIRE(run(flags + " --out " + tmp("a.json")) == 0);
    REQUIRE(run(flags + " --out " + tmp("b.json")) == 0);
    const auto doc = nlohmann::json::parse(slurp(tmp("a.json")));
    CHECK(doc["flats"].size() == 20);
    CHECK(doc["d"] == 30);
    CHECK(slurp(tmp("a.json")) == slurp(tmp("b.json")));
    CHECK(run(flags + " --out " + tmp("c.json"), "FLATCLUSTER_THREADS=3") == 0);
    CHECK(slurp(tmp("a.json")) == slurp(tmp("c.json")));
}

TEST_CASE("generate rejects invalid configurations") {
    Scratch tmp;
    CHECK(run("generate --d 30 --k 10 --centers two-ball:200 --per-cluster 0 --out " + tmp("x.json")) == 2);
    CHECK(run("generate --d 30 --k 20 --centers two-ball:200 --per-cluster 3 --out " + tmp("x.json")) == 2);
    CHECK(run("generate --d 30 --k 10 --centers two-ball:1 --per-cluster 3 --delta 5") == 2);
    CHECK(run("generate --d 30") == 2);
    CHECK(run("frobnicate") == 2);
    CHECK(run("generate --d 30 --k 10 --centers two-ball:200 --per-cluster 2 --out /nonexistent/dir/x.json") == 3);
    CHECK(run("verify --check S1 --samples 200", "FLATCLUSTER_THREADS=lots") == 2);
}

TEST_CASE("cluster on the two-ball dataset") {
    Scratch tmp;
    REQUIRE(run("generate --d 30 --k 10 --centers two-ball:200 --per-cluster 10 --seed 7 --out " +
                tmp("d.json")) == 0);
    REQUIRE(run("cluster --in " + tmp("d.json") + " --min-size 10 --out " + tmp("r.json") + " --midpoints " +
                tmp("m.csv")) == 0);
    const auto result = nlohmann::json::parse(slurp(tmp("r.json")));
    CHECK(result["clusters"].size() == 2);
    CHECK(result["accepted_pairs"] == 90);
    CHECK(result["rejected_pairs"] == 100);
    const std::string csv = slurp(tmp("m.csv"));
    CHECK(count(csv, "\r\n") == 191);
    CHECK(accepted_rows(csv) == 90);

    REQUIRE(run("cluster --in " + tmp("d.json") + " --min-size 10 --threshold 0 --out " + tmp("z.json") +
                " --midpoints " + tmp("z.csv")) == 0);
    CHECK(nlohmann::json::parse(slurp(tmp("z.json")))["clusters"].empty());
    CHECK(count(slurp(tmp("z.csv")), "\r\n") == 191);
    CHECK(accepted_rows(slurp(tmp("z.csv"))) == 0);

    for (const std::string mode : {"recursive --clusters 2", "sampled --sample-size 12 --seed 3"}) {
        REQUIRE(run("cluster --in " + tmp("d.json") + " --min-size 5 --mode " + mode + " --out " + tmp("o.json")) == 0);
        CHECK(nlohmann::json::parse(slurp(tmp("o.json")))["clusters"].size() == 2);
    }
}

TEST_CASE("cluster input errors") {
    Scratch tmp;
    CHECK(run("cluster --in " + tmp("missing.json") + " --min-size 1") == 3);
    std::ofstream(tmp("bad.json")) << "{\"format_version\": 1, \"d\": 3";
    CHECK(run("cluster --in " + tmp("bad.json") + " --min-size 1") == 2);
    std::ofstream(tmp("mixed.json"))
        << R"({"format_version":1,"d":3,"k":1,"flats":[{"base":[0,0,0],"dirs":[[1,0,0]]},{"base":[0,0],"dirs":[[0,1]]}]})";
    CHECK(run("cluster --in " + tmp("mixed.json") + " --min-size 1") == 2);
    CHECK(run("cluster --in " + tmp("missing.json")) == 2);
    CHECK(run("cluster --in " + tmp("bad.json") + " --min-size 1 --mode fancy") == 2);
}

TEST_CASE("verify checks and records") {
    Scratch tmp;
    CHECK(run("verify --check S1 --d 30 --k 10 --records " + tmp("s1.jsonl")) == 0);
    const auto rec = nlohmann::json::parse(slurp(tmp("s1.jsonl")));
    CHECK(rec["pass"] == true);
    CHECK(rec["ci99"][1].get<double>() < 2.0);
    CHECK(run("verify --check disk --samples 100000") == 0);
    CHECK(run("verify --check tangent --samples 100000") == 0);
    CHECK(run("verify --check nonsense") == 2);
    CHECK(run("verify --check disk --samples 500") == 2);
}

TEST_CASE("experiment writes per-dimension CSVs deterministically") {
    Scratch tmp;
    REQUIRE(run("experiment --dims 9,30 --out-dir " + tmp("a")) == 0);
    REQUIRE(run("experiment --dims 9,30 --out-dir " + tmp("b")) == 0);
    for (const std::string f : {"midpoints_d9.csv", "midpoints_d30.csv", "experiment_summary.csv"}) {
        CHECK(fs::exists(tmp("a") + "/" + f));
        CHECK(slurp(tmp("a") + "/" + f) == slurp(tmp("b") + "/" + f));
    }
    const std::string summary = slurp(tmp("a") + "/experiment_summary.csv");
    CHECK(count(summary, "\r\n") == 3);
    CHECK(summary.find("\r\n30,10,190,90,100,90,100,2,") != std::string::npos);
    CHECK(run("experiment --dims 10 --out-dir " + tmp("c")) == 0);
    CHECK(fs::exists(tmp("c") + "/midpoints_d10.csv"));
    CHECK(run("experiment --dims 2 --out-dir " + tmp("c")) == 2);
}
