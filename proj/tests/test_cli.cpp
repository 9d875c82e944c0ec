#include <doctest.h>

#include "rwreset/cli.hpp"
#include "rwreset/common.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace rwreset;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string body(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    std::string out;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '#') continue;
        out += line + '\n';
    }
    return out;
}

std::vector<std::vector<std::string>> rows(const std::string& csv) {
    std::istringstream in(body(csv));
    std::string line;
    std::vector<std::vector<std::string>> out;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        out.push_back(cells);
    }
    return out;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path tmp(const std::string& name) {
    const fs::path dir = fs::path(RWRESET_TEST_TMP);
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("argument parsing") {
    CHECK(std::holds_alternative<GraphModel>(cli::parse_graph_spec("ws:100,2,0.7")));
    CHECK(std::get<cli::EdgeListFile>(cli::parse_graph_spec("edgelist:g.txt")).path == "g.txt");
    CHECK_THROWS_AS(cli::parse_graph_spec("ws:100,2"), ParseError);
    CHECK_THROWS_AS(cli::parse_graph_spec("grid:4"), ParseError);
    CHECK_THROWS_AS(cli::parse_law("geom:x"), ParseError);
    CHECK_THROWS_AS(cli::parse_law("geom:1.5"), ParameterError);
    const auto grid = cli::parse_grid("0.1:0.5:5");
    REQUIRE(grid.size() == 5);
    CHECK(grid[2] == doctest::Approx(0.3));
    CHECK(grid.back() == 0.5);
    CHECK(cli::parse_grid("0.3:0.3:1").size() == 1);
    CHECK_THROWS_AS(cli::parse_grid("0:0.5:5"), ValidationError);
    CHECK_THROWS_AS(cli::parse_grid("0.5:0.2:5"), ValidationError);
    CHECK_THROWS_AS(cli::parse_grid("0.1:0.5"), ParseError);
}

TEST_CASE("exit codes") {
    CHECK(run({"--version"}).code == cli::kExitOk);
    CHECK(run({"kemeny-sweep", "--graph", "cc:3", "--pgrid", "0.5:0.5:1"}).code == cli::kExitOk);
    CHECK(run({"kemeny-sweep"}).code == cli::kExitConfig);
    CHECK(run({"frobnicate", "--graph", "cc:3"}).code == cli::kExitConfig);
    CHECK(run({"kemeny-sweep", "--graph", "cc:3", "--pgrid", "0:1:3"}).code == cli::kExitConfig);
    CHECK(run({"ness", "--graph", "cc:3"}).code == cli::kExitConfig);
    CHECK(run({"survival", "--graph", "cc:4", "--law", "geom:0.2"}).code == cli::kExitConfig);
    CHECK(run({"graph", "--graph", "ws:5,3,0.1"}).code == cli::kExitConfig);
    const Result sib = run({"ness", "--graph", "cc:4", "--law", "sibuya:0.5"});
    CHECK(sib.code == cli::kExitRegime);
    CHECK_FALSE(sib.err.empty());
    const auto r = rows(sib.out);
    CHECK(r[1][2] == "0");
    CHECK(std::stod(r[1][1]) == doctest::Approx(0.25));
}

TEST_CASE("complete graph Kemeny constant") {
    const Result r = run({"kemeny-sweep", "--graph", "cc:3", "--pgrid", "0.5:0.5:1"});
    const auto t = rows(r.out);
    REQUIRE(t.size() == 2);
    CHECK(t[0] == std::vector<std::string>{"p", "kemeny", "efficiency"});
    CHECK(std::stod(t[1][1]) == doctest::Approx(1.6).epsilon(1e-14));
    CHECK(std::stod(t[1][2]) == doctest::Approx(3 / 1.6).epsilon(1e-14));
}

TEST_CASE("output schemas") {
    const std::vector<std::string> base{"--graph", "ws:20,2,0.3", "--seed", "5"};
    auto with = [&](std::vector<std::string> extra) {
        std::vector<std::string> a = base;
        a.insert(a.begin(), extra.begin(), extra.end());
        return run(a);
    };
    CHECK(rows(with({"graph"}).out)[0] == std::vector<std::string>{"i", "degree"});
    CHECK(rows(with({"propagate", "--law", "geom:0.2", "--horizon", "3", "--start", "0"}).out).size() == 1 + 4 * 20);
    CHECK(rows(with({"ness", "--law", "geom:0.2"}).out)[0] == std::vector<std::string>{"j", "p", "ness_exists"});
    const auto mfpt = rows(with({"mfpt-sweep", "--pgrid", "0.1:0.9:3", "--pairs", "0:5,3:3"}).out);
    CHECK(mfpt[0] == std::vector<std::string>{"p", "kemeny", "efficiency", "mfpt_0_5", "mfpt_3_3"});
    CHECK(mfpt.size() == 4);
    const auto mfht = rows(with({"mfht-sweep", "--targets", "set:4", "--agrid", "0.2:0.8:4", "--start", "1"}).out);
    CHECK(mfht[0] == std::vector<std::string>{"alpha", "start", "mfht", "global_mfht", "regime"});
    CHECK(mfht.size() == 5);
    const auto surv = rows(with({"survival", "--law", "sibuya:0.5", "--targets", "set:4", "--horizon", "10", "--start", "2"}).out);
    CHECK(surv[0] == std::vector<std::string>{"i", "t", "survival", "fht_pdf"});
    CHECK(surv.size() == 12);
    CHECK(surv[1][2] == "1");
    const auto occ = rows(with({"simulate", "--law", "geom:0.2", "--trials", "500", "--horizon", "5"}).out);
    CHECK(occ[0] == std::vector<std::string>{"j", "p", "se"});
    const auto rate = rows(with({"simulate", "--law", "geom:0.2", "--trials", "500", "--stat", "reset-rate"}).out);
    CHECK(rate[0] == std::vector<std::string>{"statistic", "value", "se", "trials", "censored"});
    CHECK(rate[1][0] == "reset_rate");
}

TEST_CASE("survival summary file") {
    const fs::path summary = tmp("summary.csv");
    const Result r = run({"survival", "--graph", "ws:20,2,0.3", "--law", "geom:0.3", "--targets", "set:4,9",
                          "--horizon", "50", "--summary", summary.string()});
    CHECK(r.code == cli::kExitOk);
    const std::string s = slurp(summary);
    CHECK(s.find("# regime: ergodic") != std::string::npos);
    const auto t = rows(s);
    CHECK(t[0] == std::vector<std::string>{"i", "mfht", "hitting_prob"});
    CHECK(t.size() == 21);
    CHECK(t[5][2] == "1");
}

TEST_CASE("provenance and reproducibility") {
    const std::vector<std::string> args{"simulate", "--graph", "ba:40,2", "--law", "sibuya:0.6",
                                        "--reloc", "uniform:0.3", "--trials", "2000", "--horizon", "20"};
    const Result a = run(args);
    const Result b = run(args);
    CHECK(a.out == b.out);
    CHECK(a.out.find("# seed: 1") != std::string::npos);
    CHECK(a.out.find("# r_nodes: ") != std::string::npos);
    std::vector<std::string> other = args;
    other.push_back("--seed");
    other.push_back("2");
    CHECK(body(run(other).out) != body(a.out));

    const fs::path dump = tmp("dump.csv");
    std::vector<std::string> d = args;
    d.insert(d.end(), {"--dump", dump.string(), "--dump-trials", "3"});
    CHECK(run(d).code == cli::kExitOk);
    const auto t = rows(slurp(dump));
    CHECK(t[0] == std::vector<std::string>{"trial", "t", "node", "event"});
    CHECK(t.size() == 1 + 3 * 20);
}

TEST_CASE("edge list round trip") {
    const fs::path path = tmp("graph.txt");
    CHECK(run({"graph", "--graph", "ws:30,2,0.4", "--seed", "9", "--emit-edgelist", "--out", path.string()}).code ==
          cli::kExitOk);
    const Result gen = run({"graph", "--graph", "ws:30,2,0.4", "--seed", "9"});
    const Result loaded = run({"graph", "--graph", "edgelist:" + path.string()});
    CHECK(loaded.code == cli::kExitOk);
    CHECK(body(gen.out) == body(loaded.out));
    const Result k1 = run({"kemeny-sweep", "--graph", "ws:30,2,0.4", "--seed", "9", "--pgrid", "0.1:0.9:9"});
    const Result k2 = run({"kemeny-sweep", "--graph", "edgelist:" + path.string(), "--pgrid", "0.1:0.9:9"});
    CHECK(body(k1.out) == body(k2.out));
}

TEST_CASE("config file") {
    const fs::path cfg = tmp("run.ini");
    {
        std::ofstream f(cfg);
        f << "graph=ws:30,2,0.4\nseed=9\npgrid=0.1:0.9:9\n";
    }
    const Result direct = run({"kemeny-sweep", "--graph", "ws:30,2,0.4", "--seed", "9", "--pgrid", "0.1:0.9:9"});
    const Result from_file = run({"kemeny-sweep", "--config", cfg.string()});
    CHECK(from_file.code == cli::kExitOk);
    CHECK(from_file.out == direct.out);
    const Result overridden = run({"kemeny-sweep", "--config", cfg.string(), "--pgrid", "0.5:0.5:1"});
    CHECK(rows(overridden.out).size() == 2);
}

TEST_CASE("output file matches stdout") {
    const fs::path path = tmp("ness.csv");
    const std::vector<std::string> args{"ness", "--graph", "ba:50,3", "--law", "period:4", "--reloc", "degree:0.2"};
    const Result direct = run(args);
    std::vector<std::string> to_file = args;
    to_file.insert(to_file.end(), {"--out", path.string()});
    CHECK(run(to_file).code == cli::kExitOk);
    CHECK(slurp(path) == direct.out);
    double total = 0.0;
    for (const auto& r : rows(direct.out)) {
        if (r[0] != "j") total += std::stod(r[1]);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}
