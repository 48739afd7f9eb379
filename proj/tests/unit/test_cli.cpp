// Drives the dmapper executable end to end.
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

const fs::path& workdir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("dmapper_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string path(const std::string& name) { return (workdir() / name).string(); }

int cli(const std::string& args) {
    const std::string cmd = std::string(DMAPPER_CLI_PATH) + " " + args + " >" + path("stdout.txt") + " 2>" + path("stderr.txt");
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write(const std::string& p, const std::string& text) { std::ofstream(p) << text; }

const std::string& circles() {
    static const std::string p = [] {
        const std::string out = path("circles.csv");
        REQUIRE(cli("gen disjoint-circles --count 400 --seed 3 -o " + out) == 0);
        return out;
    }();
    return p;
}

}  // namespace

TEST_CASE("gen writes the requested number of rows") {
    const std::string text = slurp(circles());
    CHECK(std::count(text.begin(), text.end(), '\n') == 800);
}

TEST_CASE("run is deterministic and its config reproduces it") {
    const std::string base = "run -i " + circles() + " --mode classic -n 8 --p 0.2 --eps 0.3 --seed 5";
    REQUIRE(cli(base + " -o " + path("g1.json") + " --emit-config " + path("cfg.json")) == 0);
    REQUIRE(cli(base + " -o " + path("g2.json")) == 0);
    CHECK(slurp(path("g1.json")) == slurp(path("g2.json")));
    REQUIRE(cli("run --config " + path("cfg.json") + " -o " + path("g3.json")) == 0);
    CHECK(slurp(path("g1.json")) == slurp(path("g3.json")));

    const Json g = Json::parse(slurp(path("g1.json")));
    CHECK(g["params"]["mode"] == "classic");
    CHECK(g["nodes"].size() > 2);
    const Json cfg = Json::parse(slurp(path("cfg.json")));
    CHECK(cfg["p"] == 0.2);
    CHECK_FALSE(cfg.contains("threads"));
}

TEST_CASE("diagram and bottleneck comparison") {
    REQUIRE(cli("run -i " + circles() + " --mode classic -n 8 --p 0.2 --eps 0.3 -o " + path("g.json")) == 0);
    REQUIRE(cli("diagram --graph " + path("g.json") + " -o " + path("d.json")) == 0);
    const Json d = Json::parse(slurp(path("d.json")));
    CHECK(d.is_array());
    REQUIRE(cli("diagram --graph " + path("g.json") + " --compare " + path("d.json")) == 0);
    CHECK(Json::parse(slurp(path("stdout.txt")))["bottleneck"] == 0.0);
    REQUIRE(cli("diagram --graph " + path("g.json") + " --compare " + path("g.json")) == 0);
    CHECK(Json::parse(slurp(path("stdout.txt")))["bottleneck"] == 0.0);
}

TEST_CASE("run writes DOT and cover") {
    REQUIRE(cli("run -i " + circles() + " -n 4 --alpha 0.05 --em-init kmeans --eps 0.3 -o " + path("gd.json") + " --dot " +
                path("g.dot") + " --emit-cover " + path("cover.json")) == 0);
    CHECK(slurp(path("g.dot")).rfind("graph mapper {", 0) == 0);
    const Json c = Json::parse(slurp(path("cover.json")));
    CHECK(c.contains("gmm"));
}

TEST_CASE("eval and tune produce reports") {
    const std::string common = " -i " + circles() + " --mode classic -n 6 --eps 0.3 --replicates 6 --seed 1";
    REQUIRE(cli("eval" + common + " --p 0.2 -o " + path("rep.json") + " --replicate-distances") == 0);
    const Json r = Json::parse(slurp(path("rep.json")));
    for (const char* key : {"sc", "sc_norm", "tsr", "sc_adj", "d_eps", "diagram"}) CHECK(r.contains(key));
    CHECK(r["replicate_distances"].size() == 6);

    REQUIRE(cli("tune" + common + " --grid 3 -o " + path("tune.json") + " --csv " + path("tune.csv")) == 0);
    const Json t = Json::parse(slurp(path("tune.json")));
    CHECK(t["upper"] == 0.5);
    const std::string csv = slurp(path("tune.csv"));
    CHECK(csv.rfind("index,p,sc,sc_norm,tsr,sc_adj", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("exit codes") {
    CHECK(cli("run -i " + circles() + " --mode classic --alpha 0.1") == 2);
    CHECK(cli("run -i " + path("missing.csv")) == 2);
    CHECK(cli("run --bogus") == 2);
    CHECK(cli("") == 2);
    write(path("bad.csv"), "1,2\n3,x\n");
    CHECK(cli("run -i " + path("bad.csv")) == 3);
    CHECK(slurp(path("stderr.txt")).find("line 2") != std::string::npos);
    write(path("badcfg.json"), "{\"alpah\": 0.1}");
    CHECK(cli("run --config " + path("badcfg.json")) == 2);
    CHECK(slurp(path("stderr.txt")).find("alpah") != std::string::npos);
    // a cover that misses points under --strict-cover
    CHECK(cli("run -i " + circles() + " -n 3 --alpha 0.9 --strict-cover") == 3);
}
