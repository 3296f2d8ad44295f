#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "satqkd/numerics.hpp"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(SATQKD_CLI) + " " + args + " >/dev/null 2>&1";
    const int s = std::system(cmd.c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
}

fs::path scratch(const char* name) {
    auto p = fs::temp_directory_path() / (std::string("satqkd_cli_") + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("cli: success writes files") {
    const auto d = scratch("ok");
    CHECK(run("loss-budget --grid 0:10:5 --out " + d.string()) == 0);
    CHECK(fs::exists(d / "loss_budget.csv"));
    CHECK(run("atmosphere-tables --out " + d.string()) == 0);
    CHECK(fs::exists(d / "standard_atmosphere.csv"));
    CHECK(run("loss-budget --config " SATQKD_SOURCE_DIR "/configs/default.json --seed 7 --grid 0:5:5 --out " +
              d.string()) == 0);
    std::ifstream f(d / "loss_budget.csv");
    std::string l1, l2;
    std::getline(f, l1);
    std::getline(f, l2);
    CHECK(l2 == "# seed: 7");
}

TEST_CASE("cli: config errors exit 2") {
    const auto d = scratch("bad");
    CHECK(run("") == 2);
    CHECK(run("frobnicate") == 2);
    CHECK(run("loss-budget --preset fig4") == 2);
    CHECK(run("loss-budget --grid 0:95:1 --out " + d.string()) == 2);
    CHECK(run("loss-budget --config /nonexistent.json") == 2);
    std::ofstream(d / "bad.json") << R"({"beam": {"W0_m": 0.1, "colour": "red"}})";
    CHECK(run("loss-budget --config " + (d / "bad.json").string()) == 2);
    std::ofstream(d / "broken.json") << "{ not json";
    CHECK(run("loss-budget --config " + (d / "broken.json").string()) == 2);
    CHECK(run("loss-budget --preset fig2 --config " SATQKD_SOURCE_DIR "/configs/default.json") == 2);
}

TEST_CASE("cli: numerical failure exits 3") {
    const auto d = scratch("num");
    // strong turbulence and a Monte Carlo budget far too small for the requested precision
    std::ofstream(d / "tight.json") << R"({"mc": {"max_samples": 4096, "block_size": 4096, "target_rel_se": 1e-9},
                                            "turbulence": {"model": "exponential", "Cn0_sq": 1e-13, "H0_m": 1000},
                                            "sweep": {"grid": "30:30:1"}})";
    CHECK(run("turb-stats --config " + (d / "tight.json").string() + " --out " + d.string()) == 3);
}
