#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "cusplab/cli.hpp"

using namespace cusplab;
using json = nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "cusplab");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

// Orbits of binary strings under rotation and complement, by brute force.
std::size_t orbit_count(int len) {
    std::set<std::set<std::string>> orbits;
    for (unsigned m = 0; m < (1u << len); ++m) {
        std::string w;
        for (int i = 0; i < len; ++i) w += (m >> i & 1) ? 'R' : 'L';
        std::set<std::string> orbit;
        for (int flip = 0; flip < 2; ++flip)
            for (int r = 0; r < len; ++r) {
                std::string s = w.substr(r) + w.substr(0, r);
                if (flip)
                    for (char& c : s) c = c == 'R' ? 'L' : 'R';
                orbit.insert(s);
            }
        orbits.insert(orbit);
    }
    return orbits.size() - 1;  // drop the single-letter words
}

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
    auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream(p) << text;
    return p;
}

} // namespace

TEST_CASE("corpus") {
    CHECK(cli::corpus(2) == std::vector<std::string>{"RL"});
    CHECK(cli::corpus(3) == std::vector<std::string>{"RL", "RRL"});
    for (int max_len = 2; max_len <= 10; ++max_len) {
        std::size_t want = 0;
        for (int len = 2; len <= max_len; ++len) want += orbit_count(len);
        CHECK(cli::corpus(max_len).size() == want);
    }
    for (const auto& w : cli::corpus(8)) {
        CHECK(w.find('L') != std::string::npos);
        CHECK(w.find('R') != std::string::npos);
    }
    CHECK_THROWS_AS(cli::corpus(1), Error);
}

TEST_CASE("farey-dist") {
    auto r = run({"farey-dist", "0/1", "2/5"});
    CHECK(r.code == 0);
    CHECK(r.out == "2\n");
    CHECK(run({"farey-dist", "inf", "0/1"}).out == "1\n");
    CHECK(run({"farey-dist", "0/0", "1/2"}).code == 2);
    CHECK(run({"farey-dist", "1/2"}).code == 2);
}

TEST_CASE("usage errors") {
    CHECK(run({}).code == 2);
    CHECK(run({"no-such-command"}).code == 2);
    auto r = run({"verify-thm14", "--max-word-len", "0"});
    CHECK(r.code == 2);
    CHECK(r.err.find("--max-word-len") != std::string::npos);
    CHECK(run({"bundle-report", "RL", "--init", "bogus"}).code == 2);
    CHECK(run({"bundle-report", "RRRR"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("bundle-report") {
    auto r = run({"bundle-report", "RL"});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["schema"] == 1);
    CHECK(j["config"]["word"] == "RL");
    CHECK(j["config"]["depth"] == 8);
    CHECK(j["versions"]["cusplab"] == cli::kVersion);
    CHECK(j["cusp_area"].get<double>() == doctest::Approx(3.464102).epsilon(1e-6));
    CHECK(j["residual"].get<double>() < 1e-12);
    CHECK(j["shapes"].size() == 2);
    CHECK(run({"bundle-report", "RL", "--init", "regular"}).code == 0);
    // A node cap is not exposed, but an impossible tolerance is a numerical failure.
    CHECK(run({"bundle-report", "RRL", "--tol", "1e-300"}).code == 3);
}

TEST_CASE("arc-dist") {
    auto r = run({"arc-dist", "slope 0/1", "slope 2/5"});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["distance"] == 2);
    CHECK(j["status"] == "Exact");
    CHECK(j["path"].size() == 3);
    CHECK(run({"arc-dist", "slope 0/1", "garbage"}).code == 2);
}

TEST_CASE("corpus verification is deterministic across thread counts") {
    auto csv = std::filesystem::temp_directory_path() / "cusplab_corpus.csv";
    setenv("CUSPLAB_THREADS", "1", 1);
    auto one = run({"verify-thm14", "--max-word-len", "4", "--n-max", "2", "--out", csv.string()});
    std::ifstream f(csv);
    std::string header;
    std::getline(f, header);
    CHECK(header.starts_with("word,area,longitude,height,d1,d2,stable_upper"));
    setenv("CUSPLAB_THREADS", "3", 1);
    auto three = run({"verify-thm14", "--max-word-len", "4", "--n-max", "2", "--out", csv.string()});
    unsetenv("CUSPLAB_THREADS");
    CHECK(one.code == 0);
    CHECK(one.out == three.out);
    auto j = json::parse(one.out);
    CHECK(j["words"] == cli::corpus(4).size());
    CHECK(j["violations"] == 0);
    CHECK(j["inconclusive"] == 0);
}

TEST_CASE("verify-lifting") {
    auto cover = temp_file("cusplab_cover.tri",
                           "surface S_1_1 preferred_puncture 0\n"
                           "tri 0: 1.0 1.1 1.2\n"
                           "tri 1: 0.0 0.1 0.2\n"
                           "rep 0: 0 1 2\n"
                           "rep 1: 1 0 2\n"
                           "rep 2: 0 2 1\n");
    auto pairs = temp_file("cusplab_pairs.json", R"({"pairs": [["slope 0/1", "slope 1/0"], ["slope 0/1", "slope 5/2"]]})");
    auto r = run({"verify-lifting", "--cover", cover.string(), "--pairs", pairs.string()});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["degree"] == 3);
    CHECK(j["checks"].size() == 18);
    for (const auto& c : j["checks"]) {
        CHECK(c["upper"] == "PASS");
        CHECK(c["lower"] == "VACUOUS");
    }
    auto cv = cli::parse_cover("surface S_1_1 preferred_puncture 0\ntri 0: 1.0 1.1 1.2\ntri 1: 0.0 0.1 0.2\nrep 0: 0 1 2\n"
                               "rep 1: 1 0 2\nrep 2: 0 2 1\n");
    CHECK(cv.lifted.num_punctures() == 1);
    CHECK_THROWS_AS(cli::parse_cover("surface S_1_1 preferred_puncture 0\ntri 0: 1.0 1.1 1.2\ntri 1: 0.0 0.1 0.2\n"), Error);
}

TEST_CASE("lemma-suite") {
    auto r = run({"lemma-suite", "--samples", "2000"});
    CHECK(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["config"]["seed"] == 0);
    for (const auto& l : j["lemmas"]) CHECK(l["status"] == "PASS");
    CHECK(run({"lemma-suite", "--samples", "2000"}).out == r.out);
}
