#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "support.hpp"

using namespace dlpx;
using namespace dlpx::testing;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::runCommand(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("classify as JSON") {
    const auto r = run({"classify", corpusPath("sigma1.dlp"), "--json"});
    REQUIRE(r.code == cli::kExitOk);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["sticky"] == false);
    CHECK(j["weakly_sticky"] == true);
}

TEST_CASE("query with finite rank") {
    const auto r = run({"query", corpusPath("sigma1.dlp"), "--query", "?(X) <- doctor(X).", "--finite-positions", "rank"});
    REQUIRE(r.code == cli::kExitOk);
    CHECK(r.out == "X=c\n");
}

TEST_CASE("missing program file") {
    const auto r = run({"classify", "does_not_exist.dlp"});
    CHECK(r.code == cli::kExitUserError);
    CHECK(r.err.find("does_not_exist.dlp") != std::string::npos);
}

TEST_CASE("user errors exit with status 1") {
    CHECK(run({"query", corpusPath("sigma1.dlp"), "--query", "?(X) <- nope(X)."}).code == cli::kExitUserError);
    CHECK(run({"query", corpusPath("sigma1.dlp"), "--query", "?(X) <- "}).code == cli::kExitUserError);
    CHECK(run({"chase", corpusPath("sigma1.dlp"), "--engine", "oblivious"}).code == cli::kExitUserError);
    CHECK(run({"chase", corpusPath("sigma1.dlp"), "--finite-positions", "bogus"}).code == cli::kExitUserError);
    CHECK(run({"bogus"}).code == cli::kExitUserError);
}

TEST_CASE("chase output and budget") {
    const auto r = run({"chase", corpusPath("sigma3_recursive.dlp"), "--engine", "standard", "--max-steps", "3", "--json"});
    REQUIRE(r.code == cli::kExitOk);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["terminated"] == false);
    CHECK(j["atoms"].size() == 4);
}

TEST_CASE("resumption override") {
    const auto args = std::vector<std::string>{"query", corpusPath("sigma3_recursive.dlp"), "--query",
                                               "?(X) <- r(X,Y), r(Y,Z)."};
    CHECK(run(args).out == "X=a\nX=b\n");
    auto zero = args;
    zero.insert(zero.end(), {"--resumptions", "0"});
    CHECK(run(zero).out == "X=a\n");
}

TEST_CASE("magic and plain answering agree") {
    for (const char* q : {"?(X) <- doctor(X).", "?() <- doctor(c).", "?(X,Y) <- nurse(X,Y)."}) {
        CAPTURE(q);
        const auto plain = run({"query", corpusPath("sigma1.dlp"), "--query", q});
        const auto magic = run({"query", corpusPath("sigma1.dlp"), "--query", q, "--magic"});
        CHECK(plain.code == 0);
        CHECK(plain.out == magic.out);
    }
}

TEST_CASE("user-supplied finite positions") {
    const auto path = std::filesystem::temp_directory_path() / "dlpx_finite.txt";
    std::ofstream(path) << "r[1] r[2]\n";
    const auto r = run({"query", corpusPath("sigma3_recursive.dlp"), "--query", "?(Y) <- r(b,Y).",
                        "--finite-positions", "user:" + path.string(), "--max-steps", "5"});
    CHECK(r.code == cli::kExitOk);
    CHECK(r.out.find("% complete=false") != std::string::npos);
    std::filesystem::remove(path);
}

TEST_CASE("outputs are deterministic") {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"chase", corpusPath("sigma1.dlp"), "--explain"},
             {"graph", corpusPath("sigma1.dlp"), "--kind", "both"},
             {"rewrite", corpusPath("sigma1.dlp"), "--query", "?() <- doctor(c).", "--verify-closure", "--json"},
             {"classify", corpusPath("sigma_jws.dlp"), "--check-chase", "--json"}}) {
        CHECK(run(args).out == run(args).out);
    }
}

TEST_CASE("selftest") {
    const auto r = run({"selftest", "--seed", "7", "--count", "20"});
    CHECK(r.code == cli::kExitOk);
    CHECK(r.out.find("failures=0") != std::string::npos);
}

}  // TEST_SUITE
