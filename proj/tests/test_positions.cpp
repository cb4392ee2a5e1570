#include "doctest.h"

#include "dlpx/random_program.hpp"
#include "support.hpp"

using namespace dlpx;
using namespace dlpx::testing;

namespace {

Position pos(const char* pred, int i) { return {pred, i}; }

std::set<PositionEdge> edges(std::initializer_list<PositionEdge> e) { return e; }

const char* const kRecursive = "r(Y,Z) <- r(X,Y).";
const char* const kTwoRuleJws = "s(X,Y) <- u(X).\nu(Y) <- s(X,Y), v(Y).";

}  // namespace

TEST_SUITE("positions") {

TEST_CASE("dependency graph of the assist program") {
    const auto g = buildDependencyGraph(corpus("sigma1").tgds);
    CHECK(g.regularEdges == edges({{pos("assist", 1), pos("nurse", 1)},
                                   {pos("assist", 2), pos("nurse", 1)},
                                   {pos("assist", 2), pos("nurse", 2)},
                                   {pos("nurse", 1), pos("specialist", 1)},
                                   {pos("nurse", 2), pos("specialist", 2)},
                                   {pos("specialist", 2), pos("doctor", 1)}}));
    CHECK(g.specialEdges == edges({{pos("nurse", 1), pos("specialist", 3)},
                                   {pos("nurse", 2), pos("specialist", 3)}}));
}

TEST_CASE("dependency graph of the recursive rule") {
    const auto g = buildDependencyGraph(parseProgram(kRecursive).tgds);
    CHECK(g.regularEdges == edges({{pos("r", 2), pos("r", 1)}}));
    CHECK(g.specialEdges == edges({{pos("r", 2), pos("r", 2)}}));
}

TEST_CASE("rules without existential or frontier variables have no edges") {
    const auto g = buildDependencyGraph(parseProgram("p(a) <- q(X).").tgds);
    CHECK(g.regularEdges.empty());
    CHECK(g.specialEdges.empty());
}

TEST_CASE("finite rank") {
    CHECK(finiteRankPositions(corpus("sigma1").tgds).positions == schemaPositions(corpus("sigma1").tgds));
    CHECK(finiteRankPositions(parseProgram(kRecursive).tgds).positions.empty());
    CHECK(finiteRankPositions({}).positions.empty());
    CHECK((finiteRankPositions({}).method == FinitenessMethod::Rank));
}

TEST_CASE("existential dependency graph") {
    const auto rec = buildEDG(parseProgram(kRecursive).tgds);
    REQUIRE(rec.nodes.size() == 1);
    CHECK(rec.nodes[0].label() == "r1.Z");
    CHECK(rec.moveSets[0] == PositionSet{pos("r", 1), pos("r", 2)});
    CHECK(rec.edges == std::set<std::pair<std::size_t, std::size_t>>{{0, 0}});
    CHECK_FALSE(rec.isAcyclic());

    const auto s1 = buildEDG(corpus("sigma1").tgds);
    REQUIRE(s1.nodes.size() == 1);
    CHECK(s1.nodes[0].label() == "r2.Z");
    CHECK(s1.moveSets[0] == PositionSet{pos("specialist", 3)});
    CHECK(s1.edges.empty());

    CHECK(buildEDG(parseProgram("p(X) <- q(X).").tgds).nodes.empty());
}

TEST_CASE("EDG finite positions") {
    CHECK(extFinitePositions(parseProgram(kRecursive).tgds).positions.empty());
    const auto jws = parseProgram(kTwoRuleJws).tgds;
    CHECK(extFinitePositions(jws).positions == schemaPositions(jws));
    CHECK(extFinitePositions(corpus("sigma1").tgds).positions == schemaPositions(corpus("sigma1").tgds));
    CHECK((extFinitePositions(corpus("sigma1").tgds).method == FinitenessMethod::Edg));
}

TEST_CASE("positions reachable from an EDG cycle are infinite") {
    // r1.Z feeds itself; the value also flows into q[1] via the second rule.
    const auto tgds = parseProgram("r(Y,Z) <- r(X,Y).\nq(Y) <- r(X,Y).\nt(X) <- s(X).").tgds;
    const auto finite = extFinitePositions(tgds).positions;
    CHECK_FALSE(finite.count(pos("q", 1)));
    CHECK(finite.count(pos("t", 1)));
    CHECK(finite.count(pos("s", 1)));
}

TEST_CASE("affected positions") {
    CHECK(affectedPositions(corpus("sigma1").tgds) == PositionSet{pos("specialist", 3)});
    CHECK(affectedPositions(parseProgram(kRecursive).tgds) == PositionSet{pos("r", 1), pos("r", 2)});
}

TEST_CASE("user-supplied finite positions") {
    const auto s = parseFinitePositions("nurse[1], nurse[2] % comment\nassist[1]");
    CHECK((s.method == FinitenessMethod::UserOverride));
    CHECK(s.positions == PositionSet{pos("nurse", 1), pos("nurse", 2), pos("assist", 1)});
    CHECK_THROWS_AS(parseFinitePositions("nurse[0]"), Error);
    CHECK_THROWS_AS(parseFinitePositions("nurse"), Error);
}

TEST_CASE("dot output marks special edges") {
    const auto dot = toDot(buildDependencyGraph(parseProgram(kRecursive).tgds));
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("dashed") != std::string::npos);
}

TEST_CASE("rank agrees with path enumeration; rank is contained in ext") {
    RandomProgramGenerator gen(20261018);
    for (int i = 0; i < 300; ++i) {
        const auto p = gen.program();
        CAPTURE(render(p));
        const auto g = buildDependencyGraph(p.tgds);
        const auto rank = finiteRankPositions(p.tgds).positions;
        CHECK(rank == oracleFiniteRank(g));
        CHECK(subset(rank, extFinitePositions(p.tgds).positions));
    }
}

TEST_CASE("analyses ignore the facts") {
    RandomProgramGenerator gen(7);
    for (int i = 0; i < 50; ++i) {
        auto p = gen.program();
        const auto rank = finiteRankPositions(p.tgds).positions;
        const auto ext = extFinitePositions(p.tgds).positions;
        for (auto& f : gen.facts(p))
            p.addFact(f);
        CHECK(finiteRankPositions(p.tgds).positions == rank);
        CHECK(extFinitePositions(p.tgds).positions == ext);
    }
}

}  // TEST_SUITE
