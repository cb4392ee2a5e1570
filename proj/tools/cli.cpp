#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "dlpx/chase.hpp"
#include "dlpx/parser.hpp"
#include "dlpx/positions.hpp"
#include "dlpx/random_program.hpp"

namespace dlpx::cli {

using nlohmann::json;

namespace {

// Invariant failures inside the engine; reported with exit status 2.
class InternalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string readText(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

FinitePositionSet resolveFinitePositions(const std::string& spec, const std::vector<Tgd>& tgds) {
    if (spec == "edg")
        return extFinitePositions(tgds);
    if (spec == "rank")
        return finiteRankPositions(tgds);
    if (spec == "none")
        return noFinitePositions();
    if (spec.rfind("user:", 0) == 0)
        return parseFinitePositions(readText(spec.substr(5)));
    throw Error("--finite-positions must be rank, edg, none or user:<file>, got '" + spec + "'");
}

struct Common {
    std::string programPath;
    std::string factsDir;
    bool json = false;

    Program load() const {
        Program p = loadProgramFile(programPath);
        if (!factsDir.empty())
            loadFactsDirectory(factsDir, p);
        return p;
    }
};

void addCommon(CLI::App* cmd, Common& common) {
    cmd->add_option("program", common.programPath, "Program file (.dlp)")->required();
    cmd->add_option("--facts-dir", common.factsDir, "Directory of <pred>.csv fact files");
    cmd->add_flag("--json", common.json, "JSON output");
}

struct QuerySource {
    std::string text;
    std::string file;

    Query load() const {
        if (!text.empty() && !file.empty())
            throw Error("pass either --query or --query-file, not both");
        if (!text.empty())
            return parseQuery(text);
        if (!file.empty())
            return loadQueryFile(file);
        throw Error("a query is required (--query or --query-file)");
    }
};

std::string yesNo(bool b) { return b ? "yes" : "no"; }

json positionsJson(const PositionSet& positions) {
    json out = json::array();
    for (const auto& p : positions)
        out.push_back(p.toString());
    return out;
}

int cmdClassify(const Common& common, bool checkChase, const std::string& finiteSpec,
                std::size_t maxSteps, std::ostream& out) {
    const Program program = common.load();
    const auto report = classifyProgram(program.tgds);
    if (report.sticky && !report.weaklySticky)
        throw InternalError("class lattice violated: sticky but not weakly-sticky");

    std::optional<StickinessOutcome> semantic;
    if (checkChase)
        semantic = checkChaseStickiness(program, resolveFinitePositions(finiteSpec, program.tgds), maxSteps);

    if (common.json) {
        json j = toJson(report);
        if (semantic) {
            if (std::holds_alternative<StickinessPass>(*semantic)) {
                j["chase_sticky"] = "pass";
            } else if (const auto* w = std::get_if<StickinessWitness>(&*semantic)) {
                j["chase_sticky"] = "witness";
                j["chase_witness"] = {{"value", w->value.toString()},
                                      {"rule", w->tgdId},
                                      {"repeated_variable", w->repeatedVariable},
                                      {"produced_atom", w->producedAtom.toString()},
                                      {"escape_atom", w->escapeAtom.toString()}};
            } else {
                j["chase_sticky"] = "inconclusive";
            }
        }
        out << j.dump(2) << "\n";
        return kExitOk;
    }
    auto row = [&](const char* name, bool value, const char* key) {
        out << name << std::string(24 - std::string(name).size(), ' ') << yesNo(value);
        if (auto it = report.witnesses.find(key); it != report.witnesses.end())
            out << "   % " << it->second;
        out << "\n";
    };
    row("sticky", report.sticky, "sticky");
    row("weakly-acyclic", report.weaklyAcyclic, "weakly_acyclic");
    row("jointly-acyclic", report.jointlyAcyclic, "jointly_acyclic");
    row("weakly-sticky", report.weaklySticky, "weakly_sticky");
    row("jointly-weakly-sticky", report.jointlyWeaklySticky, "jointly_weakly_sticky");
    if (semantic) {
        out << "chase-sticky            ";
        if (std::holds_alternative<StickinessPass>(*semantic))
            out << "pass\n";
        else if (const auto* w = std::get_if<StickinessWitness>(&*semantic))
            out << "witness   % " << w->toString() << "\n";
        else
            out << "inconclusive\n";
    }
    return kExitOk;
}

int cmdGraph(const Common& common, const std::string& kind, std::ostream& out) {
    const Program program = common.load();
    if (kind != "dg" && kind != "edg" && kind != "both")
        throw Error("--kind must be dg, edg or both");
    if (common.json) {
        json j;
        if (kind != "edg") {
            const auto g = buildDependencyGraph(program.tgds);
            json edges = json::array();
            for (const auto& [p, q] : g.regularEdges)
                edges.push_back({{"from", p.toString()}, {"to", q.toString()}, {"special", false}});
            for (const auto& [p, q] : g.specialEdges)
                edges.push_back({{"from", p.toString()}, {"to", q.toString()}, {"special", true}});
            j["dependency_graph"] = {{"nodes", positionsJson({g.nodes.begin(), g.nodes.end()})},
                                     {"edges", edges}};
        }
        if (kind != "dg") {
            const auto g = buildEDG(program.tgds);
            json nodes = json::array(), edges = json::array();
            for (std::size_t v = 0; v < g.nodes.size(); ++v)
                nodes.push_back({{"label", g.nodes[v].label()}, {"move_set", positionsJson(g.moveSets[v])}});
            for (const auto& [u, v] : g.edges)
                edges.push_back({{"from", g.nodes[u].label()}, {"to", g.nodes[v].label()}});
            j["edg"] = {{"nodes", nodes}, {"edges", edges}};
        }
        out << j.dump(2) << "\n";
        return kExitOk;
    }
    if (kind != "edg")
        out << toDot(buildDependencyGraph(program.tgds));
    if (kind != "dg")
        out << toDot(buildEDG(program.tgds));
    return kExitOk;
}

struct ChaseFlags {
    std::string engine = "standard";
    std::string finite = "edg";
    std::size_t maxSteps = kDefaultMaxSteps;
    std::size_t resumptions = 0;
    bool explain = false;
};

int cmdChase(const Common& common, const ChaseFlags& flags, std::ostream& out) {
    const Program program = common.load();
    ChaseConfig config;
    if (flags.engine == "standard")
        config.engine = ChaseEngine::Standard;
    else if (flags.engine == "pchase")
        config.engine = ChaseEngine::Parsimonious;
    else
        throw Error("--engine must be standard or pchase");
    config.finitePositions = resolveFinitePositions(flags.finite, program.tgds);
    config.maxSteps = flags.maxSteps;
    config.resumptions = flags.resumptions;
    const auto result = runChase(program, config);
    if (common.json) {
        json j = toJson(result);
        if (flags.explain)
            j["explain"] = explain(result.instance);
        out << j.dump(2) << "\n";
        return kExitOk;
    }
    out << (flags.explain ? explain(result.instance) : render(result.instance));
    out << "% terminated=" << (result.terminated ? "true" : "false") << " steps=" << result.stepsApplied
        << " resumptions=" << result.resumptionsUsed << " frozen_nulls=" << result.frozenNullCount << "\n";
    return kExitOk;
}

struct QueryFlags {
    QuerySource query;
    std::string finite = "edg";
    std::optional<std::size_t> resumptions;
    std::optional<std::size_t> maxSteps;
    bool magic = false;
    bool checkConstraints = false;
};

int cmdQuery(const Common& common, const QueryFlags& flags, std::ostream& out) {
    const Program program = common.load();
    const Query query = flags.query.load();
    QaOptions options;
    options.resumptions = flags.resumptions;
    options.maxSteps = flags.maxSteps;
    options.checkConstraints = flags.checkConstraints;

    AnswerSet answers;
    if (flags.magic) {
        const auto rewritten = magicRewrite(program, query);
        answers = answerRewritten(rewritten, resolveFinitePositions(flags.finite, rewritten.program.tgds), options);
    } else {
        answers = answerQuery(program, query, resolveFinitePositions(flags.finite, program.tgds), options);
    }
    for (const auto& tuple : answers.tuples)
        for (const auto& t : tuple)
            if (!t.isConstant())
                throw InternalError("answer tuple contains a non-constant " + t.toString());
    out << (common.json ? toJson(answers).dump(2) + "\n" : render(answers));
    return kExitOk;
}

int cmdRewrite(const Common& common, const QuerySource& querySource, bool verify, std::size_t cap,
               std::ostream& out) {
    const Program program = common.load();
    const Query query = querySource.load();
    MagicOptions options;
    options.maxAdornedPredicates = cap;
    const auto rewritten = magicRewrite(program, query, options);
    std::optional<ClosureReport> closure;
    if (verify)
        closure = verifyClosure(program, rewritten);
    if (common.json) {
        json j;
        j["program"] = render(rewritten.program);
        j["magic_predicates"] = rewritten.magicPredicates;
        j["answer_predicate"] = rewritten.answerPredicate.magicPredicate();
        if (closure)
            j["closure"] = toJson(*closure);
        out << j.dump(2) << "\n";
        return kExitOk;
    }
    out << render(rewritten.program);
    if (closure)
        out << toJson(*closure).dump(2) << "\n";
    return kExitOk;
}

int cmdSelftest(std::uint64_t seed, int count, std::ostream& out) {
    RandomProgramGenerator gen(seed);
    int failures = 0;
    for (int i = 0; i < count; ++i) {
        const Program p = gen.programWithFacts();
        const auto rank = finiteRankPositions(p.tgds);
        const auto ext = extFinitePositions(p.tgds);
        const auto report = classifyProgram(p.tgds);
        std::vector<std::string> problems;
        if (!std::includes(ext.positions.begin(), ext.positions.end(), rank.positions.begin(),
                           rank.positions.end()))
            problems.push_back("finite-rank positions not contained in EDG-finite positions");
        if ((report.sticky && !report.weaklySticky) || (report.weaklySticky && !report.jointlyWeaklySticky) ||
            (report.weaklyAcyclic && !report.weaklySticky) || (report.jointlyAcyclic && !report.jointlyWeaklySticky) ||
            (report.weaklyAcyclic && !report.jointlyAcyclic))
            problems.push_back("class implication lattice violated");
        auto noWitness = [&](bool member, const FinitePositionSet& s) {
            return !member || !std::holds_alternative<StickinessWitness>(checkChaseStickiness(p, s, 200));
        };
        if (!noWitness(report.sticky, noFinitePositions()) || !noWitness(report.weaklySticky, rank) ||
            !noWitness(report.jointlyWeaklySticky, ext))
            problems.push_back("syntactic class member has a chase-stickiness witness");
        if (report.jointlyAcyclic) {
            const Query q = gen.query(p);
            ChaseConfig config;
            config.maxSteps = 100'000;
            const auto oracle = extractAnswers(runStandardChase(p, config).instance, q);
            const auto answers = answerQuery(p, q, ext);
            if (oracle.tuples != answers.tuples || oracle.booleanResult != answers.booleanResult)
                problems.push_back("answers differ from the standard-chase oracle for " + q.toString());
        }
        if (!problems.empty()) {
            ++failures;
            out << "program " << i << ":\n" << render(p);
            for (const auto& msg : problems)
                out << "  FAIL " << msg << "\n";
        }
    }
    out << "selftest seed=" << seed << " programs=" << count << " failures=" << failures << "\n";
    return failures == 0 ? kExitOk : kExitInternalError;
}

}  // namespace

json toJson(const ClassReport& report) {
    return json{{"sticky", report.sticky},
                {"weakly_acyclic", report.weaklyAcyclic},
                {"jointly_acyclic", report.jointlyAcyclic},
                {"weakly_sticky", report.weaklySticky},
                {"jointly_weakly_sticky", report.jointlyWeaklySticky},
                {"witnesses", report.witnesses}};
}

json toJson(const AnswerSet& answers) {
    json tuples = json::array();
    for (const auto& tuple : answers.tuples) {
        json row = json::array();
        for (const auto& t : tuple)
            row.push_back(t.name());
        tuples.push_back(row);
    }
    json violations = json::array();
    for (const auto& v : answers.constraintViolations) {
        json witness = json::object();
        for (const auto& [var, term] : v.witness)
            witness[var] = term.toString();
        violations.push_back({{"kind", v.kind == Violation::Kind::Egd ? "egd" : "constraint"},
                              {"rule", v.ruleId},
                              {"witness", witness}});
    }
    return json{{"answer_vars", answers.answerVars},
                {"tuples", tuples},
                {"boolean", answers.isBoolean() ? json(answers.booleanResult) : json(nullptr)},
                {"complete", answers.complete},
                {"violations", violations}};
}

json toJson(const ChaseResult& result) {
    json atoms = json::array();
    for (const auto& a : result.instance.sortedAtoms())
        atoms.push_back(a.toString());
    return json{{"atoms", atoms},
                {"terminated", result.terminated},
                {"steps", result.stepsApplied},
                {"resumptions_used", result.resumptionsUsed},
                {"frozen_nulls", result.frozenNullCount}};
}

json toJson(const ClosureReport& report) {
    json characters = json::array();
    for (const auto& c : report.characters)
        characters.push_back({{"position", c.position.toString()},
                              {"finite_original", c.finiteInOriginal},
                              {"finite_rewritten", c.finiteInRewritten}});
    json dropped = json::array();
    for (const auto& p : report.droppedPositions)
        dropped.push_back(p.toString());
    return json{{"original", toJson(report.original)},
                {"rewritten", toJson(report.rewritten)},
                {"characters", characters},
                {"dropped_positions", dropped},
                {"characters_preserved", report.charactersPreserved},
                {"nulls_in_magic_positions", report.nullsInMagicPositions},
                {"test_chase_terminated", report.testChaseTerminated},
                {"closed", report.closed()}};
}

int runCommand(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Datalog+/- reasoning: program classes, chase, query answering, magic sets", "dlpx"};
    app.require_subcommand(1);

    Common common;

    auto* classify = app.add_subcommand("classify", "Syntactic class membership report");
    addCommon(classify, common);
    bool checkChase = false;
    std::string classifyFinite = "none";
    std::size_t classifySteps = 1000;
    classify->add_flag("--check-chase", checkChase, "Also run the bounded chase-stickiness check");
    classify->add_option("--finite-positions", classifyFinite, "Finite positions for --check-chase")
        ->capture_default_str();
    classify->add_option("--max-steps", classifySteps, "Step bound for --check-chase")->capture_default_str();

    auto* graph = app.add_subcommand("graph", "Dependency graph / EDG as DOT");
    addCommon(graph, common);
    std::string graphKind = "dg";
    graph->add_option("--kind", graphKind, "dg, edg or both")->capture_default_str();

    auto* chase = app.add_subcommand("chase", "Run a chase and print the instance");
    addCommon(chase, common);
    ChaseFlags chaseFlags;
    chase->add_option("--engine", chaseFlags.engine, "standard or pchase")->capture_default_str();
    chase->add_option("--finite-positions", chaseFlags.finite, "rank, edg, none or user:<file>")
        ->capture_default_str();
    chase->add_option("--max-steps", chaseFlags.maxSteps, "Step bound")->capture_default_str();
    chase->add_option("--resumptions", chaseFlags.resumptions, "Resumption rounds (pchase)")
        ->capture_default_str();
    chase->add_flag("--explain", chaseFlags.explain, "Print the provenance tree");

    auto* query = app.add_subcommand("query", "Answer a conjunctive query");
    addCommon(query, common);
    QueryFlags queryFlags;
    query->add_option("--query", queryFlags.query.text, "Query text, e.g. \"?(X) <- p(X).\"");
    query->add_option("--query-file", queryFlags.query.file, "File holding the query");
    query->add_option("--finite-positions", queryFlags.finite, "rank, edg, none or user:<file>")
        ->capture_default_str();
    query->add_option("--resumptions", queryFlags.resumptions, "Override the resumption count");
    query->add_option("--max-steps", queryFlags.maxSteps, "Step bound");
    query->add_flag("--magic", queryFlags.magic, "Answer over the magic-sets rewriting");
    query->add_flag("--check-constraints", queryFlags.checkConstraints, "Report egd/constraint violations");

    auto* rewrite = app.add_subcommand("rewrite", "Magic-sets rewriting for a query");
    addCommon(rewrite, common);
    QuerySource rewriteQuery;
    bool verify = false;
    std::size_t cap = MagicOptions{}.maxAdornedPredicates;
    rewrite->add_option("--query", rewriteQuery.text, "Query text");
    rewrite->add_option("--query-file", rewriteQuery.file, "File holding the query");
    rewrite->add_flag("--verify-closure", verify, "Append the closure report");
    rewrite->add_option("--max-adorned", cap, "Cap on adorned predicates")->capture_default_str();

    auto* selftest = app.add_subcommand("selftest", "Random-program property checks");
    selftest->group("");
    std::uint64_t seed = 20261018;
    int count = 200;
    selftest->add_option("--seed", seed, "Generator seed")->capture_default_str();
    selftest->add_option("--count", count, "Number of programs")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUserError;
    }

    try {
        if (classify->parsed())
            return cmdClassify(common, checkChase, classifyFinite, classifySteps, out);
        if (graph->parsed())
            return cmdGraph(common, graphKind, out);
        if (chase->parsed())
            return cmdChase(common, chaseFlags, out);
        if (query->parsed())
            return cmdQuery(common, queryFlags, out);
        if (rewrite->parsed())
            return cmdRewrite(common, rewriteQuery, verify, cap, out);
        if (selftest->parsed())
            return cmdSelftest(seed, count, out);
    } catch (const InternalError& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternalError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUserError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternalError;
    }
    return kExitUserError;
}

}  // namespace dlpx::cli
