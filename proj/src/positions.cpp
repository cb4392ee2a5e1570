#include "dlpx/positions.hpp"

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/strong_components.hpp>
#include <deque>
#include <map>
#include <regex>

#include "dlpx/parser.hpp"

namespace dlpx {

namespace {

using Digraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::directedS>;

// Nodes reachable (including the start nodes) from every node flagged in `seed`.
std::vector<bool> forwardClosure(const Digraph& g, std::vector<bool> seed) {
    std::deque<std::size_t> queue;
    for (std::size_t v = 0; v < seed.size(); ++v)
        if (seed[v])
            queue.push_back(v);
    while (!queue.empty()) {
        const auto v = queue.front();
        queue.pop_front();
        for (auto [it, end] = boost::adjacent_vertices(v, g); it != end; ++it) {
            if (!seed[*it]) {
                seed[*it] = true;
                queue.push_back(*it);
            }
        }
    }
    return seed;
}

std::vector<int> componentsOf(const Digraph& g) {
    std::vector<int> component(boost::num_vertices(g));
    if (!component.empty())
        boost::strong_components(g, component.data());
    return component;
}

void addHeadPositions(const Tgd& t, const std::string& var, PositionSet& into) {
    for (std::size_t i = 0; i < t.head.arity(); ++i) {
        const auto& arg = t.head.args[i];
        if (arg.isVariable() && arg.name() == var)
            into.insert({t.head.predicate, static_cast<int>(i + 1)});
    }
}

bool allIn(const PositionSet& needles, const PositionSet& haystack) {
    for (const auto& p : needles)
        if (!haystack.count(p))
            return false;
    return true;
}

PositionSet moveSetClosure(const std::vector<Tgd>& tgds, PositionSet set) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& t : tgds) {
            for (const auto& x : t.frontierVars) {
                if (!allIn(positionsOf(x, t.body), set))
                    continue;
                const auto before = set.size();
                addHeadPositions(t, x, set);
                changed = changed || set.size() != before;
            }
        }
    }
    return set;
}

}  // namespace

std::string toString(FinitenessMethod method) {
    switch (method) {
    case FinitenessMethod::None:
        return "none";
    case FinitenessMethod::Rank:
        return "rank";
    case FinitenessMethod::Edg:
        return "edg";
    case FinitenessMethod::UserOverride:
        return "user";
    }
    return "none";
}

PositionSet schemaPositions(const std::vector<Tgd>& tgds) {
    PositionSet out;
    auto add = [&](const Atom& a) {
        for (std::size_t i = 0; i < a.arity(); ++i)
            out.insert({a.predicate, static_cast<int>(i + 1)});
    };
    for (const auto& t : tgds) {
        add(t.head);
        for (const auto& a : t.body)
            add(a);
    }
    return out;
}

PositionSet positionsOf(const std::string& var, std::span<const Atom> atoms) {
    PositionSet out;
    for (const auto& a : atoms)
        for (std::size_t i = 0; i < a.arity(); ++i)
            if (a.args[i].isVariable() && a.args[i].name() == var)
                out.insert({a.predicate, static_cast<int>(i + 1)});
    return out;
}

DependencyGraph buildDependencyGraph(const std::vector<Tgd>& tgds) {
    DependencyGraph g;
    const auto nodes = schemaPositions(tgds);
    g.nodes.assign(nodes.begin(), nodes.end());
    for (const auto& t : tgds) {
        PositionSet existentialHead;
        for (const auto& z : t.existentialVars)
            addHeadPositions(t, z, existentialHead);
        for (const auto& x : t.frontierVars) {
            PositionSet targets;
            addHeadPositions(t, x, targets);
            for (const auto& p : positionsOf(x, t.body)) {
                for (const auto& q : targets)
                    g.regularEdges.insert({p, q});
                for (const auto& r : existentialHead)
                    g.specialEdges.insert({p, r});
            }
        }
    }
    return g;
}

FinitePositionSet finiteRankPositions(const std::vector<Tgd>& tgds) {
    const auto dg = buildDependencyGraph(tgds);
    std::map<Position, std::size_t> index;
    for (std::size_t i = 0; i < dg.nodes.size(); ++i)
        index.emplace(dg.nodes[i], i);
    Digraph g(dg.nodes.size());
    for (const auto& [p, q] : dg.regularEdges)
        boost::add_edge(index.at(p), index.at(q), g);
    for (const auto& [p, q] : dg.specialEdges)
        boost::add_edge(index.at(p), index.at(q), g);

    // Infinite rank: reachable from a strongly connected component that
    // contains a special edge.
    const auto component = componentsOf(g);
    std::vector<bool> badComponent(dg.nodes.size() + 1, false);
    for (const auto& [p, q] : dg.specialEdges) {
        const auto u = index.at(p), v = index.at(q);
        if (component[u] == component[v])
            badComponent[component[u]] = true;
    }
    std::vector<bool> seed(dg.nodes.size(), false);
    for (std::size_t v = 0; v < dg.nodes.size(); ++v)
        seed[v] = badComponent[component[v]];
    const auto infinite = forwardClosure(g, std::move(seed));

    FinitePositionSet out;
    out.method = FinitenessMethod::Rank;
    for (std::size_t v = 0; v < dg.nodes.size(); ++v)
        if (!infinite[v])
            out.positions.insert(dg.nodes[v]);
    return out;
}

ExistentialDependencyGraph buildEDG(const std::vector<Tgd>& tgds) {
    ExistentialDependencyGraph edg;
    std::vector<std::size_t> ruleOf;
    for (std::size_t r = 0; r < tgds.size(); ++r) {
        for (const auto& z : tgds[r].existentialVars) {
            edg.nodes.push_back({tgds[r].id, z});
            ruleOf.push_back(r);
            PositionSet start;
            addHeadPositions(tgds[r], z, start);
            edg.moveSets.push_back(moveSetClosure(tgds, std::move(start)));
        }
    }
    for (std::size_t from = 0; from < edg.nodes.size(); ++from) {
        for (std::size_t to = 0; to < edg.nodes.size(); ++to) {
            const auto& rule = tgds[ruleOf[to]];
            for (const auto& x : rule.frontierVars) {
                if (allIn(positionsOf(x, rule.body), edg.moveSets[from])) {
                    edg.edges.insert({from, to});
                    break;
                }
            }
        }
    }
    return edg;
}

bool ExistentialDependencyGraph::isAcyclic() const {
    Digraph g(nodes.size());
    for (const auto& [u, v] : edges) {
        if (u == v)
            return false;
        boost::add_edge(u, v, g);
    }
    const auto component = componentsOf(g);
    std::vector<int> sizes(nodes.size() + 1, 0);
    for (int c : component)
        if (++sizes[c] > 1)
            return false;
    return true;
}

FinitePositionSet extFinitePositions(const std::vector<Tgd>& tgds) {
    const auto edg = buildEDG(tgds);
    Digraph g(edg.nodes.size());
    for (const auto& [u, v] : edg.edges)
        boost::add_edge(u, v, g);
    const auto component = componentsOf(g);
    std::vector<int> sizes(edg.nodes.size() + 1, 0);
    for (int c : component)
        ++sizes[c];
    std::vector<bool> onCycle(edg.nodes.size(), false);
    for (std::size_t v = 0; v < edg.nodes.size(); ++v)
        onCycle[v] = sizes[component[v]] > 1 || edg.edges.count({v, v});
    const auto contaminated = forwardClosure(g, std::move(onCycle));

    PositionSet unbounded;
    for (std::size_t v = 0; v < edg.nodes.size(); ++v)
        if (contaminated[v])
            unbounded.insert(edg.moveSets[v].begin(), edg.moveSets[v].end());

    FinitePositionSet out;
    out.method = FinitenessMethod::Edg;
    for (const auto& p : schemaPositions(tgds))
        if (!unbounded.count(p))
            out.positions.insert(p);
    return out;
}

FinitePositionSet noFinitePositions() {
    return FinitePositionSet{{}, FinitenessMethod::None};
}

PositionSet affectedPositions(const std::vector<Tgd>& tgds) {
    PositionSet affected;
    for (const auto& t : tgds)
        for (const auto& z : t.existentialVars)
            addHeadPositions(t, z, affected);
    return moveSetClosure(tgds, std::move(affected));
}

FinitePositionSet parseFinitePositions(std::string_view text) {
    static const std::regex entry(R"(^([a-z][A-Za-z0-9_]*)\[([0-9]+)\]$)");
    FinitePositionSet out;
    out.method = FinitenessMethod::UserOverride;
    std::vector<Diagnostic> diagnostics;
    int line = 1;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (c == '\n') {
            ++line;
            ++i;
        } else if (c == '%') {
            while (i < text.size() && text[i] != '\n')
                ++i;
        } else if (c == ' ' || c == '\t' || c == '\r' || c == ',') {
            ++i;
        } else {
            const std::size_t start = i;
            while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
                   text[i] != ',')
                ++i;
            const std::string token(text.substr(start, i - start));
            std::smatch m;
            const auto lineStart = text.rfind('\n', start);
            const int column =
                static_cast<int>(start - (lineStart == std::string_view::npos ? 0 : lineStart + 1)) + 1;
            if (!std::regex_match(token, m, entry) || std::stoi(m[2]) < 1)
                diagnostics.push_back({line, column, "expected a position like pred[1], got '" + token + "'"});
            else
                out.positions.insert({m[1], std::stoi(m[2])});
        }
    }
    if (!diagnostics.empty())
        throw ParseError(std::move(diagnostics));
    return out;
}

std::string toDot(const DependencyGraph& graph) {
    std::string out = "digraph dependency {\n";
    for (const auto& p : graph.nodes)
        out += "  \"" + p.toString() + "\";\n";
    for (const auto& [p, q] : graph.regularEdges)
        out += "  \"" + p.toString() + "\" -> \"" + q.toString() + "\";\n";
    for (const auto& [p, q] : graph.specialEdges)
        out += "  \"" + p.toString() + "\" -> \"" + q.toString() + "\" [style=dashed, label=\"*\"];\n";
    return out + "}\n";
}

std::string toDot(const ExistentialDependencyGraph& graph) {
    std::string out = "digraph edg {\n";
    for (std::size_t v = 0; v < graph.nodes.size(); ++v) {
        std::string move;
        for (const auto& p : graph.moveSets[v])
            move += (move.empty() ? "" : " ") + p.toString();
        out += "  \"" + graph.nodes[v].label() + "\" [tooltip=\"" + move + "\"];\n";
    }
    for (const auto& [u, v] : graph.edges)
        out += "  \"" + graph.nodes[u].label() + "\" -> \"" + graph.nodes[v].label() + "\";\n";
    return out + "}\n";
}

}  // namespace dlpx
