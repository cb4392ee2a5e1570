#pragma once

// Fixture loading and independent oracles shared by the test binaries. The
// oracles deliberately avoid the library's search and graph code.

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dlpx/chase.hpp"
#include "dlpx/core.hpp"
#include "dlpx/parser.hpp"
#include "dlpx/positions.hpp"
#include "dlpx/qa.hpp"

namespace dlpx::testing {

inline std::string corpusPath(const std::string& name) {
    return std::string(DLPX_CORPUS_DIR) + "/" + name;
}

inline Program corpus(const std::string& name) {
    return loadProgramFile(corpusPath(name + ".dlp"));
}

inline Atom atom(const std::string& text) {
    // Parses `p(a,b)`; arguments starting with `_:n`/`_:f` become nulls.
    Atom a;
    const auto open = text.find('(');
    a.predicate = text.substr(0, open);
    if (open == std::string::npos)
        return a;
    std::string inner = text.substr(open + 1, text.size() - open - 2);
    std::size_t start = 0;
    while (start <= inner.size() && !inner.empty()) {
        auto comma = inner.find(',', start);
        if (comma == std::string::npos)
            comma = inner.size();
        const std::string arg = inner.substr(start, comma - start);
        if (arg.rfind("_:n", 0) == 0)
            a.args.push_back(Term::null(std::stoull(arg.substr(3))));
        else if (arg.rfind("_:f", 0) == 0)
            a.args.push_back(Term::null(std::stoull(arg.substr(3)), true));
        else if (std::isupper(static_cast<unsigned char>(arg[0])))
            a.args.push_back(Term::variable(arg));
        else
            a.args.push_back(Term::constant(arg));
        start = comma + 1;
        if (comma == inner.size())
            break;
    }
    return a;
}

inline Instance instanceOf(const std::vector<std::string>& atoms) {
    Instance inst;
    for (const auto& a : atoms)
        inst.insert(atom(a));
    return inst;
}

inline std::set<Substitution> asSet(const std::vector<Substitution>& v) {
    return {v.begin(), v.end()};
}

// All |I|^|body| assignments of instance atoms to body atoms, filtered for
// consistency.
inline std::set<Substitution> bruteForceHomomorphisms(const std::vector<Atom>& body,
                                                      const Instance& inst) {
    std::set<Substitution> out;
    const std::size_t n = inst.size();
    if (body.empty()) {
        out.insert({});
        return out;
    }
    if (n == 0)
        return out;
    std::vector<std::size_t> choice(body.size(), 0);
    for (;;) {
        Substitution h;
        bool ok = true;
        for (std::size_t i = 0; i < body.size() && ok; ++i) {
            const Atom& b = body[i];
            const Atom& t = inst.atom(choice[i]);
            if (b.predicate != t.predicate || b.arity() != t.arity()) {
                ok = false;
                break;
            }
            for (std::size_t k = 0; k < b.arity() && ok; ++k) {
                if (!b.args[k].isVariable()) {
                    ok = b.args[k] == t.args[k];
                    continue;
                }
                auto [it, inserted] = h.emplace(b.args[k].name(), t.args[k]);
                ok = inserted || it->second == t.args[k];
            }
        }
        if (ok)
            out.insert(h);
        std::size_t pos = 0;
        while (pos < choice.size() && ++choice[pos] == n)
            choice[pos++] = 0;
        if (pos == choice.size())
            break;
    }
    return out;
}

// Enumerates every map from the unfrozen nulls of `source` to the terms of
// `target`.
inline bool bruteForceHomomorphic(const Atom& source, const Atom& target) {
    if (source.predicate != target.predicate || source.arity() != target.arity())
        return false;
    std::vector<std::uint64_t> nulls;
    for (const auto& t : source.args)
        if (t.isNull() && !t.frozen() &&
            std::find(nulls.begin(), nulls.end(), t.nullId()) == nulls.end())
            nulls.push_back(t.nullId());
    const auto& range = target.args;
    if (range.empty())
        return nulls.empty() && source == target;
    std::vector<std::size_t> choice(nulls.size(), 0);
    for (;;) {
        bool ok = true;
        for (std::size_t i = 0; i < source.arity() && ok; ++i) {
            const Term& s = source.args[i];
            if (s.isNull() && !s.frozen()) {
                const auto k = std::find(nulls.begin(), nulls.end(), s.nullId()) - nulls.begin();
                ok = range[choice[static_cast<std::size_t>(k)]] == target.args[i];
            } else {
                ok = s == target.args[i];
            }
        }
        if (ok)
            return true;
        std::size_t pos = 0;
        while (pos < choice.size() && ++choice[pos] == range.size())
            choice[pos++] = 0;
        if (pos == choice.size())
            return false;
    }
}

// Rank by path enumeration: explores (node, special edges so far) states with
// the count capped at |special|+1. A position has infinite rank iff a state
// with the cap is reachable at it.
inline PositionSet oracleFiniteRank(const DependencyGraph& g) {
    const int cap = static_cast<int>(g.specialEdges.size()) + 1;
    std::map<Position, std::vector<std::pair<Position, bool>>> out;
    for (const auto& [p, q] : g.regularEdges)
        out[p].push_back({q, false});
    for (const auto& [p, q] : g.specialEdges)
        out[p].push_back({q, true});
    std::set<std::pair<Position, int>> seen;
    std::deque<std::pair<Position, int>> queue;
    for (const auto& p : g.nodes) {
        seen.insert({p, 0});
        queue.push_back({p, 0});
    }
    while (!queue.empty()) {
        auto [p, c] = queue.front();
        queue.pop_front();
        for (const auto& [q, special] : out[p]) {
            const int next = std::min(cap, c + (special ? 1 : 0));
            if (seen.insert({q, next}).second)
                queue.push_back({q, next});
        }
    }
    PositionSet finite;
    for (const auto& p : g.nodes)
        if (!seen.count({p, cap}))
            finite.insert(p);
    return finite;
}

inline bool subset(const PositionSet& a, const PositionSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline bool subset(const std::set<std::vector<Term>>& a, const std::set<std::vector<Term>>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Certain answers from a terminating restricted chase.
inline AnswerSet standardChaseAnswers(const Program& p, const Query& q, std::size_t maxSteps = 100'000) {
    ChaseConfig config;
    config.maxSteps = maxSteps;
    const auto result = runStandardChase(p, config);
    auto answers = extractAnswers(result.instance, q);
    answers.complete = result.terminated;
    return answers;
}

// Every atom of `a` has a homomorphic image in `b`, with all nulls of `a`
// treated as unfrozen.
inline bool homomorphicallyContained(const Instance& a, const Instance& b) {
    for (const auto& x : a.atoms()) {
        Atom loose = x;
        for (auto& t : loose.args)
            if (t.isNull())
                t = Term::null(t.nullId());
        if (!hasHomomorphicImage(loose, b))
            return false;
    }
    return true;
}

}  // namespace dlpx::testing
