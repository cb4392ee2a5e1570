#include "dlpx/classify.hpp"

#include <algorithm>
#include <map>
#include <queue>

#include "dlpx/chase.hpp"

namespace dlpx {

namespace {

std::string describePositions(const PositionSet& positions) {
    std::string out;
    for (const auto& p : positions)
        out += (out.empty() ? "" : ", ") + p.toString();
    return out;
}

}  // namespace

Marking stickyMarking(const std::vector<Tgd>& tgds) {
    Marking m;
    for (const auto& t : tgds) {
        const auto headVars = t.head.variables();
        for (const auto& v : variablesOf(t.body)) {
            if (headVars.count(v))
                continue;
            m.marked.insert({t.id, v});
            m.trace.push_back({0, {t.id, v}, "does not occur in the head"});
        }
    }

    for (int round = 1;; ++round) {
        // Body positions that host a marked variable, with one culprit each.
        std::map<Position, MarkedVariable> hosts;
        for (const auto& t : tgds)
            for (const auto& v : variablesOf(t.body))
                if (m.isMarked(t.id, v))
                    for (const auto& p : positionsOf(v, t.body))
                        hosts.emplace(p, MarkedVariable{t.id, v});

        std::vector<MarkingStep> added;
        for (const auto& t : tgds) {
            for (const auto& v : t.frontierVars) {
                if (m.isMarked(t.id, v))
                    continue;
                for (const auto& p : positionsOf(v, std::span<const Atom>(&t.head, 1))) {
                    if (auto it = hosts.find(p); it != hosts.end()) {
                        added.push_back({round, {t.id, v},
                                         "head position " + p.toString() + " hosts marked " +
                                             it->second.tgdId + "." + it->second.variable});
                        break;
                    }
                }
            }
        }
        if (added.empty())
            break;
        for (auto& step : added) {
            m.marked.insert(step.variable);
            m.trace.push_back(std::move(step));
        }
    }
    return m;
}

ClassReport classifyProgram(const std::vector<Tgd>& tgds) {
    ClassReport report;
    const auto marking = stickyMarking(tgds);
    const auto rank = finiteRankPositions(tgds);
    const auto ext = extFinitePositions(tgds);
    const auto all = schemaPositions(tgds);

    report.sticky = report.weaklySticky = report.jointlyWeaklySticky = true;
    for (const auto& t : tgds) {
        for (const auto& [v, count] : occurrenceCounts(t.body)) {
            if (count < 2 || !marking.isMarked(t.id, v))
                continue;
            const auto positions = positionsOf(v, t.body);
            const std::string where =
                t.id + "." + v + " is marked and repeated at " + describePositions(positions);
            auto touches = [&](const FinitePositionSet& s) {
                return std::any_of(positions.begin(), positions.end(),
                                   [&](const Position& p) { return s.contains(p); });
            };
            if (report.sticky) {
                report.sticky = false;
                report.witnesses.emplace("sticky", where);
            }
            if (report.weaklySticky && !touches(rank)) {
                report.weaklySticky = false;
                report.witnesses.emplace("weakly_sticky", where + ", none of finite rank");
            }
            if (report.jointlyWeaklySticky && !touches(ext)) {
                report.jointlyWeaklySticky = false;
                report.witnesses.emplace("jointly_weakly_sticky", where + ", none finite under the EDG");
            }
        }
    }

    report.weaklyAcyclic = rank.positions.size() == all.size();
    if (!report.weaklyAcyclic) {
        for (const auto& p : all) {
            if (!rank.contains(p)) {
                report.witnesses.emplace("weakly_acyclic", p.toString() + " has infinite rank");
                break;
            }
        }
    }

    const auto edg = buildEDG(tgds);
    report.jointlyAcyclic = edg.isAcyclic();
    if (!report.jointlyAcyclic) {
        for (const auto& [u, v] : edg.edges) {
            // An edge inside a cycle: v reaches u.
            std::vector<bool> seen(edg.nodes.size(), false);
            std::queue<std::size_t> queue;
            queue.push(v);
            seen[v] = true;
            while (!queue.empty() && !seen[u]) {
                const auto n = queue.front();
                queue.pop();
                for (const auto& [a, b] : edg.edges)
                    if (a == n && !seen[b]) {
                        seen[b] = true;
                        queue.push(b);
                    }
            }
            if (seen[u]) {
                report.witnesses.emplace("jointly_acyclic", "EDG cycle through " + edg.nodes[u].label() +
                                                                " -> " + edg.nodes[v].label());
                break;
            }
        }
    }
    return report;
}

bool isTrackedVariable(const Tgd& tgd, const std::string& var, const FinitePositionSet& finite) {
    const auto positions = positionsOf(var, tgd.body);
    return std::none_of(positions.begin(), positions.end(),
                        [&](const Position& p) { return finite.contains(p); });
}

std::string StickinessWitness::toString() const {
    return "value " + value.toString() + " bound to repeated variable " + repeatedVariable + " of " +
           tgdId + " " + dlpx::toString(trigger) + " produces " + producedAtom.toString() +
           " but is missing from descendant " + escapeAtom.toString();
}

StickinessOutcome checkChaseStickiness(const Program& program, const FinitePositionSet& finite,
                                       std::size_t maxSteps) {
    ChaseConfig config;
    config.engine = ChaseEngine::Standard;
    config.maxSteps = maxSteps;
    const auto result = runStandardChase(program, config);
    const Instance& instance = result.instance;

    std::map<std::string, const Tgd*> byId;
    for (const auto& t : program.tgds)
        byId.emplace(t.id, &t);

    std::vector<std::vector<Instance::AtomId>> children(instance.size());
    for (Instance::AtomId id = 0; id < instance.size(); ++id)
        if (const auto& prov = instance.provenance(id))
            for (auto parent : prov->parents)
                children[parent].push_back(id);

    auto descendants = [&](Instance::AtomId root) {
        std::vector<bool> seen(instance.size(), false);
        std::vector<Instance::AtomId> out{root};
        seen[root] = true;
        for (std::size_t i = 0; i < out.size(); ++i)
            for (auto c : children[out[i]])
                if (!seen[c]) {
                    seen[c] = true;
                    out.push_back(c);
                }
        std::sort(out.begin(), out.end());
        return out;
    };

    for (Instance::AtomId id = 0; id < instance.size(); ++id) {
        const auto& prov = instance.provenance(id);
        if (!prov)
            continue;
        const Tgd& tgd = *byId.at(prov->tgdId);
        std::vector<Instance::AtomId> below;
        for (const auto& [x, count] : occurrenceCounts(tgd.body)) {
            if (count < 2 || !isTrackedVariable(tgd, x, finite))
                continue;
            if (below.empty())
                below = descendants(id);
            const Term& value = prov->trigger.at(x);
            for (auto d : below) {
                if (!instance.atom(d).contains(value))
                    return StickinessWitness{value, tgd.id, prov->trigger, x, instance.atom(id),
                                             instance.atom(d)};
            }
        }
    }
    if (result.terminated)
        return StickinessPass{};
    return StickinessInconclusive{result.stepsApplied};
}

}  // namespace dlpx
