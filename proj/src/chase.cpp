#include "dlpx/chase.hpp"

#include <algorithm>
#include <functional>

namespace dlpx {

namespace {

struct Trigger {
    std::size_t tgd;
    Substitution h;
    std::vector<Instance::AtomId> parents;
};

enum class PhaseOutcome { Fixpoint, OutOfSteps };

using Applicable = std::function<bool(const Tgd&, const Substitution&, const Instance&)>;

bool headSatisfied(const Tgd& tgd, const Substitution& h, const Instance& instance) {
    Substitution frontier;
    for (const auto& x : tgd.frontierVars)
        frontier.emplace(x, h.at(x));
    return hasHomomorphism(std::span<const Atom>(&tgd.head, 1), instance, frontier);
}

// Fires the trigger: fresh nulls for existential variables, frozen when any
// of their head positions is finite.
void fire(const Tgd& tgd, const Trigger& trigger, Instance& instance,
          const FinitePositionSet* freezeAt) {
    Substitution full = trigger.h;
    for (const auto& z : tgd.existentialVars) {
        bool frozen = false;
        if (freezeAt) {
            for (std::size_t i = 0; i < tgd.head.arity() && !frozen; ++i) {
                const auto& arg = tgd.head.args[i];
                frozen = arg.isVariable() && arg.name() == z &&
                         freezeAt->contains({tgd.head.predicate, static_cast<int>(i + 1)});
            }
        }
        full.insert_or_assign(z, instance.freshNull(frozen));
    }
    instance.insert(substitute(tgd.head, full), Provenance{tgd.id, trigger.h, trigger.parents});
}

// Breadth-first rounds. The first round considers all triggers; later rounds
// only triggers that use an atom derived in the previous round.
PhaseOutcome runPhase(const Program& program, Instance& instance, const Applicable& applicable,
                      const FinitePositionSet* freezeAt, std::size_t& steps, std::size_t budget) {
    std::size_t deltaStart = 0;
    for (;;) {
        const std::size_t roundEnd = instance.size();
        std::vector<Trigger> triggers;
        MatchOptions options;
        options.limit = roundEnd;
        options.deltaStart = deltaStart;
        for (std::size_t r = 0; r < program.tgds.size(); ++r) {
            forEachHomomorphism(
                program.tgds[r].body, instance, {},
                [&](const Substitution& h, std::span<const Instance::AtomId> parents) {
                    triggers.push_back({r, h, {parents.begin(), parents.end()}});
                    return true;
                },
                options);
        }
        bool fired = false;
        for (const auto& trigger : triggers) {
            const Tgd& tgd = program.tgds[trigger.tgd];
            if (!applicable(tgd, trigger.h, instance))
                continue;
            if (steps >= budget)
                return PhaseOutcome::OutOfSteps;
            fire(tgd, trigger, instance, freezeAt);
            ++steps;
            fired = true;
        }
        if (!fired)
            return PhaseOutcome::Fixpoint;
        deltaStart = roundEnd;
    }
}

}  // namespace

ChaseResult runStandardChase(const Program& program, const ChaseConfig& config) {
    ChaseResult result;
    result.instance = Instance::fromFacts(program.facts);
    const auto outcome = runPhase(
        program, result.instance,
        [](const Tgd& t, const Substitution& h, const Instance& inst) { return !headSatisfied(t, h, inst); },
        nullptr, result.stepsApplied, config.stepBudget());
    result.terminated = outcome == PhaseOutcome::Fixpoint;
    result.frozenNullCount = result.instance.frozenNullCount();
    return result;
}

bool pChaseStepApplicable(const Tgd& tgd, const Substitution& h, const Instance& instance) {
    // Fresh nulls get ids no instance value uses, so they cannot collide.
    Substitution full = h;
    std::uint64_t fresh = instance.nextNullId();
    for (const auto& z : tgd.existentialVars)
        full.insert_or_assign(z, Term::null(fresh++));
    return !hasHomomorphicImage(substitute(tgd.head, full), instance);
}

ChaseResult runParsimoniousChase(const Program& program, const ChaseConfig& config) {
    ChaseResult result;
    result.instance = Instance::fromFacts(program.facts);
    const std::size_t budget = config.stepBudget();
    const Applicable applicable = pChaseStepApplicable;

    auto outcome = runPhase(program, result.instance, applicable, &config.finitePositions,
                            result.stepsApplied, budget);
    for (std::size_t round = 0; round < config.resumptions && outcome == PhaseOutcome::Fixpoint;
         ++round) {
        result.instance.freezeAllNulls();
        ++result.resumptionsUsed;
        outcome = runPhase(program, result.instance, applicable, &config.finitePositions,
                           result.stepsApplied, budget);
    }
    result.terminated = outcome == PhaseOutcome::Fixpoint;
    result.frozenNullCount = result.instance.frozenNullCount();
    return result;
}

ChaseResult runChase(const Program& program, const ChaseConfig& config) {
    return config.engine == ChaseEngine::Standard ? runStandardChase(program, config)
                                                  : runParsimoniousChase(program, config);
}

std::string explain(const Instance& instance) {
    std::vector<std::vector<Instance::AtomId>> children(instance.size());
    std::vector<Instance::AtomId> roots;
    for (Instance::AtomId id = 0; id < instance.size(); ++id) {
        const auto& prov = instance.provenance(id);
        if (!prov) {
            roots.push_back(id);
            continue;
        }
        std::vector<Instance::AtomId> seen;
        for (auto parent : prov->parents) {
            if (std::find(seen.begin(), seen.end(), parent) != seen.end())
                continue;
            seen.push_back(parent);
            children[parent].push_back(id);
        }
    }
    std::string out;
    std::function<void(Instance::AtomId, int)> walk = [&](Instance::AtomId id, int depth) {
        out += std::string(static_cast<std::size_t>(depth) * 2, ' ') + instance.atom(id).toString() + ".";
        if (const auto& prov = instance.provenance(id))
            out += "   % " + prov->tgdId + " " + toString(prov->trigger);
        out += "\n";
        for (auto child : children[id])
            walk(child, depth + 1);
    };
    for (auto root : roots)
        walk(root, 0);
    return out;
}

}  // namespace dlpx
