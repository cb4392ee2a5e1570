#pragma once

// Syntactic class membership (sticky, weakly-acyclic, jointly-acyclic,
// weakly-sticky, jointly-weakly-sticky) and a bounded semantic check of
// chase stickiness relative to a finite-position set.

#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "dlpx/core.hpp"
#include "dlpx/positions.hpp"

namespace dlpx {

struct MarkedVariable {
    std::string tgdId;
    std::string variable;

    friend auto operator<=>(const MarkedVariable&, const MarkedVariable&) = default;
};

struct MarkingStep {
    int round = 0;
    MarkedVariable variable;
    std::string reason;
};

struct Marking {
    std::set<MarkedVariable> marked;
    std::vector<MarkingStep> trace;

    bool isMarked(const std::string& tgdId, const std::string& var) const {
        return marked.count({tgdId, var}) > 0;
    }
};

/// Least fixpoint of the sticky marking. Round 0 marks body variables that
/// do not reach the head; each later round marks a body variable whose head
/// position hosts a marked body variable of some tgd.
Marking stickyMarking(const std::vector<Tgd>& tgds);

struct ClassReport {
    bool sticky = false;
    bool weaklyAcyclic = false;
    bool jointlyAcyclic = false;
    bool weaklySticky = false;
    bool jointlyWeaklySticky = false;
    // Keyed by class name (`sticky`, `weakly_sticky`, ...) for failed classes.
    std::map<std::string, std::string> witnesses;
};

ClassReport classifyProgram(const std::vector<Tgd>& tgds);

/// Tracked iff every body position of the variable lies outside `finite`.
bool isTrackedVariable(const Tgd& tgd, const std::string& var, const FinitePositionSet& finite);

struct StickinessWitness {
    Term value;
    std::string tgdId;
    Substitution trigger;
    std::string repeatedVariable;
    Atom producedAtom;
    Atom escapeAtom;

    std::string toString() const;
};

struct StickinessPass {};

struct StickinessInconclusive {
    std::size_t stepsApplied = 0;
};

using StickinessOutcome = std::variant<StickinessPass, StickinessWitness, StickinessInconclusive>;

/// Runs the bounded restricted chase and looks for a trigger whose tracked
/// repeated variable's value is missing from some provenance descendant of
/// the produced atom.
StickinessOutcome checkChaseStickiness(const Program& program, const FinitePositionSet& finite,
                                       std::size_t maxSteps);

}  // namespace dlpx
