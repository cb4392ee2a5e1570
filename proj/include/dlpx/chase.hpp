#pragma once

// Bounded restricted chase and the parsimonious chase with freezing of nulls
// at finite positions and resumption rounds.

#include <cstddef>
#include <optional>

#include "dlpx/core.hpp"
#include "dlpx/positions.hpp"

namespace dlpx {

inline constexpr std::size_t kDefaultMaxSteps = 10'000;

enum class ChaseEngine { Standard, Parsimonious };

struct ChaseConfig {
    ChaseEngine engine = ChaseEngine::Standard;
    FinitePositionSet finitePositions;
    std::optional<std::size_t> maxSteps;
    // Parsimonious engine only.
    std::size_t resumptions = 0;

    std::size_t stepBudget() const { return maxSteps.value_or(kDefaultMaxSteps); }
};

struct ChaseResult {
    Instance instance;
    // False only when the step budget ran out before a fixpoint.
    bool terminated = true;
    std::size_t stepsApplied = 0;
    std::size_t resumptionsUsed = 0;
    std::size_t frozenNullCount = 0;
};

/// Restricted chase in breadth-first rounds. A trigger fires only when no
/// extension of it maps the head into the current instance; fresh nulls are
/// invented for existential variables.
ChaseResult runStandardChase(const Program& program, const ChaseConfig& config);

/// True iff the head instantiated by `h`, with fresh unfrozen nulls for its
/// existential variables, has no homomorphic image in the instance.
bool pChaseStepApplicable(const Tgd& tgd, const Substitution& h, const Instance& instance);

/// Parsimonious chase to fixpoint, freezing new nulls that land on a finite
/// position, followed by `config.resumptions` rounds of freeze-all-and-rerun.
ChaseResult runParsimoniousChase(const Program& program, const ChaseConfig& config);

ChaseResult runChase(const Program& program, const ChaseConfig& config);

// Provenance forest rooted at the facts, one atom per line, children indented.
std::string explain(const Instance& instance);

}  // namespace dlpx
