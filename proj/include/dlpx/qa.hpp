#pragma once

// Conjunctive query answering over the parsimonious chase, parameterized by
// a finite-position set, plus egd and negative-constraint checking.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dlpx/chase.hpp"
#include "dlpx/core.hpp"
#include "dlpx/positions.hpp"

namespace dlpx {

// Query mentions a predicate the program does not know, or uses a wrong arity.
class SchemaError : public Error {
public:
    using Error::Error;
};

struct Violation {
    enum class Kind { Egd, Negative };

    Kind kind = Kind::Negative;
    std::string ruleId;
    Substitution witness;

    std::string toString() const;
};

struct AnswerSet {
    std::vector<std::string> answerVars;
    std::set<std::vector<Term>> tuples;
    bool booleanResult = false;
    // False if any chase phase ran out of steps.
    bool complete = true;
    std::vector<Violation> constraintViolations;

    bool isBoolean() const { return answerVars.empty(); }
};

struct QaOptions {
    // Defaults to the number of existential query variables.
    std::optional<std::size_t> resumptions;
    std::optional<std::size_t> maxSteps;
    bool checkConstraints = false;
};

void validateQuery(const Program& program, const Query& query);

/// Parsimonious chase with freezing at `finite`, resumed once per distinct
/// existential query variable, then answer extraction.
AnswerSet answerQuery(const Program& program, const Query& query, const FinitePositionSet& finite,
                      const QaOptions& options = {});

// answerQuery without the schema check, for queries validated elsewhere.
AnswerSet evaluateQuery(const Program& program, const Query& query, const FinitePositionSet& finite,
                        const QaOptions& options = {});

// The chase configuration answerQuery uses.
ChaseConfig answeringConfig(const Query& query, const FinitePositionSet& finite,
                            const QaOptions& options = {});

/// Projects every homomorphism of the query body onto the answer variables
/// and keeps the all-constant tuples.
AnswerSet extractAnswers(const Instance& instance, const Query& query);

std::vector<Violation> checkConstraints(const Instance& instance, const std::vector<Egd>& egds,
                                        const std::vector<NegConstraint>& constraints);

}  // namespace dlpx
