#include "dlpx/qa.hpp"

#include <algorithm>
#include <utility>

namespace dlpx {

std::string Violation::toString() const {
    return (kind == Kind::Egd ? "egd " : "constraint ") + ruleId + " " + dlpx::toString(witness);
}

void validateQuery(const Program& program, const Query& query) {
    const auto schema = program.schema();
    for (const auto& a : query.body) {
        auto it = schema.find(a.predicate);
        if (it == schema.end())
            throw SchemaError("query uses unknown predicate " + a.predicate);
        if (it->second != a.arity())
            throw SchemaError("query uses " + a.predicate + " with arity " + std::to_string(a.arity()) +
                              ", program has arity " + std::to_string(it->second));
    }
    const auto vars = variablesOf(query.body);
    for (const auto& v : query.answerVars)
        if (!vars.count(v))
            throw SchemaError("answer variable " + v + " does not occur in the query body");
}

ChaseConfig answeringConfig(const Query& query, const FinitePositionSet& finite,
                            const QaOptions& options) {
    ChaseConfig config;
    config.engine = ChaseEngine::Parsimonious;
    config.finitePositions = finite;
    config.maxSteps = options.maxSteps;
    config.resumptions = options.resumptions.value_or(query.existentialQueryVars().size());
    return config;
}

AnswerSet answerQuery(const Program& program, const Query& query, const FinitePositionSet& finite,
                      const QaOptions& options) {
    validateQuery(program, query);
    return evaluateQuery(program, query, finite, options);
}

AnswerSet evaluateQuery(const Program& program, const Query& query, const FinitePositionSet& finite,
                        const QaOptions& options) {
    const auto result = runParsimoniousChase(program, answeringConfig(query, finite, options));
    AnswerSet answers = extractAnswers(result.instance, query);
    answers.complete = result.terminated;
    if (options.checkConstraints)
        answers.constraintViolations =
            checkConstraints(result.instance, program.egds, program.constraints);
    return answers;
}

AnswerSet extractAnswers(const Instance& instance, const Query& query) {
    AnswerSet answers;
    answers.answerVars = query.answerVars;
    forEachHomomorphism(query.body, instance, {}, [&](const Substitution& h, auto) {
        answers.booleanResult = true;
        std::vector<Term> tuple;
        tuple.reserve(query.answerVars.size());
        for (const auto& v : query.answerVars) {
            const Term& t = h.at(v);
            if (!t.isConstant())
                return true;
            tuple.push_back(t);
        }
        if (!tuple.empty())
            answers.tuples.insert(std::move(tuple));
        // A boolean query needs a single homomorphism.
        return !query.isBoolean();
    });
    return answers;
}

std::vector<Violation> checkConstraints(const Instance& instance, const std::vector<Egd>& egds,
                                        const std::vector<NegConstraint>& constraints) {
    std::vector<Violation> out;
    for (const auto& nc : constraints) {
        forEachHomomorphism(nc.body, instance, {}, [&](const Substitution& h, auto) {
            out.push_back({Violation::Kind::Negative, nc.id, h});
            return true;
        });
    }
    for (const auto& egd : egds) {
        // Each unordered pair of clashing values is reported once.
        std::set<std::pair<Term, Term>> reported;
        forEachHomomorphism(egd.body, instance, {}, [&](const Substitution& h, auto) {
            const Term& a = h.at(egd.lhs);
            const Term& b = h.at(egd.rhs);
            if (a == b || !a.isRigid() || !b.isRigid())
                return true;
            if (reported.insert(std::minmax(a, b)).second)
                out.push_back({Violation::Kind::Egd, egd.id, h});
            return true;
        });
    }
    return out;
}

}  // namespace dlpx
