#include "dlpx/random_program.hpp"

#include <algorithm>
#include <vector>

namespace dlpx {

int RandomProgramGenerator::uniform(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
}

Program RandomProgramGenerator::program() {
    const int predicates = uniform(1, shape_.maxPredicates);
    std::vector<int> arity(static_cast<std::size_t>(predicates));
    for (auto& a : arity)
        a = uniform(1, shape_.maxArity);
    auto name = [](int p) { return "p" + std::to_string(p); };

    Program program;
    const int rules = uniform(1, shape_.maxRules);
    std::bernoulli_distribution existential(shape_.existentialProbability);
    for (int r = 0; r < rules; ++r) {
        std::vector<Atom> body;
        const int atoms = uniform(1, shape_.maxBodyAtoms);
        for (int i = 0; i < atoms; ++i) {
            const int p = uniform(0, predicates - 1);
            Atom a(name(p), {});
            for (int k = 0; k < arity[static_cast<std::size_t>(p)]; ++k)
                a.args.push_back(Term::variable("X" + std::to_string(uniform(0, 3))));
            body.push_back(std::move(a));
        }
        const auto bodyVars = variablesOf(body);
        const std::vector<std::string> pool(bodyVars.begin(), bodyVars.end());
        const int p = uniform(0, predicates - 1);
        Atom head(name(p), {});
        for (int k = 0; k < arity[static_cast<std::size_t>(p)]; ++k) {
            if (existential(rng_))
                head.args.push_back(Term::variable("Z" + std::to_string(uniform(0, 1))));
            else
                head.args.push_back(Term::variable(pool[static_cast<std::size_t>(
                    uniform(0, static_cast<int>(pool.size()) - 1))]));
        }
        program.tgds.push_back(Tgd::make("r" + std::to_string(r + 1), std::move(body), std::move(head)));
    }
    return program;
}

std::vector<Atom> RandomProgramGenerator::facts(const Program& program) {
    const auto schema = program.schema();
    const std::vector<std::pair<std::string, std::size_t>> preds(schema.begin(), schema.end());
    std::vector<Atom> out;
    const int count = uniform(0, shape_.maxFacts);
    for (int i = 0; i < count; ++i) {
        const auto& [pred, arity] = preds[static_cast<std::size_t>(uniform(0, static_cast<int>(preds.size()) - 1))];
        Atom a(pred, {});
        for (std::size_t k = 0; k < arity; ++k)
            a.args.push_back(Term::constant("c" + std::to_string(uniform(0, shape_.constants - 1))));
        if (std::find(out.begin(), out.end(), a) == out.end())
            out.push_back(std::move(a));
    }
    return out;
}

Query RandomProgramGenerator::query(const Program& program) {
    const auto schema = program.schema();
    const std::vector<std::pair<std::string, std::size_t>> preds(schema.begin(), schema.end());
    Query q;
    const int atoms = uniform(1, shape_.maxQueryAtoms);
    for (int i = 0; i < atoms; ++i) {
        const auto& [pred, arity] = preds[static_cast<std::size_t>(uniform(0, static_cast<int>(preds.size()) - 1))];
        Atom a(pred, {});
        for (std::size_t k = 0; k < arity; ++k) {
            if (uniform(0, 9) == 0)
                a.args.push_back(Term::constant("c" + std::to_string(uniform(0, shape_.constants - 1))));
            else
                a.args.push_back(Term::variable("Q" + std::to_string(uniform(0, 3))));
        }
        q.body.push_back(std::move(a));
    }
    for (const auto& v : variablesOf(q.body))
        if (uniform(0, 1) == 0)
            q.answerVars.push_back(v);
    return q;
}

Program RandomProgramGenerator::programWithFacts() {
    Program p = program();
    for (auto& f : facts(p))
        p.addFact(std::move(f));
    return p;
}

}  // namespace dlpx
