#pragma once

// Seeded generator of small programs, fact sets and queries for property
// testing.

#include <cstdint>
#include <random>

#include "dlpx/core.hpp"

namespace dlpx {

struct RandomProgramShape {
    int maxRules = 6;
    int maxPredicates = 4;
    int maxArity = 3;
    int maxBodyAtoms = 3;
    int maxFacts = 10;
    int constants = 4;
    int maxQueryAtoms = 3;
    double existentialProbability = 0.3;
};

class RandomProgramGenerator {
public:
    explicit RandomProgramGenerator(std::uint64_t seed, RandomProgramShape shape = {})
        : rng_(seed), shape_(shape) {}

    // Tgds only, no constants in rules; facts drawn separately.
    Program program();
    std::vector<Atom> facts(const Program& program);
    Query query(const Program& program);

    // Program with facts attached.
    Program programWithFacts();

private:
    int uniform(int lo, int hi);

    std::mt19937_64 rng_;
    RandomProgramShape shape_;
};

}  // namespace dlpx
