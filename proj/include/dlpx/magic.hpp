#pragma once

// Magic-sets rewriting of a program for one query, adapted to existential
// rules, and the checks that the rewriting keeps the program class and the
// character of source positions.

#include <set>
#include <string>
#include <vector>

#include "dlpx/classify.hpp"
#include "dlpx/core.hpp"
#include "dlpx/positions.hpp"
#include "dlpx/qa.hpp"

namespace dlpx {

class MagicError : public Error {
public:
    using Error::Error;
};

struct Adornment {
    std::string predicate;
    // One of 'b' / 'f' per argument.
    std::string pattern;

    std::string magicPredicate() const { return "m_" + predicate + "_" + pattern; }
    friend auto operator<=>(const Adornment&, const Adornment&) = default;
};

struct MagicOptions {
    std::size_t maxAdornedPredicates = 256;
};

struct RewrittenProgram {
    Program program;
    std::set<std::string> magicPredicates;
    Adornment answerPredicate;
    Query query;
    // Rendering of the source program the rewrite started from.
    std::string sourceFingerprint;
};

/// Left-to-right sideways information passing through extensional atoms. An
/// argument counts as bound when it is a constant, a head-bound variable, or
/// a variable of an earlier extensional body atom.
/// Head positions of existential variables, and head positions that are
/// infinite under the EDG analysis of the source, are downgraded to free.
RewrittenProgram magicRewrite(const Program& program, const Query& query,
                              const MagicOptions& options = {});

// Finite positions for answering over a rewritten program: `base` plus every
// magic-predicate position.
FinitePositionSet withMagicPositions(FinitePositionSet base, const RewrittenProgram& rewritten);

// Answers the rewritten program's query with the given finite positions for
// the rewritten rules (magic positions are added automatically).
AnswerSet answerRewritten(const RewrittenProgram& rewritten, const FinitePositionSet& finite,
                          const QaOptions& options = {});

struct PositionCharacter {
    Position position;
    bool finiteInOriginal = false;
    bool finiteInRewritten = false;
};

struct ClosureReport {
    ClassReport original;
    ClassReport rewritten;
    // Source positions occurring in the rewritten rules.
    std::vector<PositionCharacter> characters;
    // Source positions no rewritten rule mentions.
    std::vector<Position> droppedPositions;
    bool charactersPreserved = true;
    std::size_t nullsInMagicPositions = 0;
    bool testChaseTerminated = true;

    // JWS kept (when the original is JWS) and characters unchanged.
    bool closed() const;
};

ClosureReport verifyClosure(const Program& original, const RewrittenProgram& rewritten);

}  // namespace dlpx
