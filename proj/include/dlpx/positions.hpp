#pragma once

// Finite-position analyses over the tgds of a program: finite-rank positions
// from the dependency graph, and EDG-based finite positions.

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dlpx/core.hpp"

namespace dlpx {

/// A predicate attribute such as nurse[2]. Indexes are 1-based.
struct Position {
    std::string predicate;
    int index = 1;

    std::string toString() const { return predicate + "[" + std::to_string(index) + "]"; }
    friend auto operator<=>(const Position&, const Position&) = default;
};

using PositionSet = std::set<Position>;
using PositionEdge = std::pair<Position, Position>;

enum class FinitenessMethod { None, Rank, Edg, UserOverride };

std::string toString(FinitenessMethod method);

struct FinitePositionSet {
    PositionSet positions;
    FinitenessMethod method = FinitenessMethod::None;

    bool contains(const Position& p) const { return positions.count(p) > 0; }
};

struct DependencyGraph {
    std::vector<Position> nodes;
    std::set<PositionEdge> regularEdges;
    std::set<PositionEdge> specialEdges;
};

struct EdgNode {
    std::string ruleId;
    std::string variable;

    std::string label() const { return ruleId + "." + variable; }
};

struct ExistentialDependencyGraph {
    std::vector<EdgNode> nodes;
    std::set<std::pair<std::size_t, std::size_t>> edges;
    // Positions that values invented for each node can reach.
    std::vector<PositionSet> moveSets;

    bool isAcyclic() const;
};

// Every position of every predicate occurring in the tgds.
PositionSet schemaPositions(const std::vector<Tgd>& tgds);

// Positions where `var` occurs in the atoms.
PositionSet positionsOf(const std::string& var, std::span<const Atom> atoms);

DependencyGraph buildDependencyGraph(const std::vector<Tgd>& tgds);
FinitePositionSet finiteRankPositions(const std::vector<Tgd>& tgds);

ExistentialDependencyGraph buildEDG(const std::vector<Tgd>& tgds);
FinitePositionSet extFinitePositions(const std::vector<Tgd>& tgds);

// The empty set: every position is treated as infinite.
FinitePositionSet noFinitePositions();

// Positions that may hold labeled nulls in some chase of the tgds.
PositionSet affectedPositions(const std::vector<Tgd>& tgds);

// Whitespace- or comma-separated `pred[i]` entries, `%` comments.
FinitePositionSet parseFinitePositions(std::string_view text);

std::string toDot(const DependencyGraph& graph);
std::string toDot(const ExistentialDependencyGraph& graph);

}  // namespace dlpx
