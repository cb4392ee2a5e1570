#pragma once

// Shared vocabulary: terms, atoms, rules, programs, instances and
// homomorphism search.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace dlpx {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised when a rule or program violates a structural invariant.
class ModelError : public Error {
public:
    using Error::Error;
};

enum class TermKind : std::uint8_t { Constant, Null, Variable };

/// A constant, a variable or a labeled null. Nulls are identified by their id;
/// the frozen flag is state carried along with the value, not part of its
/// identity.
class Term {
public:
    static Term constant(std::string name);
    static Term variable(std::string name);
    static Term null(std::uint64_t id, bool frozen = false);

    TermKind kind() const { return kind_; }
    bool isConstant() const { return kind_ == TermKind::Constant; }
    bool isVariable() const { return kind_ == TermKind::Variable; }
    bool isNull() const { return kind_ == TermKind::Null; }
    bool isFrozenNull() const { return kind_ == TermKind::Null && frozen_; }
    // Constants and frozen nulls only map to themselves under homomorphisms.
    bool isRigid() const { return kind_ == TermKind::Constant || isFrozenNull(); }

    const std::string& name() const { return name_; }
    std::uint64_t nullId() const { return id_; }
    bool frozen() const { return frozen_; }

    Term frozenCopy() const;

    // `_:n<id>` unfrozen, `_:f<id>` frozen; quoted constants when needed.
    std::string toString() const;

    friend bool operator==(const Term& a, const Term& b) {
        return a.kind_ == b.kind_ && a.id_ == b.id_ && a.name_ == b.name_;
    }
    // constants < nulls < variables; names lexicographic, nulls by id.
    friend std::strong_ordering operator<=>(const Term& a, const Term& b);

    std::size_t hash() const;

private:
    TermKind kind_ = TermKind::Constant;
    std::string name_;
    std::uint64_t id_ = 0;
    bool frozen_ = false;
};

struct TermHash {
    std::size_t operator()(const Term& t) const { return t.hash(); }
};

struct Atom {
    std::string predicate;
    std::vector<Term> args;

    Atom() = default;
    Atom(std::string pred, std::vector<Term> arguments)
        : predicate(std::move(pred)), args(std::move(arguments)) {}

    std::size_t arity() const { return args.size(); }
    bool isGround() const;
    bool contains(const Term& t) const;
    std::set<std::string> variables() const;
    std::string toString() const;

    friend bool operator==(const Atom&, const Atom&) = default;
    friend std::strong_ordering operator<=>(const Atom& a, const Atom& b);
};

struct AtomHash {
    std::size_t operator()(const Atom& a) const;
};

using Substitution = std::map<std::string, Term>;

Term substitute(const Term& t, const Substitution& s);
Atom substitute(const Atom& a, const Substitution& s);
// (outer ∘ inner): apply inner first, then outer.
Substitution compose(const Substitution& outer, const Substitution& inner);
std::string toString(const Substitution& s);

std::set<std::string> variablesOf(std::span<const Atom> atoms);
// Number of occurrences of each variable across the atoms.
std::map<std::string, int> occurrenceCounts(std::span<const Atom> atoms);

struct Tgd {
    std::string id;
    std::vector<Atom> body;
    Atom head;
    std::set<std::string> existentialVars;
    std::set<std::string> frontierVars;

    // Derives existential and frontier variables; throws ModelError on
    // an empty body or non-variable/constant terms.
    static Tgd make(std::string id, std::vector<Atom> body, Atom head);

    bool isExistential(const std::string& var) const { return existentialVars.count(var) > 0; }
    std::string toString() const;
};

struct Egd {
    std::string id;
    std::vector<Atom> body;
    std::string lhs;
    std::string rhs;

    static Egd make(std::string id, std::vector<Atom> body, std::string lhs, std::string rhs);
    std::string toString() const;
};

struct NegConstraint {
    std::string id;
    std::vector<Atom> body;

    static NegConstraint make(std::string id, std::vector<Atom> body);
    std::string toString() const;
};

struct Program {
    std::vector<Tgd> tgds;
    std::vector<Egd> egds;
    std::vector<NegConstraint> constraints;
    std::vector<Atom> facts;

    // Predicates occurring in some tgd head.
    std::set<std::string> idbPredicates() const;
    std::set<std::string> edbPredicates() const;
    // Arity of every predicate mentioned anywhere in the program.
    std::map<std::string, std::size_t> schema() const;

    // Appends a fact unless already present; facts must be ground over constants.
    void addFact(Atom fact);
};

struct Query {
    std::vector<std::string> answerVars;
    std::vector<Atom> body;

    std::set<std::string> existentialQueryVars() const;
    bool isBoolean() const { return answerVars.empty(); }
    std::string toString() const;
};

struct Provenance {
    std::string tgdId;
    Substitution trigger;
    std::vector<std::size_t> parents;
};

/// A finite set of atoms over constants and nulls, kept in insertion order,
/// with per-argument value indexes and provenance for derived atoms.
class Instance {
public:
    using AtomId = std::size_t;

    Instance() = default;
    static Instance fromFacts(std::span<const Atom> facts);

    std::size_t size() const { return atoms_.size(); }
    bool empty() const { return atoms_.empty(); }
    const Atom& atom(AtomId id) const { return atoms_[id]; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::optional<Provenance>& provenance(AtomId id) const { return provenance_[id]; }

    bool contains(const Atom& a) const { return index_.count(a) > 0; }
    std::optional<AtomId> find(const Atom& a) const;

    // Returns the id and whether the atom was new.
    std::pair<AtomId, bool> insert(Atom a, std::optional<Provenance> prov = std::nullopt);

    // Ids of atoms with the predicate, ascending.
    const std::vector<AtomId>& atomsOf(const std::string& predicate) const;
    // Ids of atoms with `value` at argument `arg` (0-based), ascending.
    const std::vector<AtomId>& atomsWith(const std::string& predicate, std::size_t arg,
                                         const Term& value) const;

    Term freshNull(bool frozen = false);
    std::uint64_t nextNullId() const { return nextNullId_; }

    void freezeAllNulls();
    std::size_t nullCount() const;
    std::size_t frozenNullCount() const;

    // Atoms sorted by (predicate, args).
    std::vector<Atom> sortedAtoms() const;

private:
    struct Table {
        std::vector<AtomId> all;
        std::vector<std::unordered_map<Term, std::vector<AtomId>, TermHash>> byArg;
    };

    std::vector<Atom> atoms_;
    std::vector<std::optional<Provenance>> provenance_;
    std::unordered_map<Atom, AtomId, AtomHash> index_;
    std::unordered_map<std::string, Table> tables_;
    std::uint64_t nextNullId_ = 1;
};

struct MatchOptions {
    // Only atoms with id < limit are visible.
    std::size_t limit = std::numeric_limits<std::size_t>::max();
    // At least one matched atom must have id >= deltaStart.
    std::size_t deltaStart = 0;
};

// Return false to stop the enumeration.
using MatchCallback = std::function<bool(const Substitution&, std::span<const Instance::AtomId>)>;

/// Enumerates every substitution extending `prefix` that maps each body atom
/// into the instance. Body atoms are matched left to right and candidates are
/// visited in insertion order, so the enumeration order is deterministic.
void forEachHomomorphism(std::span<const Atom> body, const Instance& instance,
                         const Substitution& prefix, const MatchCallback& callback,
                         const MatchOptions& options = {});

std::vector<Substitution> findHomomorphisms(std::span<const Atom> body, const Instance& instance,
                                            const Substitution& prefix = {});

bool hasHomomorphism(std::span<const Atom> body, const Instance& instance,
                     const Substitution& prefix = {});

/// True iff some map over the unfrozen nulls of `source` sends it onto
/// `target`. Constants and frozen nulls map only to themselves.
bool isHomomorphicTo(const Atom& source, const Atom& target);

// True iff some atom of the instance is a homomorphic image of `source`.
bool hasHomomorphicImage(const Atom& source, const Instance& instance);

}  // namespace dlpx
