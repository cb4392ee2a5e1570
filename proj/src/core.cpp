#include "dlpx/core.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace dlpx {

namespace {

bool isBareConstant(const std::string& name) {
    if (name.empty())
        return false;
    const unsigned char first = static_cast<unsigned char>(name.front());
    if (!(std::islower(first) || std::isdigit(first)))
        return false;
    return std::all_of(name.begin(), name.end(), [](char c) {
        const auto u = static_cast<unsigned char>(c);
        return std::isalnum(u) || c == '_';
    });
}

std::string quote(const std::string& name) {
    std::string out = "\"";
    for (char c : name) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

void hashCombine(std::size_t& seed, std::size_t value) {
    seed ^= value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

template <class Atoms>
std::string joinAtoms(const Atoms& atoms) {
    std::string out;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (i)
            out += ", ";
        out += atoms[i].toString();
    }
    return out;
}

}  // namespace

Term Term::constant(std::string name) {
    Term t;
    t.kind_ = TermKind::Constant;
    t.name_ = std::move(name);
    return t;
}

Term Term::variable(std::string name) {
    Term t;
    t.kind_ = TermKind::Variable;
    t.name_ = std::move(name);
    return t;
}

Term Term::null(std::uint64_t id, bool frozen) {
    Term t;
    t.kind_ = TermKind::Null;
    t.id_ = id;
    t.frozen_ = frozen;
    return t;
}

Term Term::frozenCopy() const {
    Term t = *this;
    if (t.kind_ == TermKind::Null)
        t.frozen_ = true;
    return t;
}

std::string Term::toString() const {
    switch (kind_) {
    case TermKind::Constant:
        return isBareConstant(name_) ? name_ : quote(name_);
    case TermKind::Variable:
        return name_;
    case TermKind::Null:
        return (frozen_ ? "_:f" : "_:n") + std::to_string(id_);
    }
    return {};
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
    if (auto c = a.kind_ <=> b.kind_; c != 0)
        return c;
    if (a.kind_ == TermKind::Null)
        return a.id_ <=> b.id_;
    return a.name_.compare(b.name_) <=> 0;
}

std::size_t Term::hash() const {
    std::size_t seed = static_cast<std::size_t>(kind_);
    hashCombine(seed, kind_ == TermKind::Null ? std::hash<std::uint64_t>{}(id_)
                                              : std::hash<std::string>{}(name_));
    return seed;
}

bool Atom::isGround() const {
    return std::none_of(args.begin(), args.end(), [](const Term& t) { return t.isVariable(); });
}

bool Atom::contains(const Term& t) const {
    return std::find(args.begin(), args.end(), t) != args.end();
}

std::set<std::string> Atom::variables() const {
    std::set<std::string> out;
    for (const auto& t : args)
        if (t.isVariable())
            out.insert(t.name());
    return out;
}

std::string Atom::toString() const {
    std::string out = predicate + "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i)
            out += ',';
        out += args[i].toString();
    }
    return out + ")";
}

std::strong_ordering operator<=>(const Atom& a, const Atom& b) {
    if (auto c = a.predicate.compare(b.predicate) <=> 0; c != 0)
        return c;
    return std::lexicographical_compare_three_way(a.args.begin(), a.args.end(), b.args.begin(),
                                                  b.args.end());
}

std::size_t AtomHash::operator()(const Atom& a) const {
    std::size_t seed = std::hash<std::string>{}(a.predicate);
    for (const auto& t : a.args)
        hashCombine(seed, t.hash());
    return seed;
}

Term substitute(const Term& t, const Substitution& s) {
    if (!t.isVariable())
        return t;
    auto it = s.find(t.name());
    return it == s.end() ? t : it->second;
}

Atom substitute(const Atom& a, const Substitution& s) {
    Atom out;
    out.predicate = a.predicate;
    out.args.reserve(a.args.size());
    for (const auto& t : a.args)
        out.args.push_back(substitute(t, s));
    return out;
}

Substitution compose(const Substitution& outer, const Substitution& inner) {
    Substitution out;
    for (const auto& [var, term] : inner)
        out.emplace(var, substitute(term, outer));
    for (const auto& [var, term] : outer)
        out.emplace(var, term);
    return out;
}

std::string toString(const Substitution& s) {
    std::string out = "{";
    bool first = true;
    for (const auto& [var, term] : s) {
        if (!first)
            out += ", ";
        first = false;
        out += var + "->" + term.toString();
    }
    return out + "}";
}

std::set<std::string> variablesOf(std::span<const Atom> atoms) {
    std::set<std::string> out;
    for (const auto& a : atoms)
        for (const auto& t : a.args)
            if (t.isVariable())
                out.insert(t.name());
    return out;
}

std::map<std::string, int> occurrenceCounts(std::span<const Atom> atoms) {
    std::map<std::string, int> out;
    for (const auto& a : atoms)
        for (const auto& t : a.args)
            if (t.isVariable())
                ++out[t.name()];
    return out;
}

namespace {

void requireRuleTerms(const std::string& id, std::span<const Atom> atoms) {
    for (const auto& a : atoms)
        for (const auto& t : a.args)
            if (t.isNull())
                throw ModelError("rule " + id + ": labeled nulls are not allowed in rules");
}

}  // namespace

Tgd Tgd::make(std::string id, std::vector<Atom> body, Atom head) {
    if (body.empty())
        throw ModelError("tgd " + id + ": empty body");
    requireRuleTerms(id, body);
    requireRuleTerms(id, std::span<const Atom>(&head, 1));
    Tgd t;
    t.id = std::move(id);
    t.body = std::move(body);
    t.head = std::move(head);
    const auto bodyVars = variablesOf(t.body);
    for (const auto& v : t.head.variables()) {
        if (bodyVars.count(v))
            t.frontierVars.insert(v);
        else
            t.existentialVars.insert(v);
    }
    return t;
}

std::string Tgd::toString() const {
    return head.toString() + " <- " + joinAtoms(body) + ".";
}

Egd Egd::make(std::string id, std::vector<Atom> body, std::string lhs, std::string rhs) {
    requireRuleTerms(id, body);
    if (lhs == rhs)
        throw ModelError("egd " + id + ": both sides are the same variable " + lhs);
    const auto vars = variablesOf(body);
    if (!vars.count(lhs) || !vars.count(rhs))
        throw ModelError("egd " + id + ": equated variables must occur in the body");
    return Egd{std::move(id), std::move(body), std::move(lhs), std::move(rhs)};
}

std::string Egd::toString() const {
    return lhs + " = " + rhs + " <- " + joinAtoms(body) + ".";
}

NegConstraint NegConstraint::make(std::string id, std::vector<Atom> body) {
    if (body.empty())
        throw ModelError("constraint " + id + ": empty body");
    requireRuleTerms(id, body);
    return NegConstraint{std::move(id), std::move(body)};
}

std::string NegConstraint::toString() const {
    return "false <- " + joinAtoms(body) + ".";
}

std::set<std::string> Program::idbPredicates() const {
    std::set<std::string> out;
    for (const auto& t : tgds)
        out.insert(t.head.predicate);
    return out;
}

std::set<std::string> Program::edbPredicates() const {
    const auto idb = idbPredicates();
    std::set<std::string> out;
    for (const auto& [pred, arity] : schema())
        if (!idb.count(pred))
            out.insert(pred);
    return out;
}

std::map<std::string, std::size_t> Program::schema() const {
    std::map<std::string, std::size_t> out;
    auto add = [&](const Atom& a) { out.emplace(a.predicate, a.arity()); };
    for (const auto& t : tgds) {
        add(t.head);
        for (const auto& a : t.body)
            add(a);
    }
    for (const auto& e : egds)
        for (const auto& a : e.body)
            add(a);
    for (const auto& n : constraints)
        for (const auto& a : n.body)
            add(a);
    for (const auto& f : facts)
        add(f);
    return out;
}

void Program::addFact(Atom fact) {
    for (const auto& t : fact.args)
        if (!t.isConstant())
            throw ModelError("fact " + fact.toString() + " must be ground over constants");
    if (std::find(facts.begin(), facts.end(), fact) == facts.end())
        facts.push_back(std::move(fact));
}

std::set<std::string> Query::existentialQueryVars() const {
    auto vars = variablesOf(body);
    for (const auto& v : answerVars)
        vars.erase(v);
    return vars;
}

std::string Query::toString() const {
    std::string out = "?(";
    for (std::size_t i = 0; i < answerVars.size(); ++i) {
        if (i)
            out += ',';
        out += answerVars[i];
    }
    return out + ") <- " + joinAtoms(body) + ".";
}

Instance Instance::fromFacts(std::span<const Atom> facts) {
    Instance inst;
    for (const auto& f : facts)
        inst.insert(f);
    return inst;
}

std::optional<Instance::AtomId> Instance::find(const Atom& a) const {
    auto it = index_.find(a);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

std::pair<Instance::AtomId, bool> Instance::insert(Atom a, std::optional<Provenance> prov) {
    if (auto it = index_.find(a); it != index_.end())
        return {it->second, false};
    for (const auto& t : a.args) {
        if (t.isVariable())
            throw ModelError("instance atoms must be ground: " + a.toString());
        if (t.isNull() && t.nullId() >= nextNullId_)
            nextNullId_ = t.nullId() + 1;
    }
    const AtomId id = atoms_.size();
    auto& table = tables_[a.predicate];
    if (table.byArg.size() < a.arity())
        table.byArg.resize(a.arity());
    table.all.push_back(id);
    for (std::size_t i = 0; i < a.arity(); ++i)
        table.byArg[i][a.args[i]].push_back(id);
    index_.emplace(a, id);
    atoms_.push_back(std::move(a));
    provenance_.push_back(std::move(prov));
    return {id, true};
}

const std::vector<Instance::AtomId>& Instance::atomsOf(const std::string& predicate) const {
    static const std::vector<AtomId> none;
    auto it = tables_.find(predicate);
    return it == tables_.end() ? none : it->second.all;
}

const std::vector<Instance::AtomId>& Instance::atomsWith(const std::string& predicate,
                                                         std::size_t arg,
                                                         const Term& value) const {
    static const std::vector<AtomId> none;
    auto it = tables_.find(predicate);
    if (it == tables_.end() || arg >= it->second.byArg.size())
        return none;
    const auto& column = it->second.byArg[arg];
    auto hit = column.find(value);
    return hit == column.end() ? none : hit->second;
}

Term Instance::freshNull(bool frozen) {
    return Term::null(nextNullId_++, frozen);
}

void Instance::freezeAllNulls() {
    // Index keys ignore the frozen flag, so only the stored values change.
    for (auto& a : atoms_)
        for (auto& t : a.args)
            if (t.isNull())
                t = t.frozenCopy();
    for (auto& p : provenance_) {
        if (!p)
            continue;
        for (auto& [var, t] : p->trigger)
            if (t.isNull())
                t = t.frozenCopy();
    }
}

std::size_t Instance::nullCount() const {
    std::set<std::uint64_t> ids;
    for (const auto& a : atoms_)
        for (const auto& t : a.args)
            if (t.isNull())
                ids.insert(t.nullId());
    return ids.size();
}

std::size_t Instance::frozenNullCount() const {
    std::set<std::uint64_t> ids;
    for (const auto& a : atoms_)
        for (const auto& t : a.args)
            if (t.isFrozenNull())
                ids.insert(t.nullId());
    return ids.size();
}

std::vector<Atom> Instance::sortedAtoms() const {
    std::vector<Atom> out = atoms_;
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// Body compiled to variable slots so the search works on pointers into the
// instance rather than on name lookups.
struct CompiledArg {
    const Term* constant = nullptr;
    int slot = -1;
};

struct Matcher {
    const Instance& instance;
    const MatchOptions& options;
    const MatchCallback& callback;
    std::vector<std::vector<CompiledArg>> atoms;
    std::vector<const std::string*> predicates;
    std::vector<std::string> slotNames;
    std::vector<const Term*> binding;
    std::vector<Instance::AtomId> matched;
    const Substitution& prefix;
    bool stopped = false;

    const std::vector<Instance::AtomId>& candidates(std::size_t i) const {
        const auto* best = &instance.atomsOf(*predicates[i]);
        for (std::size_t k = 0; k < atoms[i].size(); ++k) {
            const auto& arg = atoms[i][k];
            const Term* value = arg.constant ? arg.constant : binding[arg.slot];
            if (!value)
                continue;
            const auto& list = instance.atomsWith(*predicates[i], k, *value);
            if (list.size() < best->size())
                best = &list;
        }
        return *best;
    }

    void search(std::size_t i) {
        if (stopped)
            return;
        if (i == atoms.size()) {
            if (options.deltaStart > 0 &&
                std::none_of(matched.begin(), matched.end(),
                             [&](auto id) { return id >= options.deltaStart; }))
                return;
            Substitution h = prefix;
            for (std::size_t s = 0; s < slotNames.size(); ++s)
                if (binding[s])
                    h.insert_or_assign(slotNames[s], *binding[s]);
            if (!callback(h, matched))
                stopped = true;
            return;
        }
        const auto& args = atoms[i];
        const auto& list = candidates(i);
        auto from = list.begin();
        // Last atom and nothing new matched yet: only delta atoms can qualify.
        if (options.deltaStart > 0 && i + 1 == atoms.size() &&
            std::none_of(matched.begin(), matched.end(), [&](auto id) { return id >= options.deltaStart; }))
            from = std::lower_bound(list.begin(), list.end(), options.deltaStart);
        for (auto it = from; it != list.end(); ++it) {
            const auto id = *it;
            if (id >= options.limit)
                break;
            const Atom& target = instance.atom(id);
            if (target.arity() != args.size())
                continue;
            std::vector<int> newlyBound;
            bool ok = true;
            for (std::size_t k = 0; k < args.size() && ok; ++k) {
                const auto& arg = args[k];
                if (arg.constant) {
                    ok = *arg.constant == target.args[k];
                } else if (binding[arg.slot]) {
                    ok = *binding[arg.slot] == target.args[k];
                } else {
                    binding[arg.slot] = &target.args[k];
                    newlyBound.push_back(arg.slot);
                }
            }
            if (ok) {
                matched.push_back(id);
                search(i + 1);
                matched.pop_back();
            }
            for (int s : newlyBound)
                binding[s] = nullptr;
            if (stopped)
                return;
        }
    }
};

}  // namespace

void forEachHomomorphism(std::span<const Atom> body, const Instance& instance,
                         const Substitution& prefix, const MatchCallback& callback,
                         const MatchOptions& options) {
    Matcher m{instance, options, callback, {}, {}, {}, {}, {}, prefix};
    std::map<std::string, int> slots;
    for (const auto& a : body) {
        std::vector<CompiledArg> compiled;
        for (const auto& t : a.args) {
            CompiledArg arg;
            if (!t.isVariable()) {
                arg.constant = &t;
            } else if (auto p = prefix.find(t.name()); p != prefix.end()) {
                arg.constant = &p->second;
            } else {
                auto [it, inserted] = slots.emplace(t.name(), static_cast<int>(m.slotNames.size()));
                if (inserted)
                    m.slotNames.push_back(t.name());
                arg.slot = it->second;
            }
            compiled.push_back(arg);
        }
        m.atoms.push_back(std::move(compiled));
        m.predicates.push_back(&a.predicate);
    }
    m.binding.assign(m.slotNames.size(), nullptr);
    m.search(0);
}

std::vector<Substitution> findHomomorphisms(std::span<const Atom> body, const Instance& instance,
                                            const Substitution& prefix) {
    std::vector<Substitution> out;
    forEachHomomorphism(body, instance, prefix, [&](const Substitution& h, auto) {
        out.push_back(h);
        return true;
    });
    return out;
}

bool hasHomomorphism(std::span<const Atom> body, const Instance& instance,
                     const Substitution& prefix) {
    bool found = false;
    forEachHomomorphism(body, instance, prefix, [&](const Substitution&, auto) {
        found = true;
        return false;
    });
    return found;
}

bool isHomomorphicTo(const Atom& source, const Atom& target) {
    if (source.predicate != target.predicate || source.arity() != target.arity())
        return false;
    std::unordered_map<std::uint64_t, const Term*> mu;
    for (std::size_t i = 0; i < source.arity(); ++i) {
        const Term& s = source.args[i];
        const Term& t = target.args[i];
        if (s.isNull() && !s.frozen()) {
            auto [it, inserted] = mu.emplace(s.nullId(), &t);
            if (!inserted && !(*it->second == t))
                return false;
        } else if (!(s == t)) {
            return false;
        }
    }
    return true;
}

bool hasHomomorphicImage(const Atom& source, const Instance& instance) {
    const std::vector<Instance::AtomId>* candidates = &instance.atomsOf(source.predicate);
    for (std::size_t i = 0; i < source.arity(); ++i) {
        const Term& t = source.args[i];
        if (t.isNull() && !t.frozen())
            continue;
        const auto& list = instance.atomsWith(source.predicate, i, t);
        if (list.size() < candidates->size())
            candidates = &list;
    }
    return std::any_of(candidates->begin(), candidates->end(),
                       [&](auto id) { return isHomomorphicTo(source, instance.atom(id)); });
}

}  // namespace dlpx
