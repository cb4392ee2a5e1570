#include "dlpx/magic.hpp"

#include <deque>
#include <map>
#include <optional>

#include "dlpx/parser.hpp"

namespace dlpx {

namespace {

class Rewriter {
public:
    Rewriter(const Program& program, const MagicOptions& options)
        : program_(program),
          options_(options),
          idb_(program.idbPredicates()),
          finite_(extFinitePositions(program.tgds)),
          sourceSchema_(program.schema()) {}

    RewrittenProgram run(const Query& query) {
        out_.program.egds = program_.egds;
        out_.program.constraints = program_.constraints;
        out_.program.facts = program_.facts;
        out_.query = query;
        out_.sourceFingerprint = render(program_);

        rewriteQuery(query);
        while (!worklist_.empty()) {
            const Adornment a = worklist_.front();
            worklist_.pop_front();
            for (std::size_t r = 0; r < program_.tgds.size(); ++r)
                if (program_.tgds[r].head.predicate == a.predicate)
                    rewriteRule(r, a);
        }
        return std::move(out_);
    }

private:
    std::string pattern(const Atom& a, const std::set<std::string>& bound) const {
        std::string out;
        for (const auto& t : a.args)
            out += (t.isConstant() || (t.isVariable() && bound.count(t.name()))) ? 'b' : 'f';
        return out;
    }

    // Only extensional atoms pass bindings sideways. Their positions never
    // hold nulls and never feed a rule head, so magic rules built from them
    // cannot add sticky marks or infinite positions to the source schema.
    void passBindings(const Atom& a, std::set<std::string>& bound) const {
        if (idb_.count(a.predicate))
            return;
        for (const auto& t : a.args)
            if (t.isVariable())
                bound.insert(t.name());
    }

    // The guard (if any) followed by the extensional atoms before `end`.
    std::vector<Atom> extensionalPrefix(std::optional<Atom> guard, const std::vector<Atom>& atoms,
                                        std::size_t end) const {
        std::vector<Atom> body;
        if (guard)
            body.push_back(std::move(*guard));
        for (std::size_t k = 0; k < end; ++k)
            if (!idb_.count(atoms[k].predicate))
                body.push_back(atoms[k]);
        return body;
    }

    static Atom magicAtom(const Adornment& ad, const Atom& a) {
        Atom m(ad.magicPredicate(), {});
        for (std::size_t i = 0; i < a.arity(); ++i)
            if (ad.pattern[i] == 'b')
                m.args.push_back(a.args[i]);
        return m;
    }

    void declareMagic(const Adornment& ad) {
        const auto name = ad.magicPredicate();
        if (sourceSchema_.count(name))
            throw MagicError("magic predicate name " + name + " clashes with a source predicate");
        if (out_.magicPredicates.insert(name).second &&
            out_.magicPredicates.size() > options_.maxAdornedPredicates)
            throw MagicError("magic rewriting exceeds " + std::to_string(options_.maxAdornedPredicates) +
                             " adorned predicates");
    }

    void request(const Adornment& ad) {
        declareMagic(ad);
        if (seen_.insert(ad).second)
            worklist_.push_back(ad);
    }

    void emit(std::string id, std::vector<Atom> body, Atom head) {
        auto rule = Tgd::make(std::move(id), std::move(body), std::move(head));
        if (emitted_.insert(rule.toString()).second)
            out_.program.tgds.push_back(std::move(rule));
    }

    void rewriteQuery(const Query& query) {
        std::set<std::string> bound;
        for (std::size_t i = 0; i < query.body.size(); ++i) {
            const Atom& atom = query.body[i];
            const Adornment ad{atom.predicate, pattern(atom, bound)};
            if (i == 0) {
                out_.answerPredicate = ad;
                declareMagic(ad);
                out_.program.addFact(magicAtom(ad, atom));
                if (idb_.count(atom.predicate))
                    request(ad);
            } else if (idb_.count(atom.predicate)) {
                auto body = extensionalPrefix({}, query.body, i);
                // Without an extensional prefix every bound argument is a constant.
                if (body.empty())
                    out_.program.addFact(magicAtom(ad, atom));
                else
                    emit("q_m" + std::to_string(i), std::move(body), magicAtom(ad, atom));
                request(ad);
            }
            passBindings(atom, bound);
        }
    }

    void rewriteRule(std::size_t index, const Adornment& requested) {
        const Tgd& rule = program_.tgds[index];
        Adornment ad = requested;
        for (std::size_t i = 0; i < rule.head.arity(); ++i) {
            const auto& arg = rule.head.args[i];
            // A guard on an infinite position would cut the flow of invented
            // values through it and change the position's character.
            if ((arg.isVariable() && rule.isExistential(arg.name())) ||
                !finite_.contains({rule.head.predicate, static_cast<int>(i + 1)}))
                ad.pattern[i] = 'f';
        }
        if (ad != requested)
            bridge(requested, ad);
        if (!processed_.insert({index, ad.pattern}).second)
            return;

        const Atom guard = magicAtom(ad, rule.head);
        std::set<std::string> bound;
        for (const auto& t : guard.args)
            if (t.isVariable())
                bound.insert(t.name());

        const std::string base = rule.id + "_" + ad.pattern;
        for (std::size_t j = 0; j < rule.body.size(); ++j) {
            const Atom& atom = rule.body[j];
            if (idb_.count(atom.predicate)) {
                const Adornment inner{atom.predicate, pattern(atom, bound)};
                emit(base + "_m" + std::to_string(j + 1), extensionalPrefix(guard, rule.body, j),
                     magicAtom(inner, atom));
                request(inner);
            }
            passBindings(atom, bound);
        }
        std::vector<Atom> body{guard};
        body.insert(body.end(), rule.body.begin(), rule.body.end());
        emit(base, std::move(body), rule.head);
    }

    // Projects the caller's magic facts onto the downgraded adornment.
    void bridge(const Adornment& from, const Adornment& to) {
        declareMagic(to);
        Atom source(from.magicPredicate(), {});
        Atom target(to.magicPredicate(), {});
        for (std::size_t i = 0; i < from.pattern.size(); ++i) {
            if (from.pattern[i] != 'b')
                continue;
            const auto v = Term::variable("V" + std::to_string(i + 1));
            source.args.push_back(v);
            if (to.pattern[i] == 'b')
                target.args.push_back(v);
        }
        emit("bridge_" + from.predicate + "_" + from.pattern + "_" + to.pattern, {source}, target);
    }

    const Program& program_;
    const MagicOptions& options_;
    const std::set<std::string> idb_;
    const FinitePositionSet finite_;
    const std::map<std::string, std::size_t> sourceSchema_;

    RewrittenProgram out_;
    std::set<Adornment> seen_;
    std::deque<Adornment> worklist_;
    std::set<std::pair<std::size_t, std::string>> processed_;
    std::set<std::string> emitted_;
};

}  // namespace

RewrittenProgram magicRewrite(const Program& program, const Query& query, const MagicOptions& options) {
    validateQuery(program, query);
    return Rewriter(program, options).run(query);
}

FinitePositionSet withMagicPositions(FinitePositionSet base, const RewrittenProgram& rewritten) {
    for (const auto& [pred, arity] : rewritten.program.schema())
        if (rewritten.magicPredicates.count(pred))
            for (std::size_t i = 1; i <= arity; ++i)
                base.positions.insert({pred, static_cast<int>(i)});
    return base;
}

AnswerSet answerRewritten(const RewrittenProgram& rewritten, const FinitePositionSet& finite,
                          const QaOptions& options) {
    // The query was validated against the source program; the rewritten
    // program may no longer mention EDB predicates without facts.
    return evaluateQuery(rewritten.program, rewritten.query, withMagicPositions(finite, rewritten), options);
}

bool ClosureReport::closed() const {
    const bool classKept = !original.jointlyWeaklySticky || rewritten.jointlyWeaklySticky;
    return classKept && charactersPreserved && nullsInMagicPositions == 0;
}

ClosureReport verifyClosure(const Program& original, const RewrittenProgram& rewritten) {
    if (rewritten.sourceFingerprint != render(original))
        throw MagicError("rewritten program was not produced from this source program");

    ClosureReport report;
    report.original = classifyProgram(original.tgds);
    report.rewritten = classifyProgram(rewritten.program.tgds);

    const auto extOriginal = extFinitePositions(original.tgds);
    const auto extRewritten = extFinitePositions(rewritten.program.tgds);
    const auto rewrittenPositions = schemaPositions(rewritten.program.tgds);
    for (const auto& p : schemaPositions(original.tgds)) {
        if (!rewrittenPositions.count(p)) {
            report.droppedPositions.push_back(p);
            continue;
        }
        PositionCharacter c{p, extOriginal.contains(p), extRewritten.contains(p)};
        report.charactersPreserved = report.charactersPreserved && c.finiteInOriginal == c.finiteInRewritten;
        report.characters.push_back(c);
    }

    const auto config = answeringConfig(rewritten.query, withMagicPositions(extRewritten, rewritten));
    const auto chase = runParsimoniousChase(rewritten.program, config);
    report.testChaseTerminated = chase.terminated;
    for (const auto& a : chase.instance.atoms())
        if (rewritten.magicPredicates.count(a.predicate))
            for (const auto& t : a.args)
                report.nullsInMagicPositions += t.isNull() ? 1 : 0;
    return report;
}

}  // namespace dlpx
