#include "dlpx/parser.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "dlpx/qa.hpp"

namespace dlpx {

std::string Diagnostic::toString() const {
    return std::to_string(line) + ":" + std::to_string(column) + ": " + message;
}

namespace {

std::string joinDiagnostics(const std::vector<Diagnostic>& diagnostics) {
    std::string out;
    for (const auto& d : diagnostics) {
        if (!out.empty())
            out += '\n';
        out += d.toString();
    }
    return out;
}

}  // namespace

ParseError::ParseError(std::vector<Diagnostic> diagnostics)
    : Error(joinDiagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

namespace {

enum class Tok { Ident, Var, Quoted, LParen, RParen, Comma, Dot, Arrow, Eq, Question, Bad, End };

struct Token {
    Tok kind;
    std::string text;
    int line;
    int column;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skipBlankAndComments();
            const int line = line_, col = col_;
            if (pos_ >= text_.size()) {
                out.push_back({Tok::End, "", line, col});
                return out;
            }
            const char c = text_[pos_];
            const auto u = static_cast<unsigned char>(c);
            if (c == '_' && pos_ + 1 < text_.size() && text_[pos_ + 1] == ':') {
                advance(2);
                while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_])))
                    advance(1);
                out.push_back({Tok::Bad, "labeled nulls cannot be written in source text", line, col});
            } else if (std::isupper(u) || c == '_') {
                out.push_back({Tok::Var, word(), line, col});
            } else if (std::islower(u) || std::isdigit(u)) {
                out.push_back({Tok::Ident, word(), line, col});
            } else if (c == '"') {
                out.push_back(quoted(line, col));
            } else if (c == '(') {
                advance(1);
                out.push_back({Tok::LParen, "(", line, col});
            } else if (c == ')') {
                advance(1);
                out.push_back({Tok::RParen, ")", line, col});
            } else if (c == ',') {
                advance(1);
                out.push_back({Tok::Comma, ",", line, col});
            } else if (c == '.') {
                advance(1);
                out.push_back({Tok::Dot, ".", line, col});
            } else if (c == '=') {
                advance(1);
                out.push_back({Tok::Eq, "=", line, col});
            } else if (c == '?') {
                advance(1);
                out.push_back({Tok::Question, "?", line, col});
            } else if ((c == '<' || c == ':') && pos_ + 1 < text_.size() && text_[pos_ + 1] == '-') {
                advance(2);
                out.push_back({Tok::Arrow, "<-", line, col});
            } else {
                advance(1);
                out.push_back({Tok::Bad, std::string("unexpected character '") + c + "'", line, col});
            }
        }
    }

private:
    void advance(std::size_t n) {
        for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i) {
            if (text_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
            ++pos_;
        }
    }

    void skipBlankAndComments() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance(1);
            } else if (c == '%') {
                while (pos_ < text_.size() && text_[pos_] != '\n')
                    advance(1);
            } else {
                return;
            }
        }
    }

    std::string word() {
        const std::size_t start = pos_;
        while (pos_ < text_.size()) {
            const auto u = static_cast<unsigned char>(text_[pos_]);
            if (!(std::isalnum(u) || text_[pos_] == '_'))
                break;
            advance(1);
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    Token quoted(int line, int col) {
        advance(1);
        std::string value;
        while (pos_ < text_.size() && text_[pos_] != '"') {
            if (text_[pos_] == '\\' && pos_ + 1 < text_.size())
                advance(1);
            value += text_[pos_];
            advance(1);
        }
        if (pos_ >= text_.size())
            return {Tok::Bad, "unterminated string", line, col};
        advance(1);
        return {Tok::Quoted, value, line, col};
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

struct StatementError {
    Diagnostic diagnostic;
};

struct Located {
    Atom atom;
    int line;
    int column;
};

class Parser {
public:
    explicit Parser(std::string_view text) : tokens_(Lexer(text).run()) {}

    SourceProgram program(std::string text) {
        SourceProgram out;
        out.text = std::move(text);
        while (peek().kind != Tok::End) {
            try {
                statement(out.parsed);
            } catch (const StatementError& e) {
                out.diagnostics.push_back(e.diagnostic);
                recover();
            }
        }
        return out;
    }

    Query query() {
        std::vector<Diagnostic> diagnostics;
        try {
            Query q;
            expect(Tok::Question, "expected '?(' to start a query");
            expect(Tok::LParen, "expected '(' after '?'");
            std::vector<Token> answer;
            if (peek().kind != Tok::RParen) {
                for (;;) {
                    const Token& t = next();
                    if (t.kind != Tok::Var)
                        fail(t, "answer positions must be variables");
                    answer.push_back(t);
                    if (peek().kind != Tok::Comma)
                        break;
                    next();
                }
            }
            expect(Tok::RParen, "expected ')' closing the answer variables");
            expect(Tok::Arrow, "expected '<-' after the query head");
            for (auto& a : body())
                q.body.push_back(std::move(a.atom));
            if (peek().kind == Tok::Dot)
                next();
            if (peek().kind != Tok::End)
                fail(peek(), "unexpected text after the query");
            const auto vars = variablesOf(q.body);
            for (const auto& t : answer) {
                if (!vars.count(t.text))
                    fail(t, "answer variable " + t.text + " does not occur in the query body");
                q.answerVars.push_back(t.text);
            }
            return q;
        } catch (const StatementError& e) {
            diagnostics.push_back(e.diagnostic);
        }
        throw ParseError(std::move(diagnostics));
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& peekAt(std::size_t k) const { return tokens_[std::min(pos_ + k, tokens_.size() - 1)]; }
    const Token& next() {
        const Token& t = tokens_[pos_];
        if (t.kind != Tok::End)
            ++pos_;
        return t;
    }

    [[noreturn]] static void fail(const Token& at, std::string message) {
        throw StatementError{{at.line, at.column, std::move(message)}};
    }
    [[noreturn]] static void fail(int line, int column, std::string message) {
        throw StatementError{{line, column, std::move(message)}};
    }

    const Token& expect(Tok kind, const char* message) {
        const Token& t = next();
        if (t.kind == Tok::Bad)
            fail(t, t.text);
        if (t.kind != kind)
            fail(t, message);
        return t;
    }

    void recover() {
        while (peek().kind != Tok::End && peek().kind != Tok::Dot)
            next();
        if (peek().kind == Tok::Dot)
            next();
    }

    Term term() {
        const Token& t = next();
        switch (t.kind) {
        case Tok::Var:
            return Term::variable(t.text);
        case Tok::Ident:
        case Tok::Quoted:
            return Term::constant(t.text);
        case Tok::Bad:
            fail(t, t.text);
        default:
            fail(t, "expected a term");
        }
    }

    Located atom() {
        const Token& name = next();
        if (name.kind == Tok::Bad)
            fail(name, name.text);
        if (name.kind != Tok::Ident || !std::islower(static_cast<unsigned char>(name.text[0])))
            fail(name, "expected a predicate name");
        if (name.text == "false")
            fail(name, "'false' can only head a negative constraint");
        Located out{Atom(name.text, {}), name.line, name.column};
        if (peek().kind == Tok::LParen) {
            next();
            if (peek().kind != Tok::RParen) {
                for (;;) {
                    out.atom.args.push_back(term());
                    if (peek().kind != Tok::Comma)
                        break;
                    next();
                }
            }
            expect(Tok::RParen, "expected ')' or ','");
        }
        checkArity(out);
        return out;
    }

    std::vector<Located> body() {
        std::vector<Located> out;
        out.push_back(atom());
        while (peek().kind == Tok::Comma) {
            next();
            out.push_back(atom());
        }
        return out;
    }

    void checkArity(const Located& a) {
        auto [it, inserted] = arities_.emplace(a.atom.predicate, a.atom.arity());
        if (!inserted && it->second != a.atom.arity())
            fail(a.line, a.column,
                 "predicate " + a.atom.predicate + " used with arity " +
                     std::to_string(a.atom.arity()) + " but earlier with arity " +
                     std::to_string(it->second));
    }

    static std::vector<Atom> atomsOf(std::vector<Located> located) {
        std::vector<Atom> out;
        for (auto& l : located)
            out.push_back(std::move(l.atom));
        return out;
    }

    void statement(Program& program) {
        const Token& first = peek();
        if (first.kind == Tok::Bad)
            fail(first, first.text);
        if (first.kind == Tok::Question)
            fail(first, "queries are not part of a program; pass them separately");
        if (first.kind == Tok::Ident && first.text == "false") {
            next();
            expect(Tok::Arrow, "expected '<-' after 'false'");
            auto b = atomsOf(body());
            expect(Tok::Dot, "expected '.' at the end of the constraint");
            program.constraints.push_back(
                NegConstraint::make("n" + std::to_string(program.constraints.size() + 1), std::move(b)));
            return;
        }
        if (first.kind == Tok::Var && peekAt(1).kind == Tok::Eq) {
            const Token lhs = next();
            next();
            const Token rhs = next();
            if (rhs.kind != Tok::Var)
                fail(rhs, "the right side of '=' must be a variable");
            expect(Tok::Arrow, "expected '<-' after the equality");
            auto b = atomsOf(body());
            expect(Tok::Dot, "expected '.' at the end of the egd");
            const auto vars = variablesOf(b);
            if (!vars.count(lhs.text))
                fail(lhs, "variable " + lhs.text + " on the left of '=' does not occur in the body");
            if (!vars.count(rhs.text))
                fail(rhs, "variable " + rhs.text + " on the right of '=' does not occur in the body");
            if (lhs.text == rhs.text)
                fail(lhs, "an egd must equate two distinct variables");
            program.egds.push_back(Egd::make("e" + std::to_string(program.egds.size() + 1),
                                             std::move(b), lhs.text, rhs.text));
            return;
        }
        auto head = body();
        const Token& after = next();
        if (after.kind == Tok::Dot) {
            if (head.size() != 1)
                fail(head[1].line, head[1].column, "facts must be written one per statement");
            if (!head[0].atom.isGround())
                fail(head[0].line, head[0].column,
                     "a fact cannot contain variables; rules need a body after '<-'");
            program.addFact(std::move(head[0].atom));
            return;
        }
        if (after.kind == Tok::Bad)
            fail(after, after.text);
        if (after.kind != Tok::Arrow)
            fail(after, "expected '.' or '<-'");
        if (head.size() != 1)
            fail(head[1].line, head[1].column, "rule heads must be a single atom");
        auto b = atomsOf(body());
        expect(Tok::Dot, "expected '.' at the end of the rule");
        program.tgds.push_back(Tgd::make("r" + std::to_string(program.tgds.size() + 1),
                                         std::move(b), std::move(head[0].atom)));
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::map<std::string, std::size_t> arities_;
};

std::string readFile(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> splitCsvRow(const std::string& row) {
    std::vector<std::string> out;
    std::string field;
    bool inQuotes = false;
    for (std::size_t i = 0; i < row.size(); ++i) {
        const char c = row[i];
        if (inQuotes) {
            if (c == '"' && i + 1 < row.size() && row[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                inQuotes = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            inQuotes = true;
        } else if (c == ',') {
            out.push_back(field);
            field.clear();
        } else {
            field += c;
        }
    }
    out.push_back(field);
    for (auto& f : out) {
        const auto b = f.find_first_not_of(" \t\r");
        const auto e = f.find_last_not_of(" \t\r");
        f = b == std::string::npos ? std::string{} : f.substr(b, e - b + 1);
    }
    return out;
}

}  // namespace

SourceProgram parseSource(std::string text) {
    Parser parser(text);
    return parser.program(std::move(text));
}

Program parseProgram(std::string_view text) {
    auto source = parseSource(std::string(text));
    if (!source.ok())
        throw ParseError(std::move(source.diagnostics));
    return std::move(source.parsed);
}

Query parseQuery(std::string_view text) {
    Parser parser(text);
    return parser.query();
}

Program loadProgramFile(const std::filesystem::path& path) {
    auto source = parseSource(readFile(path));
    if (!source.ok()) {
        for (auto& d : source.diagnostics)
            d.message = path.string() + ": " + d.message;
        throw ParseError(std::move(source.diagnostics));
    }
    return std::move(source.parsed);
}

Query loadQueryFile(const std::filesystem::path& path) {
    return parseQuery(readFile(path));
}

void loadFactsDirectory(const std::filesystem::path& dir, Program& program) {
    if (!std::filesystem::is_directory(dir))
        throw Error("not a directory: " + dir.string());
    auto schema = program.schema();
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".csv")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::vector<Diagnostic> diagnostics;
    for (const auto& file : files) {
        const std::string predicate = file.stem().string();
        std::istringstream in(readFile(file));
        std::string row;
        int line = 0;
        while (std::getline(in, row)) {
            ++line;
            if (row.find_first_not_of(" \t\r") == std::string::npos)
                continue;
            Atom fact(predicate, {});
            for (auto& field : splitCsvRow(row))
                fact.args.push_back(Term::constant(std::move(field)));
            auto [it, inserted] = schema.emplace(predicate, fact.arity());
            if (!inserted && it->second != fact.arity()) {
                diagnostics.push_back({line, 1,
                                       file.string() + ": predicate " + predicate + " has arity " +
                                           std::to_string(it->second) + ", row has " +
                                           std::to_string(fact.arity()) + " fields"});
                continue;
            }
            program.addFact(std::move(fact));
        }
    }
    if (!diagnostics.empty())
        throw ParseError(std::move(diagnostics));
}

std::string render(const Program& program) {
    std::string out;
    for (const auto& t : program.tgds)
        out += t.toString() + "\n";
    for (const auto& e : program.egds)
        out += e.toString() + "\n";
    for (const auto& n : program.constraints)
        out += n.toString() + "\n";
    for (const auto& f : program.facts)
        out += f.toString() + ".\n";
    return out;
}

std::string render(const Instance& instance) {
    std::string out;
    for (const auto& a : instance.sortedAtoms())
        out += a.toString() + ".\n";
    return out;
}

std::string render(const AnswerSet& answers) {
    std::string out;
    if (answers.isBoolean()) {
        out += answers.booleanResult ? "yes\n" : "no\n";
    } else {
        for (const auto& tuple : answers.tuples) {
            for (std::size_t i = 0; i < tuple.size(); ++i) {
                if (i)
                    out += ", ";
                out += answers.answerVars[i] + "=" + tuple[i].toString();
            }
            out += "\n";
        }
    }
    if (!answers.complete)
        out += "% complete=false\n";
    for (const auto& v : answers.constraintViolations)
        out += "% violation: " + v.toString() + "\n";
    return out;
}

}  // namespace dlpx
