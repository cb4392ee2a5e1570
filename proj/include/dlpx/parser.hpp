#pragma once

// Text frontend for `.dlp` programs, queries and CSV fact directories, and
// the deterministic renderer used for all text output.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dlpx/core.hpp"

namespace dlpx {

struct Diagnostic {
    int line = 0;
    int column = 0;
    std::string message;

    std::string toString() const;
};

class ParseError : public Error {
public:
    explicit ParseError(std::vector<Diagnostic> diagnostics);
    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

struct SourceProgram {
    std::string text;
    Program parsed;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return diagnostics.empty(); }
};

// Parses as much as possible, collecting one diagnostic per bad statement.
SourceProgram parseSource(std::string text);

// Throws ParseError on any diagnostic.
Program parseProgram(std::string_view text);
Query parseQuery(std::string_view text);

Program loadProgramFile(const std::filesystem::path& path);
Query loadQueryFile(const std::filesystem::path& path);

// Loads `<pred>.csv` files (one atom per row) into the program's facts.
void loadFactsDirectory(const std::filesystem::path& dir, Program& program);

struct AnswerSet;

std::string render(const Program& program);
// Atoms sorted by (predicate, args), one `p(a,b).` per line.
std::string render(const Instance& instance);
std::string render(const AnswerSet& answers);

}  // namespace dlpx
