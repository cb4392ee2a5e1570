#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "dlpx/classify.hpp"
#include "dlpx/magic.hpp"
#include "dlpx/qa.hpp"

namespace dlpx::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUserError = 1;
inline constexpr int kExitInternalError = 2;

// `args` excludes the program name. Results go to `out`, diagnostics to `err`.
int runCommand(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

nlohmann::json toJson(const ClassReport& report);
nlohmann::json toJson(const AnswerSet& answers);
nlohmann::json toJson(const ChaseResult& result);
nlohmann::json toJson(const ClosureReport& report);

}  // namespace dlpx::cli
