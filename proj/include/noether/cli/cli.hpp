#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace noether::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;   // a verification failed
inline constexpr int kExitUsage = 2;  // bad flags, unreadable or unparsable input

// Structured output header: {"schema": kSchema, "schema_version": kSchemaVersion, ...}
inline constexpr const char* kSchema = "noether-report";
inline constexpr int kSchemaVersion = 1;

// args excludes the program name. Reports go to `out` (or --out), usage and
// parse errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace noether::cli
