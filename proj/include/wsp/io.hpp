#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "wsp/classify.hpp"
#include "wsp/core.hpp"
#include "wsp/kernel.hpp"
#include "wsp/reductions.hpp"

// Text formats. Every parser accepts `#` comments and blank lines and
// throws ParseError with a "line N:" prefix. The grammars are described
// in docs/FORMATS.md.

namespace wsp {

/// Instance document. Parsing checks syntax, names and constraint
/// parameters; the whole-schema checks of validate_schema are left to the
/// caller.
Schema parse_instance(std::string_view text);

/// Canonical text: tasks, users, one auth line per task, then the
/// constraints, all in declaration order. `comments` become leading
/// `# ` lines.
std::string serialize_instance(const Schema& schema, const std::vector<std::string>& comments = {});

/// `task user` lines, by name.
std::map<std::string, std::string> parse_assignment(std::string_view text);

/// Plan over `schema`; tasks without a line stay unassigned. Unknown
/// names and repeated tasks are ParseErrors.
Plan parse_plan(const Schema& schema, std::string_view text);

/// Assigned tasks in declaration order.
std::string serialize_plan(const Schema& schema, const Plan& plan);

/// First line: the arity. Then one eligible partition per line in block
/// notation over 1-based positions, e.g. `{1,2}|{3}`.
RelationSpec parse_relation(std::string_view text, int max_arity = kDefaultMaxArity);
std::string serialize_relation(const RelationSpec& spec);

/// `arity: r`, `universe: u`, then one tuple per line.
TupleTable parse_tuple_table(std::string_view text);
std::string serialize_tuple_table(const TupleTable& table);

/// DIMACS CNF (`c` comments, `p cnf vars clauses`, 0-terminated clauses).
CnfFormula parse_dimacs(std::string_view text);
std::string serialize_dimacs(const CnfFormula& f, const std::vector<std::string>& comments = {});

/// `vertices:`, `colors:`, `color v: j` and `set: v ...` lines.
MchsInstance parse_mchs(std::string_view text);
std::string serialize_mchs(const MchsInstance& inst, const std::vector<std::string>& comments = {});

/// Machine-readable part of a kernelization, enough to lift plans offline.
struct KernelLog {
    KernelVerdict verdict = KernelVerdict::Reduced;
    std::string reason;
    std::vector<MergeRecord> merges;
    std::vector<std::string> marked;
    std::vector<std::string> hard;
    std::vector<std::pair<std::string, std::string>> representatives;

    friend bool operator==(const KernelLog&, const KernelLog&) = default;
};

KernelLog kernel_log_of(const KernelResult& result);

/// Sections VERDICT, REASON (optional), MERGES, MARKED, HARD and REPS.
KernelLog parse_kernel_log(std::string_view text);
std::string serialize_kernel_log(const KernelLog& log);

/// Whole file as a string; throws Error if it cannot be read.
std::string read_file(const std::string& path);
/// Throws Error if the file cannot be written.
void write_file(const std::string& path, std::string_view contents);

} // namespace wsp
