#include "wsp/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "wsp/constraints.hpp"
#include "wsp/error.hpp"

namespace wsp {

namespace {

struct Line {
    int number;
    std::string text;
};

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

// Non-blank lines with `comment`-introduced tails removed.
std::vector<Line> content_lines(std::string_view text, char comment = '#') {
    std::vector<Line> out;
    int number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        ++number;
        auto raw = text.substr(pos, end - pos);
        if (const auto hash = raw.find(comment); hash != std::string_view::npos) {
            raw = raw.substr(0, hash);
        }
        if (auto t = trim(raw); !t.empty()) {
            out.push_back({number, std::move(t)});
        }
        pos = end + 1;
    }
    return out;
}

std::vector<std::string> tokens(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    for (std::string tok; in >> tok;) {
        out.push_back(std::move(tok));
    }
    return out;
}

[[noreturn]] void fail(int line, const std::string& message) {
    throw ParseError("line " + std::to_string(line) + ": " + message);
}

int parse_int(const std::string& tok, int line) {
    int value = 0;
    const auto* end = tok.data() + tok.size();
    const auto [ptr, ec] = std::from_chars(tok.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        fail(line, "expected an integer, got '" + tok + "'");
    }
    return value;
}

void check_name(const std::string& name, int line) {
    if (name.find_first_of(":|#{}") != std::string::npos) {
        fail(line, "invalid name '" + name + "'");
    }
}

std::vector<std::string> unique_names(std::vector<std::string> names, int line, const char* what) {
    std::vector<std::string> seen;
    for (const auto& n : names) {
        check_name(n, line);
        if (std::find(seen.begin(), seen.end(), n) != seen.end()) {
            fail(line, std::string("duplicate ") + what + " '" + n + "'");
        }
        seen.push_back(n);
    }
    return names;
}

std::string join(const std::vector<std::string>& items, std::string_view sep = " ") {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) {
            out += sep;
        }
        out += items[i];
    }
    return out;
}

void put_comments(std::string& out, const std::vector<std::string>& comments, std::string_view prefix) {
    for (const auto& c : comments) {
        out += prefix;
        out += c;
        out += '\n';
    }
}

// Splits "head: body"; fails without a colon.
std::pair<std::vector<std::string>, std::string> split_header(const Line& l) {
    const auto colon = l.text.find(':');
    if (colon == std::string::npos) {
        fail(l.number, "expected 'keyword: ...'");
    }
    return {tokens(std::string_view(l.text).substr(0, colon)), l.text.substr(colon + 1)};
}

std::size_t expected_params(Kind kind) {
    switch (kind) {
    case Kind::AtMost:
    case Kind::AtLeast:
        return 1;
    case Kind::PerUser:
        return 2;
    default:
        return 0;
    }
}

} // namespace

Schema parse_instance(std::string_view text) {
    Schema s;
    bool have_tasks = false;
    bool have_users = false;
    std::vector<char> have_auth;
    for (const auto& l : content_lines(text)) {
        auto [head, rest] = split_header(l);
        if (head.empty()) {
            fail(l.number, "missing keyword");
        }
        const std::string& key = head[0];
        if (key == "tasks" || key == "users") {
            if (head.size() != 1) {
                fail(l.number, "unexpected tokens before ':'");
            }
            bool& seen = key == "tasks" ? have_tasks : have_users;
            if (seen) {
                fail(l.number, "repeated '" + key + "' line");
            }
            seen = true;
            auto names = unique_names(tokens(rest), l.number, key == "tasks" ? "task" : "user");
            if (key == "tasks") {
                s.tasks = std::move(names);
                s.auth.assign(s.tasks.size(), {});
                have_auth.assign(s.tasks.size(), 0);
            } else {
                s.users = std::move(names);
            }
        } else if (key == "auth") {
            if (!have_tasks || !have_users) {
                fail(l.number, "auth before the tasks and users lines");
            }
            if (head.size() != 2) {
                fail(l.number, "expected 'auth <task>: <users>'");
            }
            const auto task = s.find_task(head[1]);
            if (!task) {
                fail(l.number, "unknown task '" + head[1] + "'");
            }
            if (have_auth[static_cast<std::size_t>(*task)]) {
                fail(l.number, "repeated auth line for '" + head[1] + "'");
            }
            have_auth[static_cast<std::size_t>(*task)] = 1;
            std::vector<int> users;
            for (const auto& name : tokens(rest)) {
                const auto u = s.find_user(name);
                if (!u) {
                    fail(l.number, "unknown user '" + name + "'");
                }
                users.push_back(*u);
            }
            s.auth[static_cast<std::size_t>(*task)] = make_set(std::move(users));
        } else if (key == "constraint") {
            if (!have_tasks) {
                fail(l.number, "constraint before the tasks line");
            }
            if (head.size() < 2) {
                fail(l.number, "missing constraint kind");
            }
            const auto kind = parse_kind(head[1]);
            if (!kind) {
                fail(l.number, "unknown constraint kind '" + head[1] + "'");
            }
            Constraint c;
            c.kind = *kind;
            for (std::size_t i = 2; i < head.size(); ++i) {
                c.params.push_back(parse_int(head[i], l.number));
            }
            if (c.params.size() != expected_params(*kind)) {
                fail(l.number, head[1] + " takes " + std::to_string(expected_params(*kind)) + " parameter(s)");
            }
            std::string body;
            for (char ch : rest) {
                body += ch == '|' ? std::string(" | ") : std::string(1, ch);
            }
            const bool two_sided = *kind == Kind::Bind || *kind == Kind::Sep;
            bool seen_bar = false;
            for (const auto& name : tokens(body)) {
                if (name == "|") {
                    if (!two_sided || seen_bar) {
                        fail(l.number, "unexpected '|'");
                    }
                    seen_bar = true;
                    c.split = c.scope.size();
                    continue;
                }
                const auto t = s.find_task(name);
                if (!t) {
                    fail(l.number, "unknown task '" + name + "'");
                }
                c.scope.push_back(*t);
            }
            if (two_sided && !seen_bar) {
                fail(l.number, head[1] + " needs two task sets separated by '|'");
            }
            try {
                check_constraint(c);
            } catch (const DomainError& e) {
                fail(l.number, e.what());
            }
            s.constraints.push_back(std::move(c));
        } else {
            fail(l.number, "unknown keyword '" + key + "'");
        }
    }
    if (!have_tasks || !have_users) {
        throw ParseError(std::string("missing '") + (have_tasks ? "users" : "tasks") + ":' line");
    }
    return s;
}

std::string serialize_instance(const Schema& schema, const std::vector<std::string>& comments) {
    std::string out;
    put_comments(out, comments, "# ");
    auto line = [&out](std::string_view head, const std::vector<std::string>& items) {
        out += head;
        out += ':';
        for (const auto& item : items) {
            out += ' ';
            out += item;
        }
        out += '\n';
    };
    line("tasks", schema.tasks);
    line("users", schema.users);
    auto task_names = [&](auto first, auto last) {
        std::vector<std::string> names;
        for (auto it = first; it != last; ++it) {
            names.push_back(schema.tasks.at(static_cast<std::size_t>(*it)));
        }
        return names;
    };
    for (std::size_t t = 0; t < schema.tasks.size(); ++t) {
        std::vector<std::string> users;
        for (UserId u : schema.auth.at(t)) {
            users.push_back(schema.users.at(static_cast<std::size_t>(u)));
        }
        line("auth " + schema.tasks[t], users);
    }
    for (const auto& c : schema.constraints) {
        std::string head = "constraint " + std::string(kind_name(c.kind));
        for (int p : c.params) {
            head += ' ' + std::to_string(p);
        }
        std::vector<std::string> body;
        if (c.kind == Kind::Bind || c.kind == Kind::Sep) {
            const auto mid = c.scope.begin() + static_cast<std::ptrdiff_t>(c.split);
            body = task_names(c.scope.begin(), mid);
            body.push_back("|");
            const auto right = task_names(mid, c.scope.end());
            body.insert(body.end(), right.begin(), right.end());
        } else {
            body = task_names(c.scope.begin(), c.scope.end());
        }
        line(head, body);
    }
    return out;
}

std::map<std::string, std::string> parse_assignment(std::string_view text) {
    std::map<std::string, std::string> out;
    for (const auto& l : content_lines(text)) {
        const auto tok = tokens(l.text);
        if (tok.size() != 2) {
            fail(l.number, "expected '<task> <user>'");
        }
        if (!out.emplace(tok[0], tok[1]).second) {
            fail(l.number, "task '" + tok[0] + "' assigned twice");
        }
    }
    return out;
}

Plan parse_plan(const Schema& schema, std::string_view text) {
    Plan plan(schema.num_tasks());
    std::vector<char> seen(schema.num_tasks(), 0);
    for (const auto& l : content_lines(text)) {
        const auto tok = tokens(l.text);
        if (tok.size() != 2) {
            fail(l.number, "expected '<task> <user>'");
        }
        const auto t = schema.find_task(tok[0]);
        if (!t) {
            fail(l.number, "unknown task '" + tok[0] + "'");
        }
        const auto u = schema.find_user(tok[1]);
        if (!u) {
            fail(l.number, "unknown user '" + tok[1] + "'");
        }
        if (seen[static_cast<std::size_t>(*t)]) {
            fail(l.number, "task '" + tok[0] + "' assigned twice");
        }
        seen[static_cast<std::size_t>(*t)] = 1;
        plan.assign(*t, *u);
    }
    return plan;
}

std::string serialize_plan(const Schema& schema, const Plan& plan) {
    std::string out;
    for (std::size_t t = 0; t < plan.size(); ++t) {
        if (plan.assigned(static_cast<TaskId>(t))) {
            out += schema.tasks.at(t) + ' ' + schema.users.at(static_cast<std::size_t>(plan[static_cast<TaskId>(t)])) + '\n';
        }
    }
    return out;
}

RelationSpec parse_relation(std::string_view text, int max_arity) {
    const auto lines = content_lines(text);
    if (lines.empty()) {
        throw ParseError("empty relation file");
    }
    const int arity = parse_int(lines[0].text, lines[0].number);
    if (arity < 1 || arity > max_arity) {
        fail(lines[0].number, "arity " + std::to_string(arity) + " outside [1, " + std::to_string(max_arity) + "]");
    }
    std::vector<PositionPartition> eligible;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& l = lines[i];
        std::vector<std::vector<int>> blocks;
        std::vector<char> used(static_cast<std::size_t>(arity), 0);
        std::istringstream parts(l.text);
        for (std::string part; std::getline(parts, part, '|');) {
            part = trim(part);
            if (part.size() < 2 || part.front() != '{' || part.back() != '}') {
                fail(l.number, "expected a block like {1,2}");
            }
            std::vector<int> block;
            std::istringstream members(part.substr(1, part.size() - 2));
            for (std::string m; std::getline(members, m, ',');) {
                const int pos = parse_int(trim(m), l.number);
                if (pos < 1 || pos > arity) {
                    fail(l.number, "position " + std::to_string(pos) + " outside [1, " + std::to_string(arity) + "]");
                }
                if (used[static_cast<std::size_t>(pos - 1)]) {
                    fail(l.number, "position " + std::to_string(pos) + " appears twice");
                }
                used[static_cast<std::size_t>(pos - 1)] = 1;
                block.push_back(pos - 1);
            }
            if (block.empty()) {
                fail(l.number, "empty block");
            }
            blocks.push_back(std::move(block));
        }
        if (std::find(used.begin(), used.end(), 0) != used.end()) {
            fail(l.number, "partition does not cover every position");
        }
        eligible.push_back(partition_from_blocks(arity, blocks));
    }
    try {
        return RelationSpec(arity, std::move(eligible), max_arity);
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }
}

std::string serialize_relation(const RelationSpec& spec) {
    std::string out = std::to_string(spec.arity()) + '\n';
    for (const auto& p : spec.eligible()) {
        const int blocks = p.empty() ? 0 : *std::max_element(p.begin(), p.end()) + 1;
        std::vector<std::string> parts;
        for (int b = 0; b < blocks; ++b) {
            std::vector<std::string> members;
            for (std::size_t i = 0; i < p.size(); ++i) {
                if (p[i] == b) {
                    members.push_back(std::to_string(i + 1));
                }
            }
            parts.push_back('{' + join(members, ",") + '}');
        }
        out += join(parts, "|") + '\n';
    }
    return out;
}

TupleTable parse_tuple_table(std::string_view text) {
    TupleTable table;
    bool have_arity = false;
    bool have_universe = false;
    for (const auto& l : content_lines(text)) {
        if (l.text.find(':') != std::string::npos) {
            auto [head, rest] = split_header(l);
            const auto value = tokens(rest);
            if (head.size() != 1 || value.size() != 1) {
                fail(l.number, "expected 'arity: r' or 'universe: u'");
            }
            if (head[0] == "arity" && !have_arity) {
                table.arity = parse_int(value[0], l.number);
                have_arity = true;
            } else if (head[0] == "universe" && !have_universe) {
                table.universe = parse_int(value[0], l.number);
                have_universe = true;
            } else {
                fail(l.number, "unexpected or repeated '" + head[0] + "'");
            }
            continue;
        }
        if (!have_arity || !have_universe) {
            fail(l.number, "tuples before the arity and universe lines");
        }
        std::vector<int> tuple;
        for (const auto& tok : tokens(l.text)) {
            const int v = parse_int(tok, l.number);
            if (v < 1 || v > table.universe) {
                fail(l.number, "user " + tok + " outside [1, " + std::to_string(table.universe) + "]");
            }
            tuple.push_back(v);
        }
        if (static_cast<int>(tuple.size()) != table.arity) {
            fail(l.number, "tuple length differs from the arity");
        }
        table.tuples.push_back(std::move(tuple));
    }
    if (!have_arity || !have_universe) {
        throw ParseError("missing arity or universe line");
    }
    if (table.arity < 1) {
        throw ParseError("arity must be positive");
    }
    return table;
}

std::string serialize_tuple_table(const TupleTable& table) {
    std::string out = "arity: " + std::to_string(table.arity) + "\nuniverse: " + std::to_string(table.universe) + '\n';
    for (const auto& tuple : table.tuples) {
        std::vector<std::string> items;
        for (int v : tuple) {
            items.push_back(std::to_string(v));
        }
        out += join(items) + '\n';
    }
    return out;
}

CnfFormula parse_dimacs(std::string_view text) {
    CnfFormula f;
    int declared = -1;
    std::vector<int> clause;
    int last_line = 0;
    for (const auto& l : content_lines(text, '%')) {
        last_line = l.number;
        if (l.text.front() == 'c') {
            continue;
        }
        const auto tok = tokens(l.text);
        if (tok.front() == "p") {
            if (declared >= 0 || tok.size() != 4 || tok[1] != "cnf") {
                fail(l.number, "expected a single 'p cnf <vars> <clauses>' line");
            }
            f.num_vars = parse_int(tok[2], l.number);
            declared = parse_int(tok[3], l.number);
            if (f.num_vars < 0 || declared < 0) {
                fail(l.number, "negative counts in the problem line");
            }
            continue;
        }
        if (declared < 0) {
            fail(l.number, "clause before the problem line");
        }
        for (const auto& t : tok) {
            const int lit = parse_int(t, l.number);
            if (lit == 0) {
                if (clause.empty()) {
                    fail(l.number, "empty clause");
                }
                f.clauses.push_back(std::move(clause));
                clause.clear();
            } else if (std::abs(lit) > f.num_vars) {
                fail(l.number, "literal " + t + " exceeds the declared variable count");
            } else {
                clause.push_back(lit);
            }
        }
    }
    if (declared < 0) {
        throw ParseError("missing problem line");
    }
    if (!clause.empty()) {
        fail(last_line, "clause not terminated by 0");
    }
    if (static_cast<int>(f.clauses.size()) != declared) {
        throw ParseError("problem line declares " + std::to_string(declared) + " clauses, found " +
                         std::to_string(f.clauses.size()));
    }
    return f;
}

std::string serialize_dimacs(const CnfFormula& f, const std::vector<std::string>& comments) {
    std::string out;
    put_comments(out, comments, "c ");
    out += "p cnf " + std::to_string(f.num_vars) + ' ' + std::to_string(f.clauses.size()) + '\n';
    for (const auto& clause : f.clauses) {
        for (int lit : clause) {
            out += std::to_string(lit) + ' ';
        }
        out += "0\n";
    }
    return out;
}

MchsInstance parse_mchs(std::string_view text) {
    MchsInstance inst;
    bool have_vertices = false;
    bool have_colors = false;
    std::vector<char> colored;
    auto vertex = [&](const std::string& name, int line) {
        const auto it = std::find(inst.vertices.begin(), inst.vertices.end(), name);
        if (it == inst.vertices.end()) {
            fail(line, "unknown vertex '" + name + "'");
        }
        return static_cast<int>(it - inst.vertices.begin());
    };
    for (const auto& l : content_lines(text)) {
        auto [head, rest] = split_header(l);
        if (head.empty()) {
            fail(l.number, "missing keyword");
        }
        const auto body = tokens(rest);
        if (head[0] == "vertices" && head.size() == 1 && !have_vertices) {
            inst.vertices = unique_names(body, l.number, "vertex");
            inst.color_of.assign(inst.vertices.size(), 0);
            colored.assign(inst.vertices.size(), 0);
            have_vertices = true;
        } else if (head[0] == "colors" && head.size() == 1 && !have_colors) {
            if (body.size() != 1) {
                fail(l.number, "expected 'colors: <count>'");
            }
            inst.colors = parse_int(body[0], l.number);
            have_colors = true;
        } else if (head[0] == "color" && head.size() == 2) {
            if (!have_vertices || body.size() != 1) {
                fail(l.number, "expected 'color <vertex>: <color>' after the vertices line");
            }
            const int v = vertex(head[1], l.number);
            if (colored[static_cast<std::size_t>(v)]) {
                fail(l.number, "vertex '" + head[1] + "' colored twice");
            }
            colored[static_cast<std::size_t>(v)] = 1;
            inst.color_of[static_cast<std::size_t>(v)] = parse_int(body[0], l.number);
        } else if (head[0] == "set" && head.size() == 1) {
            if (!have_vertices) {
                fail(l.number, "set before the vertices line");
            }
            std::vector<int> set;
            for (const auto& name : body) {
                set.push_back(vertex(name, l.number));
            }
            inst.sets.push_back(make_set(std::move(set)));
        } else {
            fail(l.number, "unexpected '" + head[0] + "' line");
        }
    }
    if (!have_vertices || !have_colors) {
        throw ParseError("missing vertices or colors line");
    }
    try {
        check_mchs(inst);
    } catch (const ParameterError& e) {
        throw ParseError(e.what());
    }
    return inst;
}

std::string serialize_mchs(const MchsInstance& inst, const std::vector<std::string>& comments) {
    std::string out;
    put_comments(out, comments, "# ");
    out += "vertices: " + join(inst.vertices) + '\n';
    out += "colors: " + std::to_string(inst.colors) + '\n';
    for (std::size_t v = 0; v < inst.vertices.size(); ++v) {
        out += "color " + inst.vertices[v] + ": " + std::to_string(inst.color_of[v]) + '\n';
    }
    for (const auto& set : inst.sets) {
        out += "set:";
        for (int v : set) {
            out += ' ' + inst.vertices.at(static_cast<std::size_t>(v));
        }
        out += '\n';
    }
    return out;
}

KernelLog kernel_log_of(const KernelResult& result) {
    return {result.verdict, result.reason, result.merges, result.marked, result.hard, result.representatives};
}

KernelLog parse_kernel_log(std::string_view text) {
    KernelLog log;
    enum class Section { None, Merges, Marked, Hard, Reps } section = Section::None;
    bool have_verdict = false;
    for (const auto& l : content_lines(text)) {
        const auto tok = tokens(l.text);
        if (tok[0] == "VERDICT") {
            if (have_verdict || tok.size() != 2) {
                fail(l.number, "expected a single 'VERDICT reduced|trivially-unsat'");
            }
            if (tok[1] == "reduced") {
                log.verdict = KernelVerdict::Reduced;
            } else if (tok[1] == "trivially-unsat") {
                log.verdict = KernelVerdict::TriviallyUnsat;
            } else {
                fail(l.number, "unknown verdict '" + tok[1] + "'");
            }
            have_verdict = true;
            section = Section::None;
        } else if (tok[0] == "REASON") {
            log.reason = trim(std::string_view(l.text).substr(6));
            section = Section::None;
        } else if (tok.size() == 1 && tok[0] == "MERGES") {
            section = Section::Merges;
        } else if (tok.size() == 1 && tok[0] == "MARKED") {
            section = Section::Marked;
        } else if (tok.size() == 1 && tok[0] == "HARD") {
            section = Section::Hard;
        } else if (tok.size() == 1 && tok[0] == "REPS") {
            section = Section::Reps;
        } else {
            switch (section) {
            case Section::None:
                fail(l.number, "content outside a section");
            case Section::Merges:
                if (tok.size() < 3 || tok[2] != ":") {
                    fail(l.number, "expected '<survivor> <absorbed> : <users>'");
                }
                log.merges.push_back({tok[0], tok[1], {tok.begin() + 3, tok.end()}});
                break;
            case Section::Marked:
                log.marked.insert(log.marked.end(), tok.begin(), tok.end());
                break;
            case Section::Hard:
                log.hard.insert(log.hard.end(), tok.begin(), tok.end());
                break;
            case Section::Reps:
                if (tok.size() != 2) {
                    fail(l.number, "expected '<task> <user>'");
                }
                log.representatives.emplace_back(tok[0], tok[1]);
                break;
            }
        }
    }
    if (!have_verdict) {
        throw ParseError("missing VERDICT line");
    }
    return log;
}

std::string serialize_kernel_log(const KernelLog& log) {
    std::string out = "VERDICT ";
    out += log.verdict == KernelVerdict::Reduced ? "reduced" : "trivially-unsat";
    out += '\n';
    if (!log.reason.empty()) {
        out += "REASON " + log.reason + '\n';
    }
    out += "MERGES\n";
    for (const auto& m : log.merges) {
        out += m.survivor + ' ' + m.absorbed + " :";
        for (const auto& u : m.authorization) {
            out += ' ' + u;
        }
        out += '\n';
    }
    out += "MARKED\n";
    if (!log.marked.empty()) {
        out += join(log.marked) + '\n';
    }
    out += "HARD\n";
    if (!log.hard.empty()) {
        out += join(log.hard) + '\n';
    }
    out += "REPS\n";
    for (const auto& [task, user] : log.representatives) {
        out += task + ' ' + user + '\n';
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot read '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write '" + path + "'");
    }
    out << contents;
    if (!out) {
        throw Error("cannot write '" + path + "'");
    }
}

} // namespace wsp
