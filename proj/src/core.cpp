#include "wsp/core.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <sstream>

#include "wsp/constraints.hpp"
#include "wsp/error.hpp"

namespace wsp {

namespace {

constexpr std::array<std::pair<Kind, std::string_view>, 7> kKindNames{{
    {Kind::Eq2, "EQ2"},
    {Kind::Neq2, "NEQ2"},
    {Kind::Bind, "BIND"},
    {Kind::Sep, "SEP"},
    {Kind::AtMost, "ATMOST"},
    {Kind::AtLeast, "ATLEAST"},
    {Kind::PerUser, "PERUSER"},
}};

std::string describe(const Schema& schema, const Constraint& c) {
    std::ostringstream out;
    out << kind_name(c.kind);
    for (int p : c.params) {
        out << ' ' << p;
    }
    out << '(';
    for (std::size_t i = 0; i < c.scope.size(); ++i) {
        if (i > 0) {
            out << ((c.kind == Kind::Bind || c.kind == Kind::Sep) && i == c.split ? " | " : ",");
        }
        TaskId s = c.scope[i];
        if (s >= 0 && static_cast<std::size_t>(s) < schema.num_tasks()) {
            out << schema.tasks[s];
        } else {
            out << '#' << s;
        }
    }
    out << ')';
    return out.str();
}

} // namespace

std::string_view kind_name(Kind kind) {
    for (const auto& [k, name] : kKindNames) {
        if (k == kind) {
            return name;
        }
    }
    return "?";
}

std::optional<Kind> parse_kind(std::string_view name) {
    for (const auto& [k, n] : kKindNames) {
        if (n == name) {
            return k;
        }
    }
    return std::nullopt;
}

Constraint Constraint::eq(TaskId a, TaskId b) {
    return Constraint{Kind::Eq2, {}, {a, b}, 0};
}

Constraint Constraint::neq(TaskId a, TaskId b) {
    return Constraint{Kind::Neq2, {}, {a, b}, 0};
}

Constraint Constraint::bind(std::vector<TaskId> left, std::vector<TaskId> right) {
    Constraint c{Kind::Bind, {}, std::move(left), 0};
    c.split = c.scope.size();
    c.scope.insert(c.scope.end(), right.begin(), right.end());
    return c;
}

Constraint Constraint::sep(std::vector<TaskId> left, std::vector<TaskId> right) {
    Constraint c = bind(std::move(left), std::move(right));
    c.kind = Kind::Sep;
    return c;
}

Constraint Constraint::at_most(int t, std::vector<TaskId> tasks) {
    return Constraint{Kind::AtMost, {t}, std::move(tasks), 0};
}

Constraint Constraint::at_least(int t, std::vector<TaskId> tasks) {
    return Constraint{Kind::AtLeast, {t}, std::move(tasks), 0};
}

Constraint Constraint::per_user(int lower, int upper, std::vector<TaskId> tasks) {
    return Constraint{Kind::PerUser, {lower, upper}, std::move(tasks), 0};
}

TaskSet Constraint::scope_set() const {
    return make_set(scope);
}

TaskSet Constraint::left_set() const {
    return make_set({scope.begin(), scope.begin() + static_cast<std::ptrdiff_t>(split)});
}

TaskSet Constraint::right_set() const {
    return make_set({scope.begin() + static_cast<std::ptrdiff_t>(split), scope.end()});
}

std::optional<TaskId> Schema::find_task(std::string_view name) const {
    auto it = std::find(tasks.begin(), tasks.end(), name);
    if (it == tasks.end()) {
        return std::nullopt;
    }
    return static_cast<TaskId>(it - tasks.begin());
}

std::optional<UserId> Schema::find_user(std::string_view name) const {
    auto it = std::find(users.begin(), users.end(), name);
    if (it == users.end()) {
        return std::nullopt;
    }
    return static_cast<UserId>(it - users.begin());
}

bool Schema::authorized(TaskId task, UserId user) const {
    return std::binary_search(auth.at(task).begin(), auth.at(task).end(), user);
}

bool Plan::complete() const {
    return std::none_of(assignment_.begin(), assignment_.end(),
                        [](UserId u) { return u == kUnassigned; });
}

TaskSet Plan::domain() const {
    TaskSet out;
    for (std::size_t s = 0; s < assignment_.size(); ++s) {
        if (assignment_[s] != kUnassigned) {
            out.push_back(static_cast<TaskId>(s));
        }
    }
    return out;
}

TaskSet TaskPartition::carrier() const {
    TaskSet out;
    for (const auto& block : blocks) {
        out.insert(out.end(), block.begin(), block.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

void TaskPartition::canonicalize() {
    for (auto& block : blocks) {
        std::sort(block.begin(), block.end());
    }
    std::erase_if(blocks, [](const TaskSet& b) { return b.empty(); });
    std::sort(blocks.begin(), blocks.end(),
              [](const TaskSet& a, const TaskSet& b) { return a.front() < b.front(); });
}

TaskPartition induced_partition(const Plan& plan, const TaskSet& carrier) {
    std::map<UserId, TaskSet> by_user;
    for (TaskId s : carrier) {
        if (s < 0 || static_cast<std::size_t>(s) >= plan.size() || !plan.assigned(s)) {
            throw DomainError("induced_partition: task " + std::to_string(s) +
                              " of the carrier is not assigned");
        }
        by_user[plan[s]].push_back(s);
    }
    TaskPartition p;
    for (auto& [user, block] : by_user) {
        p.blocks.push_back(std::move(block));
    }
    p.canonicalize();
    return p;
}

bool satisfies(const Plan& plan, const Constraint& c) {
    for (TaskId s : c.scope) {
        if (!plan.assigned(s)) {
            return true;
        }
    }
    return eligible_labels(c, plan.raw());
}

PlanVerdict is_valid_plan(const Schema& schema, const Plan& plan) {
    PlanVerdict verdict;
    auto fail = [&](ViolationKind kind, std::size_t index, std::string message) {
        verdict.valid = false;
        verdict.violations.push_back({kind, index, std::move(message)});
    };
    if (plan.size() != schema.num_tasks()) {
        fail(ViolationKind::Incomplete, 0,
             "plan covers " + std::to_string(plan.size()) + " task slots, schema has " +
                 std::to_string(schema.num_tasks()));
        return verdict;
    }
    for (std::size_t s = 0; s < schema.num_tasks(); ++s) {
        TaskId task = static_cast<TaskId>(s);
        if (!plan.assigned(task)) {
            fail(ViolationKind::Incomplete, s, "task " + schema.tasks[s] + " is unassigned");
            continue;
        }
        UserId u = plan[task];
        if (u < 0 || static_cast<std::size_t>(u) >= schema.num_users()) {
            fail(ViolationKind::Unauthorized, s,
                 "task " + schema.tasks[s] + " is assigned an unknown user");
        } else if (!schema.authorized(task, u)) {
            fail(ViolationKind::Unauthorized, s,
                 "user " + schema.users[u] + " is not authorized for task " + schema.tasks[s]);
        }
    }
    for (std::size_t i = 0; i < schema.num_constraints(); ++i) {
        if (!satisfies(plan, schema.constraints[i])) {
            fail(ViolationKind::Constraint, i,
                 "constraint " + describe(schema, schema.constraints[i]) + " is violated");
        }
    }
    return verdict;
}

SchemaReport validate_schema(const Schema& schema) {
    SchemaReport report;
    std::set<std::string_view> seen;
    for (const auto& t : schema.tasks) {
        if (!seen.insert(t).second) {
            report.errors.push_back("duplicate task id '" + t + "'");
        }
    }
    seen.clear();
    for (const auto& u : schema.users) {
        if (!seen.insert(u).second) {
            report.errors.push_back("duplicate user id '" + u + "'");
        }
    }
    if (schema.auth.size() != schema.num_tasks()) {
        report.errors.push_back("authorization map has " + std::to_string(schema.auth.size()) +
                                " entries for " + std::to_string(schema.num_tasks()) + " tasks");
    }
    for (std::size_t s = 0; s < std::min(schema.auth.size(), schema.num_tasks()); ++s) {
        const auto& a = schema.auth[s];
        if (!std::is_sorted(a.begin(), a.end()) ||
            std::adjacent_find(a.begin(), a.end()) != a.end()) {
            report.errors.push_back("authorization of task " + schema.tasks[s] +
                                    " is not a sorted set");
        }
        for (UserId u : a) {
            if (u < 0 || static_cast<std::size_t>(u) >= schema.num_users()) {
                report.errors.push_back("authorization of task " + schema.tasks[s] +
                                        " names unknown user #" + std::to_string(u));
            }
        }
        if (a.empty()) {
            report.warnings.push_back("task " + schema.tasks[s] +
                                      " has an empty authorization list (trivially unsatisfiable)");
        }
    }
    for (std::size_t i = 0; i < schema.num_constraints(); ++i) {
        const auto& c = schema.constraints[i];
        bool in_range = true;
        for (TaskId s : c.scope) {
            if (s < 0 || static_cast<std::size_t>(s) >= schema.num_tasks()) {
                report.errors.push_back("constraint " + std::to_string(i) +
                                        " names unknown task #" + std::to_string(s));
                in_range = false;
            }
        }
        if (!in_range) {
            continue;
        }
        try {
            check_constraint(c);
        } catch (const DomainError& e) {
            report.errors.push_back("constraint " + describe(schema, c) + ": " + e.what());
        }
    }
    return report;
}

TaskSet make_set(std::vector<int> items) {
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());
    return items;
}

bool is_subset(const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::vector<int> set_union(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<int> set_intersection(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<int> set_difference(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool contains(const std::vector<int>& set, int item) {
    return std::binary_search(set.begin(), set.end(), item);
}

} // namespace wsp
