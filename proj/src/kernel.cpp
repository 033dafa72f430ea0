#include "wsp/kernel.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "wsp/constraints.hpp"
#include "wsp/error.hpp"
#include "wsp/matching.hpp"

namespace wsp {

namespace {

std::string describe(const Schema& schema, const Constraint& c) {
    std::string out(kind_name(c.kind));
    for (int p : c.params) {
        out += ' ' + std::to_string(p);
    }
    out += '(';
    for (std::size_t i = 0; i < c.scope.size(); ++i) {
        if (i > 0) {
            out += (c.kind == Kind::Bind || c.kind == Kind::Sep) && i == c.split ? " | " : ",";
        }
        out += schema.tasks[static_cast<std::size_t>(c.scope[i])];
    }
    return out + ')';
}

void require_kernelizable(const Schema& schema) {
    const auto report = validate_schema(schema);
    if (!report.ok()) {
        throw DomainError("kernel: invalid schema: " + report.errors.front());
    }
    for (const auto& c : schema.constraints) {
        const Classification cls = classify_constraint(c);
        if (!cls.regular || !cls.intersection_closed) {
            throw ClassificationError("constraint " + describe(schema, c) + " is not " +
                                      (cls.regular ? "intersection-closed" : "regular"));
        }
    }
}

// Key under which two constraints are interchangeable.
using ConstraintKey = std::tuple<Kind, std::vector<int>, std::vector<TaskId>, std::vector<TaskId>>;

ConstraintKey key_of(const Constraint& c) {
    switch (c.kind) {
    case Kind::Eq2:
    case Kind::Neq2:
        return {c.kind, c.params, {std::min(c.scope[0], c.scope[1]), std::max(c.scope[0], c.scope[1])}, {}};
    case Kind::Bind:
    case Kind::Sep: {
        auto a = c.left_set();
        auto b = c.right_set();
        if (b < a) {
            std::swap(a, b);
        }
        return {c.kind, c.params, a, b};
    }
    case Kind::AtMost:
    case Kind::AtLeast:
        return {c.kind, c.params, c.scope_set(), {}};
    case Kind::PerUser: {
        auto tuple = c.scope;
        std::sort(tuple.begin(), tuple.end());
        return {c.kind, c.params, tuple, {}};
    }
    }
    return {};
}

std::vector<Constraint> deduplicate(const std::vector<Constraint>& constraints) {
    std::set<ConstraintKey> seen;
    std::vector<Constraint> out;
    for (const auto& c : constraints) {
        if (seen.insert(key_of(c)).second) {
            out.push_back(c);
        }
    }
    return out;
}

// Keeps only the users in `keep` (sorted), renumbering them densely.
Schema restrict_users(const Schema& schema, const UserSet& keep) {
    Schema out;
    out.tasks = schema.tasks;
    out.constraints = deduplicate(schema.constraints);
    std::vector<UserId> new_index(schema.num_users(), Plan::kUnassigned);
    for (std::size_t i = 0; i < keep.size(); ++i) {
        new_index[static_cast<std::size_t>(keep[i])] = static_cast<UserId>(i);
        out.users.push_back(schema.users[static_cast<std::size_t>(keep[i])]);
    }
    for (const auto& a : schema.auth) {
        UserSet kept;
        for (UserId u : a) {
            if (new_index[static_cast<std::size_t>(u)] != Plan::kUnassigned) {
                kept.push_back(new_index[static_cast<std::size_t>(u)]);
            }
        }
        out.auth.push_back(std::move(kept));
    }
    return out;
}

} // namespace

std::pair<Schema, MergeRecord> merge_tasks(const Schema& schema, TaskId survivor, TaskId absorbed) {
    const auto k = static_cast<TaskId>(schema.num_tasks());
    if (survivor == absorbed) {
        throw DomainError("merge_tasks: a task cannot be merged with itself");
    }
    if (survivor < 0 || survivor >= k || absorbed < 0 || absorbed >= k) {
        throw DomainError("merge_tasks: task index out of range");
    }
    auto remap = [&](TaskId t) {
        if (t == absorbed) {
            t = survivor;
        }
        return t > absorbed ? t - 1 : t;
    };
    const UserSet joint = set_intersection(schema.auth[static_cast<std::size_t>(survivor)],
                                           schema.auth[static_cast<std::size_t>(absorbed)]);
    Schema out;
    out.users = schema.users;
    for (TaskId t = 0; t < k; ++t) {
        if (t == absorbed) {
            continue;
        }
        out.tasks.push_back(schema.tasks[static_cast<std::size_t>(t)]);
        out.auth.push_back(t == survivor ? joint : schema.auth[static_cast<std::size_t>(t)]);
    }
    for (const auto& c : schema.constraints) {
        if (c.kind == Kind::Eq2 && make_set(c.scope) == make_set({survivor, absorbed})) {
            continue;
        }
        Constraint moved = c;
        for (TaskId& t : moved.scope) {
            t = remap(t);
        }
        out.constraints.push_back(std::move(moved));
    }
    MergeRecord record{schema.tasks[static_cast<std::size_t>(survivor)],
                       schema.tasks[static_cast<std::size_t>(absorbed)],
                       {}};
    for (UserId u : joint) {
        record.authorization.push_back(schema.users[static_cast<std::size_t>(u)]);
    }
    return {std::move(out), std::move(record)};
}

EqualityElimination eliminate_equalities(const Schema& schema) {
    require_kernelizable(schema);
    EqualityElimination result{schema, {}, false, {}};
    bool restart = true;
    while (restart) {
        restart = false;
        const Schema& current = result.schema;
        for (TaskId s = 0; s < static_cast<TaskId>(current.num_tasks()) && !restart; ++s) {
            for (const auto& c : current.constraints) {
                if (!contains(c.scope_set(), s) || eligible_set(c, {s})) {
                    continue;
                }
                const auto additions = required_additions(c, {s});
                if (!additions) {
                    result.unsatisfiable = true;
                    result.reason = "task " + current.tasks[static_cast<std::size_t>(s)] +
                                    " cannot be placed in any eligible block of " + describe(current, c);
                    return result;
                }
                auto [merged, record] = merge_tasks(current, s, additions->front());
                result.schema = std::move(merged);
                result.merges.push_back(std::move(record));
                restart = true;
                break;
            }
        }
    }
    return result;
}

Marking mark_users(const Schema& schema) {
    const std::size_t k = schema.num_tasks();
    const std::size_t n = schema.num_users();
    std::vector<char> available(n, 1); // U in the marking procedure
    std::vector<char> is_marked(n, 0);
    std::vector<TaskId> active(k);
    for (std::size_t s = 0; s < k; ++s) {
        active[s] = static_cast<TaskId>(s);
    }
    Marking out;
    out.representative.assign(k, Plan::kUnassigned);

    auto adjacency_of = [&](const std::vector<TaskId>& tasks) {
        std::vector<std::vector<int>> adj;
        for (TaskId s : tasks) {
            std::vector<int> row;
            for (UserId u : schema.auth[static_cast<std::size_t>(s)]) {
                if (available[static_cast<std::size_t>(u)]) {
                    row.push_back(u);
                }
            }
            adj.push_back(std::move(row));
        }
        return adj;
    };

    while (true) {
        const auto adj = adjacency_of(active);
        const Matching m = max_bipartite_matching(adj, static_cast<int>(n));
        if (m.perfect()) {
            for (std::size_t i = 0; i < active.size(); ++i) {
                const UserId u = m.left_to_right[i];
                out.representative[static_cast<std::size_t>(active[i])] = u;
                is_marked[static_cast<std::size_t>(u)] = 1;
            }
            break;
        }
        for (int local : hall_violator(adj, m)) {
            for (UserId u : adj[static_cast<std::size_t>(local)]) {
                is_marked[static_cast<std::size_t>(u)] = 1;
                available[static_cast<std::size_t>(u)] = 0;
            }
        }
        std::vector<TaskId> still_active;
        for (TaskId s : active) {
            const auto& a = schema.auth[static_cast<std::size_t>(s)];
            const bool swallowed = std::all_of(a.begin(), a.end(),
                                               [&](UserId u) { return is_marked[static_cast<std::size_t>(u)] != 0; });
            if (swallowed) {
                out.hard.push_back(s);
            } else {
                still_active.push_back(s);
            }
        }
        active = std::move(still_active);
    }
    for (std::size_t u = 0; u < n; ++u) {
        if (is_marked[u]) {
            out.marked.push_back(static_cast<UserId>(u));
        }
    }
    std::sort(out.hard.begin(), out.hard.end());
    return out;
}

std::vector<UserId> KernelResult::representative_indices() const {
    std::vector<UserId> out(reduced.num_tasks(), Plan::kUnassigned);
    for (const auto& [task, user] : representatives) {
        const auto s = reduced.find_task(task);
        const auto u = reduced.find_user(user);
        if (s && u) {
            out[static_cast<std::size_t>(*s)] = *u;
        }
    }
    return out;
}

KernelResult kernelize(const Schema& schema) {
    KernelResult result;
    result.original = schema;
    EqualityElimination elim = eliminate_equalities(schema);
    result.merges = elim.merges;
    const bool empty_auth = std::any_of(elim.schema.auth.begin(), elim.schema.auth.end(),
                                        [](const UserSet& a) { return a.empty(); });
    if (elim.unsatisfiable || empty_auth) {
        result.verdict = KernelVerdict::TriviallyUnsat;
        if (elim.unsatisfiable) {
            result.reason = elim.reason;
        } else {
            for (std::size_t s = 0; s < elim.schema.num_tasks(); ++s) {
                if (elim.schema.auth[s].empty()) {
                    result.reason = "task " + elim.schema.tasks[s] + " has no authorized user";
                    break;
                }
            }
        }
        result.reduced = restrict_users(elim.schema, {});
        return result;
    }
    const Marking marking = mark_users(elim.schema);
    result.reduced = restrict_users(elim.schema, marking.marked);
    for (UserId u : marking.marked) {
        result.marked.push_back(elim.schema.users[static_cast<std::size_t>(u)]);
    }
    for (TaskId s : marking.hard) {
        result.hard.push_back(elim.schema.tasks[static_cast<std::size_t>(s)]);
    }
    for (std::size_t s = 0; s < elim.schema.num_tasks(); ++s) {
        const UserId u = marking.representative[s];
        if (u != Plan::kUnassigned) {
            result.representatives.emplace_back(elim.schema.tasks[s], elim.schema.users[static_cast<std::size_t>(u)]);
        }
    }
    return result;
}

std::optional<Plan> extend_partial_plan(const Schema& schema, const Plan& partial,
                                        const std::vector<UserId>& representative) {
    const std::size_t k = schema.num_tasks();
    if (partial.size() != k || representative.size() != k) {
        throw ContractError("extend_partial_plan: plan or representatives do not match the schema");
    }
    for (std::size_t s = 0; s < k; ++s) {
        const bool hard = representative[s] == Plan::kUnassigned;
        if (hard != partial.assigned(static_cast<TaskId>(s))) {
            throw ContractError("extend_partial_plan: the partial plan must assign exactly the hard tasks");
        }
    }
    Plan plan = partial;
    std::map<UserId, TaskSet> blocks;
    for (TaskId s : plan.domain()) {
        blocks[plan[s]].push_back(s);
    }
    bool grew = true;
    while (grew) {
        grew = false;
        for (auto& [user, block] : blocks) {
            for (const auto& c : schema.constraints) {
                const TaskSet local = set_intersection(block, c.scope_set());
                if (local.empty() || eligible_set(c, local)) {
                    continue;
                }
                const auto additions = required_additions(c, local);
                if (!additions) {
                    return std::nullopt;
                }
                const TaskId s = additions->front();
                if (plan.assigned(s) || !schema.authorized(s, user)) {
                    return std::nullopt;
                }
                plan.assign(s, user);
                block = set_union(block, {s});
                grew = true;
                break;
            }
            if (grew) {
                break;
            }
        }
    }
    std::set<UserId> used;
    for (TaskId s : plan.domain()) {
        used.insert(plan[s]);
    }
    for (std::size_t s = 0; s < k; ++s) {
        if (plan.assigned(static_cast<TaskId>(s))) {
            continue;
        }
        const UserId u = representative[s];
        if (!used.insert(u).second) {
            throw ContractError("extend_partial_plan: representative " + schema.users[static_cast<std::size_t>(u)] +
                                " is already in use");
        }
        plan.assign(static_cast<TaskId>(s), u);
    }
    return plan;
}

std::map<std::string, std::string> lift_assignment(const std::vector<MergeRecord>& merges,
                                                   std::map<std::string, std::string> assignment) {
    for (auto it = merges.rbegin(); it != merges.rend(); ++it) {
        const auto found = assignment.find(it->survivor);
        if (found == assignment.end()) {
            throw ContractError("lift: merge survivor " + it->survivor + " is not assigned");
        }
        assignment[it->absorbed] = found->second;
    }
    return assignment;
}

Plan plan_from_names(const Schema& schema, const std::map<std::string, std::string>& assignment) {
    Plan plan(schema.num_tasks());
    for (const auto& [task, user] : assignment) {
        const auto s = schema.find_task(task);
        const auto u = schema.find_user(user);
        if (!s || !u) {
            throw DomainError("assignment " + task + " -> " + user + " names an unknown task or user");
        }
        plan.assign(*s, *u);
    }
    return plan;
}

Plan lift_plan(const KernelResult& result, const Plan& reduced_plan) {
    const PlanVerdict verdict = is_valid_plan(result.reduced, reduced_plan);
    if (!verdict.valid) {
        throw ContractError("lift_plan: plan is not valid for the reduced schema: " +
                            verdict.violations.front().message);
    }
    std::map<std::string, std::string> named;
    for (std::size_t s = 0; s < result.reduced.num_tasks(); ++s) {
        named[result.reduced.tasks[s]] =
            result.reduced.users[static_cast<std::size_t>(reduced_plan[static_cast<TaskId>(s)])];
    }
    return plan_from_names(result.original, lift_assignment(result.merges, std::move(named)));
}

} // namespace wsp
