#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wsp {

// Tasks and users are addressed by dense indices in declaration order.
using TaskId = int;
using UserId = int;

/// Sorted, duplicate-free list of task indices.
using TaskSet = std::vector<TaskId>;
/// Sorted, duplicate-free list of user indices.
using UserSet = std::vector<UserId>;

enum class Kind {
    Eq2,     // (s = s')
    Neq2,    // (s != s')
    Bind,    // (=, T, T')
    Sep,     // (!=, T, T')
    AtMost,  // (<= t, T)
    AtLeast, // (>= t, T)
    PerUser, // (t_l, t_u, T)
};

std::string_view kind_name(Kind kind);
std::optional<Kind> parse_kind(std::string_view name);

/// One application of a catalog relation.
///
/// `scope` is the argument tuple; repeated tasks are allowed (merging
/// produces them). For Bind and Sep the tuple is the concatenation of
/// the two task sets, with `split` marking where the second one starts.
/// `params` holds {t} for AtMost/AtLeast and {t_l, t_u} for PerUser.
struct Constraint {
    Kind kind = Kind::Eq2;
    std::vector<int> params;
    std::vector<TaskId> scope;
    std::size_t split = 0;

    static Constraint eq(TaskId a, TaskId b);
    static Constraint neq(TaskId a, TaskId b);
    static Constraint bind(std::vector<TaskId> left, std::vector<TaskId> right);
    static Constraint sep(std::vector<TaskId> left, std::vector<TaskId> right);
    static Constraint at_most(int t, std::vector<TaskId> tasks);
    static Constraint at_least(int t, std::vector<TaskId> tasks);
    static Constraint per_user(int lower, int upper, std::vector<TaskId> tasks);

    /// Distinct tasks of the scope tuple, sorted.
    TaskSet scope_set() const;
    TaskSet left_set() const;
    TaskSet right_set() const;

    friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// A workflow schema (S, U, A, C).
struct Schema {
    std::vector<std::string> tasks;
    std::vector<std::string> users;
    std::vector<UserSet> auth; // one entry per task
    std::vector<Constraint> constraints;

    std::size_t num_tasks() const { return tasks.size(); }
    std::size_t num_users() const { return users.size(); }
    std::size_t num_constraints() const { return constraints.size(); }

    std::optional<TaskId> find_task(std::string_view name) const;
    std::optional<UserId> find_user(std::string_view name) const;
    bool authorized(TaskId task, UserId user) const;

    friend bool operator==(const Schema&, const Schema&) = default;
};

/// A (possibly partial) plan, indexed by task.
class Plan {
public:
    static constexpr UserId kUnassigned = -1;

    Plan() = default;
    explicit Plan(std::size_t num_tasks) : assignment_(num_tasks, kUnassigned) {}
    explicit Plan(std::vector<UserId> assignment) : assignment_(std::move(assignment)) {}

    std::size_t size() const { return assignment_.size(); }
    bool assigned(TaskId task) const { return assignment_.at(task) != kUnassigned; }
    UserId operator[](TaskId task) const { return assignment_.at(task); }
    void assign(TaskId task, UserId user) { assignment_.at(task) = user; }
    void unassign(TaskId task) { assignment_.at(task) = kUnassigned; }

    bool complete() const;
    TaskSet domain() const;
    const std::vector<UserId>& raw() const { return assignment_; }

    friend bool operator==(const Plan&, const Plan&) = default;
    friend auto operator<=>(const Plan&, const Plan&) = default;

private:
    std::vector<UserId> assignment_;
};

/// Partition of a task set into nonempty disjoint blocks.
/// Canonical form: each block sorted, blocks ordered by smallest member.
struct TaskPartition {
    std::vector<TaskSet> blocks;

    TaskSet carrier() const;
    void canonicalize();

    friend bool operator==(const TaskPartition&, const TaskPartition&) = default;
};

/// Blocks of tasks in `carrier` that share a user under `plan`.
/// Throws DomainError if a carrier task is unassigned.
TaskPartition induced_partition(const Plan& plan, const TaskSet& carrier);

/// True when the plan leaves part of the scope unassigned, or its
/// restriction to the scope satisfies the constraint.
bool satisfies(const Plan& plan, const Constraint& c);

enum class ViolationKind { Incomplete, Unauthorized, Constraint };

struct Violation {
    ViolationKind kind;
    std::size_t index; // task index, or constraint index for Constraint
    std::string message;
};

struct PlanVerdict {
    bool valid = true;
    std::vector<Violation> violations;
};

/// Complete, authorized and eligible.
PlanVerdict is_valid_plan(const Schema& schema, const Plan& plan);

struct SchemaReport {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;

    bool ok() const { return errors.empty(); }
};

SchemaReport validate_schema(const Schema& schema);

// Small sorted-set helpers used throughout.
TaskSet make_set(std::vector<int> items);
bool is_subset(const std::vector<int>& a, const std::vector<int>& b);
std::vector<int> set_union(const std::vector<int>& a, const std::vector<int>& b);
std::vector<int> set_intersection(const std::vector<int>& a, const std::vector<int>& b);
std::vector<int> set_difference(const std::vector<int>& a, const std::vector<int>& b);
bool contains(const std::vector<int>& set, int item);

} // namespace wsp
