#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wsp/core.hpp"

namespace wsp {

enum class Status { Satisfiable, Unsatisfiable };

struct SolveStats {
    std::uint64_t partitions_examined = 0; // complete partitions reaching the matching step
    std::uint64_t matchings_attempted = 0;
    std::uint64_t plans_examined = 0; // brute force only
};

struct SolveOutcome {
    Status status = Status::Unsatisfiable;
    std::optional<Plan> plan;
    SolveStats stats;

    bool satisfiable() const { return status == Status::Satisfiable; }
};

struct FptOptions {
    int max_tasks = 12;
};

struct BruteForceOptions {
    std::uint64_t max_plans = 10'000'000;
};

/// Partition-enumeration solver for user-independent constraints.
///
/// Walks the set partitions of the tasks as restricted-growth strings in
/// lexicographic order, pruning a prefix as soon as a constraint whose
/// scope is fully labelled is violated, a block loses every common
/// authorized user, or there are more blocks than users. Each surviving
/// partition is handed to assign_blocks. The first success is returned,
/// so the plan is that of the least eligible, assignable partition.
///
/// Throws ResourceError when the schema has more than `max_tasks` tasks.
SolveOutcome solve_fpt(const Schema& schema, const FptOptions& options = {});

/// Exhaustive search over complete plans in lexicographic order (task 0
/// most significant). Throws ResourceError when n^k exceeds the cap.
SolveOutcome solve_bruteforce(const Schema& schema, const BruteForceOptions& options = {});

/// Restrictions to `tasks` of all valid plans, sorted and deduplicated.
/// Returned plans leave every task outside `tasks` unassigned.
std::vector<Plan> project(const Schema& schema, const TaskSet& tasks, const BruteForceOptions& options = {});

/// Injective block -> user assignment where each block's user is
/// authorized for all of its tasks; nullopt if no perfect matching exists.
/// Throws DomainError unless the partition covers exactly the schema tasks.
std::optional<Plan> assign_blocks(const Schema& schema, const TaskPartition& partition);

} // namespace wsp
